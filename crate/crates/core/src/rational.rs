//! Exact rational helpers: construction, parsing, Bernoulli numbers.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{input_err, Result};

/// Arbitrary-precision rational.
pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn half() -> Q {
    q(1, 2)
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact integer value, if `x` is an integer fitting in `i64`.
pub fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Q) -> Q {
    x - x.floor()
}

/// `"a/b"`, or `"a"` for integers.
pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        alloc::format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"a"`, `"a/b"` or a finite decimal such as `"-0.25"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a = BigInt::from_str(a.trim()).map_err(|_| input_err!("bad rational '{s}'"))?;
        let b = BigInt::from_str(b.trim()).map_err(|_| input_err!("bad rational '{s}'"))?;
        if b.is_zero() {
            return Err(input_err!("zero denominator in '{s}'"));
        }
        return Ok(Q::new(a, b));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let digits: String = ip.trim_start_matches(['-', '+']).chars().chain(fp.chars()).collect();
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(input_err!("bad rational '{s}'"));
        }
        let n = BigInt::from_str(&digits).map_err(|_| input_err!("bad rational '{s}'"))?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let v = Q::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    BigInt::from_str(s)
        .map(Q::from_integer)
        .map_err(|_| input_err!("bad rational '{s}'"))
}

/// Converts a float that is exactly 0, 1/2, 1, ... (multiples of 1/2^k with
/// short mantissa) into a rational; used for `eps_alpha` fields given as JSON
/// numbers.
pub fn from_f64_exact(x: f64) -> Option<Q> {
    Q::from_float(x)
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `H_n = 1 + 1/2 + … + 1/n`, with `H_0 = 0`.
pub fn harmonic(n: u32) -> Q {
    (1..=n).fold(Q::zero(), |acc, r| acc + q(1, r as i64))
}

/// Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<Q> {
    let mut b: Vec<Q> = Vec::with_capacity(n + 1);
    b.push(Q::one());
    for m in 1..=n {
        // sum_{k=0}^{m} C(m+1,k) B_k = 0
        let mut acc = Q::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += Q::from_integer(binomial(m as u32 + 1, k as u32)) * bk;
        }
        b.push(-acc / Q::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// Coefficients (ascending in `x`) of the Bernoulli polynomial `B_n(x)`.
pub fn bernoulli_polynomial(n: usize) -> Vec<Q> {
    let b = bernoulli_numbers(n);
    (0..=n)
        .map(|j| Q::from_integer(binomial(n as u32, j as u32)) * &b[n - j])
        .collect()
}

/// `B_n(x)` evaluated exactly.
pub fn bernoulli_poly_at(n: usize, x: &Q) -> Q {
    let c = bernoulli_polynomial(n);
    c.iter().rev().fold(Q::zero(), |acc, cj| acc * x + cj)
}

/// Reduces `x` modulo 1 and checks it is 0 or 1/2.
pub fn half_class(x: &Q) -> Option<Q> {
    let f = frac(x);
    if f.is_zero() || f == half() {
        Some(f)
    } else {
        None
    }
}

pub fn is_half_integer(x: &Q) -> bool {
    (x * qi(2)).is_integer() && !x.is_integer()
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_small() {
        let b = bernoulli_numbers(8);
        assert_eq!(b[1], q(-1, 2));
        assert_eq!(b[2], q(1, 6));
        assert_eq!(b[3], Q::zero());
        assert_eq!(b[4], q(-1, 30));
        assert_eq!(b[8], q(-1, 30));
    }

    #[test]
    fn bernoulli_poly_half() {
        // B_2(1/2) = -1/12
        assert_eq!(bernoulli_poly_at(2, &half()), q(-1, 12));
    }

    #[test]
    fn parse_round_trip() {
        for s in ["3", "-7/4", "0"] {
            assert_eq!(format_q(&parse_q(s).unwrap()), s);
        }
        assert_eq!(parse_q("0.5").unwrap(), half());
        assert_eq!(parse_q("-1.25").unwrap(), q(-5, 4));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic(0), Q::zero());
        assert_eq!(harmonic(3), q(11, 6));
    }
}
