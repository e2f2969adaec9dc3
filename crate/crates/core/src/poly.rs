//! Dense univariate polynomials over `Q`, coefficients in ascending order.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::{binomial, format_q, to_f64, Q};
use crate::C64;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    c: Vec<Q>,
}

impl Poly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn constant(a: Q) -> Self {
        Poly::new(vec![a])
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    /// `a·x + b`.
    pub fn linear(a: Q, b: Q) -> Self {
        Poly::new(vec![b, a])
    }

    pub fn x() -> Self {
        Poly::linear(Q::one(), Q::zero())
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Q {
        self.c.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn scale(&self, a: &Q) -> Self {
        Poly::new(self.c.iter().map(|x| x * a).collect())
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.c.iter().rev().fold(Q::zero(), |acc, ci| acc * x + ci)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, ci| acc * x + to_f64(ci))
    }

    pub fn eval_c(&self, x: C64) -> C64 {
        self.c
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, ci| acc * x + to_f64(ci))
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, ci)| ci * Q::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Antiderivative vanishing at zero.
    pub fn antiderivative(&self) -> Self {
        let mut c = vec![Q::zero()];
        c.extend(
            self.c
                .iter()
                .enumerate()
                .map(|(i, ci)| ci / Q::from_integer(BigInt::from(i + 1))),
        );
        Poly::new(c)
    }

    /// `p(x + a)`.
    pub fn shift(&self, a: &Q) -> Self {
        let n = self.c.len();
        let mut out = vec![Q::zero(); n];
        for (k, ck) in self.c.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            let mut apow = Q::one();
            // ck (x+a)^k = ck sum_r C(k,r) a^{k-r} x^r; iterate r downward
            for r in (0..=k).rev() {
                out[r] += ck * Q::from_integer(binomial(k as u32, r as u32)) * &apow;
                apow *= a;
            }
        }
        Poly::new(out)
    }

    /// `p(x)/x` when `p(0) = 0`.
    pub fn div_x(&self) -> Option<Self> {
        match self.c.first() {
            None => Some(Poly::zero()),
            Some(c0) if c0.is_zero() => Some(Poly::new(self.c[1..].to_vec())),
            _ => None,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.c.iter().step_by(2).all(|x| x.is_zero())
    }

    pub fn is_even(&self) -> bool {
        self.c.iter().skip(1).step_by(2).all(|x| x.is_zero())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Poly::one(), |acc, _| &acc * self)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.c.iter().map(|x| -x).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, ci) in self.c.iter().enumerate().rev() {
            if ci.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", format_q(ci))?,
                1 => write!(f, "({})·λ", format_q(ci))?,
                _ => write!(f, "({})·λ^{}", format_q(ci), i)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn shift_matches_evaluation() {
        let p = Poly::new(vec![qi(1), qi(-2), q(1, 3), qi(5)]);
        let a = q(-3, 7);
        let s = p.shift(&a);
        for x in [qi(0), qi(2), q(5, 11)] {
            assert_eq!(s.eval(&x), p.eval(&(&x + &a)));
        }
    }

    #[test]
    fn div_x_and_parity() {
        let p = Poly::new(vec![qi(0), qi(2), qi(0), q(1, 8)]);
        assert!(p.is_odd());
        let qq = p.div_x().unwrap();
        assert!(qq.is_even());
        assert_eq!(&qq * &Poly::x(), p);
        assert!(Poly::one().div_x().is_none());
    }

    #[test]
    fn antiderivative_inverts_derivative() {
        let p = Poly::new(vec![qi(3), q(1, 2), qi(-4)]);
        assert_eq!(p.antiderivative().derivative(), p);
    }
}
