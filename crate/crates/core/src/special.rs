//! Floating-point special functions and quadrature.
//!
//! Hurwitz zeta uses Euler–Maclaurin summation with `B_2..B_30` after shifting
//! the argument past `|N + a| ≥ 12` (6 at non-positive integers `s`).
//! Quadrature comes in two flavours: adaptive Gauss–Kronrod (7/15) for smooth
//! integrands and tanh-sinh for integrable endpoint singularities.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::error::{tolerance_err, Result};
use crate::rational::{bernoulli_numbers, to_f64};
use crate::C64;

/// `B_{2j}/(2j)!` for `j = 1..=15`.
fn em_coefficients() -> [f64; 15] {
    let b = bernoulli_numbers(30);
    let mut out = [0.0; 15];
    let mut fact = 1.0f64;
    for (j, slot) in out.iter_mut().enumerate() {
        let k = 2 * (j + 1);
        fact *= ((k - 1) * k) as f64;
        *slot = to_f64(&b[k]) / fact;
    }
    out
}

/// First-order dual number in `s`: value and `d/ds`.
#[derive(Clone, Copy, Debug)]
struct Dual {
    v: C64,
    d: C64,
}

impl Dual {
    fn mul(self, o: Dual) -> Dual {
        Dual { v: self.v * o.v, d: self.v * o.d + self.d * o.v }
    }
    fn add(self, o: Dual) -> Dual {
        Dual { v: self.v + o.v, d: self.d + o.d }
    }
    /// `x^{c - s}` for fixed `x` (principal logarithm).
    fn pow_minus_s(x: C64, c: C64, s: C64) -> Dual {
        let lx = x.ln();
        let v = ((c - s) * lx).exp();
        Dual { v, d: -lx * v }
    }
}

/// `ζ_H(s, a) = Σ_{k≥0} (k + a)^{−s}` together with `∂_s ζ_H(s, a)`.
///
/// Powers use the principal branch of `ln(k + a)`. `a` must not be a
/// non-positive integer and `s ≠ 1`.
pub fn hurwitz_zeta_ds(s: C64, a: C64) -> (C64, C64) {
    let coef = em_coefficients();
    let one = C64::new(1.0, 0.0);
    // At s = 0, −1, −2, … the Pochhammer factors vanish from j > (1 − s)/2 on,
    // leaving derivative terms of size (2j−2+s)!·(2π|x|)^{−2j}; |x| ≥ 6 keeps
    // them below 1e−16 while limiting the O(|x|^{1−s}) cancellation between
    // the partial sum and the tail. Elsewhere shift far enough that the
    // asymptotic remainder is negligible for this s.
    let nonpositive_int = s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round();
    let threshold = if nonpositive_int { 6.0 } else { 12.0 + s.norm() };
    let mut n = 0usize;
    while (a + n as f64).norm() < threshold {
        n += 1;
    }
    let mut acc = Dual { v: C64::zero(), d: C64::zero() };
    for k in 0..n {
        acc = acc.add(Dual::pow_minus_s(a + k as f64, C64::zero(), s));
    }
    let x = a + n as f64;
    // x^{1−s}/(s−1)
    let p = Dual::pow_minus_s(x, one, s);
    let inv = one / (s - one);
    acc = acc.add(Dual { v: p.v * inv, d: p.d * inv - p.v * inv * inv });
    // ½ x^{−s}
    let h = Dual::pow_minus_s(x, C64::zero(), s);
    acc = acc.add(Dual { v: h.v * 0.5, d: h.d * 0.5 });
    // Σ B_{2j}/(2j)! · s(s+1)…(s+2j−2) · x^{−s−2j+1}
    let mut poch = Dual { v: s, d: one };
    let mut xp = Dual::pow_minus_s(x, C64::new(-1.0, 0.0), s);
    let xinv2 = one / (x * x);
    for (j, c) in coef.iter().enumerate() {
        let term = poch.mul(xp);
        acc = acc.add(Dual { v: term.v * *c, d: term.d * *c });
        let k = (2 * j) as f64;
        poch = poch
            .mul(Dual { v: s + (k + 1.0), d: one })
            .mul(Dual { v: s + (k + 2.0), d: one });
        xp = Dual { v: xp.v * xinv2, d: xp.d * xinv2 };
    }
    (acc.v, acc.d)
}

pub fn hurwitz_zeta(s: C64, a: C64) -> C64 {
    hurwitz_zeta_ds(s, a).0
}

/// `d^k/dt^k exp(−(t − c)²/(2w²))` via probabilists' Hermite polynomials.
pub fn gaussian_derivative(t: f64, c: f64, w: f64, k: usize) -> f64 {
    let x = (t - c) / w;
    let g = (-0.5 * x * x).exp();
    // He_{k+1} = x He_k − k He_{k−1}
    let (mut h0, mut h1) = (1.0, x);
    let he = match k {
        0 => h0,
        _ => {
            for i in 1..k {
                let h2 = x * h1 - i as f64 * h0;
                h0 = h1;
                h1 = h2;
            }
            h1
        }
    };
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * he * g / w.powi(k as i32)
}

/// `tan(πu)` with the argument reduced to the nearest zero or pole first,
/// so that values next to a pole keep full relative accuracy.
pub fn tan_pi(u: C64) -> C64 {
    let r = u - u.re.round();
    if r.re.abs() <= 0.25 {
        (r * PI).tan()
    } else {
        let h = r - 0.5f64.copysign(r.re);
        -C64::new(1.0, 0.0) / (h * PI).tan()
    }
}

/// Result of a quadrature: value and error estimate.
#[derive(Clone, Copy, Debug)]
pub struct Integral {
    pub value: C64,
    pub error: f64,
}

const GK_X: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000000000000000000000000000000000,
];
const GK_WK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const GK_WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> C64>(f: &mut F, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * GK_WK[7];
    let mut g = fc * GK_WG[3];
    for i in 0..7 {
        let dx = h * GK_X[i];
        let s = f(c - dx) + f(c + dx);
        k += s * GK_WK[i];
        if i % 2 == 1 {
            g += s * GK_WG[i / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Adaptive Gauss–Kronrod on `[a, b]` to `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<F: FnMut(f64) -> C64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<Integral> {
    let mut stack: Vec<(f64, f64, u32)> = Vec::new();
    stack.push((a, b, 0));
    let mut total = C64::zero();
    let mut err = 0.0;
    let mut evals = 0usize;
    let mut unresolved = 0.0;
    let span = (b - a).abs().max(f64::MIN_POSITIVE);
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, e) = gk15(&mut f, lo, hi);
        evals += 15;
        let local_tol = abs_tol.max(rel_tol * v.norm()) * ((hi - lo).abs() / span);
        // below this width the nodes are no longer resolvable in f64
        let floor = (hi - lo).abs() <= 1e-12 * span.max(lo.abs()).max(hi.abs());
        if e <= local_tol || depth >= 50 || floor {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(tolerance_err!("non-finite integrand on [{lo}, {hi}]"));
            }
            if e > local_tol {
                unresolved += e;
            }
            total += v;
            err += e;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
        if evals > 2_000_000 {
            return Err(tolerance_err!("quadrature did not converge on [{a}, {b}] (at [{lo}, {hi}] depth {depth} err {e:e} tol {local_tol:e})"));
        }
    }
    let tol = abs_tol.max(rel_tol * total.norm());
    if unresolved > tol {
        return Err(tolerance_err!("quadrature error {unresolved:e} exceeds tolerance {tol:e}"));
    }
    Ok(Integral { value: total, error: err })
}

/// Integral of `f` along the straight segment `z0 → z1` in the complex plane.
pub fn integrate_segment<F: FnMut(C64) -> C64>(mut f: F, z0: C64, z1: C64, abs_tol: f64, rel_tol: f64) -> Result<Integral> {
    let dz = z1 - z0;
    if dz.norm() == 0.0 {
        return Ok(Integral { value: C64::zero(), error: 0.0 });
    }
    let r = integrate(|t| f(z0 + dz * t) * dz, 0.0, 1.0, abs_tol, rel_tol)?;
    Ok(r)
}

/// Integral along a polyline through `pts`.
pub fn integrate_path<F: FnMut(C64) -> C64>(mut f: F, pts: &[C64], abs_tol: f64, rel_tol: f64) -> Result<Integral> {
    let mut out = Integral { value: C64::zero(), error: 0.0 };
    for w in pts.windows(2) {
        let r = integrate_segment(&mut f, w[0], w[1], abs_tol, rel_tol)?;
        out.value += r.value;
        out.error += r.error;
    }
    Ok(out)
}

/// Tanh-sinh (double exponential) quadrature on `[a, b]`; tolerates
/// integrable singularities at both endpoints. `f` receives `(x, x − a, b − x)`
/// so that integrands can evaluate singular factors without cancellation.
pub fn tanh_sinh<F: FnMut(f64, f64, f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<(f64, f64)> {
    let h0 = 0.5 * (b - a);
    let tmax = 3.2;
    let mut h = 0.5;
    let eval = |f: &mut F, t: f64| -> f64 {
        let u = 0.5 * PI * t.sinh();
        let ch = u.cosh();
        let w = 0.5 * PI * t.cosh() / (ch * ch);
        // distance to the nearer endpoint, computed without cancellation
        let d = h0 / (u.abs().exp() * ch);
        let (x, da, db) = if t >= 0.0 { (b - d, b - a - d, d) } else { (a + d, d, b - a - d) };
        if da <= 0.0 || db <= 0.0 {
            return 0.0;
        }
        let v = f(x, da, db);
        if v.is_finite() {
            v * w
        } else {
            0.0
        }
    };
    let mut sum = eval(&mut f, 0.0);
    let mut k = 1;
    while k as f64 * h <= tmax {
        let t = k as f64 * h;
        sum += eval(&mut f, t) + eval(&mut f, -t);
        k += 1;
    }
    let mut prev = sum * h * h0;
    for _level in 0..10 {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= tmax {
            let t = k as f64 * h;
            sum += eval(&mut f, t) + eval(&mut f, -t);
            k += 2;
        }
        let cur = sum * h * h0;
        let diff = (cur - prev).abs();
        if diff <= tol.max(1e-15 * cur.abs()) {
            return Ok((cur, diff));
        }
        prev = cur;
    }
    Err(tolerance_err!("tanh-sinh did not reach {tol:e} on [{a}, {b}]"))
}
