//! The compact dual: lattice spectrum, theta function, heat coefficients,
//! zeta-regularized determinants and the distribution `K(t, σ)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_bigint::BigInt;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{input_err, tolerance_err, Error, Result};
use crate::mtype::{LatticeSpec, MType, WeylPolynomial};
use crate::poly::Poly;
use crate::rational::{bernoulli_poly_at, factorial, harmonic, qi, to_f64, Q};
use crate::space::{Family, SpacePreset};
use crate::special::{gaussian_derivative, hurwitz_zeta_ds, integrate_path, tan_pi, tanh_sinh};
use crate::C64;

/// Default pole-proximity threshold, in units of `T`.
pub const POLE_TOL: f64 = 1e-6;

/// Riemannian volume of the compact dual in the metric normalization of
/// [`SpacePreset`]: the round sphere `S^{2m}`, and `CPⁿ`, `HPⁿ`, `OP²` with
/// sectional curvature in `[1, 4]`.
pub fn dual_volume(space: &SpacePreset) -> f64 {
    let n = space.rank_param as i32;
    let fact = |k: i32| (1..=k).fold(1.0, |a, i| a * i as f64);
    match space.family {
        // 2π^{m+1/2}/Γ(m+1/2) = 2^{2m+1} π^m m!/(2m)!
        Family::RealH => 2.0_f64.powi(2 * n + 1) * PI.powi(n) * fact(n) / fact(2 * n),
        Family::ComplexH => PI.powi(n) / fact(n),
        Family::QuaternionicH => PI.powi(2 * n) / fact(2 * n + 1),
        Family::CayleyH => 6.0 * PI.powi(8) / fact(11),
    }
}

/// One point of the dual spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct DualEntry {
    pub lambda: Q,
    pub mult: BigInt,
}

/// A truncated sum together with a bound on the omitted tail.
#[derive(Clone, Copy, Debug)]
pub struct Truncated<T> {
    pub value: T,
    pub tail_bound: f64,
    pub terms: usize,
}

/// The σ-admissible dual spectrum: `P(λ, σ)` on every positive `λ ∈ L(σ)`.
#[derive(Clone, Debug)]
pub struct DualSpectrum {
    pub sigma: MType,
    pub lattice: LatticeSpec,
    pub poly: WeylPolynomial,
    abs_coeffs: Vec<f64>,
}

impl DualSpectrum {
    pub fn new(sigma: &MType) -> Result<Self> {
        let lattice = sigma.lattice()?;
        let poly = sigma.weyl_polynomial()?;
        let abs_coeffs = poly.p.coeffs().iter().map(|c| to_f64(&c.abs())).collect();
        Ok(DualSpectrum { sigma: sigma.clone(), lattice, poly, abs_coeffs })
    }

    pub fn t(&self) -> f64 {
        to_f64(&self.lattice.t)
    }

    /// Entries with `λ ≤ cutoff`.
    pub fn entries(&self, cutoff: f64) -> Vec<DualEntry> {
        let mut out = Vec::new();
        let mut k = 0;
        loop {
            let lambda = self.lattice.point(k);
            if to_f64(&lambda) > cutoff {
                break;
            }
            let m = self.poly.p.eval(&lambda);
            out.push(DualEntry { lambda, mult: m.to_integer() });
            k += 1;
        }
        out
    }

    fn majorant(&self, x: f64) -> f64 {
        self.abs_coeffs.iter().rev().fold(0.0, |a, c| a * x + c)
    }

    /// Bound on `Σ_{k ≥ k0} |P(λ_k)| e^{−t λ_k}` for real `t > 0`.
    ///
    /// With `P̄(x) = Σ|p_j| x^j` one has `P̄(x + T) ≤ (1 + T/x)^d P̄(x)`, so past
    /// `λ_{k0}` the terms are dominated by a geometric series.
    pub fn tail_bound(&self, t: f64, k0: u64) -> f64 {
        let tt = self.t();
        let x = to_f64(&self.lattice.point(k0));
        let d = self.poly.degree() as i32;
        let r = (1.0 + tt / x).powi(d) * (-t * tt).exp();
        if r >= 1.0 {
            return f64::INFINITY;
        }
        self.majorant(x) * (-t * x).exp() / (1.0 - r)
    }

    /// `Σ P(λ) e^{−tλ}` summed until the tail bound drops below `tol`.
    pub fn partial_theta(&self, t: f64, tol: f64) -> Result<Truncated<f64>> {
        if !(t > 0.0) {
            return Err(input_err!("partial theta needs t > 0"));
        }
        let mut sum = 0.0;
        let mut k = 0u64;
        loop {
            let lam = self.lattice.point(k);
            let lf = to_f64(&lam);
            sum += to_f64(&self.poly.p.eval(&lam)) * (-t * lf).exp();
            k += 1;
            let b = self.tail_bound(t, k);
            if b < tol {
                return Ok(Truncated { value: sum, tail_bound: b, terms: k as usize });
            }
            if k > 10_000_000 {
                return Err(tolerance_err!("partial theta did not reach {tol:e}"));
            }
        }
    }

    /// `Σ P(λ) φ̂(λ)` for a Gaussian test function.
    pub fn gaussian_sum(&self, phi: &TestFunction, tol: f64) -> f64 {
        let mut sum = 0.0;
        let mut k = 0u64;
        loop {
            let lam = self.lattice.point(k);
            let lf = to_f64(&lam);
            let term = to_f64(&self.poly.p.eval(&lam)) * phi.cosine_transform(lf);
            sum += term;
            k += 1;
            // the Gaussian factor decays faster than any polynomial grows
            if lf * phi.width() > 8.0 && self.majorant(lf) * phi.envelope(lf) < tol {
                return sum;
            }
        }
    }
}

/// Value of a meromorphic function with a flag for pole proximity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Flagged {
    pub value: C64,
    pub pole: bool,
}

/// Closed form of `θ_d(t) = Σ_{λ ∈ L(σ), λ > 0} P(λ, σ) e^{−tλ}`.
///
/// With `u = e^{−tT}` and first offset `a = ε'`,
/// `Σ_k (k + a)^j u^k = R_j(u)/(1 − u)^{j+1}`, where `R_0 = 1` and
/// `R_{j+1} = (a R_j + u R_j')(1 − u) + (j + 1) u R_j`.
#[derive(Clone, Debug)]
pub struct DualTheta {
    t_period: f64,
    a: f64,
    /// `(j, p_j T^j, R_j)` for the nonzero coefficients of `P`.
    terms: Vec<(usize, f64, Poly)>,
    pole_tol: f64,
}

impl DualTheta {
    pub fn new(sigma: &MType) -> Result<Self> {
        let lattice = sigma.lattice()?;
        let p = sigma.weyl_polynomial()?.p;
        let a = lattice.offset();
        let one_minus_u = Poly::linear(-Q::one(), Q::one());
        let mut r = Poly::one();
        let mut terms = Vec::new();
        for (j, pj) in p.coeffs().iter().enumerate() {
            if j > 0 {
                let prev = j - 1;
                let ur = &Poly::x() * &r;
                let left = &(&r.scale(&a) + &(&Poly::x() * &r.derivative())) * &one_minus_u;
                r = &left + &ur.scale(&qi(prev as i64 + 1));
            }
            if !pj.is_zero() {
                let tj = num_traits::pow(lattice.t.clone(), j);
                terms.push((j, to_f64(&(pj * tj)), r.clone()));
            }
        }
        Ok(DualTheta { t_period: to_f64(&lattice.t), a: to_f64(&a), terms, pole_tol: POLE_TOL })
    }

    pub fn with_pole_tol(mut self, tol: f64) -> Self {
        self.pole_tol = tol;
        self
    }

    pub fn eval(&self, t: C64) -> Flagged {
        let tt = self.t_period;
        let period = 2.0 * PI / tt;
        let k = (t.im / period).round();
        let near = (t - C64::new(0.0, k * period)).norm() < self.pole_tol * tt;
        if near {
            return Flagged { value: C64::new(f64::NAN, f64::NAN), pole: true };
        }
        let u = (-t * tt).exp();
        let pref = (-t * (tt * self.a)).exp();
        let omu = C64::new(1.0, 0.0) - u;
        let mut acc = C64::zero();
        for (j, c, r) in &self.terms {
            acc += r.eval_c(u) * *c / omu.powi(*j as i32 + 1);
        }
        Flagged { value: acc * pref, pole: false }
    }
}

/// Convenience wrapper around [`DualTheta`].
pub fn theta_dual(t: C64, sigma: &MType) -> Result<Flagged> {
    Ok(DualTheta::new(sigma)?.eval(t))
}

/// Small-`t` coefficients of `Tr e^{−tA_d} ~ Σ d_k t^k` and
/// `Tr e^{−tA_d²} ~ Σ c_k t^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeatCoefficients {
    pub d: BTreeMap<i64, Q>,
    pub c: BTreeMap<i64, Q>,
}

/// `ζ_L(−r) = Σ λ^r` regularized: `T^r ζ_H(−r, ε') = −T^r B_{r+1}(ε')/(r+1)`.
fn lattice_zeta_at_neg(lattice: &LatticeSpec, r: usize) -> Q {
    let a = lattice.offset();
    -num_traits::pow(lattice.t.clone(), r) * bernoulli_poly_at(r + 1, &a) / qi(r as i64 + 1)
}

pub fn heat_coefficients(sigma: &MType, order: usize) -> Result<HeatCoefficients> {
    let lattice = sigma.lattice()?;
    let p = sigma.weyl_polynomial()?.p;
    let n = sigma.space.dim_real as i64;
    let mut d = BTreeMap::new();
    let mut c = BTreeMap::new();
    for k in -n..=order as i64 {
        d.insert(k, Q::zero());
    }
    for k in -(n / 2)..=order as i64 {
        c.insert(k, Q::zero());
    }
    for (j, pj) in p.coeffs().iter().enumerate() {
        if pj.is_zero() {
            continue;
        }
        // Σ λ^j e^{−tλ} ~ j!/(T t^{j+1}) + Σ_k (−t)^k/k! ζ_L(−j−k)
        *d.get_mut(&-(j as i64 + 1)).unwrap() += pj * Q::from_integer(factorial(j as u32)) / &lattice.t;
        // Σ λ^j e^{−tλ²} ~ Γ((j+1)/2)/(2T) t^{−(j+1)/2} + Σ_k (−t)^k/k! ζ_L(−j−2k)
        let i = (j - 1) / 2;
        *c.get_mut(&-(i as i64 + 1)).unwrap() += pj * Q::from_integer(factorial(i as u32)) / (qi(2) * &lattice.t);
        for k in 0..=order {
            let sign = if k % 2 == 0 { Q::one() } else { -Q::one() };
            let kf = Q::from_integer(factorial(k as u32));
            *d.get_mut(&(k as i64)).unwrap() += pj * &sign / &kf * lattice_zeta_at_neg(&lattice, j + k);
            *c.get_mut(&(k as i64)).unwrap() += pj * &sign / &kf * lattice_zeta_at_neg(&lattice, j + 2 * k);
        }
    }
    Ok(HeatCoefficients { d, c })
}

/// Sign of the determinant: `Plus` is `det(A_d − λ)`, `Minus` is `det(A_d + λ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetSign {
    Plus,
    Minus,
}

/// Precomputed data for determinants over the dual lattice.
#[derive(Clone, Debug)]
pub struct DualDet {
    lattice: LatticeSpec,
    p: Poly,
    derivs: Vec<Poly>,
    correction: Vec<(usize, f64)>,
}

impl DualDet {
    pub fn new(sigma: &MType) -> Result<Self> {
        let lattice = sigma.lattice()?;
        let p = sigma.weyl_polynomial()?.p;
        // P^{(r)}/r!
        let mut derivs = Vec::new();
        let mut cur = p.clone();
        let mut r = 0u32;
        while !cur.is_zero() {
            derivs.push(cur.scale(&(Q::one() / Q::from_integer(factorial(r)))));
            cur = cur.derivative();
            r += 1;
        }
        let heat = heat_coefficients(sigma, 0)?;
        let mut correction = Vec::new();
        for m in 1..=(sigma.space.dim_real as usize / 2) {
            let cm = &heat.c[&-(m as i64)];
            if cm.is_zero() {
                continue;
            }
            let h = qi(2) * harmonic(2 * m as u32 - 1) - harmonic(m as u32 - 1);
            let coef = cm / Q::from_integer(factorial(m as u32)) * h;
            correction.push((m, to_f64(&coef)));
        }
        Ok(DualDet { lattice, p, derivs, correction })
    }

    /// `ln det(A_d ∓ λ)`, principal branch of the zeta-regularized log.
    pub fn log_det(&self, lambda: C64, sign: DetSign) -> Result<C64> {
        let x = match sign {
            DetSign::Plus => lambda,
            DetSign::Minus => -lambda,
        };
        let tt = to_f64(&self.lattice.t);
        let a = C64::new(to_f64(&self.lattice.offset()), 0.0) - x / tt;
        // a ∈ {0, −1, −2, …} means λ_k = x for some k
        if a.im.abs() < 1e-12 && a.re <= 1e-12 && (a.re - a.re.round()).abs() < 1e-12 {
            return Err(input_err!("determinant argument lies on the dual lattice"));
        }
        let lt = tt.ln();
        let mut tot = C64::zero();
        for (r, d) in self.derivs.iter().enumerate() {
            let pr = d.eval_c(x);
            if pr.norm() == 0.0 {
                continue;
            }
            let (z, dz) = hurwitz_zeta_ds(C64::new(-(r as f64), 0.0), a);
            tot += pr * tt.powi(r as i32) * (dz - z * lt);
        }
        Ok(-tot)
    }

    pub fn det(&self, lambda: C64, sign: DetSign) -> Result<C64> {
        Ok(self.log_det(lambda, sign)?.exp())
    }

    /// `ln det(A_d² − λ²) = ln D⁺(λ) + ln D⁻(λ) + Σ_m (c_{−m}/m!)(2H_{2m−1} − H_{m−1}) λ^{2m}`.
    pub fn log_det_squared(&self, lambda: C64) -> Result<C64> {
        let mut v = self.log_det(lambda, DetSign::Plus)? + self.log_det(lambda, DetSign::Minus)?;
        for (m, c) in &self.correction {
            v += lambda.powi(2 * *m as i32) * *c;
        }
        Ok(v)
    }

    pub fn polynomial(&self) -> &Poly {
        &self.p
    }
}

pub fn dual_det(lambda: C64, sign: DetSign, sigma: &MType) -> Result<C64> {
    DualDet::new(sigma)?.det(lambda, sign)
}

/// `∫₀^s p Q(p) {tan | −cot}(πp/T) dp` (tan for `ε = 1/2`, −cot for `ε = 0`).
///
/// The path `0 → iδ → s + iδ → s` keeps clear of the real poles; it is run
/// at `δ` and `2δ` and the two results must agree.
#[derive(Clone, Debug)]
pub struct PlancherelIntegral {
    q: Poly,
    pub t_period: f64,
    tan: bool,
    pub delta: f64,
    pub agreement_tol: f64,
}

impl PlancherelIntegral {
    pub fn new(sigma: &MType) -> Result<Self> {
        let lattice = sigma.lattice()?;
        let q = sigma.weyl_polynomial()?.q;
        let tt = to_f64(&lattice.t);
        Ok(PlancherelIntegral {
            q,
            t_period: tt,
            tan: !lattice.eps.is_zero(),
            delta: 1e-3 * tt,
            agreement_tol: 1e-9,
        })
    }

    /// `{tan | −cot}(πp/T)`.
    pub fn kernel(&self, p: C64) -> C64 {
        let u = p / self.t_period;
        if self.tan {
            tan_pi(u)
        } else {
            tan_pi(u - 0.5)
        }
    }

    pub fn integrand(&self, p: C64) -> C64 {
        if p.norm() < 1e-300 {
            return C64::zero();
        }
        p * self.q.eval_c(p) * self.kernel(p)
    }

    fn along(&self, s: C64, delta: f64) -> Result<C64> {
        self.lifted(C64::zero(), s, delta, 1e-14)
    }

    fn lifted(&self, a: C64, b: C64, delta: f64, tol: f64) -> Result<C64> {
        let lift = C64::new(0.0, delta);
        let pts = [a, a + lift, b + lift, b];
        let r = integrate_path(|p| self.integrand(p), &pts, tol, 10.0 * tol)?;
        Ok(r.value)
    }

    /// `∫_a^b` of the integrand. Segments within `δ/2` of the real axis are
    /// lifted to `Im = δ` and checked against the `2δ` lift; elsewhere the
    /// straight segment is used.
    pub fn integrate_between(&self, a: C64, b: C64) -> Result<C64> {
        for z in [a, b] {
            if self.on_pole(z) {
                return Err(input_err!("integration endpoint {z} is a pole of the kernel"));
            }
        }
        let near_axis = a.im.abs().min(b.im.abs()) <= 0.5 * self.delta || a.im.signum() != b.im.signum();
        if !near_axis {
            return Ok(integrate_path(|p| self.integrand(p), &[a, b], 1e-13, 1e-12)?.value);
        }
        let x = self.lifted(a, b, self.delta, 1e-12)?;
        let y = self.lifted(a, b, 2.0 * self.delta, 1e-12)?;
        if (x - y).norm() > self.agreement_tol * x.norm().max(1.0) {
            return Err(tolerance_err!("contour offsets δ and 2δ disagree by {:e}", (x - y).norm()));
        }
        Ok(x)
    }

    /// Whether `s` sits on a pole of the kernel.
    pub fn on_pole(&self, s: C64) -> bool {
        let x = s.re / self.t_period - if self.tan { 0.5 } else { 0.0 };
        let k = x.round();
        if !self.tan && k == 0.0 {
            return false;
        }
        let d = C64::new((x - k) * self.t_period, s.im);
        d.norm() < POLE_TOL * self.t_period
    }

    pub fn eval(&self, s: C64) -> Result<C64> {
        if s.norm() == 0.0 {
            return Ok(C64::zero());
        }
        if self.on_pole(s) {
            return Err(input_err!("integration endpoint {s} is a pole of the kernel"));
        }
        // a straight path is fine when it stays clear of every pole
        let straight = s.im.abs() > 0.5 * self.delta || {
            let first = if self.tan { 0.5 * self.t_period } else { self.t_period };
            s.re.abs() < first - 2.0 * self.delta
        };
        if straight {
            let r = integrate_path(|p| self.integrand(p), &[C64::zero(), s], 1e-14, 1e-13)?;
            if s.im.abs() > 0.5 * self.delta || s.re.abs() < 0.25 * self.t_period {
                return Ok(r.value);
            }
        }
        let a = self.along(s, self.delta)?;
        let b = self.along(s, 2.0 * self.delta)?;
        if (a - b).norm() > self.agreement_tol * a.norm().max(1.0) {
            return Err(tolerance_err!("contour offsets δ and 2δ disagree by {:e}", (a - b).norm()));
        }
        Ok(a)
    }
}

/// `−(π/T) ∫₀^λ s Q(s) {tan | −cot}(πs/T) ds`, the logarithm of the predicted
/// ratio `D⁺(λ)/D⁻(λ)`.
pub fn reflection_exponent(lambda: C64, sigma: &MType) -> Result<C64> {
    let pi = PlancherelIntegral::new(sigma)?;
    Ok(pi.eval(lambda)? * (-PI / pi.t_period))
}

/// An even test function on ℝ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TestFunction {
    /// `e^{−(t−c)²/(2w²)} + e^{−(t+c)²/(2w²)}`.
    Gaussian { center: f64, width: f64 },
}

impl TestFunction {
    pub fn gaussian(center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0) || !center.is_finite() {
            return Err(input_err!("Gaussian needs a finite center and positive width"));
        }
        Ok(TestFunction::Gaussian { center, width })
    }

    pub fn width(&self) -> f64 {
        match *self {
            TestFunction::Gaussian { width, .. } => width,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.derivative(t, 0)
    }

    pub fn derivative(&self, t: f64, k: usize) -> f64 {
        match *self {
            TestFunction::Gaussian { center, width } => {
                gaussian_derivative(t, center, width, k) + gaussian_derivative(t, -center, width, k)
            }
        }
    }

    /// `φ̂(λ) = ∫ φ(t) e^{iλt} dt`.
    pub fn cosine_transform(&self, lambda: f64) -> f64 {
        match *self {
            TestFunction::Gaussian { center, width } => {
                2.0 * (2.0 * PI).sqrt() * width * (-0.5 * lambda * lambda * width * width).exp() * (lambda * center).cos()
            }
        }
    }

    /// `φ̂` continued to complex `λ` (imaginary `λ` for small eigenvalues).
    pub fn cosine_transform_c(&self, lambda: C64) -> C64 {
        match *self {
            TestFunction::Gaussian { center, width } => {
                (lambda * lambda * (-0.5 * width * width)).exp() * (lambda * center).cos() * (2.0 * (2.0 * PI).sqrt() * width)
            }
        }
    }

    /// An upper bound for `|φ̂(λ)|`.
    pub fn envelope(&self, lambda: f64) -> f64 {
        match *self {
            TestFunction::Gaussian { width, .. } => {
                2.0 * (2.0 * PI).sqrt() * width * (-0.5 * lambda * lambda * width * width).exp()
            }
        }
    }

    /// Support bound: beyond this `|t|` every derivative used is negligible.
    fn reach(&self) -> f64 {
        match *self {
            TestFunction::Gaussian { center, width } => center.abs() + 16.0 * width,
        }
    }

    /// `(d²/dt²) R(d/dt) φ` for an even polynomial `R` given by coefficients.
    fn apply(&self, t: f64, r: &[f64]) -> f64 {
        r.iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(j, c)| c * self.derivative(t, j + 2))
            .sum()
    }
}

/// Which side of the duality a pairing is taken on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Noncompact,
    Dual,
}

/// `∫_lo^hi F(t) g(t) dt` where `F` has logarithmic singularities at `lo`
/// (and at `hi` when `right` is given). `F` is supplied as a function of the
/// distance to the nearer singular endpoint, so no precision is lost there.
fn log_weighted<L, R, G>(left: &L, right: Option<&R>, g: &G, lo: f64, hi: f64, step: f64) -> Result<f64>
where
    L: Fn(f64) -> f64,
    R: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    let h = (hi - lo) / n as f64;
    let mut total = 0.0;
    for i in 0..n {
        let a = lo + i as f64 * h;
        let b = if i + 1 == n { hi } else { a + h };
        let (v, _) = tanh_sinh(
            |x, da, db| {
                let dl = if i == 0 { da } else { x - lo };
                let fx = match right {
                    Some(fr) => {
                        let dr = if i + 1 == n { db } else { hi - x };
                        if dl <= dr {
                            left(dl)
                        } else {
                            fr(dr)
                        }
                    }
                    None => left(dl),
                };
                fx * g(x)
            },
            a,
            b,
            1e-13,
        )?;
        total += v;
    }
    Ok(total)
}

/// `⟨K, φ⟩` on the noncompact side, or its dual counterpart
/// `(1/vol X_d) Σ_{λ ∈ L(σ)} P(λ, σ) φ̂(λ)` computed through the closed-form
/// kernel.
///
/// Noncompact: `K = −(−1)^{n/2}/(T vol X_d) · D² Q(D) F(t)` with
/// `F = ln|sinh(Tt/2)|` for `ε = 0` and `ln|tanh(Tt/4)|` for `ε = 1/2`.
/// Dual: `(1/(T vol X_d)) ∫ F_d(t) D² Q(−iD) φ dt` with `F_d = ln|sin(Tt/2)|`
/// or `ln|tan(Tt/4)|`.
pub fn k_pairing(phi: &TestFunction, sigma: &MType, side: Side) -> Result<f64> {
    let lattice = sigma.lattice()?;
    let q = sigma.weyl_polynomial()?.q;
    let tt = to_f64(&lattice.t);
    let half = !lattice.eps.is_zero();
    let vol = dual_volume(&sigma.space);
    let step = 2.0 * phi.width();
    let reach = phi.reach();
    let mut r: Vec<f64> = q.coeffs().iter().map(to_f64).collect();
    if side == Side::Dual {
        // Q(−iD): D^{2i} picks up (−1)^i
        for (j, c) in r.iter_mut().enumerate() {
            if j % 4 == 2 {
                *c = -*c;
            }
        }
    }
    let g = |t: f64| phi.apply(t, &r);
    let none: Option<&fn(f64) -> f64> = None;
    // both integrands are even in t; integrate over t > 0 and double
    let half_line = match side {
        Side::Noncompact => {
            let f = |d: f64| {
                if half {
                    (tt * d / 4.0).tanh().ln()
                } else {
                    (tt * d / 2.0).sinh().ln()
                }
            };
            let v = log_weighted(&f, none, &g, 0.0, reach, step)?;
            -(sigma.space.half_dim_sign() as f64) * v
        }
        Side::Dual => {
            let period = 2.0 * PI / tt;
            let mut total = 0.0;
            let mut k = 0usize;
            while (k as f64) * period < reach {
                let lo = k as f64 * period;
                let end = (k + 1) as f64 * period;
                let hi = end.min(reach);
                // ln|tan(Tt/4)| is ±ln|tan(T d/4)| near each end of a period,
                // the sign flipping between even and odd multiples of 2π/T
                let s = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
                let fl = |d: f64| {
                    if half {
                        s * (tt * d / 4.0).tan().ln()
                    } else {
                        (tt * d / 2.0).sin().ln()
                    }
                };
                let fr = |d: f64| {
                    if half {
                        -s * (tt * d / 4.0).tan().ln()
                    } else {
                        (tt * d / 2.0).sin().ln()
                    }
                };
                total += if hi < end {
                    log_weighted(&fl, none, &g, lo, hi, step)?
                } else {
                    log_weighted(&fl, Some(&fr), &g, lo, hi, step)?
                };
                k += 1;
            }
            total
        }
    };
    Ok(2.0 * half_line / (tt * vol))
}

/// Pointwise value of `K(t, σ)` for real `t ≠ 0`: `(−1)^{n/2} θ_d(t)/vol X_d`.
pub fn k_pointwise(t: f64, sigma: &MType) -> Result<f64> {
    let th = DualTheta::new(sigma)?.eval(C64::new(t.abs(), 0.0));
    if th.pole {
        return Err(input_err!("K(t) is singular at t = 0"));
    }
    Ok(sigma.space.half_dim_sign() as f64 * th.value.re / dual_volume(&sigma.space))
}

/// Integer value of `P` at an exact rational lattice point.
pub fn multiplicity_at(poly: &Poly, lambda: &Q) -> Result<i64> {
    let v = poly.eval(lambda);
    if !v.is_integer() {
        return Err(Error::Internal("non-integral multiplicity".into()));
    }
    v.to_integer().to_i64().ok_or_else(|| Error::Internal("multiplicity overflow".into()))
}

/// The first `count` positive lattice points as floats.
pub fn lattice_points_f64(lattice: &LatticeSpec, count: usize) -> Vec<f64> {
    (0..count as u64).map(|k| to_f64(&lattice.point(k))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn sphere() -> MType {
        MType::trivial(&SpacePreset::new(Family::RealH, 1).unwrap())
    }

    #[test]
    fn sphere_theta_closed_form() {
        let v = theta_dual(C64::new(1.0, 0.0), &sphere()).unwrap();
        let exact = 0.5 * (0.5f64).cosh() / (0.5f64).sinh().powi(2);
        assert!((v.value.re - exact).abs() < 1e-13);
        assert!(!v.pole);
        assert!(theta_dual(C64::new(0.0, 2.0 * PI), &sphere()).unwrap().pole);
    }

    #[test]
    fn sphere_heat_coefficients() {
        let h = heat_coefficients(&sphere(), 2).unwrap();
        assert_eq!(h.d[&-2], qi(2));
        assert_eq!(h.d[&-1], Q::zero());
        assert_eq!(h.d[&0], q(1, 12));
        assert_eq!(h.c[&-1], qi(1));
    }

    #[test]
    fn sphere_determinant_at_zero() {
        let d = DualDet::new(&sphere()).unwrap();
        let p = d.det(C64::zero(), DetSign::Plus).unwrap();
        let m = d.det(C64::zero(), DetSign::Minus).unwrap();
        assert!((p.re - 0.897_933_848_596_131_3).abs() < 1e-12);
        assert!((p - m).norm() < 1e-15);
        assert!(d.det(C64::new(0.5, 0.0), DetSign::Plus).is_err());
    }

    #[test]
    fn volumes() {
        assert!((dual_volume(&SpacePreset::new(Family::RealH, 1).unwrap()) - 4.0 * PI).abs() < 1e-12);
        // S⁴: 8π²/3
        assert!((dual_volume(&SpacePreset::new(Family::RealH, 2).unwrap()) - 8.0 * PI * PI / 3.0).abs() < 1e-12);
        assert!((dual_volume(&SpacePreset::new(Family::ComplexH, 2).unwrap()) - PI * PI / 2.0).abs() < 1e-12);
    }
}
