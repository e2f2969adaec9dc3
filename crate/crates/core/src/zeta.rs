//! The Selberg zeta function `Z_S(s)`: its logarithmic derivative and Euler
//! product over a length spectrum, the functional equation, the divisor,
//! theta residues, the trace-formula residual and the determinant
//! representation through the compact dual.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{ToPrimitive, Zero};

use crate::dual::{k_pairing, DualDet, DualSpectrum, PlancherelIntegral, Side, TestFunction, Truncated};
use crate::error::{capability_err, input_err, Error, Result};
use crate::geodesics::{contribution_kappa, GeodesicClass, LengthSpectrum};
use crate::mtype::MType;
use crate::rational::{qi, to_f64, Q};
use crate::space::SpacePreset;
use crate::C64;

/// One eigenvalue `λ` of `A_M` (real `λ ≥ 0`, or `λ = iμ` with `0 < μ ≤ ρ`)
/// with multiplicity `m(λ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralEntry {
    pub lambda: C64,
    pub mult: i64,
}

/// A (truncated) spectrum of `A_M`, supplied externally.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpectralDatum {
    pub entries: Vec<SpectralEntry>,
}

const AXIS_TOL: f64 = 1e-12;

impl SpectralDatum {
    pub fn new(entries: Vec<SpectralEntry>) -> Result<Self> {
        let d = SpectralDatum { entries };
        d.validate(None)?;
        Ok(d)
    }

    /// Checks the square-root branch, and `μ ≤ ρ` when a space is given.
    pub fn validate(&self, space: Option<&SpacePreset>) -> Result<()> {
        for e in &self.entries {
            let (re, im) = (e.lambda.re, e.lambda.im);
            if !re.is_finite() || !im.is_finite() {
                return Err(input_err!("non-finite eigenvalue {}", e.lambda));
            }
            let real = im.abs() <= AXIS_TOL && re >= 0.0;
            let imaginary = re.abs() <= AXIS_TOL && im > 0.0;
            if !real && !imaginary {
                return Err(input_err!(
                    "eigenvalue {} must be real and non-negative or on the positive imaginary axis",
                    e.lambda
                ));
            }
            if let (true, Some(s)) = (imaginary, space) {
                if im > to_f64(&s.rho) + AXIS_TOL {
                    return Err(input_err!("imaginary eigenvalue {} exceeds rho = {}", e.lambda, s.rho));
                }
            }
        }
        Ok(())
    }

    /// The dual lattice spectrum `{(λ, P(λ, σ))}` up to `cutoff`, used as a
    /// surrogate spectral side.
    pub fn dual_surrogate(sigma: &MType, cutoff: f64) -> Result<Self> {
        let ds = DualSpectrum::new(sigma)?;
        let entries = ds
            .entries(cutoff)
            .into_iter()
            .map(|e| {
                let mult = e.mult.to_i64().ok_or_else(|| Error::Internal("multiplicity overflow".into()))?;
                Ok(SpectralEntry { lambda: C64::new(to_f64(&e.lambda), 0.0), mult })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SpectralDatum { entries })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Provenance {
    Spectral,
    DualTopological,
    Combined,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DivisorPoint {
    pub location: C64,
    pub order: i64,
    pub provenance: Provenance,
}

/// Zeros (positive order) and poles (negative order) with coincident points
/// merged; points whose orders cancel are dropped.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Divisor {
    pub points: Vec<DivisorPoint>,
}

/// Points closer than this are treated as one location.
pub const MERGE_TOL: f64 = 1e-9;

impl Divisor {
    pub fn merged(mut raw: Vec<DivisorPoint>) -> Self {
        raw.sort_by(|a, b| {
            a.location
                .re
                .partial_cmp(&b.location.re)
                .unwrap_or(core::cmp::Ordering::Equal)
                .then(a.location.im.partial_cmp(&b.location.im).unwrap_or(core::cmp::Ordering::Equal))
        });
        let mut out: Vec<DivisorPoint> = Vec::new();
        for p in raw {
            if let Some(q) = out.iter_mut().find(|q| (q.location - p.location).norm() < MERGE_TOL) {
                q.order += p.order;
                if q.provenance != p.provenance {
                    q.provenance = Provenance::Combined;
                }
            } else {
                out.push(p);
            }
        }
        out.retain(|p| p.order != 0);
        Divisor { points: out }
    }

    pub fn total_order(&self) -> i64 {
        self.points.iter().map(|p| p.order).sum()
    }

    pub fn order_at(&self, z: C64) -> i64 {
        self.points
            .iter()
            .filter(|p| (p.location - z).norm() < MERGE_TOL)
            .map(|p| p.order)
            .sum()
    }
}

/// Closed rectangle in the `p`-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        if !(re_min <= re_max && im_min <= im_max) {
            return Err(input_err!("window bounds are not ordered"));
        }
        Ok(Window { re_min, re_max, im_min, im_max })
    }

    pub fn contains(&self, z: C64) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }
}

/// `χ(M)/χ(X_d)` as an exact rational.
pub fn euler_ratio(space: &SpacePreset, chi_m: i64) -> Q {
    Q::new(chi_m.into(), (space.chi_dual as i64).into())
}

fn class_weight(g: &GeodesicClass, space: &SpacePreset, sigma: &MType) -> Result<f64> {
    Ok(2.0 * g.contribution(space, sigma)? / g.n_gamma as f64)
}

/// `D(p) = Σ_g 2 C(g, σ) e^{−p l(g)} / n_Γ(g)`.
///
/// Powers `g^j` of listed primitive classes that lie beyond `cutoff_L` are
/// known exactly and are added, so the truncation only concerns unlisted
/// primitive classes; the reported tail bound estimates those from the
/// counting bound. `force` allows `Re p ≤ ρ` (no tail bound, no implied
/// powers).
pub fn log_derivative(p: C64, spectrum: &LengthSpectrum, sigma: &MType, force: bool) -> Result<Truncated<C64>> {
    let space = &spectrum.space;
    let rho = to_f64(&space.rho);
    let convergent = p.re > rho;
    if !convergent && !force {
        return Err(input_err!("log derivative needs Re p > rho = {rho}, got {p}"));
    }
    let mut sum = C64::zero();
    let mut terms = 0;
    for g in &spectrum.classes {
        sum += (-p * g.length).exp() * class_weight(g, space, sigma)?;
        terms += 1;
    }
    if !convergent {
        return Ok(Truncated { value: sum, tail_bound: f64::INFINITY, terms });
    }
    for g in spectrum.primitive_classes() {
        let mut j = (spectrum.cutoff_l / g.length).floor().max(1.0) as u32 + 1;
        while g.length * j as f64 <= spectrum.cutoff_l * (1.0 + 1e-12) {
            j += 1;
        }
        loop {
            let gj = g.power(j);
            let term = (-p * gj.length).exp() * class_weight(&gj, space, sigma)?;
            sum += term;
            terms += 1;
            if term.norm() <= 1e-18 * sum.norm().max(1e-300) || j > 100_000 {
                break;
            }
            j += 1;
        }
    }
    let kappa = contribution_kappa(space, sigma, spectrum.cutoff_l.max(spectrum.min_length().unwrap_or(0.0)));
    let tail = 2.0 * spectrum.tail_estimate(p.re, kappa);
    Ok(Truncated { value: sum, tail_bound: tail, terms })
}

/// Eigenvalues of `Ad(ma)_n^{−j}`.
fn inverse_ad_eigenvalues(g: &GeodesicClass, j: u32) -> Vec<C64> {
    let jf = j as f64;
    let mut y: Vec<C64> = g.holonomy.alpha.iter().map(|t| C64::from_polar((-jf * g.length).exp(), -jf * t)).collect();
    y.extend(g.holonomy.two_alpha.iter().map(|t| C64::from_polar((-2.0 * jf * g.length).exp(), -jf * t)));
    y
}

/// `Σ_{k ≤ k_max} h_k(y)`, or `1/∏(1 − y_i)` for `k_max = None`.
fn symmetric_power_sum(y: &[C64], k_max: Option<usize>) -> C64 {
    match k_max {
        None => y.iter().fold(C64::new(1.0, 0.0), |a, v| a / (C64::new(1.0, 0.0) - v)),
        Some(k) => crate::geodesics::complete_homogeneous(y, k).iter().sum(),
    }
}

/// `ln Z_S(s) = Σ_{g primitive} Σ_k ln det(1 − e^{−(s+ρ) l(g)} S^k(Ad(ma)_n^{−1}) ⊗ σ(m))`,
/// expanded as `−Σ_g Σ_j (x^j/j) tr σ(m^j) Σ_k h_k(Ad(ma)_n^{−j})` with
/// `x = e^{−(s+ρ)l(g)}`. `k_max = None` sums all symmetric powers in closed
/// form.
pub fn log_euler_product(s: C64, spectrum: &LengthSpectrum, sigma: &MType, k_max: Option<usize>) -> Result<Truncated<C64>> {
    let space = &spectrum.space;
    let rho = to_f64(&space.rho);
    if s.re <= rho {
        return Err(input_err!("Euler product needs Re s > rho = {rho}, got {s}"));
    }
    let mut sum = C64::zero();
    let mut k_tail = 0.0;
    let mut terms = 0;
    for g in spectrum.primitive_classes() {
        let x = (-(s + rho) * g.length).exp();
        let mut j = 1u32;
        loop {
            let tr = if j == 1 { g.trace_sigma(sigma)? } else { g.power(j).trace_sigma(sigma)? };
            let y = inverse_ad_eigenvalues(g, j);
            let xj = x.powu(j);
            let term = -xj * tr * symmetric_power_sum(&y, k_max) / j as f64;
            sum += term;
            terms += 1;
            if let Some(k) = k_max {
                let ya: Vec<C64> = y.iter().map(|v| C64::new(v.norm(), 0.0)).collect();
                let full = symmetric_power_sum(&ya, None).re;
                let part = symmetric_power_sum(&ya, Some(k)).re;
                k_tail += xj.norm() * tr.abs() * (full - part).max(0.0) / j as f64;
            }
            if term.norm() <= 1e-18 * sum.norm().max(1e-300) || j > 100_000 {
                break;
            }
            j += 1;
        }
    }
    // unlisted primitive classes: |ln Z tail| ≤ (tail of D)/L
    let kappa = contribution_kappa(space, sigma, spectrum.cutoff_l.max(spectrum.min_length().unwrap_or(0.0)));
    let class_tail = if spectrum.cutoff_l > 0.0 {
        2.0 * spectrum.tail_estimate(s.re, kappa) / spectrum.cutoff_l
    } else {
        0.0
    };
    Ok(Truncated { value: sum, tail_bound: k_tail + class_tail, terms })
}

/// `Z_S(s)` from the truncated Euler product, for `Re s > ρ`. The tail bound
/// is on `|Z_S|`.
pub fn euler_product(s: C64, spectrum: &LengthSpectrum, sigma: &MType, k_max: Option<usize>) -> Result<Truncated<C64>> {
    let l = log_euler_product(s, spectrum, sigma, k_max)?;
    let z = l.value.exp();
    Ok(Truncated { value: z, tail_bound: z.norm() * l.tail_bound.exp_m1(), terms: l.terms })
}

/// `Z_S(s)/Z_S(−s) = exp(−(χ(M)/χ(X_d))(2π/T) ∫₀^s p Q(p) {tan | −cot}(πp/T) dp)`.
pub fn functional_equation_rhs(s: C64, sigma: &MType, chi_m: i64) -> Result<C64> {
    let pl = PlancherelIntegral::new(sigma)?;
    let ratio = to_f64(&euler_ratio(&sigma.space, chi_m));
    let tt = to_f64(&sigma.space.period_t);
    Ok((pl.eval(s)? * (-ratio * 2.0 * PI / tt)).exp())
}

/// `D(p) + D(−p) = −(χ(M)/χ(X_d))(2π/T) p Q(p) {tan | −cot}(πp/T)`, the
/// logarithmic derivative of [`functional_equation_rhs`].
pub fn log_derivative_reflection(p: C64, sigma: &MType, chi_m: i64) -> Result<C64> {
    let pl = PlancherelIntegral::new(sigma)?;
    let ratio = to_f64(&euler_ratio(&sigma.space, chi_m));
    let tt = to_f64(&sigma.space.period_t);
    Ok(pl.integrand(p) * (-ratio * 2.0 * PI / tt))
}

/// Divisor of `Z_S` in `window`: order `m(λ)` at `±iλ` (`2m(0)` at `0`) from
/// the spectral data, and `−2(χ(M)/χ(X_d)) P(λ, σ)` at `−λ` for every positive
/// `λ ∈ L(σ)`.
pub fn selberg_divisor(spectral: &SpectralDatum, sigma: &MType, chi_m: i64, window: &Window) -> Result<Divisor> {
    spectral.validate(Some(&sigma.space))?;
    let mut raw = Vec::new();
    for e in &spectral.entries {
        if e.lambda.norm() <= AXIS_TOL {
            raw.push(DivisorPoint { location: C64::zero(), order: 2 * e.mult, provenance: Provenance::Spectral });
        } else {
            let i = C64::new(0.0, 1.0);
            for z in [i * e.lambda, -i * e.lambda] {
                raw.push(DivisorPoint { location: z, order: e.mult, provenance: Provenance::Spectral });
            }
        }
    }
    raw.retain(|p| window.contains(p.location));
    if window.im_min <= 0.0 && window.im_max >= 0.0 {
        raw.extend(topological_points(sigma, chi_m, -window.re_max, -window.re_min)?);
    }
    Ok(Divisor::merged(raw))
}

/// The dual-topological points `−λ` with `lo ≤ λ ≤ hi`.
pub fn topological_points(sigma: &MType, chi_m: i64, lo: f64, hi: f64) -> Result<Vec<DivisorPoint>> {
    let ds = DualSpectrum::new(sigma)?;
    let factor = euler_ratio(&sigma.space, chi_m) * qi(-2);
    let mut out = Vec::new();
    for e in ds.entries(hi) {
        let lf = to_f64(&e.lambda);
        if lf < lo {
            continue;
        }
        let order = &factor * Q::from_integer(e.mult.clone());
        if !order.is_integer() {
            return Err(input_err!(
                "order {order} at p = -{} is not an integer; chi_M = {chi_m} is inconsistent with chi(X_d) = {}",
                e.lambda,
                sigma.space.chi_dual
            ));
        }
        let order = order.to_integer().to_i64().ok_or_else(|| Error::Internal("order overflow".into()))?;
        if order != 0 {
            out.push(DivisorPoint { location: C64::new(-lf, 0.0), order, provenance: Provenance::DualTopological });
        }
    }
    Ok(out)
}

/// Residue of `θ(t, σ)` at `t = ±i l(g)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaResidue {
    pub location: C64,
    pub residue: f64,
}

/// `res_{t = ±i l(g)} θ(t, σ) = C(g, σ)/(π n_Γ(g))`.
pub fn theta_residues(spectrum: &LengthSpectrum, sigma: &MType) -> Result<Vec<ThetaResidue>> {
    let mut out = Vec::new();
    for g in &spectrum.classes {
        let r = g.contribution(&spectrum.space, sigma)? / (PI * g.n_gamma as f64);
        for sgn in [1.0, -1.0] {
            out.push(ThetaResidue { location: C64::new(0.0, sgn * g.length), residue: r });
        }
    }
    Ok(out)
}

/// The three sides of the distributional trace formula for one test function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceResidual {
    /// `Σ m(λ) φ̂(λ)`.
    pub spectral: f64,
    /// `vol(M) ⟨K, φ⟩`.
    pub identity: f64,
    /// `Σ_g C(g, σ)/n_Γ(g) (φ(l) + φ(−l))`.
    pub geometric: f64,
    pub residual: f64,
}

/// `|Σ m(λ) φ̂(λ) − vol(M)⟨K, φ⟩ − Σ C(g)/n_Γ (φ(l) + φ(−l))|`.
///
/// `vol` defaults to `spectrum.vol_m`. With `side = Dual` the identity term
/// uses the compact-dual kernel, for checking a dual surrogate spectrum.
pub fn trace_formula_residual(
    spectrum: &LengthSpectrum,
    spectral: &SpectralDatum,
    phi: &TestFunction,
    sigma: &MType,
    vol: Option<f64>,
    side: Side,
) -> Result<TraceResidual> {
    let vol = vol.or(spectrum.vol_m).ok_or_else(|| input_err!("trace formula residual needs vol_M"))?;
    spectral.validate(None)?;
    let spectral_side: f64 = spectral.entries.iter().map(|e| e.mult as f64 * phi.cosine_transform_c(e.lambda).re).sum();
    let identity = if vol == 0.0 { 0.0 } else { vol * k_pairing(phi, sigma, side)? };
    let mut geometric = 0.0;
    for g in &spectrum.classes {
        let c = g.contribution(&spectrum.space, sigma)?;
        geometric += c / g.n_gamma as f64 * (phi.eval(g.length) + phi.eval(-g.length));
    }
    let residual = (spectral_side - identity - geometric).abs();
    Ok(TraceResidual { spectral: spectral_side, identity, geometric, residual })
}

/// Factors of `Z_S(p) = det(p² + A_M²) · det(A_d² − p²)^{−χ(M)/χ(X_d)} · E(p)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeterminantRhs {
    /// `det(A_d² − p²)^{−χ(M)/χ(X_d)}`.
    pub dual_factor: C64,
    /// `E(p) = exp(−(χ(M)/χ(X_d))(π/T) ∫₀^p s Q(s) {tan | −cot}(πs/T) ds)`.
    pub exp_factor: C64,
    /// `dual_factor · exp_factor`: `Z_S(p)/det(p² + A_M²)`.
    pub value: C64,
}

/// The dual-side part of the determinant representation of `Z_S`.
///
/// The `det(p² + A_M²)` factor needs a regularized determinant of an external
/// spectrum and is not computed; passing spectral data is a capability error.
pub fn selberg_determinant_rhs(p: C64, sigma: &MType, chi_m: i64, spectral: Option<&SpectralDatum>) -> Result<DeterminantRhs> {
    if spectral.is_some() {
        return Err(capability_err!("det(p^2 + A_M^2) from truncated spectral data is not implemented"));
    }
    let ratio = to_f64(&euler_ratio(&sigma.space, chi_m));
    let ld = DualDet::new(sigma)?.log_det_squared(p)?;
    let dual_factor = (ld * -ratio).exp();
    let pl = PlancherelIntegral::new(sigma)?;
    let tt = to_f64(&sigma.space.period_t);
    let exp_factor = (pl.eval(p)? * (-ratio * PI / tt)).exp();
    Ok(DeterminantRhs { dual_factor, exp_factor, value: dual_factor * exp_factor })
}

/// `Σ_i p_i^l ∏_{j≠i} 1/(p_j − p_i)`, which vanishes for `l ≤ N − 2`.
pub fn partial_fraction_moment(ps: &[Q], l: u32) -> Result<Q> {
    let mut total = Q::zero();
    for (i, pi) in ps.iter().enumerate() {
        let mut den = Q::from_integer(1.into());
        for (j, pj) in ps.iter().enumerate() {
            if i != j {
                let d = pj - pi;
                if d.is_zero() {
                    return Err(input_err!("points must be distinct"));
                }
                den *= d;
            }
        }
        let mut pw = Q::from_integer(1.into());
        for _ in 0..l {
            pw *= pi;
        }
        total += pw / den;
    }
    Ok(total)
}

/// Fourth-order central difference of `ln f` at `s`, for consistency checks.
pub fn numerical_log_derivative<F: FnMut(C64) -> Result<C64>>(mut f: F, s: C64, h: f64) -> Result<C64> {
    let mut lf = |z: C64| -> Result<C64> { Ok(f(z)?.ln()) };
    let h = C64::new(h, 0.0);
    let v = [lf(s - h * 2.0)?, lf(s - h)?, lf(s + h)?, lf(s + h * 2.0)?];
    Ok((v[0] - v[1] * 8.0 + v[2] * 8.0 - v[3]) / (h * 12.0))
}
