//! The Ruelle zeta function `Z_R(s) = ∏_g (1 − e^{−s l(g)})^{−1}` and its
//! factorization `Z_R(s) = ∏_p S(s,p)^{(−1)^p}` into shifted Selberg zeta
//! functions through the decompositions `Λ^p n^c = ⊕_{I_p} V_σ ⊗ ℂ_χ`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Zero};

use crate::dual::{PlancherelIntegral, Truncated};
use crate::error::{capability_err, input_err, tolerance_err, Result};
use crate::geodesics::LengthSpectrum;
use crate::mtype::MType;
use crate::poly::Poly;
use crate::rational::{binomial, qi, to_f64, Q};
use crate::space::{Family, SpacePreset};
use crate::zeta::log_euler_product;
use crate::C64;

/// One summand `V_σ ⊗ ℂ_χ` of `Λ^p n^c`, `χ` in units of `α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IpEntry {
    pub sigma: MType,
    pub chi: Q,
    pub mult: u32,
}

/// `I_p` for `p = 0, …, dim n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IpTable {
    pub space: SpacePreset,
    pub rows: Vec<Vec<IpEntry>>,
}

fn push(row: &mut Vec<IpEntry>, sigma: MType, chi: Q) {
    match row.iter_mut().find(|e| e.sigma == sigma && e.chi == chi) {
        Some(e) => e.mult += 1,
        None => row.push(IpEntry { sigma, chi, mult: 1 }),
    }
}

fn real_forms(space: &SpacePreset, p: u32) -> Result<MType> {
    let dn = space.dim_n();
    let k = if p < space.rank_param { p } else { dn - p };
    if k == 0 {
        Ok(MType::trivial(space))
    } else {
        MType::forms(space, k)
    }
}

/// `Λ^{a,b}` of `ℂ^{n−1}` as a sum of primitive pieces `Λ_0^{a−j,b−j}`,
/// using `Λ^{a,b} ≅ Λ^{n−1−b,n−1−a}` above the middle degree.
fn complex_lambda(space: &SpacePreset, a: u32, b: u32) -> Result<Vec<MType>> {
    let top = space.rank_param - 1;
    if a > top || b > top {
        return Ok(Vec::new());
    }
    let (a, b) = if a + b > top { (top - b, top - a) } else { (a, b) };
    (0..=a.min(b))
        .map(|j| {
            if a == j && b == j {
                Ok(MType::trivial(space))
            } else {
                MType::complex_pq(space, a - j, b - j)
            }
        })
        .collect()
}

/// `I_p` for a single degree. Real and complex hyperbolic spaces support
/// every `p ≤ dim n`; the quaternionic and Cayley families only `p ≤ 1`.
pub fn ip_row(space: &SpacePreset, p: u32) -> Result<Vec<IpEntry>> {
    let dn = space.dim_n();
    if p > dn {
        return Err(input_err!("p = {p} exceeds dim n = {dn}"));
    }
    let mut row = Vec::new();
    if p == 0 {
        push(&mut row, MType::trivial(space), Q::zero());
        return Ok(row);
    }
    match space.family {
        Family::RealH => push(&mut row, real_forms(space, p)?, qi(p as i64)),
        Family::ComplexH => {
            // Λ^k(n)^c = Λ^k(V^c) ⊗ ℂ_k ⊕ Λ^{k−1}(V^c) ⊗ ℂ_{k+1}
            for (deg, chi) in [(p, p), (p - 1, p + 1)] {
                for a in 0..=deg {
                    for sigma in complex_lambda(space, a, deg - a)? {
                        push(&mut row, sigma, qi(chi as i64));
                    }
                }
            }
        }
        Family::QuaternionicH if p == 1 => {
            push(&mut row, MType::quat_sigma1(space)?, Q::one());
            push(&mut row, MType::quat_sigma_prime(space)?, qi(2));
        }
        Family::CayleyH if p == 1 => {
            push(&mut row, MType::spinor(space)?, Q::one());
            push(&mut row, MType::forms(space, 1)?, qi(2));
        }
        _ => {
            return Err(capability_err!(
                "I_p for p = {p} is only available for p <= 1 on {}",
                space.code()
            ))
        }
    }
    Ok(row)
}

/// The full table `I_0, …, I_{dim n}` (real and complex hyperbolic spaces).
pub fn ip_decomposition(space: &SpacePreset) -> Result<IpTable> {
    if !matches!(space.family, Family::RealH | Family::ComplexH) {
        return Err(capability_err!("the full I_p table is only available for real and complex hyperbolic spaces"));
    }
    let rows = (0..=space.dim_n()).map(|p| ip_row(space, p)).collect::<Result<_>>()?;
    Ok(IpTable { space: space.clone(), rows })
}

impl IpTable {
    /// `dim Λ^p n^c` recomputed from the entries.
    pub fn row_dimension(&self, p: usize) -> Q {
        self.rows[p].iter().map(|e| e.sigma.dimension() * qi(e.mult as i64)).sum()
    }

    /// Checks dimensions, the alternating sum, Poincaré duality and lattice
    /// compatibility `Tε(σ) + χ + ρ ∈ Tℤ`.
    pub fn check_invariants(&self) -> Result<()> {
        let space = &self.space;
        let dn = space.dim_n();
        if self.rows.len() != dn as usize + 1 {
            return Err(input_err!("expected {} rows, found {}", dn + 1, self.rows.len()));
        }
        let mut alternating = Q::zero();
        for (p, row) in self.rows.iter().enumerate() {
            let dim = self.row_dimension(p);
            let expect = Q::from(binomial(dn, p as u32));
            if dim != expect {
                return Err(input_err!("dim I_{p} = {dim}, expected {expect}"));
            }
            alternating += if p % 2 == 0 { dim } else { -dim };
            for e in row {
                let lat = e.sigma.lattice()?;
                let x = (&lat.t * &lat.eps + &e.chi + &space.rho) / &space.period_t;
                if !x.is_integer() {
                    return Err(input_err!("I_{p}: {} with chi = {} is off the lattice", e.sigma.name(), e.chi));
                }
            }
            let dual = &self.rows[dn as usize - p];
            let two_rho = &space.rho * qi(2);
            let mirrored = row.len() == dual.len()
                && row.iter().all(|e| {
                    dual.iter().any(|d| d.sigma == e.sigma && d.mult == e.mult && d.chi == &two_rho - &e.chi)
                });
            if !mirrored {
                return Err(input_err!("I_{p} and I_{} are not Poincaré dual", dn as usize - p));
            }
        }
        if !alternating.is_zero() {
            return Err(input_err!("alternating dimension sum is {alternating}"));
        }
        Ok(())
    }
}

/// `H(s) = Σ_{p<n/2} (−1)^p Σ_{I_p} (P(s+ρ−χ, σ) − P(s−ρ+χ, σ))` as an exact
/// polynomial in `s`; it is the constant `(n/2) χ(X_d)`.
pub fn h_polynomial(space: &SpacePreset) -> Result<Poly> {
    let table = ip_decomposition(space)?;
    let mut h = Poly::zero();
    for p in 0..(space.dim_real / 2) as usize {
        for e in &table.rows[p] {
            let pp = e.sigma.weyl_polynomial()?.p;
            let a = &space.rho - &e.chi;
            let diff = &pp.shift(&a) - &pp.shift(&-a);
            let term = diff.scale(&qi(e.mult as i64));
            h = if p % 2 == 0 { &h + &term } else { &h - &term };
        }
    }
    Ok(h)
}

/// Memo of `ln Z_S(z, σ)` keyed on the σ label and `z` rounded to `1e−15`.
/// Entries are pure functions of the key, so concurrent writers may only
/// ever insert identical values.
#[derive(Clone, Debug, Default)]
pub struct SelbergMemo {
    map: BTreeMap<(String, i64, i64), (C64, f64)>,
    pub hits: usize,
}

impl SelbergMemo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    fn log_selberg(&mut self, z: C64, spectrum: &LengthSpectrum, sigma: &MType) -> Result<(C64, f64)> {
        let key = (sigma.name(), (z.re * 1e15).round() as i64, (z.im * 1e15).round() as i64);
        if let Some(v) = self.map.get(&key) {
            self.hits += 1;
            return Ok(*v);
        }
        let t = log_euler_product(z, spectrum, sigma, None)?;
        let v = (t.value, t.tail_bound);
        self.map.insert(key, v);
        Ok(v)
    }
}

/// `Z_R(s)` from the direct product and, where `I_p` is known, from the
/// Selberg factorization.
#[derive(Clone, Debug)]
pub struct RuelleValue {
    pub direct: Truncated<C64>,
    pub factorized: Option<Truncated<C64>>,
    /// `|direct − factorized|`.
    pub discrepancy: Option<f64>,
}

impl RuelleValue {
    pub fn value(&self) -> C64 {
        self.direct.value
    }
}

/// Relative tolerance of the direct/factorized cross-check.
pub const CROSS_CHECK_TOL: f64 = 1e-9;

/// `ln Z_R(s) = −Σ_{g primitive} ln(1 − e^{−s l(g)})`, `Re s > 2ρ`.
pub fn log_ruelle_direct(s: C64, spectrum: &LengthSpectrum) -> Result<Truncated<C64>> {
    let rho2 = 2.0 * to_f64(&spectrum.space.rho);
    if s.re <= rho2 {
        return Err(input_err!("the Ruelle product needs Re s > 2 rho = {rho2}, got {s}"));
    }
    let mut sum = C64::zero();
    let mut terms = 0;
    for g in spectrum.primitive_classes() {
        sum -= (C64::new(1.0, 0.0) - (-s * g.length).exp()).ln();
        terms += 1;
    }
    // unlisted classes: Σ_{l>L} |ln(1 − e^{−sl})| ≲ ∫_L^∞ 2e^{−σl} d(A e^{2ρl})
    let a = spectrum.counting_constant();
    let tail = if spectrum.cutoff_l > 0.0 && a > 0.0 {
        let beta = s.re - rho2;
        2.0 * rho2 * a * (-beta * spectrum.cutoff_l).exp() / beta
    } else {
        0.0
    };
    Ok(Truncated { value: sum, tail_bound: tail, terms })
}

/// `ln Z_R(s) = Σ_p (−1)^p Σ_{I_p} ln Z_S(s + ρ − χ, σ)`.
pub fn log_ruelle_factorized(s: C64, spectrum: &LengthSpectrum, memo: &mut SelbergMemo) -> Result<Truncated<C64>> {
    let space = &spectrum.space;
    let rho = &space.rho;
    let rho2 = 2.0 * to_f64(rho);
    if s.re <= rho2 {
        return Err(input_err!("the Selberg factorization needs Re s > 2 rho = {rho2}, got {s}"));
    }
    let table = ip_decomposition(space)?;
    let mut sum = C64::zero();
    let mut tail = 0.0;
    let mut terms = 0;
    for (p, row) in table.rows.iter().enumerate() {
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        for e in row {
            let z = s + to_f64(&(rho - &e.chi));
            let (v, t) = memo.log_selberg(z, spectrum, &e.sigma)?;
            sum += v * (sign * e.mult as f64);
            tail += t * e.mult as f64;
            terms += 1;
        }
    }
    Ok(Truncated { value: sum, tail_bound: tail, terms })
}

fn exp_truncated(t: Truncated<C64>) -> Truncated<C64> {
    let z = t.value.exp();
    Truncated { value: z, tail_bound: z.norm() * t.tail_bound.exp_m1(), terms: t.terms }
}

/// `Z_R(s)` for `Re s > 2ρ`. Real and complex hyperbolic spectra are also
/// evaluated through the Selberg factorization and must agree with the
/// direct product to [`CROSS_CHECK_TOL`] (plus the reported tails).
pub fn ruelle_eval(s: C64, spectrum: &LengthSpectrum, memo: &mut SelbergMemo) -> Result<RuelleValue> {
    let direct = exp_truncated(log_ruelle_direct(s, spectrum)?);
    let factorized = match spectrum.space.family {
        Family::RealH | Family::ComplexH => Some(exp_truncated(log_ruelle_factorized(s, spectrum, memo)?)),
        _ => None,
    };
    let discrepancy = factorized.map(|f| (f.value - direct.value).norm());
    if let (Some(d), Some(f)) = (discrepancy, factorized) {
        let allowed = CROSS_CHECK_TOL * direct.value.norm().max(1.0) + direct.tail_bound + f.tail_bound;
        if d > allowed {
            return Err(tolerance_err!("direct and factorized Ruelle products differ by {d:e}"));
        }
    }
    Ok(RuelleValue { direct, factorized, discrepancy })
}

/// Both sides of `ln Z_R(s) + ln Z_R(−s) = n χ(M) ln sin(πs/T)`: the integral
/// `Σ_p (−1)^p Σ_{I_p} ∫_{s−(ρ−χ)}^{s+(ρ−χ)} P(r,σ) {tan | −cot}(πr/T) dr`
/// and the closed form `C − (Tn/2π) χ(X_d) ln sin(πs/T)` taken with `C = 0`.
#[derive(Clone, Copy, Debug)]
pub struct RuelleFunctionalCheck {
    /// The integral side.
    pub lhs: C64,
    /// `−(Tn/2π) χ(X_d) ln sin(πs/T)`, principal branch.
    pub rhs: C64,
    /// `−(2π/T)(χ(M)/χ(X_d))·lhs`.
    pub lhs_exponent: C64,
    /// `n χ(M) ln sin(πs/T)`.
    pub rhs_exponent: C64,
    /// `k` with `Im(lhs − rhs) ≈ T k`: the logarithm branch and the half
    /// residues picked up by contour lifts.
    pub branch: i64,
    /// The constant `C = Re(lhs − rhs)`.
    pub offset: f64,
    /// `|lhs − rhs − i T k|`, i.e. the distance from `C = 0`.
    pub residual: f64,
}

/// The value of `C` forced by `sin(iy) = i e^{y}(1 − e^{−2y})/2`:
/// `−(Tn/2π) χ(X_d) ln 2`.
pub fn ruelle_offset(space: &SpacePreset) -> f64 {
    let tt = to_f64(&space.period_t);
    -tt * space.dim_real as f64 * space.chi_dual as f64 * core::f64::consts::LN_2 / (2.0 * PI)
}

pub fn ruelle_functional_check(s: C64, space: &SpacePreset, chi_m: i64) -> Result<RuelleFunctionalCheck> {
    let tt = to_f64(&space.period_t);
    let n = space.dim_real as f64;
    let chi_d = space.chi_dual as f64;
    let x = s * (PI / tt);
    if x.sin().norm() < 1e-12 {
        return Err(input_err!("s = {s} lies on the lattice T·Z"));
    }
    let table = ip_decomposition(space)?;
    let mut lhs = C64::zero();
    for p in 0..(space.dim_real / 2) as usize {
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        for e in &table.rows[p] {
            let a = to_f64(&(&space.rho - &e.chi));
            if a == 0.0 {
                continue;
            }
            let pl = PlancherelIntegral::new(&e.sigma)?;
            lhs += pl.integrate_between(s - a, s + a)? * (sign * e.mult as f64);
        }
    }
    let ln_sin = x.sin().ln();
    let rhs = ln_sin * (-tt * n * chi_d / (2.0 * PI));
    let diff = lhs - rhs;
    let branch = (diff.im / tt).round();
    let residual = (diff - C64::new(0.0, branch * tt)).norm();
    Ok(RuelleFunctionalCheck {
        lhs,
        rhs,
        lhs_exponent: lhs * (-(2.0 * PI / tt) * chi_m as f64 / chi_d),
        rhs_exponent: ln_sin * (n * chi_m as f64),
        branch: branch as i64,
        offset: diff.re,
        residual,
    })
}

/// Order of `Z_R` at `s = 0`: `(dim/2) χ(M)`.
pub fn ruelle_order_at_zero(space: &SpacePreset, chi_m: i64) -> i64 {
    (space.dim_real as i64 / 2) * chi_m
}
