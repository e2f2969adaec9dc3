//! Divisor catalogs of the example families: differential forms on real and
//! complex hyperbolic manifolds, the Dirac operator, and one-forms on
//! quaternionic hyperbolic manifolds.
//!
//! Each divisor is assembled from the general machinery: harmonic and
//! user-supplied eigenvalue data on the spectral side, and the dual lattice
//! `−2(χ(M)/χ(X_d)) P(λ, σ)` on the topological side.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{ToPrimitive, Zero};

use crate::error::{capability_err, input_err, Result};
use crate::mtype::MType;
use crate::rational::{binomial, Q};
use crate::space::{Family, SpacePreset};
use crate::zeta::{euler_ratio, topological_points, Divisor, DivisorPoint, Provenance, Window};
use crate::C64;

/// Relative tolerance for matching an eigenvalue to a special value.
pub const EIGEN_TOL: f64 = 1e-9;

/// Betti numbers `b_0, …, b_dim` and `χ(M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopologyInput {
    pub betti: Vec<u64>,
    pub chi_m: i64,
}

impl TopologyInput {
    /// Checks `Σ(−1)^i b_i = χ(M)`, Poincaré duality `b_i = b_{dim−i}` and
    /// the length `dim + 1`.
    pub fn new(betti: Vec<u64>, chi_m: i64, dim: u32) -> Result<Self> {
        if betti.len() != dim as usize + 1 {
            return Err(input_err!("expected {} Betti numbers, got {}", dim + 1, betti.len()));
        }
        let alt: i64 = betti.iter().enumerate().map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
        if alt != chi_m {
            return Err(input_err!("alternating Betti sum {alt} differs from chi_M = {chi_m}"));
        }
        if (0..betti.len()).any(|i| betti[i] != betti[betti.len() - 1 - i]) {
            return Err(input_err!("Betti numbers violate Poincaré duality"));
        }
        Ok(TopologyInput { betti, chi_m })
    }

    /// `Σ_{l=0}^{p} (−1)^{l−p} b_l`.
    pub fn alternating_to(&self, p: usize) -> i64 {
        (0..=p).map(|l| if (p - l).is_multiple_of(2) { self.betti[l] as i64 } else { -(self.betti[l] as i64) }).sum()
    }
}

/// A Laplace-type eigenvalue with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigen {
    pub value: f64,
    pub mult: u64,
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= EIGEN_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Zeros at `±iλ` with `λ² = μ − c²` for each co-closed eigenvalue `μ`:
/// imaginary axis for `μ > c²`, the real segment `(−c, c)` for `0 < μ < c²`,
/// and a double zero at `0` for `μ = c²`.
fn laplace_points(eigen: &[Eigen], c: f64, out: &mut Vec<DivisorPoint>) -> Result<()> {
    for e in eigen {
        if !(e.value.is_finite() && e.value > 0.0) || near(e.value, 0.0) {
            return Err(input_err!("eigenvalue {} must be positive; harmonic forms enter through Betti/Hodge data", e.value));
        }
        let m = e.mult as i64;
        let d = e.value - c * c;
        if near(e.value, c * c) {
            out.push(spectral(C64::zero(), 2 * m));
        } else if d > 0.0 {
            let l = d.sqrt();
            out.push(spectral(C64::new(0.0, l), m));
            out.push(spectral(C64::new(0.0, -l), m));
        } else {
            let l = (-d).sqrt();
            out.push(spectral(C64::new(l, 0.0), m));
            out.push(spectral(C64::new(-l, 0.0), m));
        }
    }
    Ok(())
}

fn spectral(location: C64, order: i64) -> DivisorPoint {
    DivisorPoint { location, order, provenance: Provenance::Spectral }
}

/// Harmonic data of multiplicity `m` at `λ = ic`: points `±c`.
fn harmonic(c: f64, m: i64, out: &mut Vec<DivisorPoint>) {
    out.push(spectral(C64::new(c, 0.0), m));
    out.push(spectral(C64::new(-c, 0.0), m));
}

/// `χ(M)/χ(X_d) ∈ ℤ`.
fn check_euler(space: &SpacePreset, chi_m: i64) -> Result<()> {
    if !euler_ratio(space, chi_m).is_integer() {
        return Err(input_err!(
            "chi_M = {chi_m} is not a multiple of chi(X_d) = {} as required for a compact quotient",
            space.chi_dual
        ));
    }
    Ok(())
}

fn assemble(mut raw: Vec<DivisorPoint>, sigma: &MType, chi_m: i64, window: &Window) -> Result<Divisor> {
    raw.retain(|p| window.contains(p.location));
    if window.im_min <= 0.0 && window.im_max >= 0.0 {
        raw.extend(topological_points(sigma, chi_m, -window.re_max, -window.re_min)?);
    }
    Ok(Divisor::merged(raw))
}

fn require(space: &SpacePreset, family: Family) -> Result<()> {
    if space.family != family {
        return Err(capability_err!("{} is not a {:?} space", space.code(), family));
    }
    Ok(())
}

/// `Z_S(s, σ^p)` on a real hyperbolic manifold, `p < dim/2`: co-closed
/// `p`-form eigenvalues give zeros at `±i√(μ − c²)`, harmonic forms give
/// `Σ_{l≤p} (−1)^{l−p} b_l` at `±c`, `c = (dim−1−2p)/2`, and the sphere
/// contributes on the negative axis.
pub fn forms_divisor_real(space: &SpacePreset, p: u32, topo: &TopologyInput, eigen: &[Eigen], window: &Window) -> Result<Divisor> {
    require(space, Family::RealH)?;
    if p >= space.dim_real / 2 {
        return Err(input_err!("p = {p} must be below dim/2 = {}", space.dim_real / 2));
    }
    let topo = TopologyInput::new(topo.betti.clone(), topo.chi_m, space.dim_real)?;
    check_euler(space, topo.chi_m)?;
    let sigma = if p == 0 { MType::trivial(space) } else { MType::forms(space, p)? };
    let c = (space.dim_real as f64 - 1.0 - 2.0 * p as f64) / 2.0;
    let mut raw = Vec::new();
    laplace_points(eigen, c, &mut raw)?;
    harmonic(c, topo.alternating_to(p as usize), &mut raw);
    assemble(raw, &sigma, topo.chi_m, window)
}

/// One topological order of the Dirac divisor next to the closed form
/// `−χ(M) binom(n−1−j, j) 2^{n/2−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiracOrderCheck {
    pub j: u32,
    pub computed: i64,
    pub binomial_form: i64,
}

#[derive(Clone, Debug)]
pub struct DiracDivisor {
    pub divisor: Divisor,
    /// Orders at `−(n/2 + j)` inside the window, with the binomial closed form.
    pub checks: Vec<DiracOrderCheck>,
}

impl DiracDivisor {
    pub fn discrepancies(&self) -> impl Iterator<Item = &DiracOrderCheck> {
        self.checks.iter().filter(|c| c.computed != c.binomial_form)
    }
}

/// `Z_S(p, S^{n−1})` on an even-dimensional hyperbolic spin manifold: zeros at
/// `iλ` for Dirac eigenvalues `λ`, and `−χ(M) P(λ, S^{n−1})` at `−λ`.
pub fn dirac_divisor(space: &SpacePreset, chi_m: i64, dirac_eigen: &[Eigen], window: &Window) -> Result<DiracDivisor> {
    require(space, Family::RealH)?;
    check_euler(space, chi_m)?;
    let sigma = MType::spinor(space)?;
    let mut raw = Vec::new();
    for e in dirac_eigen {
        if !e.value.is_finite() {
            return Err(input_err!("non-finite Dirac eigenvalue"));
        }
        raw.push(spectral(C64::new(0.0, e.value), e.mult as i64));
    }
    let divisor = assemble(raw, &sigma, chi_m, window)?;
    let n = space.dim_real;
    let half = n / 2;
    let mut checks = Vec::new();
    let mut j = 0u32;
    loop {
        let x = -((half + j) as f64);
        if x < window.re_min {
            break;
        }
        if x <= window.re_max && window.im_min <= 0.0 && window.im_max >= 0.0 {
            let b = if n > 2 * j { binomial(n - 1 - j, j).to_i64().unwrap_or(i64::MAX) } else { 0 };
            checks.push(DiracOrderCheck {
                j,
                computed: divisor.order_at(C64::new(x, 0.0)),
                binomial_form: -chi_m * b * (1i64 << (half - 1)),
            });
        }
        j += 1;
    }
    Ok(DiracDivisor { divisor, checks })
}

/// Primitive Hodge numbers `h_∘^{r,s}` for `r + s ≤ n − 1`, stored as
/// `h[r][s]`; missing entries are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrimitiveHodge {
    pub h: Vec<Vec<u64>>,
}

impl PrimitiveHodge {
    pub fn get(&self, r: i64, s: i64) -> i64 {
        if r < 0 || s < 0 {
            return 0;
        }
        self.h.get(r as usize).and_then(|row| row.get(s as usize)).map_or(0, |&v| v as i64)
    }

    /// `Σ_{r,s ≥ 0} (−1)^{r+s} h_∘^{p−r, q−s}`.
    pub fn alternating(&self, p: u32, q: u32) -> i64 {
        let mut sum = 0;
        for r in 0..=p as i64 {
            for s in 0..=q as i64 {
                let sign = if (r + s) % 2 == 0 { 1 } else { -1 };
                sum += sign * self.get(p as i64 - r, q as i64 - s);
            }
        }
        sum
    }
}

/// `Z_S(z, Λ_M^{p,q})` on a complex hyperbolic manifold, `p + q ≤ n − 1`:
/// co-closed primitive eigenvalues at `±i√(μ − c²)`, primitive harmonic
/// forms `Σ(−1)^{r+s} h_∘^{p−r,q−s}` at `±c`, `c = n − p − q`, and the dual
/// `P𝐂^n` on the negative axis. Requires `(n+1) | χ(M)`.
pub fn forms_divisor_complex(
    space: &SpacePreset,
    p: u32,
    q: u32,
    hodge: &PrimitiveHodge,
    chi_m: i64,
    eigen: &[Eigen],
    window: &Window,
) -> Result<Divisor> {
    require(space, Family::ComplexH)?;
    let n = space.rank_param;
    if p + q > n - 1 {
        return Err(input_err!("p + q = {} must be at most n - 1 = {}", p + q, n - 1));
    }
    check_euler(space, chi_m)?;
    let sigma = if p + q == 0 { MType::trivial(space) } else { MType::complex_pq(space, p, q)? };
    let c = (n - p - q) as f64;
    let mut raw = Vec::new();
    laplace_points(eigen, c, &mut raw)?;
    harmonic(c, hodge.alternating(p, q), &mut raw);
    assemble(raw, &sigma, chi_m, window)
}

/// Spectral input for `σ¹` on `H𝐇^n`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct QuaternionicEigen {
    /// Eigenvalues of `Δ_1` on co-closed one-forms with `Bα = 0`, excluding
    /// `16(n−1)`.
    pub one_forms: Vec<Eigen>,
    /// `dim{Δ_1 α = 16(n−1) α, δα = 0}`.
    pub special_one_forms: u64,
    /// `dim{ω ∈ V(λ′) : Δ_2 ω = 16(n−1) ω}`.
    pub special_kaehler: u64,
}

/// `Z_S(p, σ¹)` on a quaternionic hyperbolic manifold, `n ≥ 2`, with
/// `b_1(M) = 0`: spectral zeros at `±i√(μ − 4n²)`, the exceptional pair
/// `±(2n−4)`, harmonic data `b_0 − b_1 = 1` at `±2n` (a pole at `2n`), and
/// the dual `P𝐇^n` on the negative axis.
pub fn quaternionic_sigma1_divisor(space: &SpacePreset, chi_m: i64, eigen: &QuaternionicEigen, window: &Window) -> Result<Divisor> {
    require(space, Family::QuaternionicH)?;
    check_euler(space, chi_m)?;
    let n = space.rank_param as f64;
    let sigma = MType::quat_sigma1(space)?;
    let special = 16.0 * (n - 1.0);
    if let Some(e) = eigen.one_forms.iter().find(|e| near(e.value, special)) {
        return Err(input_err!("eigenvalue {} = 16(n-1) belongs in the special counts", e.value));
    }
    let mut raw = Vec::new();
    laplace_points(&eigen.one_forms, 2.0 * n, &mut raw)?;
    let m = eigen.special_one_forms as i64 - eigen.special_kaehler as i64;
    harmonic(2.0 * n - 4.0, m, &mut raw);
    // b_1(M) = 0, so the harmonic part is −b_0 = −1 at ±2n
    harmonic(2.0 * n, -1, &mut raw);
    assemble(raw, &sigma, chi_m, window)
}

/// `P(λ, σ)` at a lattice point, for catalog cross-checks.
pub fn weyl_value(sigma: &MType, lambda: &Q) -> Result<Q> {
    Ok(sigma.weyl_polynomial()?.p.eval(lambda))
}
