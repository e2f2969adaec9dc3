//! M-types and the constants attached to them: the shift constant `c(σ)`, the
//! dual lattice `L(σ) = T(ℤ + ε(σ))`, and the Weyl polynomial `P(λ, σ)`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{capability_err, input_err, Error, Result};
use crate::poly::Poly;
use crate::rational::{format_q, frac, half, q, Q};
use crate::space::{Family, RootKind, SpacePreset};

/// An irreducible representation of `M`, given by its highest weight on the
/// Cartan subalgebra of `m` together with `ε_α(σ) ∈ {0, 1/2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MType {
    pub space: SpacePreset,
    pub mu: Vec<Q>,
    pub eps_alpha: Q,
    pub label: Option<String>,
}

/// `P(λ, σ)` and `Q(λ, σ) = P/λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylPolynomial {
    pub p: Poly,
    pub q: Poly,
}

/// The lattice `T(ℤ + eps)` and the dominance bound `Φ(σ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSpec {
    pub t: Q,
    pub eps: Q,
    pub lower_bound: Q,
}

impl LatticeSpec {
    /// Smallest positive lattice point `T·ε'`, `ε' ∈ {1/2, 1}`.
    pub fn first_positive(&self) -> Q {
        if self.eps.is_zero() {
            self.t.clone()
        } else {
            &self.t * &self.eps
        }
    }

    /// `ε'`: the offset of the first positive point in units of `T`.
    pub fn offset(&self) -> Q {
        if self.eps.is_zero() {
            Q::one()
        } else {
            self.eps.clone()
        }
    }

    /// The `k`-th positive lattice point, `k = 0, 1, …`.
    pub fn point(&self, k: u64) -> Q {
        &self.t * (self.offset() + Q::from_integer(k.into()))
    }

    pub fn contains(&self, x: &Q) -> bool {
        frac(&(x / &self.t)) == self.eps
    }
}

impl MType {
    /// Validated constructor for an explicit highest weight.
    pub fn new(space: &SpacePreset, mu: Vec<Q>, eps_alpha: Q, label: Option<String>) -> Result<Self> {
        if mu.len() != space.coord_dim() {
            return Err(input_err!(
                "mu_sigma has {} entries, {} expects {}",
                mu.len(),
                space.code(),
                space.coord_dim()
            ));
        }
        if !(eps_alpha.is_zero() || eps_alpha == half()) {
            return Err(input_err!("eps_alpha must be 0 or 1/2"));
        }
        if space.sum_zero_chart() && !mu.iter().fold(Q::zero(), |a, b| a + b).is_zero() {
            return Err(input_err!("mu_sigma must have coordinate sum zero for {}", space.code()));
        }
        if !space.e_hat.iter().zip(&mu).fold(Q::zero(), |a, (e, m)| a + e * m).is_zero() {
            return Err(input_err!("mu_sigma must be orthogonal to a"));
        }
        let s = MType { space: space.clone(), mu, eps_alpha, label };
        if !s.is_dominant() {
            return Err(input_err!("mu_sigma is not dominant for m"));
        }
        Ok(s)
    }

    pub fn trivial(space: &SpacePreset) -> Self {
        MType {
            space: space.clone(),
            mu: vec![Q::zero(); space.coord_dim()],
            eps_alpha: Q::zero(),
            label: Some("trivial".into()),
        }
    }

    /// `σ^p = Λ^p ℝ^{2m−1}` (real family), or `Λ^p ℝ^7` for `p ∈ {1,2}` on the
    /// Cayley plane.
    pub fn forms(space: &SpacePreset, p: u32) -> Result<Self> {
        let d = space.coord_dim();
        match space.family {
            Family::RealH => {
                if p >= space.rank_param {
                    return Err(input_err!("forms need p < dim/2"));
                }
                let mut mu = vec![Q::zero(); d];
                for x in mu.iter_mut().skip(1).take(p as usize) {
                    *x = Q::one();
                }
                MType::new(space, mu, Q::zero(), Some(alloc::format!("forms:p={p}")))
            }
            Family::CayleyH if p == 1 || p == 2 => {
                let mut mu = vec![Q::zero(); 4];
                for x in mu.iter_mut().skip(1).take(p as usize) {
                    *x = Q::one();
                }
                MType::new(space, mu, Q::zero(), Some(alloc::format!("forms:p={p}")))
            }
            _ => Err(capability_err!("forms:p={p} is not in the {} catalog", space.code())),
        }
    }

    /// Spinor of `Spin(2m−1)` (real family) or of `Spin(7)` (Cayley plane).
    pub fn spinor(space: &SpacePreset) -> Result<Self> {
        let d = space.coord_dim();
        match space.family {
            Family::RealH => {
                let mut mu = vec![half(); d];
                mu[0] = Q::zero();
                MType::new(space, mu, half(), Some("dirac".into()))
            }
            Family::CayleyH => MType::new(
                space,
                vec![Q::zero(), half(), half(), half()],
                half(),
                Some("spin7".into()),
            ),
            _ => Err(capability_err!("no spinor M-type in the {} catalog", space.code())),
        }
    }

    /// Primitive forms `Λ_M^{p,q}` on `H𝐂^n`, `p + q ≤ n − 1`.
    pub fn complex_pq(space: &SpacePreset, p: u32, qq: u32) -> Result<Self> {
        if space.family != Family::ComplexH {
            return Err(capability_err!("pq:{p},{qq} needs a complex hyperbolic space"));
        }
        let n = space.rank_param;
        if p + qq > n - 1 {
            return Err(input_err!("pq needs p+q <= n-1"));
        }
        let d = space.coord_dim();
        let mut mu = vec![Q::zero(); d];
        let head = q(qq as i64 - p as i64, 2);
        mu[0] = head.clone();
        mu[1] = head;
        for i in 0..p as usize {
            mu[2 + i] = Q::one();
        }
        for i in 0..qq as usize {
            mu[d - 1 - i] = -Q::one();
        }
        let eps = if (p + qq) % 2 == 1 { half() } else { Q::zero() };
        MType::new(space, mu, eps, Some(alloc::format!("pq:{p},{qq}")))
    }

    /// The square root `k/2` of the canonical bundle on `H𝐂^n`, `n` odd.
    pub fn complex_half_canonical(space: &SpacePreset) -> Result<Self> {
        if space.family != Family::ComplexH || space.rank_param.is_multiple_of(2) {
            return Err(capability_err!("k/2 needs H C^n with n odd"));
        }
        let n = space.rank_param as i64;
        let d = space.coord_dim();
        let mut mu = vec![q(-1, 2); d];
        mu[0] = q(n - 1, 4);
        mu[1] = q(n - 1, 4);
        // integrality of (λ−ρ)/T·T·ê + μ fixes ε_α = frac((n+1)/4)
        let eps = frac(&q(n + 1, 4));
        MType::new(space, mu, eps, Some("k/2".into()))
    }

    /// `σ¹` on `H𝐇^n`: the isotropy representation of `M` on `n_α`.
    pub fn quat_sigma1(space: &SpacePreset) -> Result<Self> {
        if space.family != Family::QuaternionicH {
            return Err(capability_err!("sigma1 needs a quaternionic hyperbolic space"));
        }
        let mut mu = vec![Q::zero(); space.coord_dim()];
        mu[0] = half();
        mu[1] = -half();
        mu[2] = Q::one();
        MType::new(space, mu, half(), Some("sigma1".into()))
    }

    /// `σ′` on `H𝐇^n`: the representation of `M` on `n_{2α}`.
    pub fn quat_sigma_prime(space: &SpacePreset) -> Result<Self> {
        if space.family != Family::QuaternionicH {
            return Err(capability_err!("sigma' needs a quaternionic hyperbolic space"));
        }
        let mut mu = vec![Q::zero(); space.coord_dim()];
        mu[0] = Q::one();
        mu[1] = -Q::one();
        MType::new(space, mu, Q::zero(), Some("sigma'".into()))
    }

    /// Catalog lookup by CLI label: `trivial`, `forms:p=K`, `dirac`, `spin7`,
    /// `pq:P,Q`, `k/2`, `sigma1`, `sigma'`.
    pub fn from_label(space: &SpacePreset, label: &str) -> Result<Self> {
        let l = label.trim();
        if l == "trivial" {
            return Ok(MType::trivial(space));
        }
        if let Some(rest) = l.strip_prefix("forms:p=") {
            let p: u32 = rest.parse().map_err(|_| input_err!("bad label '{l}'"))?;
            return MType::forms(space, p);
        }
        if l == "dirac" || l == "spin7" {
            return MType::spinor(space);
        }
        if let Some(rest) = l.strip_prefix("pq:") {
            let (a, b) = rest.split_once(',').ok_or_else(|| input_err!("bad label '{l}'"))?;
            let p: u32 = a.trim().parse().map_err(|_| input_err!("bad label '{l}'"))?;
            let qq: u32 = b.trim().parse().map_err(|_| input_err!("bad label '{l}'"))?;
            return MType::complex_pq(space, p, qq);
        }
        match l {
            "k/2" => MType::complex_half_canonical(space),
            "sigma1" => MType::quat_sigma1(space),
            "sigma'" => MType::quat_sigma_prime(space),
            _ => Err(input_err!("unknown sigma label '{l}'")),
        }
    }

    /// Every catalog M-type defined for the space.
    pub fn catalog(space: &SpacePreset) -> Vec<MType> {
        let mut out = vec![MType::trivial(space)];
        match space.family {
            Family::RealH => {
                for p in 1..space.rank_param {
                    out.extend(MType::forms(space, p));
                }
                out.extend(MType::spinor(space));
            }
            Family::ComplexH => {
                let n = space.rank_param;
                for p in 0..n {
                    for qq in 0..(n - p) {
                        if p + qq > 0 {
                            out.extend(MType::complex_pq(space, p, qq));
                        }
                    }
                }
                out.extend(MType::complex_half_canonical(space));
            }
            Family::QuaternionicH => {
                out.extend(MType::quat_sigma1(space));
                out.extend(MType::quat_sigma_prime(space));
            }
            Family::CayleyH => {
                out.extend(MType::forms(space, 1));
                out.extend(MType::forms(space, 2));
                out.extend(MType::spinor(space));
            }
        }
        out
    }

    pub fn name(&self) -> String {
        match &self.label {
            Some(l) => l.clone(),
            None => {
                let parts: Vec<String> = self.mu.iter().map(format_q).collect();
                alloc::format!("mu=[{}];eps={}", parts.join(","), format_q(&self.eps_alpha))
            }
        }
    }

    pub fn is_dominant(&self) -> bool {
        self.space
            .m_roots()
            .all(|r| self.space.pair(&self.mu, &r.coords) >= Q::zero())
    }

    /// `c(σ) = |ρ|² + |ρ_m|² − |μ_σ + ρ_m|²`.
    pub fn shift_constant(&self) -> Result<Q> {
        if !self.is_dominant() {
            return Err(input_err!("mu_sigma is not dominant"));
        }
        let s = &self.space;
        let mr: Vec<Q> = self.mu.iter().zip(&s.rho_m).map(|(a, b)| a + b).collect();
        Ok(&s.rho * &s.rho + s.norm2(&s.rho_m) - s.norm2(&mr))
    }

    /// `L(σ)`: `ε(σ) ≡ ρ/T + ε_α(σ) mod 1`, and the dominance bound
    /// `Φ(σ) = ρ + max_γ |γ| max_{β|_a = γ} (μ, β)/(γ, γ)`.
    pub fn lattice(&self) -> Result<LatticeSpec> {
        let s = &self.space;
        let e = frac(&(s.rho_over_t() + &self.eps_alpha));
        if !(e.is_zero() || e == half()) {
            return Err(input_err!("rho/T + eps_alpha is not congruent to 0 or 1/2"));
        }
        let mut best: Option<Q> = None;
        for r in &s.roots {
            let v = match r.kind {
                RootKind::M => continue,
                RootKind::Alpha => s.pair(&self.mu, &r.coords),
                RootKind::TwoAlpha => s.pair(&self.mu, &r.coords) * half(),
            };
            if best.as_ref().is_none_or(|b| v > *b) {
                best = Some(v);
            }
        }
        let extra = best.unwrap_or_else(Q::zero);
        let lb = &s.rho + extra;
        Ok(LatticeSpec {
            t: s.period_t.clone(),
            eps: e,
            lower_bound: if lb < Q::zero() { Q::zero() } else { lb },
        })
    }

    /// `P(λ, σ) = ∏_{β ∈ Φ⁺(g^c, h)} (λê + μ_σ + ρ_m, β)/(δ, β)`.
    pub fn weyl_polynomial(&self) -> Result<WeylPolynomial> {
        let s = &self.space;
        let shifted: Vec<Q> = self.mu.iter().zip(&s.rho_m).map(|(a, b)| a + b).collect();
        let mut p = Poly::one();
        for r in &s.roots {
            let d = s.pair(&s.delta, &r.coords);
            if d.is_zero() {
                return Err(Error::Internal("(δ, β) = 0".into()));
            }
            let a = s.pair(&s.e_hat, &r.coords) / &d;
            let b = s.pair(&shifted, &r.coords) / &d;
            p = &p * &Poly::linear(a, b);
        }
        let qpoly = p
            .div_x()
            .ok_or_else(|| Error::Internal("P(0) != 0".into()))?;
        Ok(WeylPolynomial { p, q: qpoly })
    }

    /// Dimension of `σ` by the Weyl formula for `m`.
    pub fn dimension(&self) -> Q {
        let s = &self.space;
        let mut num = Q::one();
        for r in s.m_roots() {
            let d = s.pair(&s.rho_m, &r.coords);
            let v: Vec<Q> = self.mu.iter().zip(&s.rho_m).map(|(a, b)| a + b).collect();
            num *= s.pair(&v, &r.coords) / d;
        }
        num
    }

    /// Values of `ε_α` compatible with weight integrality on the compact
    /// dual: those `t ∈ {0, 1/2}` for which `T·t·ê + μ_σ` is a weight of the
    /// simply connected dual group.
    pub fn integral_eps_alpha(space: &SpacePreset, mu: &[Q]) -> Vec<Q> {
        [Q::zero(), half()]
            .into_iter()
            .filter(|t| {
                let w: Vec<Q> = space
                    .e_hat
                    .iter()
                    .zip(mu)
                    .map(|(e, m)| &space.period_t * t * e + m)
                    .collect();
                space.in_weight_lattice(&w)
            })
            .collect()
    }

    /// Highest weight `(λ − ρ)ê + μ_σ` of the dual-group representation at
    /// lattice point `λ`.
    pub fn dual_highest_weight(&self, lambda: &Q) -> Vec<Q> {
        let s = &self.space;
        s.e_hat
            .iter()
            .zip(&self.mu)
            .map(|(e, m)| (lambda - &s.rho) * e + m)
            .collect()
    }
}

impl WeylPolynomial {
    pub fn degree(&self) -> usize {
        self.p.degree().unwrap_or(0)
    }
}

impl core::fmt::Display for MType {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}@{}", self.name(), self.space.code())
    }
}
