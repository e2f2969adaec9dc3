//! The four even-dimensional rank-one families and their root data.
//!
//! Each preset stores the positive roots of `(g^c, h)` with `h = t^c ⊕ a^c` in
//! a fixed coordinate chart, the invariant form as a multiple of the standard
//! dot product, and the unit vector `ê` spanning `a`. In every chart the short
//! restricted root `α` has `|α| = 1`, so the level `(β, ê)` of a root is 0 for
//! roots of `m`, 1 for roots restricting to `α` and 2 for roots restricting to
//! `2α`.
//!
//! Charts:
//! * `RealH`, `m`: `B_m` on `e1..em`, form = dot, `ê = e1`.
//! * `ComplexH`, `n`: `A_n` on sum-zero `(n+1)`-tuples, form = 2·dot,
//!   `ê = (e0 − e1)/2`; positive system from the order `0 > 2 > … > n > 1`.
//! * `QuaternionicH`, `n`: `C_{n+1}` on `e0..en`, form = 2·dot, `ê = (e0 + e1)/2`.
//! * `CayleyH`: `F_4` on `e1..e4`, form = 4·dot, `ê = e1/2` (static table).

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{input_err, Error, Result};
use crate::rational::{half, q, qi, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    RealH,
    ComplexH,
    QuaternionicH,
    CayleyH,
}

/// Where a positive root of `g^c` lands after restriction to `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootKind {
    M,
    Alpha,
    TwoAlpha,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub coords: Vec<Q>,
    pub kind: RootKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpacePreset {
    pub family: Family,
    pub rank_param: u32,
    pub dim_real: u32,
    /// `|ρ|` in the curvature normalization of the family.
    pub rho: Q,
    /// `T = |long restricted root|`.
    pub period_t: Q,
    pub m_alpha: u32,
    pub m_two_alpha: u32,
    /// Euler characteristic of the compact dual.
    pub chi_dual: u32,
    /// Invariant form `(x, y) = form_scale · Σ x_i y_i`.
    pub form_scale: Q,
    pub e_hat: Vec<Q>,
    pub roots: Vec<Root>,
    /// Half-sum of all positive roots.
    pub delta: Vec<Q>,
    /// `ρ_m = δ − ρ·ê`.
    pub rho_m: Vec<Q>,
}

fn unit(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

fn comb(a: &[Q], sa: i64, b: &[Q], sb: i64) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x * qi(sa) + y * qi(sb)).collect()
}

fn scaled(a: &[Q], s: &Q) -> Vec<Q> {
    a.iter().map(|x| x * s).collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

impl SpacePreset {
    /// Builds a preset; `rank_param` is `m` for `H𝐑^{2m}`, `n` for `H𝐂^n` and
    /// `H𝐇^n`, and must be 2 for the Cayley plane.
    pub fn new(family: Family, rank_param: u32) -> Result<Self> {
        let (coords_roots, form_scale, e_hat, dim_real, m_alpha, m_two_alpha, chi_dual) =
            match family {
                Family::RealH => {
                    if rank_param < 1 {
                        return Err(input_err!("H R^{{2m}} needs m >= 1"));
                    }
                    let m = rank_param as usize;
                    let mut r = Vec::new();
                    for i in 0..m {
                        for j in (i + 1)..m {
                            r.push(comb(&unit(m, i), 1, &unit(m, j), -1));
                            r.push(comb(&unit(m, i), 1, &unit(m, j), 1));
                        }
                        r.push(unit(m, i));
                    }
                    (r, qi(1), unit(m, 0), 2 * rank_param, 2 * rank_param - 1, 0, 2)
                }
                Family::ComplexH => {
                    if rank_param < 2 {
                        return Err(input_err!("H C^n needs n >= 2"));
                    }
                    let n = rank_param as usize;
                    let dim = n + 1;
                    // order 0 > 2 > 3 > … > n > 1
                    let mut order = vec![0usize];
                    order.extend(2..=n);
                    order.push(1);
                    let mut r = Vec::new();
                    for a in 0..order.len() {
                        for b in (a + 1)..order.len() {
                            r.push(comb(&unit(dim, order[a]), 1, &unit(dim, order[b]), -1));
                        }
                    }
                    let e_hat = scaled(&comb(&unit(dim, 0), 1, &unit(dim, 1), -1), &half());
                    (r, qi(2), e_hat, 2 * rank_param, 2 * rank_param - 2, 1, rank_param + 1)
                }
                Family::QuaternionicH => {
                    if rank_param < 2 {
                        return Err(input_err!("H H^n needs n >= 2"));
                    }
                    let k = rank_param as usize + 1;
                    let mut r = Vec::new();
                    for i in 0..k {
                        for j in (i + 1)..k {
                            r.push(comb(&unit(k, i), 1, &unit(k, j), -1));
                            r.push(comb(&unit(k, i), 1, &unit(k, j), 1));
                        }
                        r.push(scaled(&unit(k, i), &qi(2)));
                    }
                    let e_hat = scaled(&comb(&unit(k, 0), 1, &unit(k, 1), 1), &half());
                    (r, qi(2), e_hat, 4 * rank_param, 4 * rank_param - 4, 3, rank_param + 1)
                }
                Family::CayleyH => {
                    if rank_param != 2 {
                        return Err(input_err!("the Cayley plane has rank parameter 2"));
                    }
                    (f4_positive_roots(), qi(4), scaled(&unit(4, 0), &half()), 16, 8, 7, 3)
                }
            };

        let mut roots = Vec::with_capacity(coords_roots.len());
        let dimc = e_hat.len();
        let mut delta = vec![Q::zero(); dimc];
        for c in coords_roots {
            let level = &form_scale * dot(&c, &e_hat);
            let kind = if level.is_zero() {
                RootKind::M
            } else if level == qi(1) {
                RootKind::Alpha
            } else if level == qi(2) {
                RootKind::TwoAlpha
            } else {
                return Err(Error::Internal(alloc::format!("root with level {level}")));
            };
            for (d, x) in delta.iter_mut().zip(&c) {
                *d += x * half();
            }
            roots.push(Root { coords: c, kind });
        }
        let rho = &form_scale * dot(&delta, &e_hat);
        let rho_m: Vec<Q> = delta.iter().zip(&e_hat).map(|(d, e)| d - &rho * e).collect();
        let period_t = if m_two_alpha > 0 { qi(2) } else { qi(1) };
        let sp = SpacePreset {
            family,
            rank_param,
            dim_real,
            rho,
            period_t,
            m_alpha,
            m_two_alpha,
            chi_dual,
            form_scale,
            e_hat,
            roots,
            delta,
            rho_m,
        };
        sp.check()?;
        Ok(sp)
    }

    fn check(&self) -> Result<()> {
        let count = |k| self.roots.iter().filter(|r| r.kind == k).count() as u32;
        if count(RootKind::Alpha) != self.m_alpha || count(RootKind::TwoAlpha) != self.m_two_alpha {
            return Err(Error::Internal("restricted multiplicities disagree with roots".into()));
        }
        let expect = (qi(self.m_alpha as i64) + qi(2 * self.m_two_alpha as i64)) * half();
        if expect != self.rho {
            return Err(Error::Internal("ρ disagrees with multiplicities".into()));
        }
        if self.norm2(&self.e_hat) != Q::one() {
            return Err(Error::Internal("ê is not a unit vector".into()));
        }
        Ok(())
    }

    /// Parses `RH<2m>`, `CH<n>`, `QH<n>` or `OH2`.
    pub fn from_code(code: &str) -> Result<Self> {
        let code = code.trim();
        if code.len() < 3 {
            return Err(input_err!("unknown space code '{code}'"));
        }
        let (head, tail) = code.split_at(2);
        let k: u32 = tail
            .parse()
            .map_err(|_| input_err!("unknown space code '{code}'"))?;
        match head.to_ascii_uppercase().as_str() {
            "RH" => {
                if k % 2 == 1 {
                    return Err(input_err!("odd-dimensional spaces are not supported"));
                }
                SpacePreset::new(Family::RealH, k / 2)
            }
            "CH" => SpacePreset::new(Family::ComplexH, k),
            "QH" => SpacePreset::new(Family::QuaternionicH, k),
            "OH" => SpacePreset::new(Family::CayleyH, k),
            _ => Err(input_err!("unknown space code '{code}'")),
        }
    }

    pub fn code(&self) -> String {
        match self.family {
            Family::RealH => alloc::format!("RH{}", self.dim_real),
            Family::ComplexH => alloc::format!("CH{}", self.rank_param),
            Family::QuaternionicH => alloc::format!("QH{}", self.rank_param),
            Family::CayleyH => String::from("OH2"),
        }
    }

    pub fn coord_dim(&self) -> usize {
        self.e_hat.len()
    }

    pub fn pair(&self, a: &[Q], b: &[Q]) -> Q {
        &self.form_scale * dot(a, b)
    }

    pub fn norm2(&self, a: &[Q]) -> Q {
        self.pair(a, a)
    }

    pub fn m_roots(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.kind == RootKind::M)
    }

    /// Number of positive roots of `g^c`.
    pub fn root_count(&self) -> usize {
        self.roots.len()
    }

    /// `dim n = m_α + m_{2α} = dim_real − 1`; also the degree of every Weyl
    /// polynomial.
    pub fn dim_n(&self) -> u32 {
        self.m_alpha + self.m_two_alpha
    }

    /// `(−1)^{dim/2}`.
    pub fn half_dim_sign(&self) -> i64 {
        if (self.dim_real / 2).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// `ρ/T`.
    pub fn rho_over_t(&self) -> Q {
        &self.rho / &self.period_t
    }

    /// Whether `x` is a weight of the simply connected compact dual group.
    pub fn in_weight_lattice(&self, x: &[Q]) -> bool {
        let all_int = x.iter().all(|c| c.is_integer());
        let all_half = x.iter().all(|c| !c.is_integer() && (c * qi(2)).is_integer());
        match self.family {
            Family::RealH | Family::CayleyH => all_int || all_half,
            Family::ComplexH => x
                .iter()
                .all(|c| (c - &x[0]).is_integer()),
            Family::QuaternionicH => all_int,
        }
    }

    /// Lengths `2πk/T`, `k = 1..=count`, of the closed geodesics of the
    /// compact dual.
    pub fn closed_geodesic_lengths_dual(&self, count: usize) -> Result<Vec<f64>> {
        if count == 0 {
            return Err(input_err!("count must be at least 1"));
        }
        let t = crate::rational::to_f64(&self.period_t);
        Ok((1..=count)
            .map(|k| 2.0 * core::f64::consts::PI * k as f64 / t)
            .collect())
    }

    /// Rank of `g^c`.
    pub fn complex_rank(&self) -> usize {
        match self.family {
            Family::ComplexH => self.coord_dim() - 1,
            _ => self.coord_dim(),
        }
    }

    /// Dimension of `g^c`.
    pub fn complex_dim(&self) -> usize {
        2 * self.root_count() + self.complex_rank()
    }

    /// Whether the sum of coordinates must vanish (only the `A_n` chart).
    pub fn sum_zero_chart(&self) -> bool {
        self.family == Family::ComplexH
    }

    /// Largest absolute coordinate, used only for sanity bounds.
    pub fn max_abs_delta(&self) -> Q {
        self.delta.iter().map(|x| x.abs()).fold(Q::zero(), |a, b| if b > a { b } else { a })
    }
}

impl fmt::Display for SpacePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// The 24 positive roots of `F_4`: `e_i`, `e_i ± e_j` (`i < j`) and
/// `½(e1 ± e2 ± e3 ± e4)`.
fn f4_positive_roots() -> Vec<Vec<Q>> {
    let mut r = Vec::new();
    for i in 0..4 {
        r.push(unit(4, i));
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            r.push(comb(&unit(4, i), 1, &unit(4, j), -1));
            r.push(comb(&unit(4, i), 1, &unit(4, j), 1));
        }
    }
    for s in 0..8u32 {
        let sign = |b: u32| if s & (1 << b) != 0 { q(-1, 2) } else { q(1, 2) };
        r.push(vec![q(1, 2), sign(0), sign(1), sign(2)]);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_match_quoted_constants() {
        let s = SpacePreset::new(Family::RealH, 1).unwrap();
        assert_eq!((s.dim_real, s.rho.clone(), s.period_t.clone(), s.chi_dual), (2, q(1, 2), qi(1), 2));
        let s = SpacePreset::new(Family::ComplexH, 2).unwrap();
        assert_eq!((s.dim_real, s.rho.clone(), s.period_t.clone(), s.chi_dual), (4, qi(2), qi(2), 3));
        let s = SpacePreset::new(Family::QuaternionicH, 2).unwrap();
        assert_eq!((s.dim_real, s.rho.clone(), s.period_t.clone(), s.chi_dual), (8, qi(5), qi(2), 3));
        let s = SpacePreset::new(Family::CayleyH, 2).unwrap();
        assert_eq!((s.dim_real, s.rho.clone(), s.root_count()), (16, qi(11), 24));
    }

    #[test]
    fn rejects_bad_ranks() {
        assert!(SpacePreset::new(Family::RealH, 0).is_err());
        assert!(SpacePreset::new(Family::ComplexH, 1).is_err());
        assert!(SpacePreset::new(Family::QuaternionicH, 1).is_err());
        assert!(SpacePreset::new(Family::CayleyH, 3).is_err());
        assert!(SpacePreset::from_code("RH3").is_err());
        assert!(SpacePreset::from_code("XX2").is_err());
    }

    #[test]
    fn codes_round_trip() {
        for c in ["RH2", "RH4", "CH3", "QH2", "OH2"] {
            assert_eq!(SpacePreset::from_code(c).unwrap().code(), c);
        }
    }

    #[test]
    fn dual_geodesic_lengths() {
        let s = SpacePreset::new(Family::RealH, 1).unwrap();
        let l = s.closed_geodesic_lengths_dual(2).unwrap();
        assert!((l[0] - 2.0 * core::f64::consts::PI).abs() < 1e-15);
        assert!((l[1] - 4.0 * core::f64::consts::PI).abs() < 1e-15);
        let s = SpacePreset::new(Family::ComplexH, 2).unwrap();
        assert!((s.closed_geodesic_lengths_dual(1).unwrap()[0] - core::f64::consts::PI).abs() < 1e-15);
        assert!(s.closed_geodesic_lengths_dual(0).is_err());
    }
}
