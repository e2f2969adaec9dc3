//! Closed geodesics as conjugacy-class records and their trace-formula
//! weights `C(g, σ) = −l(g) e^{ρ l(g)} tr σ(m) / (2 det(1 − Ad(ma)_n))`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::error::{capability_err, input_err, Result};
use crate::mtype::MType;
use crate::rational::to_f64;
use crate::space::{Family, SpacePreset};
use crate::C64;

/// Rotation angles of `m` on `n_α` and `n_{2α}`.
///
/// `alpha` lists all `m_α` eigenphases of `Ad(m)` on `n_α ⊗ ℂ`; `two_alpha`
/// all `m_{2α}` eigenphases on `n_{2α} ⊗ ℂ`. For `H𝐂ⁿ` the first `n − 1`
/// entries of `alpha` are the phases on `V^{1,0}` and the rest their negatives.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Holonomy {
    pub alpha: Vec<f64>,
    pub two_alpha: Vec<f64>,
}

impl Holonomy {
    pub fn identity(space: &SpacePreset) -> Self {
        Holonomy {
            alpha: vec![0.0; space.m_alpha as usize],
            two_alpha: vec![0.0; space.m_two_alpha as usize],
        }
    }

    pub fn scaled(&self, j: f64) -> Self {
        Holonomy {
            alpha: self.alpha.iter().map(|x| x * j).collect(),
            two_alpha: self.two_alpha.iter().map(|x| x * j).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicClass {
    pub length: f64,
    pub n_gamma: u32,
    pub holonomy: Holonomy,
    /// `tr σ(m)` when supplied directly; takes precedence over the holonomy.
    pub tr_sigma: Option<f64>,
    pub primitive: bool,
}

impl GeodesicClass {
    pub fn new(space: &SpacePreset, length: f64, n_gamma: u32, holonomy: Option<Holonomy>, tr_sigma: Option<f64>) -> Result<Self> {
        let holonomy = holonomy.unwrap_or_else(|| Holonomy::identity(space));
        let c = GeodesicClass { length, n_gamma, holonomy, tr_sigma, primitive: n_gamma == 1 };
        c.validate(space)?;
        Ok(c)
    }

    pub fn validate(&self, space: &SpacePreset) -> Result<()> {
        if !(self.length > 0.0) || !self.length.is_finite() {
            return Err(input_err!("geodesic length must be positive, got {}", self.length));
        }
        if self.n_gamma == 0 {
            return Err(input_err!("n_gamma must be >= 1"));
        }
        if self.primitive != (self.n_gamma == 1) {
            return Err(input_err!("primitive flag disagrees with n_gamma = {}", self.n_gamma));
        }
        if self.holonomy.alpha.len() != space.m_alpha as usize
            || self.holonomy.two_alpha.len() != space.m_two_alpha as usize
        {
            return Err(input_err!(
                "holonomy needs {} alpha and {} two_alpha angles for {}",
                space.m_alpha,
                space.m_two_alpha,
                space.code()
            ));
        }
        Ok(())
    }

    /// `g^j` for a primitive `g`: length `j·l`, angles scaled by `j`, `n_Γ = j`.
    pub fn power(&self, j: u32) -> Self {
        GeodesicClass {
            length: self.length * j as f64,
            n_gamma: self.n_gamma * j,
            holonomy: self.holonomy.scaled(j as f64),
            tr_sigma: None,
            primitive: self.n_gamma * j == 1,
        }
    }

    /// `det(1 − Ad(ma)_n) = ∏_α (1 − e^{l} e^{iθ}) · ∏_{2α} (1 − e^{2l} e^{iφ})`.
    pub fn det_one_minus_ad(&self) -> C64 {
        let one = C64::new(1.0, 0.0);
        let mut d = one;
        for th in &self.holonomy.alpha {
            d *= one - C64::from_polar(self.length.exp(), *th);
        }
        for ph in &self.holonomy.two_alpha {
            d *= one - C64::from_polar((2.0 * self.length).exp(), *ph);
        }
        d
    }

    /// `tr σ(m)`: the supplied value, or a holonomy formula for catalog σ.
    pub fn trace_sigma(&self, sigma: &MType) -> Result<f64> {
        if let Some(t) = self.tr_sigma {
            return Ok(t);
        }
        trace_from_holonomy(&self.holonomy, sigma)
    }

    pub fn contribution(&self, space: &SpacePreset, sigma: &MType) -> Result<f64> {
        let tr = self.trace_sigma(sigma)?;
        if tr == 0.0 {
            return Ok(0.0);
        }
        let det = self.det_one_minus_ad();
        if det.norm() < 1e-300 {
            return Err(input_err!("det(1 - Ad(ma)) vanishes; class is not hyperbolic"));
        }
        let rho = to_f64(&space.rho);
        let v = -C64::new(self.length * (rho * self.length).exp() * tr, 0.0) / (det * 2.0);
        Ok(v.re)
    }
}

/// Elementary symmetric polynomials `e_0..=e_n` of `xs`.
pub fn elementary_symmetric(xs: &[C64]) -> Vec<C64> {
    let mut e = vec![C64::zero(); xs.len() + 1];
    e[0] = C64::new(1.0, 0.0);
    for (i, x) in xs.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            let prev = e[k - 1];
            e[k] += prev * x;
        }
    }
    e
}

/// Complete homogeneous symmetric polynomials `h_0..=h_k` of `xs`.
pub fn complete_homogeneous(xs: &[C64], k: usize) -> Vec<C64> {
    let mut h = vec![C64::zero(); k + 1];
    h[0] = C64::new(1.0, 0.0);
    for x in xs {
        // multiply the series by 1/(1 − x t)
        for i in 1..=k {
            let prev = h[i - 1];
            h[i] += prev * x;
        }
    }
    h
}

fn phases(xs: &[f64]) -> Vec<C64> {
    xs.iter().map(|t| C64::from_polar(1.0, *t)).collect()
}

/// `tr σ(m)` from rotation angles for the catalog M-types whose character is
/// determined by the isotropy action: trivial, real and Cayley forms, complex
/// primitive forms, quaternionic `σ¹`/`σ′` and Cayley `spin7`.
pub fn trace_from_holonomy(h: &Holonomy, sigma: &MType) -> Result<f64> {
    let label: String = sigma.name();
    let s = &sigma.space;
    if label == "trivial" {
        return Ok(1.0);
    }
    let e_at = |xs: &[f64], p: usize| -> f64 {
        let e = elementary_symmetric(&phases(xs));
        e.get(p).map(|c| c.re).unwrap_or(0.0)
    };
    let sum = |xs: &[f64]| xs.iter().map(|t| t.cos()).sum::<f64>();
    match (s.family, label.as_str()) {
        (Family::RealH, l) if l.starts_with("forms:p=") => {
            let p: usize = l[8..].parse().map_err(|_| input_err!("bad label {l}"))?;
            Ok(e_at(&h.alpha, p))
        }
        (Family::ComplexH, l) if l.starts_with("pq:") => {
            let (a, b) = l[3..].split_once(',').ok_or_else(|| input_err!("bad label {l}"))?;
            let p: usize = a.parse().map_err(|_| input_err!("bad label {l}"))?;
            let q: usize = b.parse().map_err(|_| input_err!("bad label {l}"))?;
            let n1 = s.rank_param as usize - 1;
            let u = phases(&h.alpha[..n1.min(h.alpha.len())]);
            let ubar: Vec<C64> = u.iter().map(|z| z.conj()).collect();
            let e = elementary_symmetric(&u);
            let f = elementary_symmetric(&ubar);
            let get = |v: &Vec<C64>, i: isize| if i < 0 { C64::zero() } else { v.get(i as usize).copied().unwrap_or_default() };
            let full = get(&e, p as isize) * get(&f, q as isize);
            let lower = get(&e, p as isize - 1) * get(&f, q as isize - 1);
            Ok((full - lower).re)
        }
        (Family::QuaternionicH, "sigma1") | (Family::CayleyH, "spin7") => Ok(sum(&h.alpha)),
        (Family::QuaternionicH, "sigma'") => Ok(sum(&h.two_alpha)),
        (Family::CayleyH, l) if l.starts_with("forms:p=") => {
            let p: usize = l[8..].parse().map_err(|_| input_err!("bad label {l}"))?;
            Ok(e_at(&h.two_alpha, p))
        }
        _ => Err(capability_err!("tr sigma(m) for '{label}' on {} needs an explicit tr_sigma", s.code())),
    }
}

/// A finite set of closed geodesics with manifold metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct LengthSpectrum {
    pub space: SpacePreset,
    pub classes: Vec<GeodesicClass>,
    pub cutoff_l: f64,
    pub vol_m: Option<f64>,
    pub chi_m: Option<i64>,
}

impl LengthSpectrum {
    pub fn new(space: SpacePreset, classes: Vec<GeodesicClass>, cutoff_l: f64, vol_m: Option<f64>, chi_m: Option<i64>) -> Result<Self> {
        let s = LengthSpectrum { space, classes, cutoff_l, vol_m, chi_m };
        s.validate()?;
        Ok(s)
    }

    pub fn empty(space: SpacePreset) -> Self {
        LengthSpectrum { space, classes: Vec::new(), cutoff_l: 0.0, vol_m: None, chi_m: None }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cutoff_l >= 0.0) {
            return Err(input_err!("cutoff_L must be non-negative"));
        }
        for c in &self.classes {
            c.validate(&self.space)?;
            if c.length > self.cutoff_l * (1.0 + 1e-12) {
                return Err(input_err!("class of length {} exceeds cutoff_L = {}", c.length, self.cutoff_l));
            }
        }
        if let (Some(v), Some(chi)) = (self.vol_m, self.chi_m) {
            let vd = crate::dual::dual_volume(&self.space);
            let expect = self.space.half_dim_sign() as f64 * chi as f64 / self.space.chi_dual as f64;
            if ((v / vd) - expect).abs() > 1e-6 * expect.abs().max(1.0) {
                return Err(input_err!(
                    "vol_M/vol(X_d) = {} but (-1)^(n/2) chi_M/chi_d = {}",
                    v / vd,
                    expect
                ));
            }
        }
        Ok(())
    }

    /// The classes `g^j` of a single primitive `g` up to `cutoff`.
    pub fn cyclic(space: SpacePreset, primitive: GeodesicClass, cutoff: f64) -> Result<Self> {
        primitive.validate(&space)?;
        if !primitive.primitive {
            return Err(input_err!("cyclic fixture needs a primitive generator"));
        }
        let mut classes = Vec::new();
        let mut j = 1;
        while primitive.length * j as f64 <= cutoff * (1.0 + 1e-12) {
            classes.push(primitive.power(j));
            j += 1;
        }
        LengthSpectrum::new(space, classes, cutoff, None, None)
    }

    pub fn primitive_classes(&self) -> impl Iterator<Item = &GeodesicClass> {
        self.classes.iter().filter(|c| c.primitive)
    }

    pub fn min_length(&self) -> Option<f64> {
        self.classes.iter().map(|c| c.length).fold(None, |m, l| Some(m.map_or(l, |x: f64| x.min(l))))
    }

    /// Fitted constant `A` of the counting bound `#{l(g) < N} ≤ A e^{2ρN}`,
    /// i.e. the largest observed ratio over the supplied classes.
    pub fn counting_constant(&self) -> f64 {
        let rho2 = 2.0 * to_f64(&self.space.rho);
        let mut ls: Vec<f64> = self.classes.iter().map(|c| c.length).collect();
        ls.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
        ls.iter()
            .enumerate()
            .map(|(i, l)| (i + 1) as f64 * (-rho2 * l).exp())
            .fold(0.0, f64::max)
    }

    /// Estimated bound on `Σ_{l(g) > L} |C(g,σ)| e^{−x l(g)}` for real
    /// `x > ρ`, from `|C(g)| ≤ κ l e^{−ρl}` and the fitted counting bound.
    /// `kappa` bounds `|C(g)| e^{ρl}/l` (e.g. `dim σ` times the determinant
    /// lower-bound constant).
    pub fn tail_estimate(&self, x: f64, kappa: f64) -> f64 {
        let rho = to_f64(&self.space.rho);
        let big_l = self.cutoff_l;
        let a = self.counting_constant();
        if a == 0.0 {
            return 0.0;
        }
        let beta = x - rho;
        if beta <= 0.0 {
            return f64::INFINITY;
        }
        // ∫_L^∞ κ l e^{−ρl} e^{−xl} d(A e^{2ρl}) = 2ρAκ ∫_L^∞ l e^{−βl} dl
        2.0 * rho * a * kappa * (-beta * big_l).exp() * (big_l / beta + 1.0 / (beta * beta))
    }
}

/// `κ` for [`LengthSpectrum::tail_estimate`]: `dim σ` divided by the
/// smallest value of `|det(1 − Ad(ma)_n)| e^{−2ρl}` over `l ≥ l_min`.
pub fn contribution_kappa(space: &SpacePreset, sigma: &MType, l_min: f64) -> f64 {
    let dim = to_f64(&sigma.dimension());
    // |1 − e^{l}e^{iθ}| ≥ e^{l} − 1
    let a = (1.0 - (-l_min).exp()).powi(space.m_alpha as i32);
    let b = (1.0 - (-2.0 * l_min).exp()).powi(space.m_two_alpha as i32);
    dim / (2.0 * a * b)
}
