//! The restriction map `r: R(K) → R(M)` and the admissible-lift tables.
//!
//! Virtual representations are integer polynomials in the generator symbols of
//! each family's representation ring. Restriction is the ring homomorphism
//! fixed by its values on generators, so products such as `s+*l1` restrict
//! term by term. Symbols:
//!
//! | family | `K` generators | `M` generators |
//! |---|---|---|
//! | `RH2m` | `l1…l{m−1}`, `s+`, `s-` | `forms:p=1…m−1`, `dirac` |
//! | `CHn` | `l1…l{n−1}`, `Lp,q` (primitive, `p+q ≤ n−1`), `K/2` (`n` odd), `w^e` | `m1…m{n−2}`, `pq:p,q`, `k/2`, `z^e` |
//! | `QHn` | `p`, `l1…l{n}`, `l'` | `q`, `m1…m{n−1}` |
//! | `OH2` | `l1`, `l2`, `s9` | `forms:p=1`, `forms:p=2`, `spin7` |
//!
//! `l0` and `1` denote the trivial representation. On `QHn` the catalog types
//! `sigma1 = q*m1` and `sigma' = q^2 − 1` are written in generators.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{capability_err, input_err, Result};
use crate::mtype::MType;
use crate::space::{Family, SpacePreset};

/// Which group a virtual representation lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Group {
    K,
    M,
}

/// A monomial in generator symbols; `twist` is the exponent of the
/// one-dimensional `w` (on `K`) or `z` (on `M`) of the complex family.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial {
    gens: BTreeMap<String, u32>,
    twist: i64,
}

impl Monomial {
    fn symbol(name: &str) -> Self {
        let mut gens = BTreeMap::new();
        gens.insert(name.to_string(), 1);
        Monomial { gens, twist: 0 }
    }

    fn twist(e: i64) -> Self {
        Monomial { gens: BTreeMap::new(), twist: e }
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut gens = self.gens.clone();
        for (g, e) in &other.gens {
            *gens.entry(g.clone()).or_insert(0) += e;
        }
        Monomial { gens, twist: self.twist + other.twist }
    }

    pub fn is_one(&self) -> bool {
        self.gens.is_empty() && self.twist == 0
    }

    /// Generator symbols with exponents; the twist is not included.
    pub fn generators(&self) -> impl Iterator<Item = (&str, u32)> {
        self.gens.iter().map(|(g, e)| (g.as_str(), *e))
    }

    pub fn twist_exponent(&self) -> i64 {
        self.twist
    }

    fn label(&self, group: Group) -> String {
        let mut parts: Vec<String> = self
            .gens
            .iter()
            .map(|(g, &e)| if e == 1 { g.clone() } else { alloc::format!("{g}^{e}") })
            .collect();
        if self.twist != 0 {
            let t = if group == Group::K { 'w' } else { 'z' };
            parts.push(alloc::format!("{t}^{}", self.twist));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Integer combination of generator monomials of `R(K)` or `R(M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualRep {
    pub group: Group,
    terms: BTreeMap<Monomial, i64>,
}

impl VirtualRep {
    pub fn zero(group: Group) -> Self {
        VirtualRep { group, terms: BTreeMap::new() }
    }

    pub fn one(group: Group) -> Self {
        Self::monomial(group, Monomial::default(), 1)
    }

    fn monomial(group: Group, m: Monomial, c: i64) -> Self {
        let mut v = Self::zero(group);
        v.add_term(m, c);
        v
    }

    /// A single generator symbol (unchecked; `restrict` validates).
    pub fn symbol(group: Group, name: &str) -> Self {
        match name {
            "1" | "l0" | "trivial" => Self::one(group),
            _ => Self::monomial(group, Monomial::symbol(name), 1),
        }
    }

    /// `w^e` on `K` or `z^e` on `M`.
    pub fn twist(group: Group, e: i64) -> Self {
        Self::monomial(group, Monomial::twist(e), 1)
    }

    fn add_term(&mut self, m: Monomial, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(label, weight)` pairs in canonical order; weights are non-zero.
    pub fn terms(&self) -> Vec<(String, i64)> {
        self.terms.iter().map(|(m, &c)| (m.label(self.group), c)).collect()
    }

    pub fn monomials(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = Self::zero(self.group);
        for (m, &c) in &self.terms {
            out.add_term(m.clone(), c * k);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.group);
        for (a, &x) in &self.terms {
            for (b, &y) in &other.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        out
    }

    fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(self.group);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Parses expressions such as `l2-l1+l0`, `s+*l1 - s-*l1`, `2*L1,0 - w^-3`.
    pub fn parse(group: Group, text: &str) -> Result<Self> {
        let s: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(input_err!("empty representation expression"));
        }
        let mut out = Self::zero(group);
        let mut i = 0;
        while i < s.len() {
            let mut sign = 1;
            if s[i] == '+' || s[i] == '-' {
                if s[i] == '-' {
                    sign = -1;
                }
                i += 1;
            } else if i > 0 {
                return Err(input_err!("expected '+' or '-' in '{text}'"));
            }
            let (term, next) = parse_term(group, &s, i, text)?;
            out = out.add(&term.scale(sign));
            i = next;
        }
        Ok(out)
    }
}

fn parse_term(group: Group, s: &[char], mut i: usize, text: &str) -> Result<(VirtualRep, usize)> {
    let mut acc = VirtualRep::one(group);
    let mut first = true;
    loop {
        if i >= s.len() {
            return Err(input_err!("dangling operator in '{text}'"));
        }
        if s[i].is_ascii_digit() {
            let st = i;
            while i < s.len() && s[i].is_ascii_digit() {
                i += 1;
            }
            let n: i64 = s[st..i].iter().collect::<String>().parse().map_err(|_| input_err!("bad integer in '{text}'"))?;
            acc = acc.scale(n);
            // `2l1` is shorthand for `2*l1`
            if i < s.len() && first && is_symbol_char(s[i]) && !s[i].is_ascii_digit() {
                first = false;
                continue;
            }
        } else {
            let st = i;
            while i < s.len() && is_symbol_char(s[i]) {
                i += 1;
            }
            if i == st {
                return Err(input_err!("unexpected '{}' in '{text}'", s[i]));
            }
            let mut name: String = s[st..i].iter().collect();
            if name == "s" && i < s.len() && (s[i] == '+' || s[i] == '-') {
                name.push(s[i]);
                i += 1;
            }
            let mut exp_text = String::new();
            if i < s.len() && s[i] == '^' {
                i += 1;
                let st = i;
                if i < s.len() && s[i] == '-' {
                    i += 1;
                }
                while i < s.len() && s[i].is_ascii_digit() {
                    i += 1;
                }
                exp_text = s[st..i].iter().collect();
                if exp_text.is_empty() || exp_text == "-" {
                    return Err(input_err!("bad exponent in '{text}'"));
                }
            }
            let twist_sym = if group == Group::K { "w" } else { "z" };
            let factor = if name == twist_sym {
                let e: i64 = if exp_text.is_empty() { 1 } else { exp_text.parse().map_err(|_| input_err!("bad exponent in '{text}'"))? };
                VirtualRep::twist(group, e)
            } else {
                let e: u32 = if exp_text.is_empty() {
                    1
                } else {
                    exp_text.parse().map_err(|_| input_err!("negative power of '{name}' in '{text}'"))?
                };
                VirtualRep::symbol(group, &name).pow(e)
            };
            acc = acc.mul(&factor);
        }
        first = false;
        if i < s.len() && s[i] == '*' {
            i += 1;
            continue;
        }
        return Ok((acc, i));
    }
}

fn is_symbol_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | ':' | ',' | '=' | '/')
}

impl fmt::Display for VirtualRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, &c)) in self.terms.iter().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            if k == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.unsigned_abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a == 1 {
                write!(f, "{}", m.label(self.group))?;
            } else {
                write!(f, "{a}*{}", m.label(self.group))?;
            }
        }
        Ok(())
    }
}

/// `(−1, −Id)`-parity of a quaternionic virtual representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Restriction and lifts for one space; `cover` is the divisor `k` of `n+1`
/// fixing the complex covering group (only `w^e`, `z^e` with `k | e` exist).
#[derive(Clone, Debug)]
pub struct Branching {
    pub space: SpacePreset,
    pub cover: i64,
}

impl Branching {
    pub fn new(space: &SpacePreset) -> Self {
        Branching { space: space.clone(), cover: 1 }
    }

    pub fn with_cover(space: &SpacePreset, k: i64) -> Result<Self> {
        if space.family != Family::ComplexH {
            return Err(input_err!("covers are only parametrized for the complex family"));
        }
        let n1 = space.rank_param as i64 + 1;
        if k < 1 || n1 % k != 0 {
            return Err(input_err!("cover k = {k} does not divide n+1 = {n1}"));
        }
        Ok(Branching { space: space.clone(), cover: k })
    }

    fn check_twist(&self, e: i64) -> Result<()> {
        if e == 0 {
            return Ok(());
        }
        if self.space.family != Family::ComplexH {
            return Err(input_err!("twists w^e only exist on complex hyperbolic spaces"));
        }
        if e % self.cover != 0 {
            return Err(input_err!("w^{e} is not defined on the {}-fold cover", self.cover));
        }
        Ok(())
    }

    /// `σ_j = Λ^j` of the standard `M`-module, as `M`-generators.
    fn m_ext(&self, j: i64) -> VirtualRep {
        let n = self.space.rank_param as i64;
        let g = Group::M;
        match self.space.family {
            Family::RealH => match j {
                0 => VirtualRep::one(g),
                j if j > 0 && j < n => VirtualRep::symbol(g, &alloc::format!("forms:p={j}")),
                _ => VirtualRep::zero(g),
            },
            Family::ComplexH => match j {
                0 => VirtualRep::one(g),
                j if j > 0 && j < n - 1 => VirtualRep::symbol(g, &alloc::format!("m{j}")),
                // Λ^{n−1} of z^{−1}B is z^{−(n−1)} det B = z^{−(n+1)}
                j if j == n - 1 => VirtualRep::twist(g, -(n + 1)),
                _ => VirtualRep::zero(g),
            },
            Family::QuaternionicH => {
                let top = 2 * n - 2;
                let j = if j > n - 1 { top - j } else { j };
                match j {
                    0 => VirtualRep::one(g),
                    j if j > 0 && j < n => VirtualRep::symbol(g, &alloc::format!("m{j}")),
                    _ => VirtualRep::zero(g),
                }
            }
            Family::CayleyH => VirtualRep::zero(g),
        }
    }

    fn index(name: &str, prefix: &str) -> Option<i64> {
        name.strip_prefix(prefix)?.parse().ok()
    }

    /// Restriction of one `K`-generator.
    fn restrict_symbol(&self, name: &str) -> Result<VirtualRep> {
        let n = self.space.rank_param as i64;
        let g = Group::M;
        let unknown = || input_err!("'{name}' is not a K-generator of {}", self.space.code());
        match self.space.family {
            Family::RealH => match name {
                "s+" | "s-" => Ok(VirtualRep::symbol(g, "dirac")),
                _ => {
                    let p = Self::index(name, "l").filter(|&p| p >= 1 && p < n).ok_or_else(unknown)?;
                    Ok(self.m_ext(p).add(&self.m_ext(p - 1)))
                }
            },
            Family::ComplexH => {
                if name == "K/2" {
                    return if n % 2 == 1 { Ok(VirtualRep::symbol(g, "k/2")) } else { Err(unknown()) };
                }
                if let Some(rest) = name.strip_prefix('L') {
                    let (a, b) = rest.split_once(',').ok_or_else(unknown)?;
                    let a: i64 = a.parse().map_err(|_| unknown())?;
                    let b: i64 = b.parse().map_err(|_| unknown())?;
                    if a < 0 || b < 0 || a + b > n - 1 {
                        return Err(unknown());
                    }
                    let mut out = VirtualRep::zero(g);
                    for x in (a - 1).max(0)..=a {
                        for y in (b - 1).max(0)..=b {
                            out = out.add(&pq_symbol(x, y));
                        }
                    }
                    return Ok(out);
                }
                let p = Self::index(name, "l").filter(|&p| p >= 1 && p < n).ok_or_else(unknown)?;
                Ok(self.m_ext(p).add(&self.m_ext(p - 1)))
            }
            Family::QuaternionicH => {
                let q = VirtualRep::symbol(g, "q");
                match name {
                    "p" => Ok(q),
                    "l'" => Ok(q.mul(&q).sub(&VirtualRep::one(g))),
                    _ => {
                        let p = Self::index(name, "l").filter(|&p| p >= 1 && p <= n).ok_or_else(unknown)?;
                        // ℂ^{2n} = q ⊕ ℂ^{2n−2}, so Λ^p = σ_p + qσ_{p−1} + σ_{p−2}
                        Ok(self.m_ext(p).add(&q.mul(&self.m_ext(p - 1))).add(&self.m_ext(p - 2)))
                    }
                }
            }
            Family::CayleyH => {
                let s = |x: &str| VirtualRep::symbol(g, x);
                match name {
                    "l1" => Ok(s("spin7").add(&VirtualRep::one(g))),
                    "l2" => Ok(s("forms:p=2").add(&s("forms:p=1")).add(&s("spin7"))),
                    "s9" => Ok(s("spin7").add(&s("forms:p=1")).add(&VirtualRep::one(g))),
                    "l3" => Err(capability_err!("the restriction of l3 to Spin(7) is not tabulated")),
                    _ => Err(unknown()),
                }
            }
        }
    }

    /// `r(γ)`, extended multiplicatively and linearly from the generators.
    pub fn restrict(&self, gamma: &VirtualRep) -> Result<VirtualRep> {
        if gamma.group != Group::K {
            return Err(input_err!("restriction needs a K-representation"));
        }
        let mut out = VirtualRep::zero(Group::M);
        for (m, c) in gamma.monomials() {
            self.check_twist(m.twist)?;
            let mut img = VirtualRep::twist(Group::M, m.twist);
            for (g, e) in m.generators() {
                img = img.mul(&self.restrict_symbol(g)?.pow(e));
            }
            out = out.add(&img.scale(c));
        }
        Ok(out)
    }

    /// A catalog M-type written in `M`-generators.
    pub fn m_form(&self, sigma: &MType) -> Result<VirtualRep> {
        let name = sigma.label.as_deref().ok_or_else(|| capability_err!("only catalog M-types have generator forms"))?;
        let g = Group::M;
        if name == "trivial" {
            return Ok(VirtualRep::one(g));
        }
        if self.space.family == Family::QuaternionicH {
            let q = VirtualRep::symbol(g, "q");
            return match name {
                "sigma1" => Ok(q.mul(&VirtualRep::symbol(g, "m1"))),
                "sigma'" => Ok(q.mul(&q).sub(&VirtualRep::one(g))),
                _ => Err(capability_err!("no generator form for '{name}'")),
            };
        }
        Ok(VirtualRep::symbol(g, name))
    }

    /// The catalog `σ`-admissible lift.
    pub fn admissible_lift(&self, sigma: &MType) -> Result<VirtualRep> {
        if sigma.space != self.space {
            return Err(input_err!("M-type belongs to {}, not {}", sigma.space.code(), self.space.code()));
        }
        let name = sigma.label.as_deref().ok_or_else(|| capability_err!("admissible lifts exist only for catalog M-types"))?;
        let k = |x: &str| VirtualRep::symbol(Group::K, x);
        let one = VirtualRep::one(Group::K);
        if name == "trivial" {
            return Ok(one);
        }
        let out = match (self.space.family, name) {
            (Family::RealH, "dirac") => k("s+"),
            (Family::RealH, _) => {
                let p: i64 = name.strip_prefix("forms:p=").and_then(|x| x.parse().ok()).ok_or_else(|| capability_err!("no lift for '{name}'"))?;
                (0..=p).fold(VirtualRep::zero(Group::K), |acc, l| {
                    let sign = if (p - l) % 2 == 0 { 1 } else { -1 };
                    acc.add(&VirtualRep::symbol(Group::K, &alloc::format!("l{l}")).scale(sign))
                })
            }
            (Family::ComplexH, "k/2") => k("K/2"),
            (Family::ComplexH, _) => {
                let (a, b) = name
                    .strip_prefix("pq:")
                    .and_then(|x| x.split_once(','))
                    .and_then(|(a, b)| Some((a.parse::<i64>().ok()?, b.parse::<i64>().ok()?)))
                    .ok_or_else(|| capability_err!("no lift for '{name}'"))?;
                let mut out = VirtualRep::zero(Group::K);
                for s in 0..=a {
                    for r in 0..=b {
                        let sign = if (r + s) % 2 == 0 { 1 } else { -1 };
                        let term = if a - s == 0 && b - r == 0 { one.clone() } else { k(&alloc::format!("L{},{}", a - s, b - r)) };
                        out = out.add(&term.scale(sign));
                    }
                }
                out
            }
            (Family::QuaternionicH, "sigma1") => k("p").mul(&k("l1")).sub(&k("l'")).sub(&one),
            (Family::QuaternionicH, "sigma'") => k("l'"),
            (Family::CayleyH, "forms:p=1") => k("s9").sub(&k("l1")),
            (Family::CayleyH, "forms:p=2") => k("l2").sub(&k("s9")).add(&one),
            (Family::CayleyH, "spin7") => k("l1").sub(&one),
            _ => return Err(capability_err!("no admissible lift tabulated for '{name}'")),
        };
        Ok(out)
    }

    /// Parity of a quaternionic representation, if every term has the same one.
    pub fn parity(&self, v: &VirtualRep) -> Result<Option<Parity>> {
        if self.space.family != Family::QuaternionicH {
            return Err(input_err!("parity is only defined for the quaternionic family"));
        }
        let mut seen = None;
        for (m, _) in v.monomials() {
            let mut odd = 0u32;
            for (g, e) in m.generators() {
                let deg = match g {
                    "p" | "q" => 1,
                    "l'" => 0,
                    _ => Self::index(g, "l").or_else(|| Self::index(g, "m")).ok_or_else(|| input_err!("unknown symbol '{g}'"))? as u32,
                };
                odd += deg * e;
            }
            let p = if odd.is_multiple_of(2) { Parity::Even } else { Parity::Odd };
            match seen {
                None => seen = Some(p),
                Some(s) if s != p => return Ok(None),
                _ => {}
            }
        }
        Ok(seen.or(Some(Parity::Even)))
    }
}

fn pq_symbol(a: i64, b: i64) -> VirtualRep {
    if a == 0 && b == 0 {
        VirtualRep::one(Group::M)
    } else {
        VirtualRep::symbol(Group::M, &alloc::format!("pq:{a},{b}"))
    }
}

/// `r(γ)` on the default cover.
pub fn restrict(gamma: &VirtualRep, space: &SpacePreset) -> Result<VirtualRep> {
    Branching::new(space).restrict(gamma)
}

/// The catalog `σ`-admissible lift on the default cover.
pub fn admissible_lift(sigma: &MType) -> Result<VirtualRep> {
    Branching::new(&sigma.space).admissible_lift(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rh(m: u32) -> SpacePreset {
        SpacePreset::new(Family::RealH, m).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let v = VirtualRep::parse(Group::K, "l2 - l1 + l0").unwrap();
        assert_eq!(v.to_string(), "1 - l1 + l2");
        let v = VirtualRep::parse(Group::K, "s+*l1-s-*l1+2l1^2").unwrap();
        assert_eq!(v.terms().len(), 3);
        assert!(v.terms().contains(&("l1^2".into(), 2)));
        let w = VirtualRep::parse(Group::K, "w^-3*w^2").unwrap();
        assert_eq!(w.terms(), alloc::vec![("w^-1".to_string(), 1)]);
        assert!(VirtualRep::parse(Group::K, "l1+").is_err());
        assert!(VirtualRep::parse(Group::K, "l1^-2").is_err());
    }

    #[test]
    fn real_examples() {
        let s = rh(3);
        let r = restrict(&VirtualRep::parse(Group::K, "l1").unwrap(), &s).unwrap();
        assert_eq!(r, VirtualRep::parse(Group::M, "forms:p=1 + 1").unwrap());
        let r = restrict(&VirtualRep::parse(Group::K, "l2").unwrap(), &s).unwrap();
        assert_eq!(r, VirtualRep::parse(Group::M, "forms:p=2 + forms:p=1").unwrap());
        assert!(restrict(&VirtualRep::parse(Group::K, "l3").unwrap(), &s).is_err());
        assert!(restrict(&VirtualRep::parse(Group::M, "l1").unwrap(), &s).is_err());
    }

    #[test]
    fn zero_terms_vanish() {
        let v = VirtualRep::parse(Group::K, "l1 - l1").unwrap();
        assert!(v.is_zero());
        assert_eq!(v.to_string(), "0");
    }
}
