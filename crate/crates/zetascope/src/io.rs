//! JSON and CSV formats.
//!
//! Rationals travel as `"a/b"` strings, complex numbers as `{"re", "im"}`
//! objects, and floats are written in scientific notation with 17 significant
//! digits, so output is byte-stable and parses back to the same bits.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::ser::{Formatter, PrettyFormatter};

use zetascope_core::catalog::Eigen;
use zetascope_core::fuchsian::{FuchsianGroup, FuchsianSpectrum, Mat2, Word};
use zetascope_core::geodesics::{GeodesicClass, Holonomy, LengthSpectrum};
use zetascope_core::mtype::MType;
use zetascope_core::rational::{format_q, from_f64_exact, parse_q};
use zetascope_core::space::SpacePreset;
use zetascope_core::zeta::{Divisor, DivisorPoint, Provenance, SpectralDatum, SpectralEntry};
use zetascope_core::{C64, Q};

use crate::error::{usage, CliError, Result};

/// `{:.16e}`; non-finite values have no JSON spelling and become `null`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

/// Pretty JSON with 17-digit floats.
struct Float17<'a>(PrettyFormatter<'a>);

impl Formatter for Float17<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt_f64(value).as_bytes())
    }
    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Float17(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    from_json(&read_text(path)?)
}

/// Writes to `path`, or to stdout when it is `None`.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes).and_then(|_| out.flush()).map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

/// Serde adapters for exact rationals: written as `"a/b"`, read from a
/// string or from a JSON number that is exactly representable (`0.5`).
pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let raw = RawRational::deserialize(d)?;
        raw.to_q().map_err(serde::de::Error::custom)
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RawRational {
        Text(String),
        Int(i64),
        Float(f64),
    }

    impl RawRational {
        pub(crate) fn to_q(&self) -> std::result::Result<Q, String> {
            match self {
                RawRational::Text(t) => parse_q(t).map_err(|e| e.to_string()),
                RawRational::Int(i) => Ok(Q::from_integer((*i).into())),
                RawRational::Float(f) => from_f64_exact(*f).ok_or_else(|| format!("{f} is not a finite rational")),
            }
        }
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
            let v: Vec<String> = xs.iter().map(format_q).collect();
            v.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
            let raw = Vec::<RawRational>::deserialize(d)?;
            raw.iter().map(|r| r.to_q().map_err(serde::de::Error::custom)).collect()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cx {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<C64> for Cx {
    fn from(z: C64) -> Self {
        Cx { re: z.re, im: z.im }
    }
}

impl From<Cx> for C64 {
    fn from(z: Cx) -> Self {
        C64::new(z.re, z.im)
    }
}

/// Parses `2`, `-0.5`, `3i`, `0.61+0.2i`, `-0.2-0.9i`.
pub fn parse_complex(text: &str) -> Result<C64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || usage!("cannot read '{text}' as a complex number");
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return s.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    // split before the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        x => x,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.trim_start_matches('+').parse().map_err(|_| bad())?;
    Ok(C64::new(re, im))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceDoc {
    pub code: String,
    pub family: String,
    pub rank_param: u32,
    pub dim_real: u32,
    #[serde(with = "rational")]
    pub rho: Q,
    #[serde(with = "rational")]
    pub period_t: Q,
    pub m_alpha: u32,
    pub m_two_alpha: u32,
    pub chi_dual: u32,
    pub positive_roots: usize,
    pub dual_geodesic_lengths: Vec<f64>,
}

impl SpaceDoc {
    pub fn new(s: &SpacePreset, geodesics: usize) -> Result<Self> {
        Ok(SpaceDoc {
            code: s.code(),
            family: format!("{:?}", s.family),
            rank_param: s.rank_param,
            dim_real: s.dim_real,
            rho: s.rho.clone(),
            period_t: s.period_t.clone(),
            m_alpha: s.m_alpha,
            m_two_alpha: s.m_two_alpha,
            chi_dual: s.chi_dual,
            positive_roots: s.root_count(),
            dual_geodesic_lengths: s.closed_geodesic_lengths_dual(geodesics)?,
        })
    }
}

/// An M-type in a file: a catalog label, or an explicit highest weight.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(with = "rational::vec")]
    pub mu_sigma: Vec<Q>,
    #[serde(with = "rational")]
    pub eps_alpha: Q,
}

impl SigmaDoc {
    pub fn new(sigma: &MType) -> Self {
        SigmaDoc { label: sigma.label.clone(), mu_sigma: sigma.mu.clone(), eps_alpha: sigma.eps_alpha.clone() }
    }

    pub fn to_mtype(&self, space: &SpacePreset) -> Result<MType> {
        Ok(MType::new(space, self.mu_sigma.clone(), self.eps_alpha.clone(), self.label.clone())?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeDoc {
    #[serde(with = "rational")]
    pub t: Q,
    #[serde(with = "rational")]
    pub eps: Q,
    #[serde(with = "rational")]
    pub first_positive: Q,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaReport {
    pub name: String,
    pub sigma: SigmaDoc,
    pub dominant: bool,
    #[serde(with = "rational")]
    pub dimension: Q,
    #[serde(with = "rational")]
    pub shift_constant: Q,
    pub lattice: LatticeDoc,
    /// Coefficients of `P(λ, σ)` from the constant term up.
    #[serde(with = "rational::vec")]
    pub weyl_p: Vec<Q>,
    #[serde(with = "rational::vec")]
    pub weyl_q: Vec<Q>,
}

impl SigmaReport {
    pub fn new(sigma: &MType) -> Result<Self> {
        let lat = sigma.lattice()?;
        let w = sigma.weyl_polynomial()?;
        Ok(SigmaReport {
            name: sigma.name(),
            sigma: SigmaDoc::new(sigma),
            dominant: sigma.is_dominant(),
            dimension: sigma.dimension(),
            shift_constant: sigma.shift_constant()?,
            lattice: LatticeDoc { t: lat.t.clone(), eps: lat.eps.clone(), first_positive: lat.first_positive() },
            weyl_p: w.p.coeffs().to_vec(),
            weyl_q: w.q.coeffs().to_vec(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolonomyDoc {
    pub alpha: Vec<f64>,
    #[serde(default)]
    pub two_alpha: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassDoc {
    pub length: f64,
    pub n_gamma: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holonomy: Option<HolonomyDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tr_sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
}

/// A length spectrum file. Holonomy is omitted when it is the identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct LengthSpectrumDoc {
    pub space: String,
    pub cutoff_L: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vol_M: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_M: Option<i64>,
    pub classes: Vec<ClassDoc>,
}

impl LengthSpectrumDoc {
    pub fn new(sp: &LengthSpectrum, words: Option<(&FuchsianGroup, &[Word])>) -> Self {
        let identity = Holonomy::identity(&sp.space);
        let classes = sp
            .classes
            .iter()
            .enumerate()
            .map(|(i, c)| ClassDoc {
                length: c.length,
                n_gamma: c.n_gamma,
                holonomy: (c.holonomy != identity)
                    .then(|| HolonomyDoc { alpha: c.holonomy.alpha.clone(), two_alpha: c.holonomy.two_alpha.clone() }),
                tr_sigma: c.tr_sigma,
                word: words.and_then(|(g, ws)| ws.get(i).map(|w| g.format_word(w))),
            })
            .collect();
        LengthSpectrumDoc { space: sp.space.code(), cutoff_L: sp.cutoff_l, vol_M: sp.vol_m, chi_M: sp.chi_m, classes }
    }

    pub fn from_fuchsian(g: &FuchsianGroup, out: &FuchsianSpectrum) -> Self {
        Self::new(&out.spectrum, Some((g, &out.words)))
    }

    pub fn to_spectrum(&self) -> Result<LengthSpectrum> {
        let space = SpacePreset::from_code(&self.space)?;
        let classes = self
            .classes
            .iter()
            .map(|c| {
                let h = c.holonomy.as_ref().map(|h| Holonomy { alpha: h.alpha.clone(), two_alpha: h.two_alpha.clone() });
                GeodesicClass::new(&space, c.length, c.n_gamma, h, c.tr_sigma)
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(LengthSpectrum::new(space, classes, self.cutoff_L, self.vol_M, self.chi_M)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralEntryDoc {
    pub lambda: Cx,
    pub mult: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SpectralDoc {
    pub entries: Vec<SpectralEntryDoc>,
}

impl SpectralDoc {
    pub fn new(d: &SpectralDatum) -> Self {
        SpectralDoc { entries: d.entries.iter().map(|e| SpectralEntryDoc { lambda: e.lambda.into(), mult: e.mult }).collect() }
    }

    pub fn to_datum(&self) -> Result<SpectralDatum> {
        Ok(SpectralDatum::new(self.entries.iter().map(|e| SpectralEntry { lambda: e.lambda.into(), mult: e.mult }).collect())?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointDoc {
    pub re: f64,
    pub im: f64,
    pub order: i64,
    pub provenance: ProvenanceDoc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProvenanceDoc {
    Spectral,
    DualTopological,
    Combined,
}

impl From<Provenance> for ProvenanceDoc {
    fn from(p: Provenance) -> Self {
        match p {
            Provenance::Spectral => ProvenanceDoc::Spectral,
            Provenance::DualTopological => ProvenanceDoc::DualTopological,
            Provenance::Combined => ProvenanceDoc::Combined,
        }
    }
}

impl From<ProvenanceDoc> for Provenance {
    fn from(p: ProvenanceDoc) -> Self {
        match p {
            ProvenanceDoc::Spectral => Provenance::Spectral,
            ProvenanceDoc::DualTopological => Provenance::DualTopological,
            ProvenanceDoc::Combined => Provenance::Combined,
        }
    }
}

/// A divisor as an array of points sorted by `(Re, Im)`.
pub fn divisor_doc(d: &Divisor) -> Vec<PointDoc> {
    let mut v: Vec<PointDoc> = d
        .points
        .iter()
        .map(|p| PointDoc { re: p.location.re, im: p.location.im, order: p.order, provenance: p.provenance.into() })
        .collect();
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    v
}

pub fn divisor_from_doc(v: &[PointDoc]) -> Divisor {
    Divisor::merged(
        v.iter()
            .map(|p| DivisorPoint { location: C64::new(p.re, p.im), order: p.order, provenance: p.provenance.into() })
            .collect(),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenDoc {
    pub value: f64,
    pub mult: u64,
}

pub fn eigen_list(v: &[EigenDoc]) -> Vec<Eigen> {
    v.iter().map(|e| Eigen { value: e.value, mult: e.mult }).collect()
}

/// A real number given either as a JSON number or as a decimal string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Float(f64),
    Text(String),
}

impl Number {
    pub fn value(&self) -> Result<f64> {
        match self {
            Number::Float(x) => Ok(*x),
            Number::Text(t) => t.trim().parse().map_err(|_| usage!("cannot read '{t}' as a number")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorDoc {
    pub name: String,
    pub matrix: [[Number; 2]; 2],
}

/// Generators of a Fuchsian group, with optional relators written as lists
/// of letters (`g0`, `g1^-1`, …) and manifold metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct GeneratorsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default = "default_space")]
    pub space: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_M: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vol_M: Option<Number>,
    #[serde(default)]
    pub relators: Vec<Vec<String>>,
    pub generators: Vec<GeneratorDoc>,
}

fn default_space() -> String {
    "RH2".into()
}

impl GeneratorsDoc {
    pub fn group(&self) -> Result<FuchsianGroup> {
        if self.space != "RH2" {
            return Err(usage!("Fuchsian generators describe RH2 surfaces, not {}", self.space));
        }
        let gens = self
            .generators
            .iter()
            .map(|g| {
                let m = &g.matrix;
                let mat: Mat2 = [m[0][0].value()?, m[0][1].value()?, m[1][0].value()?, m[1][1].value()?];
                Ok((g.name.clone(), mat))
            })
            .collect::<Result<Vec<_>>>()?;
        let group = FuchsianGroup::new(gens)?;
        let relators = self
            .relators
            .iter()
            .map(|r| r.iter().map(|l| group.parse_letter(l)).collect::<std::result::Result<Word, _>>())
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(if relators.is_empty() { group } else { group.with_relators(relators)? })
    }

    pub fn vol(&self) -> Result<Option<f64>> {
        self.vol_M.as_ref().map(Number::value).transpose()
    }
}

/// The genus-2 octagon group shipped with the crate.
pub const OCTAGON_JSON: &str = include_str!("../data/octagon.json");

pub fn octagon() -> Result<GeneratorsDoc> {
    from_json(OCTAGON_JSON)
}

/// One row of a grid evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub t: Cx,
    pub value: Cx,
    pub flag: bool,
}

/// CSV with columns `t,Re,Im,flag` (real grids) or `t_re,t_im,Re,Im,flag`.
pub fn grid_csv(rows: &[GridRow]) -> Result<String> {
    let complex = rows.iter().any(|r| r.t.im != 0.0);
    let mut w = csv::Writer::from_writer(Vec::new());
    if complex {
        w.write_record(["t_re", "t_im", "Re", "Im", "flag"])?;
    } else {
        w.write_record(["t", "Re", "Im", "flag"])?;
    }
    for r in rows {
        let flag = if r.flag { "1" } else { "0" };
        if complex {
            w.write_record([fmt_f64(r.t.re), fmt_f64(r.t.im), fmt_f64(r.value.re), fmt_f64(r.value.im), flag.into()])?;
        } else {
            w.write_record([fmt_f64(r.t.re), fmt_f64(r.value.re), fmt_f64(r.value.im), flag.into()])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::io("<csv>", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV of ASCII fields"))
}

/// Reads [`grid_csv`] output back.
pub fn parse_grid_csv(text: &str) -> Result<Vec<GridRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let complex = r.headers()?.len() == 5;
    let num = |s: &str| -> Result<f64> {
        if s == "null" {
            Ok(f64::NAN)
        } else {
            s.parse().map_err(|_| usage!("bad CSV number '{s}'"))
        }
    };
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let f: Vec<&str> = rec.iter().collect();
        let row = if complex {
            GridRow { t: Cx { re: num(f[0])?, im: num(f[1])? }, value: Cx { re: num(f[2])?, im: num(f[3])? }, flag: f[4] == "1" }
        } else {
            GridRow { t: Cx { re: num(f[0])?, im: 0.0 }, value: Cx { re: num(f[1])?, im: num(f[2])? }, flag: f[3] == "1" }
        };
        out.push(row);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("2").unwrap(), C64::new(2.0, 0.0));
        assert_eq!(parse_complex("0.61+0.2i").unwrap(), C64::new(0.61, 0.2));
        assert_eq!(parse_complex("-0.2 - 0.9i").unwrap(), C64::new(-0.2, -0.9));
        assert_eq!(parse_complex("3i").unwrap(), C64::new(0.0, 3.0));
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+2e-1i").unwrap(), C64::new(1e-3, 0.2));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(to_json(&[1.5f64]).unwrap(), "[\n  1.5000000000000000e0\n]\n");
        let back: Vec<f64> = from_json(&to_json(&[0.1f64, -3.05714e-300]).unwrap()).unwrap();
        assert_eq!(back, vec![0.1, -3.05714e-300]);
    }

    #[test]
    fn octagon_parses() {
        let doc = octagon().unwrap();
        assert_eq!(doc.generators.len(), 4);
        let g = doc.group().unwrap();
        assert_eq!(g.rank(), 4);
        assert!((doc.vol().unwrap().unwrap() - 4.0 * std::f64::consts::PI).abs() < 1e-14);
    }
}
