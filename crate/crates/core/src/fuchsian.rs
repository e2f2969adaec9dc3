//! Length spectra of surface groups by enumeration of reduced words in a
//! finitely generated subgroup of `SL(2, ℝ)`.
//!
//! Letters are numbered `2i` for the generator `gᵢ` and `2i + 1` for `gᵢ⁻¹`.
//! Enumeration is split into independent prefix blocks ([`Prefix`]) so a
//! caller can farm them out to threads; [`FuchsianGroup::collect`] is the
//! single-threaded reduction into conjugacy classes.
//!
//! Class identification is heuristic (exact conjugacy in one-relator groups
//! is out of scope): words are taken up to cyclic rotation, words containing
//! more than half of a relator are dropped as non-geodesic, words related by
//! swapping one half of a relator for the inverse of the other half are
//! merged, and merged words must agree in trace to `1e−9`.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{input_err, Error, Result};
use crate::geodesics::{GeodesicClass, LengthSpectrum};
use crate::space::{Family, SpacePreset};

/// Row-major `[a, b, c, d]`.
pub type Mat2 = [f64; 4];
/// A word in the letters `0..2·rank`.
pub type Word = Vec<u8>;

/// Absolute trace tolerance for class agreement and for `±I` detection.
pub const TRACE_TOL: f64 = 1e-9;

pub fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

pub fn mat_inv(x: &Mat2) -> Mat2 {
    [x[3], -x[1], -x[2], x[0]]
}

fn is_plus_minus_identity(x: &Mat2) -> bool {
    let off = x[1].abs().max(x[2].abs());
    off < TRACE_TOL && ((x[0] - 1.0).abs().max((x[3] - 1.0).abs()) < TRACE_TOL || (x[0] + 1.0).abs().max((x[3] + 1.0).abs()) < TRACE_TOL)
}

/// Translation length `2 arccosh(|tr|/2)` of a hyperbolic element.
pub fn length_from_trace(tr: f64) -> f64 {
    2.0 * (tr.abs() / 2.0).acosh()
}

#[inline]
pub fn inverse_letter(l: u8) -> u8 {
    l ^ 1
}

pub fn inverse_word(w: &[u8]) -> Word {
    w.iter().rev().map(|&l| inverse_letter(l)).collect()
}

/// Lexicographically least rotation.
pub fn canonical_rotation(w: &[u8]) -> Word {
    let n = w.len();
    (0..n)
        .map(|s| w[s..].iter().chain(&w[..s]).copied().collect::<Word>())
        .min()
        .unwrap_or_default()
}

fn is_least_rotation(w: &[u8]) -> bool {
    let n = w.len();
    (1..n).all(|s| {
        for k in 0..n {
            let (a, b) = (w[k], w[(s + k) % n]);
            if a != b {
                return a < b;
            }
        }
        true
    })
}

/// Free and cyclic reduction.
pub fn cyclically_reduce(w: &[u8]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&inverse_letter(l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    let (mut i, mut j) = (0, out.len());
    while j - i >= 2 && out[i] == inverse_letter(out[j - 1]) {
        i += 1;
        j -= 1;
    }
    out[i..j].to_vec()
}

/// `(u, j)` with `w = u^j` and `j` maximal.
pub fn root_of_word(w: &[u8]) -> (Word, usize) {
    let n = w.len();
    for p in 1..=n {
        if n.is_multiple_of(p) && (p..n).all(|k| w[k] == w[k - p]) {
            return (w[..p].to_vec(), n / p);
        }
    }
    (w.to_vec(), 1)
}

/// A block of the enumeration: the word itself, and all its reduced
/// extensions when `extend` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prefix {
    pub word: Word,
    pub extend: bool,
}

/// Default bound on conjugator length when splitting equal-trace clusters.
pub const CONJUGATOR_WORD: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnumerationParams {
    pub max_length: f64,
    pub max_word: usize,
    /// Longest conjugator tried when deciding whether two classes of equal
    /// trace coincide.
    pub conjugator_word: usize,
}

impl EnumerationParams {
    pub fn new(max_length: f64, max_word: usize) -> Self {
        EnumerationParams { max_length, max_word, conjugator_word: CONJUGATOR_WORD }
    }
}

/// A cyclically reduced hyperbolic word in least rotation.
#[derive(Clone, Debug, PartialEq)]
pub struct Hit {
    pub word: Word,
    pub trace: f64,
}

/// Partial result of one prefix block.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Block {
    pub hits: Vec<Hit>,
    /// Cyclically reduced words evaluating to `±I`, in least rotation.
    pub relators: Vec<Word>,
    pub words_examined: u64,
    pub elliptic: u64,
    pub parabolic: u64,
}

impl Block {
    fn merge(&mut self, other: Block) {
        self.hits.extend(other.hits);
        self.relators.extend(other.relators);
        self.words_examined += other.words_examined;
        self.elliptic += other.elliptic;
        self.parabolic += other.parabolic;
    }
}

/// The enumerated classes together with their word representatives.
#[derive(Clone, Debug, PartialEq)]
pub struct FuchsianSpectrum {
    pub spectrum: LengthSpectrum,
    /// Least representative of each class, aligned with `spectrum.classes`.
    pub words: Vec<Word>,
    /// Relators in use (least rotations; inverses and rotations implied).
    pub relators: Vec<Word>,
    pub words_examined: u64,
    /// Cyclic words skipped as elliptic or parabolic, one count per rotation.
    pub elliptic: u64,
    pub parabolic: u64,
    /// Minimal `|tr|` over all enumerated hyperbolic words.
    pub min_abs_trace: Option<f64>,
}

/// Generators of a subgroup of `SL(2, ℝ)`, assumed cocompact and torsion-free.
#[derive(Clone, Debug, PartialEq)]
pub struct FuchsianGroup {
    names: Vec<String>,
    letters: Vec<Mat2>,
    relators: Vec<Word>,
}

impl FuchsianGroup {
    pub fn new(generators: Vec<(String, Mat2)>) -> Result<Self> {
        if generators.is_empty() {
            return Err(input_err!("empty generator list"));
        }
        if generators.len() > 127 {
            return Err(input_err!("at most 127 generators are supported"));
        }
        let mut names = Vec::new();
        let mut letters = Vec::new();
        for (name, m) in generators {
            if m.iter().any(|x| !x.is_finite()) {
                return Err(input_err!("generator {name} has non-finite entries"));
            }
            let det = m[0] * m[3] - m[1] * m[2];
            if (det - 1.0).abs() > 1e-9 {
                return Err(input_err!("generator {name} has determinant {det}, expected 1"));
            }
            if is_plus_minus_identity(&m) {
                return Err(input_err!("generator {name} is ±I"));
            }
            letters.push(m);
            letters.push(mat_inv(&m));
            names.push(name);
        }
        Ok(FuchsianGroup { names, letters, relators: Vec::new() })
    }

    /// Adds known relators; each must evaluate to `±I`.
    pub fn with_relators(mut self, relators: Vec<Word>) -> Result<Self> {
        for r in relators {
            if r.iter().any(|&l| l as usize >= self.letters.len()) {
                return Err(input_err!("relator uses an unknown letter"));
            }
            let r = cyclically_reduce(&r);
            if r.is_empty() {
                return Err(input_err!("relator is freely trivial"));
            }
            if !is_plus_minus_identity(&self.eval(&r)) {
                return Err(input_err!("relator {} does not evaluate to ±I", self.format_word(&r)));
            }
            self.relators.push(canonical_rotation(&r));
        }
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn eval(&self, w: &[u8]) -> Mat2 {
        w.iter().fold([1.0, 0.0, 0.0, 1.0], |m, &l| mat_mul(&m, &self.letters[l as usize]))
    }

    /// Parses a letter such as `g0`, `g0^-1` or `g0'`.
    pub fn parse_letter(&self, s: &str) -> Result<u8> {
        let s = s.trim();
        let (base, inv) = if let Some(b) = s.strip_suffix("^-1") {
            (b, true)
        } else if let Some(b) = s.strip_suffix('\'') {
            (b, true)
        } else {
            (s, false)
        };
        let i = self
            .names
            .iter()
            .position(|n| n == base)
            .ok_or_else(|| input_err!("unknown generator '{base}'"))?;
        Ok(2 * i as u8 + inv as u8)
    }

    pub fn format_word(&self, w: &[u8]) -> String {
        let parts: Vec<String> = w
            .iter()
            .map(|&l| {
                let n = &self.names[(l / 2) as usize];
                if l % 2 == 1 {
                    format!("{n}^-1")
                } else {
                    n.clone()
                }
            })
            .collect();
        parts.join(" ")
    }

    /// All blocks for a split at `depth` letters (clamped to `max_word`).
    pub fn prefixes(&self, depth: usize, max_word: usize) -> Vec<Prefix> {
        let depth = depth.clamp(1, max_word.max(1));
        let mut out = Vec::new();
        let mut frontier: Vec<Word> = vec![Vec::new()];
        for level in 1..=depth {
            let mut next = Vec::new();
            for w in &frontier {
                for l in 0..self.letters.len() as u8 {
                    if w.last() == Some(&inverse_letter(l)) {
                        continue;
                    }
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
            let extend = level == depth;
            out.extend(next.iter().map(|w| Prefix { word: w.clone(), extend }));
            frontier = next;
        }
        out
    }

    /// Enumerates one block.
    pub fn enumerate_block(&self, prefix: &Prefix, params: &EnumerationParams) -> Block {
        let mut block = Block::default();
        if prefix.word.is_empty() || prefix.word.len() > params.max_word {
            return block;
        }
        let mut word = prefix.word.clone();
        let m = self.eval(&word);
        let limit = if prefix.extend { params.max_word } else { word.len() };
        self.dfs(&mut word, m, limit, params, &mut block);
        block
    }

    fn dfs(&self, word: &mut Word, m: Mat2, limit: usize, params: &EnumerationParams, out: &mut Block) {
        self.visit(word, &m, params, out);
        if word.len() >= limit {
            return;
        }
        let last = *word.last().expect("non-empty word");
        for l in 0..self.letters.len() as u8 {
            if l == inverse_letter(last) {
                continue;
            }
            let next = mat_mul(&m, &self.letters[l as usize]);
            word.push(l);
            self.dfs(word, next, limit, params, out);
            word.pop();
        }
    }

    fn visit(&self, word: &[u8], m: &Mat2, params: &EnumerationParams, out: &mut Block) {
        out.words_examined += 1;
        let n = word.len();
        if n >= 2 && word[0] == inverse_letter(word[n - 1]) {
            return;
        }
        if is_plus_minus_identity(m) {
            if is_least_rotation(word) {
                out.relators.push(word.to_vec());
            }
            return;
        }
        let tr = m[0] + m[3];
        let a = tr.abs();
        if a < 2.0 - TRACE_TOL {
            out.elliptic += 1;
            return;
        }
        if a <= 2.0 + TRACE_TOL {
            out.parabolic += 1;
            return;
        }
        if length_from_trace(tr) <= params.max_length * (1.0 + 1e-12) && is_least_rotation(word) {
            out.hits.push(Hit { word: word.to_vec(), trace: tr });
        }
    }

    /// Single-threaded enumeration over all blocks.
    pub fn enumerate(&self, params: &EnumerationParams) -> Result<FuchsianSpectrum> {
        check_params(params)?;
        let blocks = self
            .prefixes(1, params.max_word)
            .iter()
            .map(|p| self.enumerate_block(p, params))
            .collect::<Vec<_>>();
        self.collect(blocks, params)
    }

    /// Reduces block results into conjugacy classes.
    pub fn collect(&self, blocks: Vec<Block>, params: &EnumerationParams) -> Result<FuchsianSpectrum> {
        check_params(params)?;
        let mut all = Block::default();
        for b in blocks {
            all.merge(b);
        }
        let min_abs_trace = all.hits.iter().map(|h| h.trace.abs()).reduce(f64::min);

        let mut base: BTreeSet<Word> = self.relators.iter().cloned().collect();
        base.extend(all.relators.iter().cloned());
        // Keep only relators that are not freely consequences of shorter
        // ones being rotated or inverted: all rotations of r and r⁻¹.
        let mut rel_words: BTreeSet<Word> = BTreeSet::new();
        for r in &base {
            for w in [r.clone(), inverse_word(r)] {
                for s in 0..w.len() {
                    rel_words.insert(w[s..].iter().chain(&w[..s]).copied().collect());
                }
            }
        }
        let rel_words: Vec<Word> = rel_words.into_iter().collect();
        let used_relators: Vec<Word> = {
            let mut seen = BTreeSet::new();
            let mut out = Vec::new();
            for r in &base {
                let key = canonical_rotation(r).min(canonical_rotation(&inverse_word(r)));
                if seen.insert(key.clone()) {
                    out.push(key);
                }
            }
            out
        };

        let traces: BTreeMap<Word, f64> = all.hits.iter().map(|h| (h.word.clone(), h.trace)).collect();
        let mut visited: BTreeSet<Word> = BTreeSet::new();
        let mut cands: Vec<Candidate> = Vec::new();
        for (w, &tr) in &traces {
            if visited.contains(w) {
                continue;
            }
            let (members, minimal) = self.swap_class(w, &rel_words);
            for v in &members {
                visited.insert(v.clone());
            }
            if !minimal {
                continue;
            }
            for v in &members {
                if let Some(&t) = traces.get(v) {
                    if (t - tr).abs() > TRACE_TOL {
                        return Err(Error::Internal(format!(
                            "words {} and {} are related by relators but have traces {t} and {tr}",
                            self.format_word(v),
                            self.format_word(w)
                        )));
                    }
                }
            }
            let length = length_from_trace(tr);
            let mut n_gamma = 1u32;
            for v in &members {
                let (u, j) = root_of_word(v);
                if j >= 2 {
                    let tu = self.eval(&u);
                    let tu = tu[0] + tu[3];
                    if tu.abs() > 2.0 + TRACE_TOL {
                        let ratio = length / length_from_trace(tu);
                        if (ratio - j as f64).abs() <= 1e-9 * j as f64 {
                            n_gamma = n_gamma.max(j as u32);
                        }
                    }
                }
            }
            let word = members.iter().next().cloned().unwrap_or_default();
            cands.push(Candidate { matrix: self.eval(&word), word, trace: tr, n_gamma });
        }
        let cands = self.merge_conjugates(cands, params.conjugator_word);

        let space = SpacePreset::new(Family::RealH, 1)?;
        let mut records: Vec<(f64, Word, GeodesicClass)> = Vec::new();
        for c in cands {
            let length = length_from_trace(c.trace);
            records.push((length, c.word, GeodesicClass::new(&space, length, c.n_gamma, None, None)?));
        }
        records.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(core::cmp::Ordering::Equal).then_with(|| a.1.cmp(&b.1)));
        let words = records.iter().map(|r| r.1.clone()).collect();
        let classes = records.into_iter().map(|r| r.2).collect();
        let spectrum = LengthSpectrum::new(space, classes, params.max_length, None, None)?;
        Ok(FuchsianSpectrum {
            spectrum,
            words,
            relators: used_relators,
            words_examined: all.words_examined,
            elliptic: all.elliptic,
            parabolic: all.parabolic,
            min_abs_trace,
        })
    }

    /// Splits clusters of equal `|tr|` into conjugacy classes by searching
    /// for a conjugator of at most `max_len` letters.
    fn merge_conjugates(&self, mut cands: Vec<Candidate>, max_len: usize) -> Vec<Candidate> {
        cands.sort_by(|a, b| a.trace.abs().partial_cmp(&b.trace.abs()).unwrap_or(core::cmp::Ordering::Equal));
        let conj: Vec<(Mat2, Mat2)> = self
            .prefixes(max_len, max_len)
            .iter()
            .map(|p| {
                let m = self.eval(&p.word);
                (m, mat_inv(&m))
            })
            .collect();
        let mut out: Vec<Candidate> = Vec::new();
        let mut start = 0;
        while start < cands.len() {
            let mut end = start + 1;
            while end < cands.len() && cands[end].trace.abs() - cands[end - 1].trace.abs() <= TRACE_TOL {
                end += 1;
            }
            let cluster = &cands[start..end];
            let mut owner: Vec<usize> = (0..cluster.len()).collect();
            for i in 0..cluster.len() {
                if owner[i] != i {
                    continue;
                }
                let open: Vec<usize> = (i + 1..cluster.len()).filter(|&j| owner[j] == j).collect();
                if open.is_empty() {
                    continue;
                }
                for (c, ci) in &conj {
                    let m = mat_mul(&mat_mul(c, &cluster[i].matrix), ci);
                    for &j in &open {
                        if owner[j] == j && same_projective(&m, &cluster[j].matrix) {
                            owner[j] = i;
                        }
                    }
                }
            }
            for i in 0..cluster.len() {
                if owner[i] != i {
                    continue;
                }
                let mut c = cluster[i].clone();
                for j in i + 1..cluster.len() {
                    if owner[j] == i {
                        c.n_gamma = c.n_gamma.max(cluster[j].n_gamma);
                        if cluster[j].word < c.word {
                            c.word = cluster[j].word.clone();
                        }
                    }
                }
                out.push(c);
            }
            start = end;
        }
        out
    }

    /// Closure of `w` under half-relator swaps, as least rotations, and
    /// whether every member is a shortest representative.
    fn swap_class(&self, w: &[u8], rel_words: &[Word]) -> (BTreeSet<Word>, bool) {
        let mut members = BTreeSet::new();
        let mut queue = VecDeque::new();
        members.insert(w.to_vec());
        queue.push_back(w.to_vec());
        let mut minimal = true;
        while let Some(v) = queue.pop_front() {
            let n = v.len();
            for r in rel_words {
                let len = r.len();
                let more_than_half = len / 2 + 1;
                for s in 0..n {
                    let matches = |k: usize| (0..k).all(|t| v[(s + t) % n] == r[t]);
                    if more_than_half <= n && matches(more_than_half) {
                        minimal = false;
                    }
                    let h = len / 2;
                    if len % 2 == 0 && h <= n && matches(h) {
                        let mut nw = inverse_word(&r[h..]);
                        nw.extend((h..n).map(|t| v[(s + t) % n]));
                        let red = cyclically_reduce(&nw);
                        if red.len() < n || red.is_empty() {
                            minimal = false;
                            continue;
                        }
                        let key = canonical_rotation(&red);
                        if members.insert(key.clone()) {
                            queue.push_back(key);
                        }
                    }
                }
            }
        }
        (members, minimal)
    }
}

#[derive(Clone, Debug)]
struct Candidate {
    word: Word,
    matrix: Mat2,
    trace: f64,
    n_gamma: u32,
}

/// Equality in `PSL(2, ℝ)` up to rounding relative to the entry size.
fn same_projective(x: &Mat2, y: &Mat2) -> bool {
    let scale = y.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-7 * scale;
    (0..4).all(|k| (x[k] - y[k]).abs() <= tol) || (0..4).all(|k| (x[k] + y[k]).abs() <= tol)
}

fn check_params(p: &EnumerationParams) -> Result<()> {
    if p.max_word < 1 {
        return Err(input_err!("max_word must be at least 1"));
    }
    if !(p.max_length > 0.0) || !p.max_length.is_finite() {
        return Err(input_err!("max_length must be positive and finite"));
    }
    Ok(())
}
