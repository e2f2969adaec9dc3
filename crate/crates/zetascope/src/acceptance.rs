//! The acceptance suite: one pass/fail verdict per criterion, each measured
//! against an independent oracle.
//!
//! Criteria 7 and 8 contain a requirement that the mathematics does not
//! satisfy (a zero constant in the Ruelle identity; one rearranged closed
//! form for odd-degree real forms). They report FAIL with the measured
//! discrepancy; [`KNOWN_FAILURES`] records why.

use std::time::{Duration, Instant};

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zetascope_core::catalog::{
    forms_divisor_complex, forms_divisor_real, quaternionic_sigma1_divisor, PrimitiveHodge, QuaternionicEigen, TopologyInput,
};
use zetascope_core::dual::{dual_volume, heat_coefficients, reflection_exponent, DetSign, DualDet, DualSpectrum, DualTheta, Side, TestFunction};
use zetascope_core::fuchsian::{length_from_trace, EnumerationParams};
use zetascope_core::geodesics::{GeodesicClass, LengthSpectrum};
use zetascope_core::mtype::MType;
use zetascope_core::rational::{factorial, q, qi, to_f64, Q};
use zetascope_core::ruelle::{h_polynomial, ruelle_functional_check, ruelle_offset};
use zetascope_core::space::{Family, SpacePreset};
use zetascope_core::zeta::{
    euler_product, log_derivative, numerical_log_derivative, partial_fraction_moment, selberg_divisor, trace_formula_residual,
    SpectralDatum, Window,
};
use zetascope_core::C64;

use crate::{io, parallel};

/// Criteria expected to print FAIL, with the reason.
pub const KNOWN_FAILURES: [(u8, &str); 2] = [
    (7, "the Ruelle identity holds with C = -(Tn/2π)χ(X_d)ln 2, not C = 0"),
    (8, "the rearranged real-forms order Σ_{l<n-p}(-1)^{l+1}b_l has the wrong sign for odd p"),
];

#[derive(Clone, Debug)]
pub struct Verdict {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    /// A failure that is fully accounted for by [`KNOWN_FAILURES`]: every
    /// other part of the criterion holds.
    pub explained: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl Verdict {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2}: {} — {}: {} [{:.3} s]",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

struct Check {
    pass: bool,
    explained: bool,
    detail: String,
}

impl Check {
    fn new(pass: bool, detail: String) -> Self {
        Check { pass, explained: false, detail }
    }
}

type Outcome = zetascope_core::Result<Check>;

/// Default seed of the randomized criterion.
pub const SEED: u64 = 20_261_016;

/// Runs every criterion; `threads` bounds the parallel pool of criterion 9.
pub fn run_all(threads: Option<usize>) -> Vec<Verdict> {
    run_seeded(threads, SEED)
}

pub fn run_seeded(threads: Option<usize>, seed: u64) -> Vec<Verdict> {
    let workers = threads.unwrap_or(4).max(1);
    vec![
        judge(1, "shift constants", Some(1.0), shift_constants),
        judge(2, "dual theta", Some(5.0), dual_theta),
        judge(3, "dual trace formula", Some(10.0), dual_trace),
        judge(4, "heat-coefficient identity", None, heat_identity),
        judge(5, "reflection formula", Some(10.0), reflection),
        judge(6, "Euler product vs log-derivative", None, euler_consistency),
        judge(7, "H(s) constancy and Ruelle identity", None, ruelle_constancy),
        judge(8, "divisor golden tests", None, divisor_golden),
        judge(9, "Fuchsian systole", None, || fuchsian_systole(workers)),
        judge(10, "residue integrality", None, || integrality(seed)),
    ]
}

fn judge(id: u8, name: &'static str, budget: Option<f64>, f: impl FnOnce() -> Outcome) -> Verdict {
    let t0 = Instant::now();
    let out = f();
    let elapsed = t0.elapsed();
    let Check { mut pass, mut explained, mut detail } = out.unwrap_or_else(|e| Check::new(false, format!("error: {e}")));
    if let Some(b) = budget {
        if elapsed.as_secs_f64() >= b {
            pass = false;
            explained = false;
            detail.push_str(&format!("; over the {b} s budget"));
        }
    }
    Verdict { id, name, pass, explained: explained && !pass, detail, elapsed }
}

fn sp(f: Family, r: u32) -> zetascope_core::Result<SpacePreset> {
    SpacePreset::new(f, r)
}

fn shift_constants() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut check = |sigma: &MType, want: Q| -> zetascope_core::Result<()> {
        checked += 1;
        let got = sigma.shift_constant()?;
        if got != want {
            bad.push(format!("{} on {}: {got} != {want}", sigma.name(), sigma.space.code()));
        }
        Ok(())
    };
    for m in 1..=3u32 {
        let s = sp(Family::RealH, m)?;
        let n = 2 * m as i64;
        for p in 0..m {
            let sigma = if p == 0 { MType::trivial(&s) } else { MType::forms(&s, p)? };
            let x = q(n - 1 - 2 * p as i64, 2);
            check(&sigma, &x * &x)?;
        }
    }
    for n in 2..=3u32 {
        let s = sp(Family::ComplexH, n)?;
        for p in 0..n {
            for qq in 0..n - p {
                let sigma = if p + qq == 0 { MType::trivial(&s) } else { MType::complex_pq(&s, p, qq)? };
                let x = qi(p as i64 + qq as i64 - n as i64);
                check(&sigma, &x * &x)?;
            }
        }
    }
    for n in [3i64, 5] {
        check(&MType::complex_half_canonical(&sp(Family::ComplexH, n as u32)?)?, q(3 * n * n + 1, 4))?;
    }
    for n in [2i64, 3] {
        check(&MType::quat_sigma1(&sp(Family::QuaternionicH, n as u32)?)?, qi(4 * n * n))?;
    }
    Ok(Check::new(bad.is_empty(), if bad.is_empty() { format!("{checked} closed forms reproduced exactly") } else { bad.join("; ") }))
}

fn dual_theta() -> Outcome {
    let rh2 = sp(Family::RealH, 1)?;
    let rh4 = sp(Family::RealH, 2)?;
    let ch2 = sp(Family::ComplexH, 2)?;
    let mut worst = 0f64;
    for sigma in [MType::trivial(&rh2), MType::forms(&rh4, 1)?, MType::trivial(&ch2)] {
        let closed = DualTheta::new(&sigma)?;
        let lattice = DualSpectrum::new(&sigma)?;
        for t in [0.5, 1.0, 2.0, 3.0] {
            let part = lattice.partial_theta(t, 1e-13)?;
            let err = (closed.eval(C64::new(t, 0.0)).value - part.value).norm() + part.tail_bound;
            worst = worst.max(err);
        }
    }
    Ok(Check::new(worst < 1e-10, format!("max |θ_d − partial sum| + tail bound = {worst:.2e} (< 1e-10)")))
}

fn dual_trace() -> Outcome {
    let s = sp(Family::RealH, 1)?;
    let sigma = MType::trivial(&s);
    let empty = LengthSpectrum::empty(s.clone());
    let spectral = SpectralDatum::dual_surrogate(&sigma, 400.0)?;
    let mut worst = 0f64;
    for (c, w) in [(0.7, 0.1), (1.6, 0.15), (2.5, 0.2), (3.4, 0.25), (4.6, 0.3)] {
        let phi = TestFunction::gaussian(c, w)?;
        let r = trace_formula_residual(&empty, &spectral, &phi, &sigma, Some(dual_volume(&s)), Side::Dual)?;
        worst = worst.max(r.residual);
    }
    Ok(Check::new(worst < 1e-6, format!("max residual over 5 Gaussians = {worst:.2e} (< 1e-6)")))
}

fn heat_identity() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for (f, extra) in [
        (Family::RealH, "dirac"),
        (Family::ComplexH, "pq:1,0"),
        (Family::QuaternionicH, "sigma1"),
        (Family::CayleyH, "spin7"),
    ] {
        let s = if f == Family::RealH { sp(f, 1)? } else { sp(f, 2)? };
        for sigma in [MType::trivial(&s), MType::from_label(&s, extra)?] {
            let h = heat_coefficients(&sigma, 2)?;
            let n = s.dim_real as i64;
            for m in 1..=n / 2 {
                checked += 1;
                let c = h.c.get(&-m).cloned().unwrap_or_else(Q::zero);
                let d = h.d.get(&(-2 * m)).cloned().unwrap_or_else(Q::zero);
                let lhs = c / Q::from_integer(factorial(m as u32));
                let rhs = d / Q::from_integer(factorial(2 * m as u32));
                if lhs != rhs {
                    bad.push(format!("{} on {} m={m}", sigma.name(), s.code()));
                }
            }
        }
    }
    Ok(Check::new(bad.is_empty(), if bad.is_empty() { format!("{checked} exact identities on RH2, CH2, QH2, OH2") } else { bad.join("; ") }))
}

fn reflection() -> Outcome {
    let mut worst = 0f64;
    for s in [sp(Family::RealH, 1)?, sp(Family::ComplexH, 2)?] {
        let sigma = MType::trivial(&s);
        let tt = to_f64(&s.period_t);
        let d = DualDet::new(&sigma)?;
        for i in 1..=10 {
            let lam = C64::new(tt / 2.0 * i as f64 / 11.0, 0.0);
            let ratio = d.det(lam, DetSign::Plus)? / d.det(lam, DetSign::Minus)?;
            let pred = reflection_exponent(lam, &sigma)?.exp();
            worst = worst.max((ratio - pred).norm());
        }
    }
    Ok(Check::new(worst < 1e-8, format!("max |D⁺/D⁻ − exp(…)| on 2×10 points = {worst:.2e} (< 1e-8)")))
}

fn bolza(cutoff: f64) -> zetascope_core::Result<LengthSpectrum> {
    let doc = io::octagon().map_err(|e| zetascope_core::Error::Internal(e.to_string()))?;
    let g = doc.group().map_err(|e| zetascope_core::Error::Internal(e.to_string()))?;
    Ok(g.enumerate(&EnumerationParams::new(cutoff, 8))?.spectrum)
}

fn euler_consistency() -> Outcome {
    let s = sp(Family::RealH, 1)?;
    let sigma = MType::trivial(&s);
    let cyclic = LengthSpectrum::cyclic(s.clone(), GeodesicClass::new(&s, 1.0, 1, None, None)?, 8.0)?;
    let rho = to_f64(&s.rho);
    let mut worst = 0f64;
    for spec in [cyclic, bolza(6.0)?] {
        for x in [rho + 0.5, rho + 1.0, rho + 2.0] {
            let x = C64::new(x, 0.0);
            let num = numerical_log_derivative(|z| Ok(euler_product(z, &spec, &sigma, None)?.value), x, 1e-3)?;
            let d = log_derivative(x, &spec, &sigma, false)?.value;
            worst = worst.max((num - d).norm());
        }
    }
    Ok(Check::new(worst < 1e-9, format!("max |d/ds ln Z − D| on cyclic and Bolza(L=6) = {worst:.2e} (< 1e-9)")))
}

fn ruelle_constancy() -> Outcome {
    let mut h_ok = true;
    let spaces = [
        sp(Family::RealH, 1)?,
        sp(Family::RealH, 2)?,
        sp(Family::RealH, 3)?,
        sp(Family::ComplexH, 2)?,
        sp(Family::ComplexH, 3)?,
    ];
    for s in &spaces {
        let h = h_polynomial(s)?;
        let want = qi((s.dim_real / 2 * s.chi_dual) as i64);
        h_ok &= h.degree().unwrap_or(0) == 0 && h.coeff(0) == want;
    }
    // C = 0 requirement, and the constant actually measured
    let mut worst_zero = 0f64;
    let mut worst_offset = 0f64;
    for s in &spaces {
        for z in [C64::new(0.37, 0.0), C64::new(0.61, 0.2)] {
            let c = ruelle_functional_check(z, s, s.chi_dual as i64)?;
            worst_zero = worst_zero.max(c.residual);
            let tt = to_f64(&s.period_t);
            let d = c.lhs - c.rhs - C64::new(ruelle_offset(s), c.branch as f64 * tt);
            worst_offset = worst_offset.max(d.norm());
        }
    }
    let zero_ok = worst_zero < 1e-7;
    let detail = format!(
        "H(s) constant (n/2)χ(X_d) exactly: {}; C = 0 residual {worst_zero:.4} (needs < 1e-7); identity with C = −(Tn/2π)χ(X_d)ln 2 holds to {worst_offset:.1e}",
        if h_ok { "yes" } else { "NO" }
    );
    let explained = h_ok && !zero_ok && worst_offset < 1e-7;
    Ok(Check { pass: h_ok && zero_ok, explained, detail })
}

fn at(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn axis(lo: f64, hi: f64) -> zetascope_core::Result<Window> {
    Window::new(lo, hi, -0.5, 0.5)
}

fn divisor_golden() -> Outcome {
    let mut notes = Vec::new();
    // genus-2 surface, trivial σ: brute-force oracle −2(χ_M/χ_d)·P(k+½)
    let s = sp(Family::RealH, 1)?;
    let t = MType::trivial(&s);
    let d = selberg_divisor(&SpectralDatum::default(), &t, -2, &Window::new(-6.0, 0.0, -1.0, 1.0)?)?;
    let p = t.weyl_polynomial()?.p;
    let mut surface_ok = true;
    for k in 1..=5i64 {
        let lam = q(2 * k + 1, 2);
        let oracle = (qi(-2) * qi(-2) / qi(s.chi_dual as i64) * p.eval(&lam)).to_i64();
        let got = d.order_at(at(-to_f64(&lam)));
        surface_ok &= oracle == Some(got) && got == 4 * k + 2;
    }
    notes.push(format!("genus-2 orders 4k+2: {}", ok(surface_ok)));

    // real forms: first printed form at +c, rearranged printed form at −c
    let (mut plus_ok, mut minus_even_ok, mut minus_odd_ok) = (true, true, true);
    for m in 1..=3u32 {
        let n = 2 * m as usize;
        let s = sp(Family::RealH, m)?;
        for inner in [[4u64, 0, 2], [2, 3, 9], [1, 5, 1]] {
            let b = palindrome(n, &inner);
            let x: i64 = b.iter().enumerate().map(|(i, &v)| if i % 2 == 0 { v as i64 } else { -(v as i64) }).sum();
            if x % 2 != 0 || x == 0 {
                continue;
            }
            let topo = TopologyInput::new(b.clone(), x, n as u32)?;
            for p in 0..m as usize {
                let c = (n as f64 - 1.0 - 2.0 * p as f64) / 2.0;
                let d = forms_divisor_real(&s, p as u32, &topo, &[], &axis(-c - 0.25, c + 0.25)?)?;
                let first: i64 = (0..=p).map(|l| if (p - l) % 2 == 0 { b[l] as i64 } else { -(b[l] as i64) }).sum();
                let rearranged: i64 = (0..n - p).map(|l| if l % 2 == 1 { b[l] as i64 } else { -(b[l] as i64) }).sum();
                plus_ok &= d.order_at(at(c)) == first;
                if p % 2 == 0 {
                    minus_even_ok &= d.order_at(at(-c)) == rearranged;
                } else {
                    minus_odd_ok &= d.order_at(at(-c)) == rearranged;
                }
            }
        }
    }
    notes.push(format!("real forms at +(n−1−2p)/2: {}", ok(plus_ok)));
    notes.push(format!("real forms at −(n−1−2p)/2, even p: {}", ok(minus_even_ok)));
    notes.push(format!("real forms at −(n−1−2p)/2, odd p: {} (the rearranged sum has the opposite sign)", ok(minus_odd_ok)));

    // complex forms: harmonic order at n−p−q, shifted by −2(−1)^{p+q}χ/(n+1) at p+q−n
    let mut complex_ok = true;
    for n in 2..=3u32 {
        let s = sp(Family::ComplexH, n)?;
        let h = PrimitiveHodge { h: (0..n).map(|r| (0..n - r).map(|c| ((3 * r + 5 * c + 1) % 4) as u64).collect()).collect() };
        for k in [-2i64, 1, 3] {
            let x = k * (n as i64 + 1);
            for p in 0..n {
                for qq in 0..n - p {
                    let c = (n - p - qq) as f64;
                    let d = forms_divisor_complex(&s, p, qq, &h, x, &[], &axis(-c - 0.5, c + 0.5)?)?;
                    let harm = h.alternating(p, qq);
                    let sign = if (p + qq) % 2 == 0 { 1 } else { -1 };
                    complex_ok &= d.order_at(at(c)) == harm && d.order_at(at(-c)) == harm - 2 * sign * x / (n as i64 + 1);
                }
            }
        }
    }
    notes.push(format!("complex forms: {}", ok(complex_ok)));

    // quaternionic σ¹: pole of order 1 at 2n, order 2χ/(n+1) − 1 at −2n
    let mut quat_ok = true;
    for n in 2..=3u32 {
        let s = sp(Family::QuaternionicH, n)?;
        let nn = n as f64;
        for k in [-2i64, 1, 4] {
            let x = k * (n as i64 + 1);
            let e = QuaternionicEigen { one_forms: vec![], special_one_forms: 0, special_kaehler: 0 };
            let d = quaternionic_sigma1_divisor(&s, x, &e, &axis(-2.0 * nn - 1.0, 2.0 * nn + 1.0)?)?;
            quat_ok &= d.order_at(at(2.0 * nn)) == -1 && d.order_at(at(-2.0 * nn)) == 2 * x / (n as i64 + 1) - 1;
        }
    }
    notes.push(format!("quaternionic σ¹: {}", ok(quat_ok)));

    let pass = surface_ok && plus_ok && minus_even_ok && minus_odd_ok && complex_ok && quat_ok;
    let explained = !minus_odd_ok && surface_ok && plus_ok && minus_even_ok && complex_ok && quat_ok;
    Ok(Check { pass, explained, detail: notes.join("; ") })
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "MISMATCH"
    }
}

/// Poincaré-symmetric Betti numbers `b_0 = 1, inner…, mirrored`.
fn palindrome(n: usize, inner: &[u64]) -> Vec<u64> {
    let mut b = vec![0u64; n + 1];
    b[0] = 1;
    b[n] = 1;
    for i in 1..=n / 2 {
        let v = inner.get(i - 1).copied().unwrap_or(0);
        b[i] = v;
        b[n - i] = v;
    }
    b
}

fn fuchsian_systole(workers: usize) -> Outcome {
    let doc = io::octagon().map_err(internal)?;
    let g = doc.group().map_err(internal)?;
    let params = EnumerationParams::new(4.0, 8);
    let one = parallel::pool(Some(1)).map_err(internal)?;
    let t0 = Instant::now();
    let a = parallel::enumerate_fuchsian(&g, &params, &one).map_err(internal)?;
    let single = t0.elapsed().as_secs_f64();
    let many = parallel::pool(Some(workers)).map_err(internal)?;
    let t1 = Instant::now();
    let b = parallel::enumerate_fuchsian(&g, &params, &many).map_err(internal)?;
    let multi = t1.elapsed().as_secs_f64();
    let min = a.spectrum.min_length().unwrap_or(f64::NAN);
    let oracle = a.min_abs_trace.map(length_from_trace).unwrap_or(f64::NAN);
    let pass = (min - 3.05714).abs() < 1e-4 && (min - oracle).abs() < 1e-12 && a == b && single < 10.0 && multi < 3.0;
    Ok(Check::new(
        pass,
        format!(
            "systole {min:.6} (oracle {oracle:.6}, {} classes); {single:.2} s on 1 worker, {multi:.2} s on {workers}; identical results: {}",
            a.spectrum.classes.len(),
            a == b
        ),
    ))
}

fn internal(e: crate::CliError) -> zetascope_core::Error {
    zetascope_core::Error::Internal(e.to_string())
}

fn integrality(seed: u64) -> Outcome {
    let spaces = [
        sp(Family::RealH, 1)?,
        sp(Family::RealH, 2)?,
        sp(Family::RealH, 3)?,
        sp(Family::ComplexH, 2)?,
        sp(Family::ComplexH, 3)?,
        sp(Family::QuaternionicH, 2)?,
        sp(Family::CayleyH, 2)?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    let mut points = 0usize;
    for _ in 0..200 {
        let s = &spaces[rng.gen_range(0..spaces.len())];
        let cat = MType::catalog(s);
        let sigma = &cat[rng.gen_range(0..cat.len())];
        let k: i64 = rng.gen_range(-6..=6);
        let chi_m = k * s.chi_dual as i64;
        let d = selberg_divisor(&SpectralDatum::default(), sigma, chi_m, &Window::new(-40.0, 1.0, -1.0, 1.0)?)?;
        let lat = sigma.lattice()?;
        let p = sigma.weyl_polynomial()?.p;
        for j in 0.. {
            let lam = lat.point(j);
            if to_f64(&lam) > 40.0 {
                break;
            }
            if lam <= Q::zero() {
                continue;
            }
            let want = qi(-2 * k) * p.eval(&lam);
            let got = d.order_at(at(-to_f64(&lam)));
            points += 1;
            if !want.is_integer() || want != qi(got) {
                bad.push(format!("{} on {} χ={chi_m} at −{lam}: {got} vs {want}", sigma.name(), s.code()));
            }
        }
        // no stray points off the lattice
        for pt in &d.points {
            let lam = -pt.location.re;
            if !(0..).map(|j| to_f64(&lat.point(j))).take_while(|&x| x <= lam + 1.0).any(|x| (x - lam).abs() < 1e-9) {
                bad.push(format!("{} on {}: point off the lattice at {}", sigma.name(), s.code(), pt.location));
            }
        }
    }
    // partial fractions: Σ p_i^l ∏_{j≠i} 1/(p_j − p_i) = 0 for l ≤ N−2, (−1)^{N−1} for l = N−1
    let mut pf_ok = true;
    let mut pf_sets = 0;
    for _ in 0..200 {
        let n = rng.gen_range(2..=6usize);
        let den = rng.gen_range(1..7i64);
        let mut nums: Vec<i64> = Vec::new();
        while nums.len() < n {
            let v = rng.gen_range(-60..60i64);
            if !nums.contains(&v) {
                nums.push(v);
            }
        }
        let ps: Vec<Q> = nums.iter().map(|&v| q(v, den)).collect();
        pf_sets += 1;
        for l in 0..=n as u32 - 1 {
            let want = if (l as usize) < n - 1 { Q::zero() } else { qi(if n % 2 == 1 { 1 } else { -1 }) };
            pf_ok &= partial_fraction_moment(&ps, l)? == want;
        }
    }
    let pass = bad.is_empty() && pf_ok && points > 0;
    let mut detail = format!("seed {seed}: 200 configurations, {points} lattice orders equal −2kP(λ) ∈ ℤ; {pf_sets} partial-fraction sets exact: {}", ok(pf_ok));
    if !bad.is_empty() {
        detail.push_str(&format!("; {} mismatches, first: {}", bad.len(), bad[0]));
    }
    Ok(Check::new(pass, detail))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn palindromes_are_poincare_symmetric() {
        assert_eq!(palindrome(4, &[3, 8]), vec![1, 3, 8, 3, 1]);
        assert_eq!(palindrome(2, &[4]), vec![1, 4, 1]);
    }

    #[test]
    fn verdict_line_format() {
        let v = Verdict { id: 3, name: "x", pass: true, explained: false, detail: "d".into(), elapsed: Duration::from_millis(5) };
        assert_eq!(v.line(), "criterion  3: PASS — x: d [0.005 s]");
    }
}
