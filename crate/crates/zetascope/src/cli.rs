//! Command-line surface.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use zetascope_core::branching::{Branching, Group, VirtualRep};
use zetascope_core::catalog::{
    dirac_divisor, forms_divisor_complex, forms_divisor_real, quaternionic_sigma1_divisor, PrimitiveHodge, QuaternionicEigen,
    TopologyInput,
};
use zetascope_core::dual::{dual_volume, DetSign, DualDet, DualSpectrum, DualTheta, Side, TestFunction};
use zetascope_core::fuchsian::EnumerationParams;
use zetascope_core::geodesics::LengthSpectrum;
use zetascope_core::mtype::MType;
use zetascope_core::rational::format_q;
use zetascope_core::ruelle::{ruelle_eval, ruelle_functional_check, ruelle_offset, ruelle_order_at_zero, SelbergMemo};
use zetascope_core::zeta::{
    euler_product, functional_equation_rhs, log_derivative, log_derivative_reflection, numerical_log_derivative,
    selberg_determinant_rhs, selberg_divisor, theta_residues, trace_formula_residual, SpectralDatum, Window,
};
use zetascope_core::C64;

use crate::acceptance;
use crate::config::{CommonArgs, Format, RunConfig};
use crate::error::{usage, CliError, Result};
use crate::io::{self, divisor_doc, Cx, GridRow, LengthSpectrumDoc, SigmaReport, SpaceDoc, SpectralDoc};
use crate::parallel;

#[derive(Parser, Debug)]
#[command(name = "zetascope", version, about = "Selberg and Ruelle zeta functions of rank-one locally symmetric spaces")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Structure constants of a space.
    Space {
        /// Number of dual closed geodesic lengths to list.
        #[arg(long, default_value_t = 3)]
        geodesics: usize,
    },
    /// Data of an M-type, or the catalog of the space with --list.
    Sigma {
        #[arg(long)]
        list: bool,
    },
    /// Restriction of virtual K-representations to M, or admissible lifts.
    Branch {
        /// K-side expression such as "l1 - 1" or "s+*l1".
        #[arg(long, conflicts_with = "lift")]
        gamma: Option<String>,
        /// Print the admissible lift of --sigma instead.
        #[arg(long)]
        lift: bool,
        /// Covering parameter k | n+1 (complex family).
        #[arg(long)]
        cover: Option<i64>,
    },
    /// Closed form of the dual theta function.
    DualTheta {
        #[arg(long, value_parser = complex_arg)]
        t: Option<C64>,
    },
    /// Dual lattice spectrum with multiplicities.
    DualSpectrum {
        #[arg(long, default_value_t = 10.0)]
        cutoff: f64,
    },
    /// Regularized dual determinants.
    DualDet {
        #[arg(long, value_parser = complex_arg)]
        lambda: Option<C64>,
        #[arg(long, value_enum, default_value_t = DetKind::Plus)]
        sign: DetKind,
    },
    /// Heat coefficients of the dual theta function.
    HeatCoeffs {
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Length spectra.
    Lengths {
        #[command(subcommand)]
        op: LengthsOp,
    },
    /// Selberg zeta function.
    Selberg {
        #[command(subcommand)]
        op: SelbergOp,
    },
    /// Theta function of a length spectrum.
    Theta {
        #[command(subcommand)]
        op: ThetaOp,
    },
    /// Residual of the trace formula for Gaussian test functions.
    TraceCheck {
        /// Gaussian as center,width; repeatable.
        #[arg(long = "gaussian", value_parser = gaussian_arg, required = true)]
        gaussians: Vec<(f64, f64)>,
        /// Use the dual lattice spectrum up to this cutoff as spectral data.
        #[arg(long)]
        dual_surrogate: Option<f64>,
        #[arg(long, value_enum, default_value_t = SideArg::Noncompact)]
        side: SideArg,
        /// Volume override; defaults to the length spectrum's vol_M, or to
        /// the dual volume with --dual-surrogate.
        #[arg(long)]
        vol: Option<f64>,
    },
    /// Ruelle zeta function.
    Ruelle {
        #[command(subcommand)]
        op: RuelleOp,
    },
    /// Divisors from topological and spectral data.
    Catalog {
        #[command(subcommand)]
        op: CatalogOp,
    },
    /// Runs the acceptance suite.
    Selftest,
}

#[derive(Subcommand, Debug)]
pub enum LengthsOp {
    /// Enumerates closed geodesics of a Fuchsian group.
    GenFuchsian {
        /// Generator file; the genus-2 octagon group by default.
        #[arg(long)]
        generators: Option<PathBuf>,
        #[arg(long, default_value_t = 4.0)]
        max_length: f64,
        #[arg(long, default_value_t = 8)]
        max_word: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum SelbergOp {
    /// Euler product for Re s > ρ (needs --lengths).
    Eval {
        #[arg(long, value_parser = complex_arg)]
        s: Option<C64>,
        /// Also report the logarithmic derivative.
        #[arg(long)]
        log_derivative: bool,
    },
    /// Zeros and poles in a window.
    Divisor {
        #[arg(long = "chiM", allow_hyphen_values = true)]
        chi_m: i64,
        #[arg(long, value_parser = window_arg, default_value = "-10:10,-10:10", allow_hyphen_values = true)]
        window: Window,
    },
    /// Functional equation: closed form against the determinant factors.
    FeCheck {
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
        s: C64,
        #[arg(long = "chiM", allow_hyphen_values = true)]
        chi_m: i64,
    },
    /// Dual-side factors of the determinant representation.
    DetRhs {
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
        p: C64,
        #[arg(long = "chiM", allow_hyphen_values = true)]
        chi_m: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum ThetaOp {
    /// Residues at ±i l(g) (needs --lengths).
    Residues,
}

#[derive(Subcommand, Debug)]
pub enum RuelleOp {
    /// Z_R(s) for Re s > 2ρ (needs --lengths).
    Eval {
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
        s: C64,
    },
    /// Both sides of the functional equation and the constant between them.
    FeCheck {
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
        s: C64,
        #[arg(long = "chiM", allow_hyphen_values = true)]
        chi_m: i64,
    },
    /// Order at s = 0.
    Order0 {
        #[arg(long = "chiM", allow_hyphen_values = true)]
        chi_m: i64,
    },
}

#[derive(clap::Args, Debug)]
pub struct CatalogCommon {
    #[arg(long = "chiM", allow_hyphen_values = true)]
    pub chi_m: i64,
    /// Eigenvalue file: [{"value": .., "mult": ..}, ..].
    #[arg(long)]
    pub eigen: Option<PathBuf>,
    #[arg(long, value_parser = window_arg, default_value = "-10:10,-10:10", allow_hyphen_values = true)]
    pub window: Window,
}

#[derive(Subcommand, Debug)]
pub enum CatalogOp {
    /// p-forms on a real hyperbolic manifold.
    RealForms {
        #[arg(long)]
        p: u32,
        /// Betti numbers b_0,…,b_dim.
        #[arg(long, value_delimiter = ',')]
        betti: Vec<u64>,
        #[command(flatten)]
        common: CatalogCommon,
    },
    /// Dirac operator on a real hyperbolic manifold.
    Dirac {
        #[command(flatten)]
        common: CatalogCommon,
    },
    /// Primitive (p,q)-forms on a complex hyperbolic manifold.
    ComplexForms {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        /// Primitive Hodge numbers, rows h[r][·] separated by ';'.
        #[arg(long, value_parser = hodge_arg)]
        hodge: PrimitiveHodge,
        #[command(flatten)]
        common: CatalogCommon,
    },
    /// σ¹ on a quaternionic hyperbolic manifold with b_1 = 0.
    QuatSigma1 {
        #[arg(long, default_value_t = 0)]
        special_one_forms: u64,
        #[arg(long, default_value_t = 0)]
        special_kaehler: u64,
        #[command(flatten)]
        common: CatalogCommon,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DetKind {
    Plus,
    Minus,
    /// `det(A² − λ²)`.
    Squared,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Noncompact,
    Dual,
}

fn complex_arg(s: &str) -> std::result::Result<C64, String> {
    io::parse_complex(s).map_err(|e| e.to_string())
}

fn gaussian_arg(s: &str) -> std::result::Result<(f64, f64), String> {
    let (c, w) = s.split_once(',').ok_or("expected center,width")?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("'{x}' is not a number"));
    Ok((num(c)?, num(w)?))
}

/// `re0:re1,im0:im1`.
fn window_arg(s: &str) -> std::result::Result<Window, String> {
    let parse = |x: &str| -> std::result::Result<(f64, f64), String> {
        let (a, b) = x.split_once(':').ok_or(format!("expected lo:hi in '{x}'"))?;
        let num = |y: &str| y.trim().parse::<f64>().map_err(|_| format!("'{y}' is not a number"));
        Ok((num(a)?, num(b)?))
    };
    let (re, im) = s.split_once(',').ok_or("expected re0:re1,im0:im1")?;
    let (r0, r1) = parse(re)?;
    let (i0, i1) = parse(im)?;
    Window::new(r0, r1, i0, i1).map_err(|e| e.to_string())
}

fn hodge_arg(s: &str) -> std::result::Result<PrimitiveHodge, String> {
    let h = s
        .split(';')
        .map(|row| {
            if row.trim().is_empty() {
                return Ok(Vec::new());
            }
            row.split(',').map(|x| x.trim().parse::<u64>().map_err(|_| format!("'{x}' is not a Hodge number"))).collect()
        })
        .collect::<std::result::Result<Vec<_>, String>>()?;
    Ok(PrimitiveHodge { h })
}

/// Parses `argv` and runs the command, writing its report.
pub fn run<I, T>(argv: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            print!("{e}");
            CliError::Usage(String::new())
        }
        _ => CliError::Usage(e.to_string().trim_end().to_string()),
    });
    let cli = match cli {
        Ok(c) => c,
        Err(CliError::Usage(m)) if m.is_empty() => return Ok(()),
        Err(e) => return Err(e),
    };
    let cfg = RunConfig::resolve(&cli.common)?;
    let bytes = execute(&cli.command, &cfg)?;
    io::write_output(cfg.out.as_deref(), &bytes)
}

/// Runs one command and returns the serialized report.
pub fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Vec<u8>> {
    match cmd {
        Command::Space { geodesics } => json(&SpaceDoc::new(&cfg.space()?, *geodesics)?),
        Command::Sigma { list } => {
            let space = cfg.space()?;
            if *list {
                let all = MType::catalog(&space).iter().map(SigmaReport::new).collect::<Result<Vec<_>>>()?;
                json(&all)
            } else {
                json(&SigmaReport::new(&cfg.sigma(&space)?)?)
            }
        }
        Command::Branch { gamma, lift, cover } => branch(cfg, gamma.as_deref(), *lift, *cover),
        Command::DualTheta { t } => {
            let sigma = cfg.sigma(&cfg.space()?)?;
            let theta = DualTheta::new(&sigma)?;
            grid_report(cfg, *t, |t| {
                let f = theta.eval(t);
                Ok((f.value, f.pole))
            })
        }
        Command::DualSpectrum { cutoff } => {
            let sigma = cfg.sigma(&cfg.space()?)?;
            let entries: Vec<_> = DualSpectrum::new(&sigma)?
                .entries(*cutoff)
                .into_iter()
                .map(|e| DualEntryDoc { lambda: format_q(&e.lambda), mult: e.mult.to_string() })
                .collect();
            json(&entries)
        }
        Command::DualDet { lambda, sign } => {
            let sigma = cfg.sigma(&cfg.space()?)?;
            let det = DualDet::new(&sigma)?;
            grid_report(cfg, *lambda, |l| {
                let v = match sign {
                    DetKind::Plus => det.det(l, DetSign::Plus)?,
                    DetKind::Minus => det.det(l, DetSign::Minus)?,
                    DetKind::Squared => det.log_det_squared(l)?.exp(),
                };
                Ok((v, false))
            })
        }
        Command::HeatCoeffs { order } => {
            let sigma = cfg.sigma(&cfg.space()?)?;
            let h = zetascope_core::dual::heat_coefficients(&sigma, *order)?;
            let map = |m: &BTreeMap<i64, zetascope_core::Q>| m.iter().map(|(k, v)| (k.to_string(), format_q(v))).collect();
            json(&HeatDoc { d: map(&h.d), c: map(&h.c) })
        }
        Command::Lengths { op: LengthsOp::GenFuchsian { generators, max_length, max_word } } => {
            let doc = match generators {
                Some(p) => io::read_json::<io::GeneratorsDoc>(p)?,
                None => io::octagon()?,
            };
            let group = doc.group()?;
            let params = EnumerationParams::new(*max_length, *max_word);
            let pool = parallel::pool(parallel::thread_count(cfg.threads)?)?;
            let mut out = parallel::enumerate_fuchsian(&group, &params, &pool)?;
            out.spectrum.vol_m = doc.vol()?;
            out.spectrum.chi_m = doc.chi_M;
            let relators = out.relators.iter().map(|r| group.format_word(r)).collect();
            json(&GenFuchsianDoc {
                spectrum: LengthSpectrumDoc::from_fuchsian(&group, &out),
                enumeration: EnumerationDoc {
                    max_word: *max_word,
                    words_examined: out.words_examined,
                    elliptic: out.elliptic,
                    parabolic: out.parabolic,
                    relators,
                    min_abs_trace: out.min_abs_trace,
                    systole: out.spectrum.min_length(),
                },
            })
        }
        Command::Selberg { op } => selberg(cfg, op),
        Command::Theta { op: ThetaOp::Residues } => {
            let lengths = lengths(cfg)?;
            let sigma = cfg.sigma(&lengths.space)?;
            let res: Vec<_> =
                theta_residues(&lengths, &sigma)?.into_iter().map(|r| ResidueDoc { location: r.location.into(), residue: r.residue }).collect();
            json(&res)
        }
        Command::TraceCheck { gaussians, dual_surrogate, side, vol } => trace_check(cfg, gaussians, *dual_surrogate, *side, *vol),
        Command::Ruelle { op } => ruelle(cfg, op),
        Command::Catalog { op } => catalog(cfg, op),
        Command::Selftest => {
            let threads = parallel::thread_count(cfg.threads)?;
            let results = acceptance::run_all(threads);
            let mut text = String::new();
            for r in &results {
                text.push_str(&r.line());
                text.push('\n');
            }
            let failed: Vec<String> = results.iter().filter(|r| !r.pass).map(|r| r.id.to_string()).collect();
            let why = format!("criteria {} did not pass", failed.join(", "));
            finish_check(cfg, text.into_bytes(), failed.is_empty(), why)
        }
    }
}

fn json<T: Serialize + ?Sized>(v: &T) -> Result<Vec<u8>> {
    Ok(io::to_json(v)?.into_bytes())
}

fn lengths(cfg: &RunConfig) -> Result<LengthSpectrum> {
    let path = cfg.lengths.as_ref().ok_or_else(|| usage!("--lengths is required"))?;
    let spectrum = io::read_json::<LengthSpectrumDoc>(path)?.to_spectrum()?;
    if let Some(code) = &cfg.space {
        if *code != spectrum.space.code() {
            return Err(usage!("--space {code} does not match the length spectrum's space {}", spectrum.space.code()));
        }
    }
    Ok(spectrum)
}

fn spectral(cfg: &RunConfig) -> Result<SpectralDatum> {
    match &cfg.spectral {
        Some(p) => io::read_json::<SpectralDoc>(p)?.to_datum(),
        None => Ok(SpectralDatum::default()),
    }
}

/// Evaluates at `point`, or over the configured grid when it is absent.
fn grid_report<F>(cfg: &RunConfig, point: Option<C64>, f: F) -> Result<Vec<u8>>
where
    F: Fn(C64) -> zetascope_core::Result<(C64, bool)> + Sync + Send,
{
    let points = match point {
        Some(p) => vec![p],
        None => cfg.grid()?.points(),
    };
    let pool = parallel::pool(parallel::thread_count(cfg.threads)?)?;
    let rows = parallel::grid_map(&pool, &points, |&t| f(t).map(|(v, flag)| GridRow { t: t.into(), value: v.into(), flag }))
        .into_iter()
        .collect::<zetascope_core::Result<Vec<_>>>()?;
    match cfg.format {
        Format::Json => json(&rows),
        Format::Csv => Ok(io::grid_csv(&rows)?.into_bytes()),
    }
}

fn branch(cfg: &RunConfig, gamma: Option<&str>, lift: bool, cover: Option<i64>) -> Result<Vec<u8>> {
    let space = cfg.space()?;
    let b = match cover {
        Some(k) => Branching::with_cover(&space, k)?,
        None => Branching::new(&space),
    };
    let (input, k_rep) = if lift {
        let sigma = cfg.sigma(&space)?;
        (sigma.name(), b.admissible_lift(&sigma)?)
    } else {
        let text = gamma.ok_or_else(|| usage!("branch needs --gamma or --lift"))?;
        (text.to_string(), VirtualRep::parse(Group::K, text)?)
    };
    let restricted = b.restrict(&k_rep)?;
    let parity = match space.family {
        zetascope_core::space::Family::QuaternionicH => b.parity(&k_rep)?.map(|p| format!("{p:?}").to_lowercase()),
        _ => None,
    };
    json(&BranchDoc { space: space.code(), input, k: k_rep.to_string(), restriction: restricted.to_string(), parity })
}

fn selberg(cfg: &RunConfig, op: &SelbergOp) -> Result<Vec<u8>> {
    match op {
        SelbergOp::Eval { s, log_derivative: want_ld } => {
            let lengths = lengths(cfg)?;
            let sigma = cfg.sigma(&lengths.space)?;
            let tol = cfg.tol;
            if *want_ld {
                grid_report(cfg, *s, |s| {
                    let ld = log_derivative(s, &lengths, &sigma, false)?;
                    Ok((ld.value, ld.tail_bound > tol))
                })
            } else {
                grid_report(cfg, *s, |s| {
                    let z = euler_product(s, &lengths, &sigma, None)?;
                    Ok((z.value, z.tail_bound > tol))
                })
            }
        }
        SelbergOp::Divisor { chi_m, window } => {
            let space = cfg.space()?;
            let sigma = cfg.sigma(&space)?;
            json(&divisor_doc(&selberg_divisor(&spectral(cfg)?, &sigma, *chi_m, window)?))
        }
        SelbergOp::FeCheck { s, chi_m } => {
            let space = cfg.space()?;
            let sigma = cfg.sigma(&space)?;
            let rhs = functional_equation_rhs(*s, &sigma, *chi_m)?;
            let plus = selberg_determinant_rhs(*s, &sigma, *chi_m, None)?;
            let minus = selberg_determinant_rhs(-*s, &sigma, *chi_m, None)?;
            let det_ratio = plus.value / minus.value;
            let ld = log_derivative_reflection(*s, &sigma, *chi_m)?;
            let ld_num = numerical_log_derivative(|z| functional_equation_rhs(z, &sigma, *chi_m), *s, 1e-3)?;
            let residual = ((det_ratio - rhs) / rhs).norm().max(((ld_num - ld) / ld.norm().max(1.0)).norm());
            let doc = FeDoc {
                s: (*s).into(),
                closed_form: rhs.into(),
                determinant_ratio: det_ratio.into(),
                log_derivative: ld.into(),
                numerical_log_derivative: ld_num.into(),
                residual,
                pass: residual <= cfg.tol.max(1e-8),
            };
            finish_check(cfg, json(&doc)?, doc.pass, format!("functional equation residual {residual:e}"))
        }
        SelbergOp::DetRhs { p, chi_m } => {
            let space = cfg.space()?;
            let sigma = cfg.sigma(&space)?;
            let d = selberg_determinant_rhs(*p, &sigma, *chi_m, None)?;
            json(&DetRhsDoc { p: (*p).into(), dual_factor: d.dual_factor.into(), exp_factor: d.exp_factor.into(), value: d.value.into() })
        }
    }
}

/// Emits the report, then fails with exit code 3 if the check did not hold.
fn finish_check(cfg: &RunConfig, bytes: Vec<u8>, pass: bool, why: String) -> Result<Vec<u8>> {
    if pass {
        Ok(bytes)
    } else {
        io::write_output(cfg.out.as_deref(), &bytes)?;
        Err(CliError::CheckFailed(why))
    }
}

fn trace_check(cfg: &RunConfig, gaussians: &[(f64, f64)], surrogate: Option<f64>, side: SideArg, vol: Option<f64>) -> Result<Vec<u8>> {
    let (lengths, space) = match &cfg.lengths {
        Some(_) => {
            let l = lengths(cfg)?;
            let s = l.space.clone();
            (l, s)
        }
        None => {
            let s = cfg.space()?;
            (LengthSpectrum::empty(s.clone()), s)
        }
    };
    let sigma = cfg.sigma(&space)?;
    let (data, vol) = match surrogate {
        Some(cut) => (SpectralDatum::dual_surrogate(&sigma, cut)?, vol.or(Some(dual_volume(&space)))),
        None => (spectral(cfg)?, vol),
    };
    let side = match side {
        SideArg::Noncompact => Side::Noncompact,
        SideArg::Dual => Side::Dual,
    };
    let mut rows = Vec::new();
    for &(c, w) in gaussians {
        let phi = TestFunction::gaussian(c, w)?;
        let r = trace_formula_residual(&lengths, &data, &phi, &sigma, vol, side)?;
        rows.push(TraceDoc { center: c, width: w, spectral: r.spectral, identity: r.identity, geometric: r.geometric, residual: r.residual });
    }
    let worst = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    finish_check(cfg, json(&rows)?, worst <= cfg.tol, format!("trace formula residual {worst:e} exceeds {:e}", cfg.tol))
}

fn ruelle(cfg: &RunConfig, op: &RuelleOp) -> Result<Vec<u8>> {
    match op {
        RuelleOp::Eval { s } => {
            let lengths = lengths(cfg)?;
            let v = ruelle_eval(*s, &lengths, &mut SelbergMemo::new())?;
            json(&RuelleDoc {
                s: (*s).into(),
                value: v.value().into(),
                tail_bound: v.direct.tail_bound,
                factorized: v.factorized.map(|f| f.value.into()),
                discrepancy: v.discrepancy,
            })
        }
        RuelleOp::FeCheck { s, chi_m } => {
            let space = cfg.space()?;
            let c = ruelle_functional_check(*s, &space, *chi_m)?;
            json(&RuelleFeDoc {
                s: (*s).into(),
                integral_side: c.lhs.into(),
                closed_form: c.rhs.into(),
                lhs_exponent: c.lhs_exponent.into(),
                rhs_exponent: c.rhs_exponent.into(),
                branch: c.branch,
                offset: c.offset,
                expected_offset: ruelle_offset(&space),
                residual_at_zero_offset: c.residual,
            })
        }
        RuelleOp::Order0 { chi_m } => {
            let space = cfg.space()?;
            json(&serde_json::json!({ "space": space.code(), "chi_M": chi_m, "order": ruelle_order_at_zero(&space, *chi_m) }))
        }
    }
}

fn catalog(cfg: &RunConfig, op: &CatalogOp) -> Result<Vec<u8>> {
    let space = cfg.space()?;
    let eigen = |c: &CatalogCommon| -> Result<Vec<zetascope_core::catalog::Eigen>> {
        match &c.eigen {
            Some(p) => Ok(io::eigen_list(&io::read_json::<Vec<io::EigenDoc>>(p)?)),
            None => Ok(Vec::new()),
        }
    };
    let divisor = match op {
        CatalogOp::RealForms { p, betti, common } => {
            let topo = TopologyInput::new(betti.clone(), common.chi_m, space.dim_real)?;
            forms_divisor_real(&space, *p, &topo, &eigen(common)?, &common.window)?
        }
        CatalogOp::Dirac { common } => {
            let d = dirac_divisor(&space, common.chi_m, &eigen(common)?, &common.window)?;
            for c in d.discrepancies() {
                eprintln!("note: order {} at j = {} differs from the binomial form {}", c.computed, c.j, c.binomial_form);
            }
            d.divisor
        }
        CatalogOp::ComplexForms { p, q, hodge, common } => {
            forms_divisor_complex(&space, *p, *q, hodge, common.chi_m, &eigen(common)?, &common.window)?
        }
        CatalogOp::QuatSigma1 { special_one_forms, special_kaehler, common } => {
            let e = QuaternionicEigen {
                one_forms: eigen(common)?,
                special_one_forms: *special_one_forms,
                special_kaehler: *special_kaehler,
            };
            quaternionic_sigma1_divisor(&space, common.chi_m, &e, &common.window)?
        }
    };
    json(&divisor_doc(&divisor))
}

#[derive(Serialize)]
struct DualEntryDoc {
    lambda: String,
    mult: String,
}

#[derive(Serialize)]
struct HeatDoc {
    d: BTreeMap<String, String>,
    c: BTreeMap<String, String>,
}

#[derive(Serialize)]
struct BranchDoc {
    space: String,
    input: String,
    k: String,
    restriction: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    parity: Option<String>,
}

#[derive(Serialize)]
struct GenFuchsianDoc {
    #[serde(flatten)]
    spectrum: LengthSpectrumDoc,
    enumeration: EnumerationDoc,
}

#[derive(Serialize)]
struct EnumerationDoc {
    max_word: usize,
    words_examined: u64,
    elliptic: u64,
    parabolic: u64,
    relators: Vec<String>,
    min_abs_trace: Option<f64>,
    systole: Option<f64>,
}

#[derive(Serialize)]
struct ResidueDoc {
    location: Cx,
    residue: f64,
}

#[derive(Serialize)]
struct FeDoc {
    s: Cx,
    closed_form: Cx,
    determinant_ratio: Cx,
    log_derivative: Cx,
    numerical_log_derivative: Cx,
    residual: f64,
    pass: bool,
}

#[derive(Serialize)]
struct DetRhsDoc {
    p: Cx,
    dual_factor: Cx,
    exp_factor: Cx,
    value: Cx,
}

#[derive(Serialize)]
struct TraceDoc {
    center: f64,
    width: f64,
    spectral: f64,
    identity: f64,
    geometric: f64,
    residual: f64,
}

#[derive(Serialize)]
struct RuelleDoc {
    s: Cx,
    value: Cx,
    tail_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    factorized: Option<Cx>,
    #[serde(skip_serializing_if = "Option::is_none")]
    discrepancy: Option<f64>,
}

#[derive(Serialize)]
struct RuelleFeDoc {
    s: Cx,
    integral_side: Cx,
    closed_form: Cx,
    lhs_exponent: Cx,
    rhs_exponent: Cx,
    branch: i64,
    offset: f64,
    expected_offset: f64,
    residual_at_zero_offset: f64,
}
