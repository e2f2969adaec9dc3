//! Run configuration: command-line flags merged over an optional JSON file.
//!
//! Precedence is flag > config file > built-in default.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use zetascope_core::mtype::MType;
use zetascope_core::space::SpacePreset;

use crate::error::{usage, Result};
use crate::io;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_SEED: u64 = 0x05e1_be76;

/// `start:end:steps` with `steps` sample points, both ends included.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Line {
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

impl Line {
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let h = (self.end - self.start) / (self.steps - 1) as f64;
        (0..self.steps).map(|k| if k + 1 == self.steps { self.end } else { self.start + h * k as f64 }).collect()
    }

    fn validate(&self) -> Result<()> {
        if !self.start.is_finite() || !self.end.is_finite() {
            return Err(usage!("grid bounds must be finite"));
        }
        if self.steps == 0 {
            return Err(usage!("grid needs at least one step"));
        }
        if self.end < self.start || (self.end == self.start && self.steps > 1) {
            return Err(usage!("empty or inverted grid {}:{}:{}", self.start, self.end, self.steps));
        }
        Ok(())
    }
}

impl FromStr for Line {
    type Err = crate::CliError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [a, b, n] = parts[..] else {
            return Err(usage!("malformed grid '{s}': expected start:end:steps"));
        };
        let num = |x: &str| x.parse::<f64>().map_err(|_| usage!("malformed grid '{s}': '{x}' is not a number"));
        let steps = n.parse::<usize>().map_err(|_| usage!("malformed grid '{s}': '{n}' is not a step count"))?;
        let line = Line { start: num(a)?, end: num(b)?, steps };
        line.validate()?;
        Ok(line)
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.end, self.steps)
    }
}

/// A real line, or a rectangle `re-line,im-line` in the complex plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Grid {
    Line(Line),
    Rect { re: Line, im: Line },
}

impl Grid {
    /// Sample points, rows of constant imaginary part in increasing order.
    pub fn points(&self) -> Vec<zetascope_core::C64> {
        use zetascope_core::C64;
        match self {
            Grid::Line(l) => l.points().into_iter().map(|x| C64::new(x, 0.0)).collect(),
            Grid::Rect { re, im } => {
                let xs = re.points();
                im.points().into_iter().flat_map(|y| xs.iter().map(move |&x| C64::new(x, y))).collect()
            }
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Grid::Line(l) => l.steps,
            Grid::Rect { re, im } => re.steps * im.steps,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl FromStr for Grid {
    type Err = crate::CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(',') {
            None => Ok(Grid::Line(s.parse()?)),
            Some((re, im)) => Ok(Grid::Rect { re: re.parse()?, im: im.parse()? }),
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grid::Line(l) => l.fmt(f),
            Grid::Rect { re, im } => write!(f, "{re},{im}"),
        }
    }
}

impl Serialize for Grid {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Grid {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Flags shared by every subcommand. All optional so that a config file can
/// supply them.
#[derive(Args, Clone, Debug, Default)]
pub struct CommonArgs {
    /// JSON config file; explicit flags override its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Space code: RH<dim>, CH<n>, QH<n> or OH2.
    #[arg(long, global = true)]
    pub space: Option<String>,
    /// M-type label (trivial, forms:p=1, dirac, pq:1,0, k/2, sigma1, sigma', spin7).
    #[arg(long, global = true)]
    pub sigma: Option<String>,
    /// Length spectrum JSON.
    #[arg(long, global = true)]
    pub lengths: Option<PathBuf>,
    /// Spectral datum JSON.
    #[arg(long, global = true)]
    pub spectral: Option<PathBuf>,
    /// Sample grid: start:end:steps, or re0:re1:n,im0:im1:m for a rectangle.
    #[arg(long, global = true)]
    pub grid: Option<Grid>,
    /// Numerical tolerance (default 1e-9).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for randomized suites.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; overrides ZETASCOPE_THREADS.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output file (default stdout).
    #[arg(long, short = 'o', global = true)]
    pub out: Option<PathBuf>,
}

/// The config file schema: the same keys as the flags.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lengths: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectral: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

/// A validated configuration with defaults filled in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub space: Option<String>,
    pub sigma: Option<String>,
    pub lengths: Option<PathBuf>,
    pub spectral: Option<PathBuf>,
    pub grid: Option<Grid>,
    pub tol: f64,
    pub format: Format,
    pub seed: u64,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            space: None,
            sigma: None,
            lengths: None,
            spectral: None,
            grid: None,
            tol: DEFAULT_TOL,
            format: Format::Json,
            seed: DEFAULT_SEED,
            threads: None,
            out: None,
        }
    }
}

impl RunConfig {
    /// Merges flags over the config file named by `--config`, if any.
    pub fn resolve(args: &CommonArgs) -> Result<Self> {
        let file = match &args.config {
            Some(p) => Self::read_file(p)?,
            None => ConfigFile::default(),
        };
        Self::merge(args, file)
    }

    fn read_file(path: &Path) -> Result<ConfigFile> {
        let mut f: ConfigFile = io::read_json(path)?;
        // Paths inside a config file are relative to the file.
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut f.lengths, &mut f.spectral].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(f)
    }

    pub fn merge(args: &CommonArgs, file: ConfigFile) -> Result<Self> {
        let d = RunConfig::default();
        let cfg = RunConfig {
            space: args.space.clone().or(file.space),
            sigma: args.sigma.clone().or(file.sigma),
            lengths: args.lengths.clone().or(file.lengths),
            spectral: args.spectral.clone().or(file.spectral),
            grid: args.grid.or(file.grid),
            tol: args.tol.or(file.tol).unwrap_or(d.tol),
            format: args.format.or(file.format).unwrap_or(d.format),
            seed: args.seed.or(file.seed).unwrap_or(d.seed),
            threads: args.threads.or(file.threads),
            out: args.out.clone().or(file.out),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(usage!("tolerance must be positive, got {}", self.tol));
        }
        if self.threads == Some(0) {
            return Err(usage!("thread count must be at least 1"));
        }
        for p in [&self.lengths, &self.spectral].into_iter().flatten() {
            if !p.is_file() {
                return Err(usage!("input file {} does not exist", p.display()));
            }
        }
        Ok(())
    }

    pub fn space(&self) -> Result<SpacePreset> {
        let code = self.space.as_deref().ok_or_else(|| usage!("--space is required"))?;
        Ok(SpacePreset::from_code(code)?)
    }

    pub fn sigma(&self, space: &SpacePreset) -> Result<MType> {
        match self.sigma.as_deref() {
            Some(label) => Ok(MType::from_label(space, label)?),
            None => Ok(MType::trivial(space)),
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        self.grid.ok_or_else(|| usage!("--grid is required"))
    }
}
