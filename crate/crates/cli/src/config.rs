//! Run configuration: a flat `key=value` file merged with command-line
//! flags. Flags win; anything left unset falls back to the nuclear defaults
//! (`A0 = 40`, `a = 0.65`, `q = 1`, `c = 0`, `mu = 1`).

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use psusy_core::dws::Branch;
use psusy_core::{Complex64, Convention, DwsParams};

use crate::error::{CliError, CliResult};

/// Flags shared by every subcommand. Each may also appear in the config
/// file under the same name without the leading dashes.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Flat key=value file; flags override its entries
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// dws | box | oscillator | pt-oscillator | free
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long = "V0")]
    pub v0: Option<String>,
    #[arg(long = "A0")]
    pub a0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    /// Default 1.25 A0^(1/3)
    #[arg(long = "X0")]
    pub x0: Option<String>,
    #[arg(long)]
    pub mu: Option<String>,
    /// Mass; defaults to 1/mu
    #[arg(long = "M")]
    pub mass: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<String>,
    /// plus | minus
    #[arg(long)]
    pub branch: Option<String>,
    /// paper | standard | transpose
    #[arg(long)]
    pub convention: Option<String>,
    /// RE,IM or `paper` for the literal G2 = -alpha q
    #[arg(long = "G2-override", allow_hyphen_values = true)]
    pub g2_override: Option<String>,
    /// auto | MIN:MAX:N
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Put a Dirichlet wall at x = 0 and use [0, X0 + 25a]
    #[arg(long = "half-line")]
    pub half_line: bool,
    #[arg(long = "n-levels")]
    pub n_levels: Option<String>,
    /// closed-form | oracle | both
    #[arg(long)]
    pub method: Option<String>,
    /// Closed-form DWS energies: figure | ladder
    #[arg(long)]
    pub formula: Option<String>,
    /// Box length
    #[arg(long = "L")]
    pub length: Option<String>,
    /// Strength of the imaginary term in the PT oscillator x^2 + i lambda x
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Swept variable for `scan`: q | a | V0
    #[arg(long)]
    pub sweep: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<String>,
    #[arg(long)]
    pub steps: Option<String>,
    /// Level index for `wavefunction`
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv | json
    #[arg(long)]
    pub format: Option<String>,
    /// Drop the banner comment lines (including the timestamp)
    #[arg(long = "no-banner")]
    pub no_banner: bool,
}

const KEYS: &[&str] = &[
    "model", "q", "a", "V0", "A0", "c", "X0", "mu", "M", "epsilon", "branch", "convention", "G2-override",
    "grid", "half-line", "n-levels", "method", "formula", "L", "lambda", "sweep", "from", "to", "steps", "n",
    "out", "format", "no-banner",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Dws,
    Box,
    Oscillator,
    PtOscillator,
    Free,
}

impl FromStr for Model {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "dws" => Ok(Model::Dws),
            "box" => Ok(Model::Box),
            "oscillator" => Ok(Model::Oscillator),
            "pt-oscillator" => Ok(Model::PtOscillator),
            "free" => Ok(Model::Free),
            other => Err(CliError::bad(format!("unknown model '{other}'"))),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Dws => "dws",
            Model::Box => "box",
            Model::Oscillator => "oscillator",
            Model::PtOscillator => "pt-oscillator",
            Model::Free => "free",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridSpec {
    Auto,
    Explicit { x_min: f64, x_max: f64, n: usize },
}

impl FromStr for GridSpec {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        if s == "auto" {
            return Ok(GridSpec::Auto);
        }
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || CliError::bad(format!("grid must be auto or MIN:MAX:N, got '{s}'"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let x_min: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let x_max: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max && n >= 5) {
            return Err(CliError::bad(format!("grid needs MIN < MAX and N >= 5, got '{s}'")));
        }
        Ok(GridSpec::Explicit { x_min, x_max, n })
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridSpec::Auto => f.write_str("auto"),
            GridSpec::Explicit { x_min, x_max, n } => write!(f, "{x_min}:{x_max}:{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum G2Override {
    Value(Complex64),
    /// The literal `G2 = -alpha q`.
    Paper,
}

impl FromStr for G2Override {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        if s == "paper" {
            return Ok(G2Override::Paper);
        }
        let bad = || CliError::bad(format!("G2-override must be RE,IM or paper, got '{s}'"));
        let (re, im) = s.split_once(',').ok_or_else(bad)?;
        let re: f64 = re.trim().parse().map_err(|_| bad())?;
        let im: f64 = im.trim().parse().map_err(|_| bad())?;
        if !(re.is_finite() && im.is_finite()) {
            return Err(bad());
        }
        Ok(G2Override::Value(Complex64::new(re, im)))
    }
}

impl fmt::Display for G2Override {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            G2Override::Paper => f.write_str("paper"),
            G2Override::Value(z) => write!(f, "{},{}", z.re, z.im),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formula {
    /// The real energy-versus-parameter formula used for the figures.
    Figure,
    /// Absolute ladder energies from the matched superpotential.
    Ladder,
}

impl FromStr for Formula {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "figure" => Ok(Formula::Figure),
            "ladder" => Ok(Formula::Ladder),
            other => Err(CliError::bad(format!("formula must be figure or ladder, got '{other}'"))),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Formula::Figure => "figure",
            Formula::Ladder => "ladder",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::bad(format!("format must be csv or json, got '{other}'"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: Model,
    pub dws: DwsParams,
    pub mu: f64,
    pub mass: f64,
    pub epsilon: f64,
    pub branch: Branch,
    pub convention: Convention,
    pub g2_override: Option<G2Override>,
    pub grid: GridSpec,
    pub half_line: bool,
    pub n_levels: usize,
    pub method: Option<String>,
    pub formula: Option<Formula>,
    pub length: f64,
    pub lambda: f64,
    pub sweep: Option<String>,
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub steps: usize,
    pub level: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub no_banner: bool,
}

/// Parses `key=value` lines. Blank lines and `#` comments are skipped.
pub fn parse_config_file(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::bad(format!("config line {}: expected key=value", no + 1)))?;
        let k = k.trim().trim_start_matches("--");
        if !KEYS.contains(&k) {
            return Err(CliError::bad(format!("config line {}: unknown key '{k}'", no + 1)));
        }
        map.insert(k.to_string(), v.trim().to_string());
    }
    Ok(map)
}

struct Sources<'a> {
    file: &'a BTreeMap<String, String>,
}

impl Sources<'_> {
    fn raw(&self, flag: &Option<String>, key: &str) -> Option<String> {
        flag.clone().or_else(|| self.file.get(key).cloned())
    }

    fn parse<T: FromStr>(&self, flag: &Option<String>, key: &str) -> CliResult<Option<T>> {
        match self.raw(flag, key) {
            None => Ok(None),
            Some(s) => s
                .parse::<T>()
                .map(Some)
                .map_err(|_| CliError::bad(format!("invalid value for {key}: '{s}'"))),
        }
    }

    fn number(&self, flag: &Option<String>, key: &str) -> CliResult<Option<f64>> {
        let v: Option<f64> = self.parse(flag, key)?;
        match v {
            Some(x) if !x.is_finite() => Err(CliError::bad(format!("{key} must be finite"))),
            other => Ok(other),
        }
    }

    fn switch(&self, flag: bool, key: &str) -> CliResult<bool> {
        if flag {
            return Ok(true);
        }
        match self.file.get(key).map(String::as_str) {
            None | Some("false") => Ok(false),
            Some("true") => Ok(true),
            Some(other) => Err(CliError::bad(format!("{key} must be true or false, got '{other}'"))),
        }
    }
}

impl RunConfig {
    pub fn resolve(flags: &Flags) -> CliResult<Self> {
        let file = match &flags.config {
            Some(path) => read_config(path)?,
            None => BTreeMap::new(),
        };
        Self::merge(flags, &file)
    }

    pub fn merge(flags: &Flags, file: &BTreeMap<String, String>) -> CliResult<Self> {
        let s = Sources { file };
        let model = s.parse::<String>(&flags.model, "model")?.unwrap_or_else(|| "dws".into()).parse()?;
        let a0 = s.number(&flags.a0, "A0")?.unwrap_or(40.0);
        let v0 = s.number(&flags.v0, "V0")?.unwrap_or_else(|| DwsParams::default_depth(a0));
        let x0 = s.number(&flags.x0, "X0")?.unwrap_or_else(|| DwsParams::default_radius(a0));
        let a = s.number(&flags.a, "a")?.unwrap_or(0.65);
        let q = s.number(&flags.q, "q")?.unwrap_or(1.0);
        let c = s.number(&flags.c, "c")?.unwrap_or(0.0);
        let dws = DwsParams::new(v0, a, q, x0, c, a0)?;

        let mu_in = s.number(&flags.mu, "mu")?;
        let mass_in = s.number(&flags.mass, "M")?;
        let (mu, mass) = match (mu_in, mass_in) {
            (Some(mu), Some(m)) => {
                if m == 0.0 {
                    return Err(CliError::bad("massless case M = 0 is not supported"));
                }
                if (mu * m - 1.0).abs() > 1e-12 {
                    return Err(CliError::bad(format!("mu = {mu} and M = {m} disagree; mu is 1/M")));
                }
                (mu, m)
            }
            (Some(mu), None) => (mu, 1.0 / mu),
            (None, Some(m)) => {
                if m == 0.0 {
                    return Err(CliError::bad("massless case M = 0 is not supported"));
                }
                (1.0 / m, m)
            }
            (None, None) => (1.0, 1.0),
        };
        if !(mu > 0.0 && mu.is_finite() && mass > 0.0) {
            return Err(CliError::bad(format!("mu and M must be positive, got mu = {mu}, M = {mass}")));
        }

        let branch = match s.raw(&flags.branch, "branch") {
            Some(b) => b.parse::<Branch>()?,
            None => Branch::Minus,
        };
        let convention = match s.raw(&flags.convention, "convention") {
            Some(v) => v.parse::<Convention>()?,
            None => Convention::TransposeAdjoint,
        };
        let n_levels = s.parse::<usize>(&flags.n_levels, "n-levels")?.unwrap_or(4);
        if n_levels == 0 {
            return Err(CliError::bad("n-levels must be >= 1"));
        }
        let length = s.number(&flags.length, "L")?.unwrap_or(1.0);
        if length <= 0.0 {
            return Err(CliError::bad("L must be > 0"));
        }
        let format = match s.raw(&flags.format, "format") {
            Some(f) => f.parse()?,
            None => Format::Csv,
        };
        let method = s.raw(&flags.method, "method");
        let formula = match s.raw(&flags.formula, "formula") {
            Some(f) => Some(f.parse()?),
            None => None,
        };
        let g2_override = match s.raw(&flags.g2_override, "G2-override") {
            Some(v) => Some(v.parse()?),
            None => None,
        };
        let grid = match s.raw(&flags.grid, "grid") {
            Some(g) => g.parse()?,
            None => GridSpec::Auto,
        };

        Ok(RunConfig {
            model,
            dws,
            mu,
            mass,
            epsilon: s.number(&flags.epsilon, "epsilon")?.unwrap_or(0.0),
            branch,
            convention,
            g2_override,
            grid,
            half_line: s.switch(flags.half_line, "half-line")?,
            n_levels,
            method,
            formula,
            length,
            lambda: s.number(&flags.lambda, "lambda")?.unwrap_or(1.0),
            sweep: s.raw(&flags.sweep, "sweep"),
            from: s.number(&flags.from, "from")?,
            to: s.number(&flags.to, "to")?,
            steps: s.parse::<usize>(&flags.steps, "steps")?.unwrap_or(30),
            level: s.parse::<usize>(&flags.n, "n")?.unwrap_or(0),
            out: flags.out.clone().or_else(|| file.get("out").map(PathBuf::from)),
            format,
            no_banner: s.switch(flags.no_banner, "no-banner")?,
        })
    }

    /// `key = value` pairs in a fixed order, for output headers.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let p = &self.dws;
        let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        vec![
            ("model", self.model.to_string()),
            ("V0", p.v0.to_string()),
            ("a", p.a.to_string()),
            ("q", p.q.to_string()),
            ("X0", p.x0.to_string()),
            ("c", p.c.to_string()),
            ("A0", p.a0.to_string()),
            ("mu", self.mu.to_string()),
            ("M", self.mass.to_string()),
            ("epsilon", self.epsilon.to_string()),
            ("branch", self.branch.to_string()),
            ("convention", self.convention.tag().to_string()),
            ("G2-override", opt(self.g2_override.map(|g| g.to_string()))),
            ("grid", self.grid.to_string()),
            ("half-line", self.half_line.to_string()),
            ("n-levels", self.n_levels.to_string()),
            ("method", opt(self.method.clone())),
            ("formula", opt(self.formula.map(|f| f.to_string()))),
            ("L", self.length.to_string()),
            ("lambda", self.lambda.to_string()),
            ("sweep", opt(self.sweep.clone())),
            ("from", opt(self.from.map(|v| v.to_string()))),
            ("to", opt(self.to.map(|v| v.to_string()))),
            ("steps", self.steps.to_string()),
            ("n", self.level.to_string()),
            ("format", self.format.to_string()),
        ]
    }
}

fn read_config(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::bad(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_file(&text)
}
