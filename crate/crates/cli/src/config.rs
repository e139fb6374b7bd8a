//! Flag/config-file merging into a validated run configuration.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use dpa_core::fock::Truncation;
use dpa_core::{InitialData, ModelParams, ModelRegistry};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Options shared by every subcommand. Any of them may also come from `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// key=value file; flags given on the command line win
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Registered model name: phi0 or phi90
    #[arg(long, global = true)]
    pub model: Option<String>,
    #[arg(long, global = true, value_name = "F", allow_hyphen_values = true)]
    pub omega: Option<f64>,
    #[arg(long, global = true, value_name = "F", allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Initial data "alpha,beta,gamma,delta,eps,kappa" (default: vacuum)
    #[arg(long, global = true, value_name = "LIST", allow_hyphen_values = true)]
    pub init: Option<String>,
    /// Fock index of the dynamical state
    #[arg(long, global = true, value_name = "INT")]
    pub n: Option<usize>,
    /// Single time
    #[arg(long, global = true, value_name = "F", conflicts_with = "t_grid", allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// Uniform time grid start:stop:count
    #[arg(long = "t-grid", global = true, value_name = "GRID", allow_hyphen_values = true)]
    pub t_grid: Option<String>,
    /// Truncation order, or "auto"
    #[arg(long, global = true, value_name = "INT|auto")]
    pub nmax: Option<String>,
    /// Contour level of Q
    #[arg(long, global = true, value_name = "F")]
    pub level: Option<f64>,
    /// Grid resolution (wigner) or points per contour (figure1)
    #[arg(long, global = true, value_name = "INT")]
    pub points: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file (default: standard output)
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

/// Fully resolved configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: ModelParams,
    pub init: InitialData,
    pub times: TimeSpec,
    pub nmax: Truncation,
    pub level: f64,
    pub points: Option<usize>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeSpec {
    Default,
    Single(f64),
    Grid { start: f64, stop: f64, count: usize },
}

impl RunConfig {
    /// Times of a sweep; the default is 101 points over one period 2π/ω.
    pub fn sweep(&self) -> Vec<f64> {
        match self.times {
            TimeSpec::Default => grid_points(0.0, 2.0 * PI / self.model.omega(), 101),
            TimeSpec::Single(t) => vec![t],
            TimeSpec::Grid { start, stop, count } => grid_points(start, stop, count),
        }
    }

    /// The single time of a one-shot command (default 1).
    pub fn single(&self) -> Result<f64, CliError> {
        match self.times {
            TimeSpec::Default => Ok(1.0),
            TimeSpec::Single(t) => Ok(t),
            TimeSpec::Grid { start, count: 1, .. } => Ok(start),
            TimeSpec::Grid { .. } => Err(CliError::Usage("this command takes a single time; use --t".into())),
        }
    }

    /// `[start, stop]` of a search range (default one half period π/ω).
    pub fn range(&self) -> (f64, f64) {
        match self.times {
            TimeSpec::Default => (0.0, PI / self.model.omega()),
            TimeSpec::Single(t) => (t, t),
            TimeSpec::Grid { start, stop, .. } => (start, stop),
        }
    }
}

pub fn grid_points(start: f64, stop: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    let h = (stop - start) / (count - 1) as f64;
    (0..count).map(|k| if k == count - 1 { stop } else { start + h * k as f64 }).collect()
}

const KEYS: [&str; 12] =
    ["model", "omega", "lambda", "init", "n", "t", "t-grid", "nmax", "level", "points", "format", "out"];

fn read_config(path: &PathBuf) -> Result<BTreeMap<String, String>, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", i + 1)))?;
        let k = k.trim().trim_start_matches("--").replace('_', "-");
        if !KEYS.contains(&k.as_str()) {
            return Err(CliError::Usage(format!("config line {}: unknown key {k:?}", i + 1)));
        }
        map.insert(k, v.trim().to_string());
    }
    Ok(map)
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.trim().parse().map_err(|_| CliError::Usage(format!("invalid value for {key}: {v:?}")))
}

/// Overlays the config file under the flags.
fn merge(mut c: Common) -> Result<Common, CliError> {
    let Some(path) = c.config.clone() else { return Ok(c) };
    let file = read_config(&path)?;
    let get = |k: &str| file.get(k).map(String::as_str);
    if c.model.is_none() {
        c.model = get("model").map(str::to_string);
    }
    if c.omega.is_none() {
        c.omega = get("omega").map(|v| parse("omega", v)).transpose()?;
    }
    if c.lambda.is_none() {
        c.lambda = get("lambda").map(|v| parse("lambda", v)).transpose()?;
    }
    if c.init.is_none() {
        c.init = get("init").map(str::to_string);
    }
    if c.n.is_none() {
        c.n = get("n").map(|v| parse("n", v)).transpose()?;
    }
    if c.t.is_none() && c.t_grid.is_none() {
        c.t = get("t").map(|v| parse("t", v)).transpose()?;
        c.t_grid = get("t-grid").map(str::to_string);
        if c.t.is_some() && c.t_grid.is_some() {
            return Err(CliError::Usage("config sets both t and t-grid".into()));
        }
    }
    if c.nmax.is_none() {
        c.nmax = get("nmax").map(str::to_string);
    }
    if c.level.is_none() {
        c.level = get("level").map(|v| parse("level", v)).transpose()?;
    }
    if c.points.is_none() {
        c.points = get("points").map(|v| parse("points", v)).transpose()?;
    }
    if c.format.is_none() {
        c.format = get("format")
            .map(|v| Format::from_str(v, true).map_err(|_| CliError::Usage(format!("invalid format {v:?}"))))
            .transpose()?;
    }
    if c.out.is_none() {
        c.out = get("out").map(PathBuf::from);
    }
    Ok(c)
}

fn parse_init(s: &str, n: usize) -> Result<InitialData, CliError> {
    let vals: Vec<f64> = s.split(',').map(|v| parse("init", v)).collect::<Result<_, _>>()?;
    let [a, b, g, d, e, k] = vals[..] else {
        return Err(CliError::Usage(format!("--init needs six comma-separated numbers, got {}", vals.len())));
    };
    Ok(InitialData::new(a, b, g, d, e, k, n)?)
}

fn parse_grid(s: &str) -> Result<TimeSpec, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, c] = parts[..] else {
        return Err(CliError::Usage(format!("--t-grid expects start:stop:count, got {s:?}")));
    };
    let (start, stop, count): (f64, f64, usize) = (parse("t-grid", a)?, parse("t-grid", b)?, parse("t-grid", c)?);
    if count == 0 || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(CliError::Usage(format!("--t-grid needs count >= 1 and stop >= start, got {s:?}")));
    }
    Ok(TimeSpec::Grid { start, stop, count })
}

pub fn resolve(common: Common, registry: &ModelRegistry) -> Result<RunConfig, CliError> {
    let c = merge(common)?;
    let name = c.model.as_deref().unwrap_or("phi0");
    if !registry.names().contains(&name) {
        return Err(CliError::Usage(format!("unknown model {name:?}; available: {}", registry.names().join(", "))));
    }
    let model = registry.build(name, c.omega.unwrap_or(1.0), c.lambda.unwrap_or(0.25))?;
    let n = c.n.unwrap_or(0);
    let init = match &c.init {
        Some(s) => parse_init(s, n)?,
        None => InitialData::vacuum(model.omega()).with_n(n),
    };
    let times = match (c.t, &c.t_grid) {
        (Some(t), _) if !t.is_finite() => return Err(CliError::Usage("--t must be finite".into())),
        (Some(t), _) => TimeSpec::Single(t),
        (None, Some(g)) => parse_grid(g)?,
        (None, None) => TimeSpec::Default,
    };
    let nmax = match c.nmax.as_deref() {
        None | Some("auto") => Truncation::Auto,
        Some(v) => Truncation::Fixed(parse("nmax", v)?),
    };
    let level = c.level.unwrap_or(2.0);
    Ok(RunConfig {
        model,
        init,
        times,
        nmax,
        level,
        points: c.points,
        format: c.format.unwrap_or(Format::Csv),
        out: c.out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("0:3:301").unwrap(), TimeSpec::Grid { start: 0.0, stop: 3.0, count: 301 });
        assert!(parse_grid("0:3").is_err());
        assert!(parse_grid("3:0:5").is_err());
        assert!(parse_grid("0:1:0").is_err());
        let g = grid_points(0.0, 3.0, 301);
        assert_eq!((g.len(), g[300]), (301, 3.0));
    }

    #[test]
    fn defaults_and_domain() {
        let r = ModelRegistry::builtin();
        let cfg = resolve(Common::default(), &r).unwrap();
        assert_eq!(cfg.init, InitialData::vacuum(1.0));
        assert_eq!(cfg.model.name(), "phi0");
        let bad = Common { lambda: Some(2.0), ..Common::default() };
        assert!(matches!(resolve(bad, &r), Err(CliError::Domain(_))));
        let bad = Common { init: Some("0,0,0,0,0,0".into()), ..Common::default() };
        assert!(matches!(resolve(bad, &r), Err(CliError::Domain(_))));
        let bad = Common { init: Some("0,1".into()), ..Common::default() };
        assert!(matches!(resolve(bad, &r), Err(CliError::Usage(_))));
    }
}
