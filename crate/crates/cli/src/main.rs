//! `dpa`: closed-form degenerate parametric amplifier dynamics from the command line.
//!
//! Exit codes: 0 success, 1 runtime failure (singular time, convergence,
//! failed verification), 2 invalid usage, 3 parameters outside the physical domain.

mod config;
mod output;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dpa_core::canonical::{minimum_uncertainty_times, squeeze_parameters};
use dpa_core::characteristic::mu_pair;
use dpa_core::ermakov::{evolve_closed_form, SlowInvariants};
use dpa_core::fock::{amplitudes, sample_wavefunction, WavefunctionGrid};
use dpa_core::oracle::{default_grid, GridSpec};
use dpa_core::phase_space::{contour_q, WignerGrid};
use dpa_core::propagators::propagate;
use dpa_core::statistics::report;
use dpa_core::{verify, ModelRegistry, C64};
use rayon::prelude::*;
use serde_json::json;

use config::{Common, Format, RunConfig};
use output::{float, Table};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Runtime(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
        }
    }
}

impl From<dpa_core::Error> for CliError {
    fn from(e: dpa_core::Error) -> Self {
        if e.is_domain() {
            CliError::Domain(e.to_string())
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(format!("i/o: {e}"))
    }
}

#[derive(Debug, Parser)]
#[command(name = "dpa", version, about = "Closed-form dynamics of degenerate parametric amplifiers")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// t, mu0, mu1 and their Wronskian
    Mu,
    /// Ermakov state and slow invariants A, B, C, D
    Ermakov,
    /// Photon statistics, quadrature variances and means
    Stats,
    /// Transition amplitudes c_mn of column n at one time
    Amplitudes,
    /// Wigner function of the n = 0 state on a grid
    Wigner,
    /// Contours Q = level over a time grid
    Figure1,
    /// Apply the Green's function to a sampled wave function
    Propagate {
        /// CSV of x, Re psi, Im psi on a uniform grid (default: psi_n(x, 0))
        #[arg(long, value_name = "PATH")]
        input: Option<std::path::PathBuf>,
    },
    /// Rotation, squeeze and displacement parameters
    SqueezeParams,
    /// Roots of alpha(t) on [start, stop] of --t-grid
    Tmin,
    /// Run the acceptance suite and print a JSON report
    Verify {
        #[arg(long)]
        quick: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("dpa: {e}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let msg = match &e {
                CliError::Usage(m) | CliError::Domain(m) | CliError::Runtime(m) => m,
            };
            eprintln!("dpa: {msg}");
            ExitCode::from(e.code())
        }
    }
}

/// `DPA_THREADS` caps the worker pool; 0 or unset means one per core.
fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("DPA_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("DPA_THREADS must be an integer, got {v:?}"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let registry = ModelRegistry::builtin();
    let cfg = config::resolve(cli.common, &registry)?;
    let mut buf = Vec::new();
    let code = match cli.command {
        Command::Mu => sweep(&cfg, &["t", "mu0", "mu1", "W"], mu_row)?.write(cfg.format, &mut buf).map(|_| 0)?,
        Command::Ermakov => {
            sweep(&cfg, &["t", "alpha", "beta", "gamma", "delta", "eps", "kappa", "A", "B", "C", "D"], ermakov_row)?
                .write(cfg.format, &mut buf)
                .map(|_| 0)?
        }
        Command::Stats => sweep(
            &cfg,
            &["t", "mean_n", "var_n", "g2", "sigma_q", "sigma_p", "sigma_pq", "mean_q", "mean_p"],
            stats_row,
        )?
        .write(cfg.format, &mut buf)
        .map(|_| 0)?,
        Command::SqueezeParams => sweep(&cfg, &["t", "theta", "tau", "phi", "re_xi", "im_xi"], squeeze_row)?
            .write(cfg.format, &mut buf)
            .map(|_| 0)?,
        Command::Amplitudes => amplitudes_cmd(&cfg, &mut buf)?,
        Command::Wigner => wigner_cmd(&cfg, &mut buf)?,
        Command::Figure1 => figure_cmd(&cfg, &mut buf)?,
        Command::Propagate { input } => propagate_cmd(&cfg, input.as_deref(), &mut buf)?,
        Command::Tmin => tmin_cmd(&cfg, &mut buf)?,
        Command::Verify { quick } => verify_cmd(quick, &mut buf)?,
    };
    match &cfg.out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            f.write_all(&buf)?;
            f.flush()?;
        }
        None => io::stdout().lock().write_all(&buf)?,
    }
    Ok(code)
}

type RowFn = fn(&RunConfig, f64) -> Result<Vec<f64>, CliError>;

/// Evaluates `row` at every time of the sweep in parallel, keeping grid order.
fn sweep(cfg: &RunConfig, columns: &[&'static str], row: RowFn) -> Result<Table, CliError> {
    let rows: Vec<Vec<f64>> = cfg.sweep().par_iter().map(|&t| row(cfg, t)).collect::<Result<_, _>>()?;
    let mut table = Table::new(columns);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

fn mu_row(cfg: &RunConfig, t: f64) -> Result<Vec<f64>, CliError> {
    let m = mu_pair(t, &cfg.model)?;
    Ok(vec![t, m.mu0, m.mu1, m.wronskian()])
}

fn ermakov_row(cfg: &RunConfig, t: f64) -> Result<Vec<f64>, CliError> {
    let s = evolve_closed_form(&cfg.init, t, &cfg.model)?;
    let inv = SlowInvariants::from_state(&s, cfg.model.omega());
    Ok(vec![t, s.alpha, s.beta, s.gamma, s.delta, s.eps, s.kappa, inv.a, inv.b, inv.c, inv.d])
}

fn stats_row(cfg: &RunConfig, t: f64) -> Result<Vec<f64>, CliError> {
    let r = report(&cfg.init, t, &cfg.model)?;
    let g2 = r.g2.unwrap_or(f64::NAN);
    Ok(vec![t, r.mean_n, r.var_n, g2, r.sigma_q, r.sigma_p, r.sigma_pq, r.mean_q, r.mean_p])
}

fn squeeze_row(cfg: &RunConfig, t: f64) -> Result<Vec<f64>, CliError> {
    let s = squeeze_parameters(&evolve_closed_form(&cfg.init, t, &cfg.model)?, cfg.model.omega());
    Ok(vec![t, s.theta, s.tau, s.phi, s.xi_d.re, s.xi_d.im])
}

fn amplitudes_cmd(cfg: &RunConfig, w: &mut impl Write) -> Result<u8, CliError> {
    let t = cfg.single()?;
    let a = amplitudes(&cfg.init, t, &cfg.model, cfg.nmax)?;
    let header = json!({
        "model": cfg.model.name(),
        "omega": cfg.model.omega(),
        "lambda": cfg.model.lambda(),
        "t": t,
        "n": a.n,
        "nmax": a.nmax,
        "tail_mass": a.tail_mass,
        "order_gap": a.order_gap,
    });
    let mut table = Table::indexed(&["m", "re", "im", "abs2"]);
    for (m, c) in a.entries.iter().enumerate() {
        table.push(vec![m as f64, c.re, c.im, c.norm_sqr()]);
    }
    match cfg.format {
        Format::Csv => {
            writeln!(w, "# {header}")?;
            table.write_csv(w)?;
        }
        Format::Json => {
            let doc = json!({ "header": header, "amplitudes": table });
            serde_json::to_writer_pretty(&mut *w, &doc).map_err(io::Error::from)?;
            writeln!(w)?;
        }
    }
    Ok(0)
}

fn wigner_cmd(cfg: &RunConfig, w: &mut impl Write) -> Result<u8, CliError> {
    let t = cfg.single()?;
    let points = cfg.points.unwrap_or(513);
    if points < 3 || points % 2 == 0 {
        return Err(CliError::Usage(format!("--points must be odd and at least 3, got {points}")));
    }
    let g = WignerGrid::sample(&cfg.init, t, &cfg.model, points)?;
    match cfg.format {
        Format::Csv => {
            writeln!(w, "x,p,W")?;
            let ps = g.p.points();
            for (i, x) in g.x.points().iter().enumerate() {
                for (j, p) in ps.iter().enumerate() {
                    writeln!(w, "{},{},{}", float(*x), float(*p), float(g.values[i * points + j]))?;
                }
            }
        }
        Format::Json => {
            let axis = |s: &GridSpec| json!({ "lower": s.lower, "upper": s.upper, "num_points": s.num_points });
            let rows: Vec<&[f64]> = g.values.chunks(points).collect();
            let doc = json!({ "t": t, "x": axis(&g.x), "p": axis(&g.p), "values": rows });
            serde_json::to_writer(&mut *w, &doc).map_err(io::Error::from)?;
            writeln!(w)?;
        }
    }
    Ok(0)
}

fn figure_cmd(cfg: &RunConfig, w: &mut impl Write) -> Result<u8, CliError> {
    let points = cfg.points.unwrap_or(256);
    let frames: Vec<(f64, Vec<(f64, f64)>)> = cfg
        .sweep()
        .par_iter()
        .map(|&t| Ok((t, contour_q(cfg.level, t, &cfg.init, &cfg.model, points)?)))
        .collect::<Result<_, CliError>>()?;
    match cfg.format {
        Format::Csv => {
            writeln!(w, "t,x,p")?;
            for (t, poly) in &frames {
                for (x, p) in poly {
                    writeln!(w, "{},{},{}", float(*t), float(*x), float(*p))?;
                }
            }
        }
        Format::Json => {
            let doc: Vec<_> =
                frames.iter().map(|(t, poly)| json!({ "t": t, "level": cfg.level, "points": poly })).collect();
            serde_json::to_writer_pretty(&mut *w, &doc).map_err(io::Error::from)?;
            writeln!(w)?;
        }
    }
    Ok(0)
}

fn read_grid(path: &Path) -> Result<WavefunctionGrid, CliError> {
    let text = fs::read_to_string(path)?;
    let mut xs = Vec::new();
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || (i == 0 && line.starts_with(|c: char| c.is_alphabetic())) {
            continue;
        }
        let cells: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| CliError::Usage(format!("{}:{}: expected x,re,im", path.display(), i + 1)))?;
        let [x, re, im] = cells[..] else {
            return Err(CliError::Usage(format!("{}:{}: expected three columns", path.display(), i + 1)));
        };
        xs.push(x);
        values.push(C64::new(re, im));
    }
    let n = xs.len();
    if n < 3 || n % 2 == 0 {
        return Err(CliError::Usage(format!("input grid needs an odd number (>= 3) of rows, got {n}")));
    }
    let h = (xs[n - 1] - xs[0]) / (n - 1) as f64;
    let uniform = xs.iter().enumerate().all(|(k, x)| (x - (xs[0] + h * k as f64)).abs() <= 1e-9 * h.abs().max(1.0));
    if !uniform || h <= 0.0 {
        return Err(CliError::Usage("input grid must be uniform and increasing in x".into()));
    }
    Ok(WavefunctionGrid { x_min: xs[0], x_max: xs[n - 1], num_points: n, values, t: 0.0, n: 0 })
}

fn propagate_cmd(cfg: &RunConfig, input: Option<&Path>, w: &mut impl Write) -> Result<u8, CliError> {
    let t = cfg.single()?;
    let start = match input {
        Some(path) => read_grid(path)?,
        None => sample_wavefunction(&cfg.init, 0.0, &cfg.model, &default_grid(&cfg.init, t, &cfg.model)?)?,
    };
    let out = propagate(&start, t, &cfg.model)?;
    let mut table = Table::new(&["x", "re", "im"]);
    for (x, v) in out.xs().into_iter().zip(&out.values) {
        table.push(vec![x, v.re, v.im]);
    }
    table.write(cfg.format, w)?;
    Ok(0)
}

fn tmin_cmd(cfg: &RunConfig, w: &mut impl Write) -> Result<u8, CliError> {
    let (t0, t1) = cfg.range();
    let r = minimum_uncertainty_times(&cfg.init, &cfg.model, t0, t1)?;
    match cfg.format {
        Format::Csv => {
            writeln!(w, "t,kind")?;
            for t in &r.roots {
                writeln!(w, "{},root", float(*t))?;
            }
            for t in &r.touching {
                writeln!(w, "{},touching", float(*t))?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &json!({ "roots": r.roots, "touching": r.touching }))
                .map_err(io::Error::from)?;
            writeln!(w)?;
        }
    }
    Ok(0)
}

fn verify_cmd(quick: bool, w: &mut impl Write) -> Result<u8, CliError> {
    let reports = verify::run_all(quick);
    let all = reports.iter().all(verify::CriterionReport::passed);
    let items: Vec<_> = reports
        .iter()
        .map(|r| {
            let checks: Vec<_> = r
                .checks
                .iter()
                .map(|c| {
                    json!({
                        "label": c.label,
                        "measured": c.measured,
                        "tolerance": c.tolerance,
                        "bound": match c.bound {
                            verify::Bound::AtMost => "at_most",
                            verify::Bound::Above => "above",
                        },
                        "passed": c.passed(),
                    })
                })
                .collect();
            json!({
                "id": r.id,
                "name": r.name,
                "passed": r.passed(),
                "checks": checks,
                "error": r.error,
                "note": r.note,
            })
        })
        .collect();
    let doc = json!({ "quick": quick, "passed": all, "criteria": items });
    serde_json::to_writer_pretty(&mut *w, &doc).map_err(io::Error::from)?;
    writeln!(w)?;
    Ok(if all { 0 } else { 1 })
}
