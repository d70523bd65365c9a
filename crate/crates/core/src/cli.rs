//! Command-line front end. Every command writes plain CSV/JSON plot data
//! plus a `manifest.json` describing the run.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bifurcation::{self, asymptotic_guess, MAX_GUESS_EPS};
use crate::error::FlameError;
use crate::evolution::{stability_probe, StabilityProbeConfig, INSTABILITY_THRESHOLD};
use crate::geometry::reconstruct_curve;
use crate::model::{residual, ModelKind, WaveParams};
use crate::solver::{continue_branch, quasi_newton_solve, SolveConfig, WaveSolution};
use crate::spectral::{self, ThetaProfile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_UNSUPPORTED: i32 = 4;

/// Environment variable that replaces the default output directory.
pub const OUT_DIR_ENV: &str = "FLAMEFRONT_OUT";

#[derive(Debug, Parser)]
#[command(
    name = "flamefront",
    version,
    about = "Traveling flame-front waves: bifurcation, continuation and stability"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bifurcation point of the flat front and its algebraic certificates.
    Bifurcate(BifurcateArgs),
    /// Continue a branch of traveling waves in amplitude.
    Branch(BranchArgs),
    /// Solve a single traveling wave of given amplitude.
    Wave(WaveArgs),
    /// Estimate the growth rate of a perturbed wave (linear closure).
    Stability(StabilityArgs),
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output directory (default: $FLAMEFRONT_OUT, else the current directory).
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

impl OutArgs {
    fn resolve(&self) -> PathBuf {
        self.out_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."))
    }
}

#[derive(Debug, Args)]
pub struct BifurcateArgs {
    #[arg(long)]
    pub model: ModelKind,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub k0: u32,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct BranchArgs {
    #[arg(long)]
    pub model: ModelKind,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub k0: u32,
    #[arg(long, default_value_t = 0.05)]
    pub h_step: f64,
    #[arg(long, default_value_t = 10.0)]
    pub h_max: f64,
    #[arg(long, default_value_t = 256)]
    pub nx: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct WaveArgs {
    #[arg(long)]
    pub model: ModelKind,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub k0: u32,
    /// Target amplitude `max θ`.
    #[arg(long)]
    pub h: f64,
    #[arg(long, default_value_t = 256)]
    pub nx: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    /// Wave JSON as written by `branch` or `wave`.
    pub wave_file: PathBuf,
    #[arg(long, default_value_t = 1e-8)]
    pub delta: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub dt: f64,
    #[arg(long, default_value_t = 2.0)]
    pub t_max: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Solver(FlameError),
    #[error("{0}")]
    Unsupported(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Solver(_) | CliError::Io(_) => EXIT_SOLVER,
            CliError::Unsupported(_) => EXIT_UNSUPPORTED,
        }
    }
}

impl From<FlameError> for CliError {
    fn from(e: FlameError) -> Self {
        match e {
            FlameError::UnsupportedModel(m) => CliError::Unsupported(m),
            FlameError::Domain(m) => CliError::Usage(m),
            e @ FlameError::InvalidGrid { .. } => CliError::Usage(e.to_string()),
            other => CliError::Solver(other),
        }
    }
}

/// Scalar-per-wave record of `branch.csv`.
pub const BRANCH_CSV_HEADER: &str = "h,alpha,beta,L,delta_alpha,delta_beta,delta_L,residual_norm";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveFile {
    #[serde(default)]
    pub sigma: Vec<f64>,
    pub theta: Vec<f64>,
    #[serde(default)]
    pub x: Vec<f64>,
    #[serde(default)]
    pub y: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "L")]
    pub length: f64,
    pub model: ModelKind,
    #[serde(default = "default_k0")]
    pub k0: u32,
    #[serde(default)]
    pub h: f64,
    #[serde(default)]
    pub residual_norm: f64,
}

fn default_k0() -> u32 {
    1
}

impl WaveFile {
    pub fn from_solution(w: &WaveSolution) -> Result<Self, FlameError> {
        let c = reconstruct_curve(&w.theta)?;
        Ok(Self {
            sigma: spectral::grid_points(w.theta.nx()),
            theta: w.theta.values().to_vec(),
            x: c.x[..w.theta.nx()].to_vec(),
            y: c.y[..w.theta.nx()].to_vec(),
            alpha: w.alpha,
            beta: w.beta,
            length: w.length,
            model: w.kind,
            k0: w.k0,
            h: w.amplitude,
            residual_norm: w.residual_norm,
        })
    }

    /// Rebuilds the wave; the length is recomputed from `θ`.
    pub fn to_solution(&self) -> Result<WaveSolution, FlameError> {
        let theta = ThetaProfile::from_values(self.theta.clone())?;
        let params = WaveParams::for_profile(&theta, self.alpha, self.beta)?;
        let r = residual(&theta, &params, self.model);
        Ok(WaveSolution {
            amplitude: theta.max(),
            residual_norm: r.iter().fold(0.0, |m, v| m.max(v.abs())),
            theta,
            alpha: params.alpha,
            beta: params.beta,
            length: params.length,
            k0: self.k0,
            kind: self.model,
            iterations: 0,
        })
    }
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub artifact_version: String,
    pub outputs: Vec<String>,
    pub timestamp: String,
}

struct Output {
    dir: PathBuf,
    written: Vec<String>,
}

impl Output {
    fn new(dir: PathBuf) -> Result<Self, CliError> {
        fs::create_dir_all(&dir)?;
        Ok(Self {
            dir,
            written: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, contents)?;
        self.written.push(path.to_string_lossy().into_owned());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let s = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.into()))?;
        self.write(name, &(s + "\n"))
    }

    fn finish(
        mut self,
        command: &str,
        parameters: BTreeMap<String, serde_json::Value>,
    ) -> Result<(), CliError> {
        let manifest_path = self.dir.join("manifest.json");
        self.written
            .push(manifest_path.to_string_lossy().into_owned());
        let m = RunManifest {
            command: command.to_string(),
            parameters,
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: self.written.clone(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        };
        let s = serde_json::to_string_pretty(&m).map_err(|e| CliError::Io(e.into()))?;
        fs::write(manifest_path, s + "\n")?;
        Ok(())
    }
}

fn params(pairs: &[(&str, serde_json::Value)]) -> BTreeMap<String, serde_json::Value> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn wave_file_name(h: f64) -> String {
    format!("wave_{h:.6}.json")
}

fn cmd_bifurcate(a: &BifurcateArgs, out: &mut impl std::io::Write) -> Result<(), CliError> {
    let alpha0 = bifurcation::bifurcation_alpha(a.model, a.k0)?;
    let mut report = serde_json::Map::new();
    report.insert("model".into(), a.model.name().into());
    report.insert("k0".into(), a.k0.into());
    report.insert("alpha0".into(), alpha0.into());
    writeln!(out, "model     {}", a.model.name())?;
    writeln!(out, "k0        {}", a.k0)?;
    writeln!(out, "alpha0    {alpha0:.16e}")?;
    match a.model {
        ModelKind::Linear => {
            report.insert("alpha1".into(), alpha0.into());
        }
        ModelKind::Nonlinear => {
            let disc = bifurcation::cubic_discriminant(a.k0);
            let res = bifurcation::transversality_resultant(a.k0)?;
            let q = bifurcation::kernel_cubic(alpha0, a.k0);
            writeln!(out, "discriminant {disc}")?;
            writeln!(out, "resultant    {res}")?;
            writeln!(out, "q(alpha0)    {q:.3e}")?;
            report.insert("discriminant".into(), disc.into());
            report.insert("resultant".into(), res.into());
            report.insert("kernel_cubic_at_root".into(), q.into());
        }
    }
    let mut o = Output::new(a.out.resolve())?;
    o.json("bifurcation.json", &report)?;
    o.finish(
        "bifurcate",
        params(&[("model", a.model.name().into()), ("k0", a.k0.into())]),
    )
}

fn branch_row(w: &WaveSolution, alpha0: f64) -> String {
    [
        w.amplitude,
        w.alpha,
        w.beta,
        w.length,
        w.alpha - alpha0,
        w.beta - 1.0,
        w.length - 2.0 * PI,
        w.residual_norm,
    ]
    .iter()
    .map(|&v| num(v))
    .collect::<Vec<_>>()
    .join(",")
}

fn cmd_branch(a: &BranchArgs, out: &mut impl std::io::Write) -> Result<(), CliError> {
    if !(a.h_step > 0.0) || !(a.h_max >= a.h_step) {
        return Err(CliError::Usage(format!(
            "need 0 < h-step <= h-max (got h-step {}, h-max {})",
            a.h_step, a.h_max
        )));
    }
    if a.h_step > MAX_GUESS_EPS {
        return Err(CliError::Usage(format!(
            "h-step must not exceed {MAX_GUESS_EPS}"
        )));
    }
    spectral::grid(a.nx)?;
    let alpha0 = bifurcation::bifurcation_alpha(a.model, a.k0)?;
    let cfg = SolveConfig {
        nx: a.nx,
        ..Default::default()
    };
    let rec = continue_branch(a.k0, a.model, a.h_step, a.h_max, &cfg).map_err(|e| match e {
        FlameError::BranchStart(_) => CliError::Solver(e),
        other => other.into(),
    })?;

    let mut o = Output::new(a.out.resolve())?;
    let mut csv = String::from(BRANCH_CSV_HEADER);
    csv.push('\n');
    for w in &rec.solutions {
        csv.push_str(&branch_row(w, alpha0));
        csv.push('\n');
    }
    o.write("branch.csv", &csv)?;
    for w in &rec.solutions {
        o.json(&wave_file_name(w.amplitude), &WaveFile::from_solution(w)?)?;
    }
    let last = rec.solutions.last();
    writeln!(out, "waves        {}", rec.solutions.len())?;
    writeln!(out, "termination  {}", rec.termination.name())?;
    if let Some(w) = last {
        writeln!(out, "final h      {:.6}", w.amplitude)?;
        writeln!(out, "final alpha  {:.10}", w.alpha)?;
        writeln!(out, "final beta   {:.10}", w.beta)?;
        writeln!(out, "final L      {:.10}", w.length)?;
    }
    o.finish(
        "branch",
        params(&[
            ("model", a.model.name().into()),
            ("k0", a.k0.into()),
            ("h_step", a.h_step.into()),
            ("h_max", a.h_max.into()),
            ("nx", a.nx.into()),
            ("termination", rec.termination.name().into()),
        ]),
    )
}

fn cmd_wave(a: &WaveArgs, out: &mut impl std::io::Write) -> Result<(), CliError> {
    if !(a.h > 0.0 && a.h <= MAX_GUESS_EPS) {
        return Err(CliError::Usage(format!(
            "single-wave amplitude must lie in (0, {MAX_GUESS_EPS}]; use `branch` for larger waves"
        )));
    }
    spectral::grid(a.nx)?;
    let cfg = SolveConfig {
        nx: a.nx,
        ..Default::default()
    };
    let (g, p) = asymptotic_guess(a.k0, a.h, a.model, a.nx)?;
    let w = quasi_newton_solve((&g, &p), a.h, a.model, &cfg).map_err(CliError::Solver)?;
    writeln!(out, "alpha  {:.16e}", w.alpha)?;
    writeln!(out, "beta   {:.16e}", w.beta)?;
    writeln!(out, "L      {:.16e}", w.length)?;
    writeln!(
        out,
        "iterations {}  residual {:.3e}",
        w.iterations, w.residual_norm
    )?;
    let mut o = Output::new(a.out.resolve())?;
    o.json(&wave_file_name(w.amplitude), &WaveFile::from_solution(&w)?)?;
    o.finish(
        "wave",
        params(&[
            ("model", a.model.name().into()),
            ("k0", a.k0.into()),
            ("h", a.h.into()),
            ("nx", a.nx.into()),
        ]),
    )
}

fn read_wave(path: &Path) -> Result<WaveFile, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("malformed wave file {}: {e}", path.display())))
}

#[derive(Debug, Serialize)]
struct FitReport {
    slope: f64,
    intercept: f64,
    window: [f64; 2],
    unstable_observed: bool,
    note: Option<String>,
    alpha: f64,
    delta: f64,
    dt: f64,
    t_max: f64,
}

fn cmd_stability(a: &StabilityArgs, out: &mut impl std::io::Write) -> Result<(), CliError> {
    let file = read_wave(&a.wave_file)?;
    if file.model != ModelKind::Linear {
        return Err(CliError::Unsupported(
            "stability probes are only available for the linear closure".into(),
        ));
    }
    let wave = file.to_solution()?;
    let cfg = StabilityProbeConfig {
        delta: a.delta,
        dt: a.dt,
        t_max: a.t_max,
        ..Default::default()
    };
    let g = stability_probe(&wave, &cfg)?;
    let note = (!g.unstable_observed)
        .then(|| format!("no instability observed at threshold {INSTABILITY_THRESHOLD:e}"));
    writeln!(out, "growth rate  {:.6}", g.rate)?;
    writeln!(out, "fit window   [{:.6}, {:.6}]", g.window.0, g.window.1)?;
    if let Some(n) = &note {
        writeln!(out, "{n}")?;
    }
    let mut o = Output::new(a.out.resolve())?;
    let mut csv = String::from("t,d\n");
    for (t, d) in &g.series {
        csv.push_str(&format!("{},{}\n", num(*t), num(*d)));
    }
    o.write("growth.csv", &csv)?;
    o.json(
        "fit.json",
        &FitReport {
            slope: g.rate,
            intercept: g.intercept,
            window: [g.window.0, g.window.1],
            unstable_observed: g.unstable_observed,
            note,
            alpha: wave.alpha,
            delta: a.delta,
            dt: a.dt,
            t_max: a.t_max,
        },
    )?;
    o.finish(
        "stability",
        params(&[
            ("wave_file", a.wave_file.to_string_lossy().as_ref().into()),
            ("delta", a.delta.into()),
            ("dt", a.dt.into()),
            ("t_max", a.t_max.into()),
        ]),
    )
}

/// Executes a parsed command, writing the human-readable report to `out`.
pub fn execute(cli: &Cli, out: &mut impl std::io::Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Bifurcate(a) => cmd_bifurcate(a, out),
        Command::Branch(a) => cmd_branch(a, out),
        Command::Wave(a) => cmd_wave(a, out),
        Command::Stability(a) => cmd_stability(a, out),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    match execute(&cli, &mut stdout.lock()) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
