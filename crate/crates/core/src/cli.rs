//! Command-line front end.
//!
//! Exit codes are part of the interface: 0 success, 1 verification failure,
//! 2 parse or usage error, 3 degenerate postselection, 4 I/O failure.

use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bench::{format_angle, parse_angle, parse_bench, BenchCircuit};
use crate::error::Error;
use crate::experiments::{
    element_unitarity_deviation, evaluate, linspace, oracle_superposition, qbs_network_deviation,
    state_identity_deviations, surface, surface_alpha_grid, surface_theta_grid, verify_scenario,
    DetectorCheck, Evaluation, Scenario, ScenarioId, DEFAULT_ALPHA_STEPS, DEFAULT_THETA_STEPS,
};
use crate::measurement::{outcome_probabilities, sample_shots, visibility, DetectorReading};
use crate::state::Polarization;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_IO: i32 = 4;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_SEED: u64 = 0;

/// Grid size used by `verify` for scenario sweeps.
const VERIFY_GRID: usize = 64;

#[derive(Debug, Parser)]
#[command(name = "delayed-choice", version, about = "Simulate single-photon delayed-choice interferometers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a bench file and print detector probabilities.
    Run(RunArgs),
    /// Sweep a scenario over θ and α, writing CSV.
    Sweep(SweepArgs),
    /// `sweep` with θ ∈ (0, 5π) × 256 and α ∈ [0, π/2] × 64 by default.
    Surface(SweepArgs),
    /// Check every scenario and element property against closed forms.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub bench: PathBuf,
    /// Sample this many photons.
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = ScenarioId::from_str)]
    pub scenario: ScenarioId,
    /// θ grid as `start:end:steps`, endpoints included (angles accept `pi` forms).
    #[arg(long)]
    pub theta: Option<GridSpec>,
    /// α grid as `start:end:steps`.
    #[arg(long)]
    pub alpha: Option<GridSpec>,
    /// Detector to record; defaults to the scenario's path-0 detector.
    #[arg(long)]
    pub detector: Option<String>,
    /// Postselected polarization for the superposition scenario.
    #[arg(long, value_parser = parse_polarization, default_value = "H")]
    pub branch: Polarization,
    /// Output CSV path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

fn parse_polarization(s: &str) -> Result<Polarization, String> {
    match s {
        "H" | "h" => Ok(Polarization::H),
        "V" | "v" => Ok(Polarization::V),
        _ => Err(format!("expected H or V, got {s:?}")),
    }
}

/// `start:end:steps`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        linspace(self.start, self.end, self.steps)
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, end, steps] = parts[..] else {
            return Err(format!("expected start:end:steps, got {s:?}"));
        };
        let steps: usize = steps
            .parse()
            .map_err(|_| format!("malformed step count {steps:?}"))?;
        if steps == 0 {
            return Err("steps must be at least 1".into());
        }
        Ok(GridSpec {
            start: parse_angle(start)?,
            end: parse_angle(end)?,
            steps,
        })
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

fn sim_error(err: Error) -> CliError {
    let code = match err {
        Error::DegeneratePostselection { .. } => EXIT_DEGENERATE,
        _ => EXIT_PARSE,
    };
    CliError::new(code, err.to_string())
}

fn io_error(path: &Path, err: io::Error) -> CliError {
    CliError::new(EXIT_IO, format!("{}: {err}", path.display()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PostselectionInfo {
    pub pol: Polarization,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeCount {
    pub outcome: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sampling {
    pub shots: u64,
    pub seed: u64,
    /// Counts over the full (mode, polarization) basis.
    pub outcomes: Vec<OutcomeCount>,
    /// Per detector, the counts landing on basis states it responds to.
    pub detectors: Vec<OutcomeCount>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub bench: String,
    pub modes: usize,
    pub postselect: Option<PostselectionInfo>,
    pub detectors: Vec<DetectorReading>,
    pub sampling: Option<Sampling>,
}

pub fn cmd_run(path: &Path, shots: Option<u64>, seed: Option<u64>) -> Result<RunReport, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let circuit = parse_bench(&text)
        .map_err(|e| CliError::new(EXIT_PARSE, format!("{}:{}: {}", path.display(), e.line, e.reason)))?;
    run_circuit(&circuit, &path.display().to_string(), shots, seed)
}

pub fn run_circuit(
    circuit: &BenchCircuit,
    label: &str,
    shots: Option<u64>,
    seed: Option<u64>,
) -> Result<RunReport, CliError> {
    let eval: Evaluation = evaluate(circuit).map_err(sim_error)?;
    let sampling = match shots {
        Some(n) => {
            let seed = seed.unwrap_or(DEFAULT_SEED);
            let counts = sample_shots(&outcome_probabilities(&eval.state), n, seed).map_err(sim_error)?;
            let detectors = circuit
                .detectors
                .iter()
                .map(|d| OutcomeCount {
                    outcome: d.name.clone(),
                    count: counts.iter().filter(|(l, _)| d.fires_on(*l)).map(|(_, c)| c).sum(),
                })
                .collect();
            Some(Sampling {
                shots: n,
                seed,
                outcomes: counts
                    .into_iter()
                    .map(|(l, c)| OutcomeCount {
                        outcome: l.to_string(),
                        count: c,
                    })
                    .collect(),
                detectors,
            })
        }
        None => None,
    };
    Ok(RunReport {
        bench: label.to_string(),
        modes: circuit.modes,
        postselect: eval
            .postselection
            .map(|(pol, probability)| PostselectionInfo { pol, probability }),
        detectors: eval.readings,
        sampling,
    })
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.15}"))
        .unwrap_or_else(|| "undefined".into())
}

pub fn write_run_text<W: Write>(r: &RunReport, mut w: W) -> io::Result<()> {
    writeln!(w, "bench: {}", r.bench)?;
    writeln!(w, "modes: {}", r.modes)?;
    if let Some(p) = &r.postselect {
        writeln!(w, "postselect: pol={} probability={:.15}", p.pol, p.probability)?;
    }
    writeln!(w, "{:<10} {:>4} {:>4} {:>18} {:>18}", "detector", "mode", "pol", "probability", "intensity")?;
    for d in &r.detectors {
        writeln!(
            w,
            "{:<10} {:>4} {:>4} {:>18.15} {:>18}",
            d.name,
            d.mode,
            d.pol.to_string(),
            d.probability,
            fmt_opt(d.intensity)
        )?;
    }
    if let Some(s) = &r.sampling {
        writeln!(w, "shots: {} seed: {}", s.shots, s.seed)?;
        for c in &s.outcomes {
            writeln!(w, "  |{}> {}", c.outcome, c.count)?;
        }
        for c in &s.detectors {
            writeln!(w, "  {} {}", c.outcome, c.count)?;
        }
    }
    Ok(())
}

pub fn cmd_sweep(args: &SweepArgs, fig3_defaults: bool) -> Result<Vec<u8>, CliError> {
    let thetas = match (&args.theta, fig3_defaults) {
        (Some(g), _) => g.points(),
        (None, true) => surface_theta_grid(DEFAULT_THETA_STEPS),
        (None, false) => return Err(CliError::new(EXIT_PARSE, "sweep needs --theta start:end:steps")),
    };
    let alphas = match (&args.alpha, fig3_defaults) {
        (Some(g), _) => g.points(),
        (None, true) => surface_alpha_grid(DEFAULT_ALPHA_STEPS),
        (None, false) => return Err(CliError::new(EXIT_PARSE, "sweep needs --alpha start:end:steps")),
    };
    let result = surface(args.scenario, args.branch, args.detector.as_deref(), &thetas, &alphas).map_err(sim_error)?;
    let mut buf = Vec::new();
    result
        .write_csv(&mut buf)
        .map_err(|e| CliError::new(EXIT_IO, e.to_string()))?;
    Ok(buf)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Scenario,
    Property,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    pub max_deviation: f64,
    pub threshold: f64,
    pub pass: bool,
    pub detectors: Vec<DetectorCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub tolerance: f64,
    pub pass: bool,
    pub checks: Vec<Check>,
}

fn property(name: &str, max_deviation: f64, tol: f64) -> Check {
    Check {
        name: name.into(),
        kind: CheckKind::Property,
        max_deviation,
        threshold: tol,
        pass: max_deviation < tol,
        detectors: Vec::new(),
    }
}

fn conditional_d2(alpha: f64, theta: f64) -> Result<f64, Error> {
    let eval = Scenario::new(ScenarioId::Fig2Superposition, alpha, theta).evaluate()?;
    Ok(eval.intensity("D2").expect("H branch is never empty"))
}

/// Worst deviation of the α = π/4 and 3π/4 superposition intensities from
/// their constant values, including their spread over θ.
fn special_value_deviation() -> Result<f64, Error> {
    let thetas = linspace(0.0, 2.0 * PI, 1000);
    let mut worst = 0.0f64;
    for (alpha, target) in [(FRAC_PI_4, (2.0 + SQRT_2) / 4.0), (3.0 * FRAC_PI_4, (2.0 - SQRT_2) / 4.0)] {
        let vals = thetas
            .iter()
            .map(|&t| conditional_d2(alpha, t))
            .collect::<Result<Vec<_>, _>>()?;
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let std = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / vals.len() as f64).sqrt();
        let dev = vals.iter().map(|v| (v - target).abs()).fold(std, f64::max);
        worst = worst.max(dev);
    }
    Ok(worst)
}

/// `|𝒱 − expected|` for wave (1), particle (0) and α = π/4 superposition (0) readings.
fn visibility_deviation() -> Result<f64, Error> {
    let thetas = linspace(0.0, 2.0 * PI, 1001);
    let alpha = 0.6;
    let series = |id: ScenarioId, det: &str, alpha: f64| -> Result<Vec<f64>, Error> {
        thetas
            .iter()
            .map(|&t| {
                Ok(Scenario::new(id, alpha, t)
                    .evaluate()?
                    .intensity(det)
                    .expect("branch populated"))
            })
            .collect()
    };
    let mut worst = 0.0f64;
    for (det, expected) in [("D2", 1.0), ("D3", 1.0), ("D1", 0.0), ("D4", 0.0)] {
        let v = visibility(&series(ScenarioId::Fig2ParticleWave, det, alpha)?)?;
        worst = worst.max((v - expected).abs());
    }
    let v = visibility(&series(ScenarioId::Fig2Superposition, "D2", FRAC_PI_4)?)?;
    Ok(worst.max(v))
}

/// Distance of the superposition surface from the closed form on a coarse grid.
fn superposition_closed_form_deviation() -> Result<f64, Error> {
    let mut worst = 0.0f64;
    for alpha in linspace(0.0, PI, 9) {
        for theta in linspace(0.0, 2.0 * PI, 9) {
            worst = worst.max((conditional_d2(alpha, theta)? - oracle_superposition(theta, alpha)).abs());
        }
    }
    Ok(worst)
}

pub fn cmd_verify(tol: f64) -> Result<VerifyReport, CliError> {
    let thetas = surface_theta_grid(VERIFY_GRID);
    let alphas = surface_alpha_grid(VERIFY_GRID);
    let mut checks = Vec::new();
    for id in ScenarioId::ALL {
        let r = verify_scenario(id, &thetas, &alphas, tol).map_err(sim_error)?;
        checks.push(Check {
            name: id.name().into(),
            kind: CheckKind::Scenario,
            max_deviation: r.max_deviation,
            threshold: tol,
            pass: r.pass,
            detectors: r.detectors,
        });
    }
    let [hyper, rotated, kept] = state_identity_deviations(16).map_err(sim_error)?;
    checks.push(property("state_hyperentangled", hyper, tol));
    checks.push(property("state_after_hwp", rotated, tol));
    checks.push(property("state_postselected", kept, tol));
    checks.push(property("element_unitarity", element_unitarity_deviation().map_err(sim_error)?, tol));
    checks.push(property("qbs_network", qbs_network_deviation().map_err(sim_error)?, tol));
    checks.push(property("special_values", special_value_deviation().map_err(sim_error)?, tol));
    checks.push(property("visibility", visibility_deviation().map_err(sim_error)?, tol));
    checks.push(property(
        "superposition_closed_form",
        superposition_closed_form_deviation().map_err(sim_error)?,
        tol,
    ));
    Ok(VerifyReport {
        tolerance: tol,
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}

pub fn write_verify_text<W: Write>(r: &VerifyReport, mut w: W) -> io::Result<()> {
    for c in &r.checks {
        writeln!(
            w,
            "{} {:<28} max_deviation={:.3e} threshold={:.0e}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.max_deviation,
            c.threshold
        )?;
    }
    writeln!(w, "{}", if r.pass { "all checks passed" } else { "verification FAILED" })
}

fn write_json<T: Serialize, W: Write>(value: &T, mut w: W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)
}

/// Dispatch a parsed command line, returning the process exit code.
pub fn run<O: Write, E: Write>(cli: Cli, mut out: O, mut err: E) -> i32 {
    let result = match cli.command {
        Command::Run(a) => cmd_run(&a.bench, a.shots, a.seed).and_then(|report| {
            match a.format {
                Format::Text => write_run_text(&report, &mut out),
                Format::Json => write_json(&report, &mut out),
            }
            .map_err(|e| CliError::new(EXIT_IO, e.to_string()))?;
            Ok(EXIT_OK)
        }),
        Command::Sweep(a) => sweep(&a, false, &mut out),
        Command::Surface(a) => sweep(&a, true, &mut out),
        Command::Verify(a) => cmd_verify(a.tol).and_then(|report| {
            match a.format {
                Format::Text => write_verify_text(&report, &mut out),
                Format::Json => write_json(&report, &mut out),
            }
            .map_err(|e| CliError::new(EXIT_IO, e.to_string()))?;
            Ok(if report.pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn sweep<O: Write>(args: &SweepArgs, fig3_defaults: bool, out: &mut O) -> Result<i32, CliError> {
    let csv = cmd_sweep(args, fig3_defaults)?;
    match &args.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| io_error(path, e))?;
            let mut w = BufWriter::new(file);
            w.write_all(&csv)
                .and_then(|_| w.flush())
                .map_err(|e| io_error(path, e))?;
        }
        None => out
            .write_all(&csv)
            .map_err(|e| CliError::new(EXIT_IO, e.to_string()))?,
    }
    Ok(EXIT_OK)
}

/// Canonical bench text for a scenario, as shipped in `scenarios/`.
pub fn scenario_bench_text(s: &Scenario) -> String {
    let circuit = s.circuit();
    let mut text = format!(
        "# {} at alpha={} theta={}\n",
        s.id,
        format_angle(circuit.source.alpha),
        format_angle(s.theta)
    );
    text.push_str(&crate::bench::serialize(&circuit));
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spec_parsing() {
        let g: GridSpec = "0:5*pi:256".parse().unwrap();
        assert_eq!(g, GridSpec { start: 0.0, end: 5.0 * PI, steps: 256 });
        assert_eq!("1:2:1".parse::<GridSpec>().unwrap().points(), vec![1.0]);
        assert!("0:1:0".parse::<GridSpec>().is_err());
        assert!("0:1".parse::<GridSpec>().is_err());
        assert!("0:x:3".parse::<GridSpec>().is_err());
    }

    #[test]
    fn sweep_requires_ranges_but_surface_does_not() {
        let args = SweepArgs {
            scenario: ScenarioId::Fig2Mixture,
            theta: None,
            alpha: Some("0:0:1".parse().unwrap()),
            detector: None,
            branch: Polarization::H,
            out: None,
        };
        assert_eq!(cmd_sweep(&args, false).unwrap_err().code, EXIT_PARSE);
        let csv = String::from_utf8(cmd_sweep(&args, true).unwrap()).unwrap();
        assert_eq!(csv.lines().count(), 1 + DEFAULT_THETA_STEPS);
    }

    #[test]
    fn verify_passes_by_default() {
        let r = cmd_verify(DEFAULT_TOL).unwrap();
        assert!(r.pass, "{r:#?}");
    }
}
