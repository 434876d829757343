//! Interferometer scenarios, closed-form intensity oracles, and the
//! simulator-vs-oracle harness.
//!
//! Every scenario is an ordinary [`BenchCircuit`]: a source on mode 0, a
//! beam splitter, a phase `θ` on mode 1, and a second splitter that is
//! classical (`bs`) in the Wheeler variants and polarization-controlled
//! (`qbs`) in the quantum ones. The quantum variants differ only in what
//! sits in front of the detectors.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::bench::{BenchCircuit, Source};
use crate::elements::{compose, element_unitary, qbs_decomposition, Element};
use crate::error::{Error, Result};
use crate::measurement::{polarization_probability, read_detector, DetectorReading, PolFilter};
use crate::state::{
    hyperentangled_state, rotated_hyperentangled_state, superposition_state, Polarization, PureState,
};
use crate::DEGENERATE_TOL;

/// Angle of the two half-wave plates that rotate H/V into the diagonal basis.
pub const HWP_DIAGONAL_DEG: f64 = 22.5;

pub const DEFAULT_THETA_STEPS: usize = 256;
pub const DEFAULT_ALPHA_STEPS: usize = 64;
pub const SURFACE_THETA_MAX: f64 = 5.0 * PI;
pub const SURFACE_ALPHA_MAX: f64 = FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioId {
    /// Classical MZI with the output splitter in place.
    WheelerWithBs2,
    /// Classical MZI with the output splitter removed.
    WheelerWithoutBs2,
    /// q-BS interferometer read by two polarization-blind detectors.
    Fig1Quantum,
    /// Hyperentangled output, path detectors only: the wave/particle mixture.
    Fig2Mixture,
    /// Hyperentangled output split by polarization: wave in H, particle in V.
    Fig2ParticleWave,
    /// Half-wave plates before the PBSs, postselected on one polarization.
    Fig2Superposition,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 6] = [
        ScenarioId::WheelerWithBs2,
        ScenarioId::WheelerWithoutBs2,
        ScenarioId::Fig1Quantum,
        ScenarioId::Fig2Mixture,
        ScenarioId::Fig2ParticleWave,
        ScenarioId::Fig2Superposition,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioId::WheelerWithBs2 => "wheeler_with_bs2",
            ScenarioId::WheelerWithoutBs2 => "wheeler_without_bs2",
            ScenarioId::Fig1Quantum => "fig1_quantum",
            ScenarioId::Fig2Mixture => "fig2_mixture",
            ScenarioId::Fig2ParticleWave => "fig2_particle_wave",
            ScenarioId::Fig2Superposition => "fig2_superposition",
        }
    }

    /// The path-0 detector plotted in intensity surfaces.
    pub fn primary_detector(self, branch: Polarization) -> &'static str {
        match self {
            ScenarioId::WheelerWithBs2 | ScenarioId::WheelerWithoutBs2 | ScenarioId::Fig1Quantum => "D1",
            ScenarioId::Fig2Superposition if branch == Polarization::V => "D1",
            _ => "D2",
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let short = match s {
            "mixture" => Some(ScenarioId::Fig2Mixture),
            "particle_wave" => Some(ScenarioId::Fig2ParticleWave),
            "superposition" => Some(ScenarioId::Fig2Superposition),
            _ => None,
        };
        short
            .or_else(|| ScenarioId::ALL.into_iter().find(|id| id.name() == s))
            .ok_or_else(|| {
                let names: Vec<_> = ScenarioId::ALL.iter().map(|id| id.name()).collect();
                format!("unknown scenario {s:?} (expected one of {})", names.join(", "))
            })
    }
}

/// A scenario at one `(α, θ)` point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub id: ScenarioId,
    pub alpha: f64,
    pub theta: f64,
    /// Polarization kept by postselection; only the superposition scenario uses it.
    pub branch: Polarization,
}

impl Scenario {
    pub fn new(id: ScenarioId, alpha: f64, theta: f64) -> Self {
        Scenario {
            id,
            alpha,
            theta,
            branch: Polarization::H,
        }
    }

    pub fn with_branch(mut self, branch: Polarization) -> Self {
        self.branch = branch;
        self
    }

    pub fn circuit(&self) -> BenchCircuit {
        build_scenario(self)
    }

    pub fn evaluate(&self) -> Result<Evaluation> {
        evaluate(&self.circuit())
    }

    pub fn primary_detector(&self) -> &'static str {
        self.id.primary_detector(self.branch)
    }
}

fn mzi_front(alpha: f64, theta: f64) -> BenchCircuit {
    BenchCircuit::new(2, Source { alpha, mode: 0 })
        .element(Element::Bs(0, 1))
        .element(Element::Phase(1, theta))
}

fn four_detectors(c: BenchCircuit) -> BenchCircuit {
    c.detector("D1", 0, PolFilter::V)
        .detector("D2", 0, PolFilter::H)
        .detector("D3", 1, PolFilter::H)
        .detector("D4", 1, PolFilter::V)
}

pub fn build_scenario(s: &Scenario) -> BenchCircuit {
    match s.id {
        ScenarioId::WheelerWithBs2 => mzi_front(FRAC_PI_2, s.theta)
            .element(Element::Bs(0, 1))
            .detector("D1", 0, PolFilter::Any)
            .detector("D2", 1, PolFilter::Any),
        ScenarioId::WheelerWithoutBs2 => mzi_front(FRAC_PI_2, s.theta)
            .detector("D1", 0, PolFilter::Any)
            .detector("D2", 1, PolFilter::Any),
        ScenarioId::Fig1Quantum => mzi_front(s.alpha, s.theta)
            .element(Element::Qbs(0, 1))
            .detector("D1", 0, PolFilter::Any)
            .detector("D2", 1, PolFilter::Any),
        ScenarioId::Fig2Mixture => mzi_front(s.alpha, s.theta)
            .element(Element::Qbs(0, 1))
            .detector("D2", 0, PolFilter::Any)
            .detector("D3", 1, PolFilter::Any),
        ScenarioId::Fig2ParticleWave => four_detectors(mzi_front(s.alpha, s.theta).element(Element::Qbs(0, 1))),
        ScenarioId::Fig2Superposition => four_detectors(
            mzi_front(s.alpha, s.theta)
                .element(Element::Qbs(0, 1))
                .element(Element::Hwp(0, HWP_DIAGONAL_DEG))
                .element(Element::Hwp(1, HWP_DIAGONAL_DEG)),
        )
        .postselect(s.branch),
    }
}

/// Simulated outcome of one circuit.
#[derive(Debug, Clone)]
pub struct Evaluation {
    /// State before detection (and before postselection).
    pub state: PureState,
    /// Postselected polarization and its probability.
    pub postselection: Option<(Polarization, f64)>,
    pub readings: Vec<DetectorReading>,
}

impl Evaluation {
    pub fn reading(&self, name: &str) -> Option<&DetectorReading> {
        self.readings.iter().find(|r| r.name == name)
    }

    pub fn intensity(&self, name: &str) -> Option<f64> {
        self.reading(name).and_then(|r| r.intensity)
    }
}

pub fn evaluate(circuit: &BenchCircuit) -> Result<Evaluation> {
    let state = circuit.final_state()?;
    let postselection = match circuit.postselect {
        Some(pol) => {
            let p = polarization_probability(&state, pol);
            if p < DEGENERATE_TOL {
                return Err(Error::DegeneratePostselection { probability: p });
            }
            Some((pol, p))
        }
        None => None,
    };
    let readings = circuit
        .detectors
        .iter()
        .map(|d| read_detector(&state, d, circuit.postselect))
        .collect::<Result<Vec<_>>>()?;
    Ok(Evaluation {
        state,
        postselection,
        readings,
    })
}

/// Wave-like intensity `cos²(θ/2)`.
pub fn oracle_wave(theta: f64) -> f64 {
    (theta / 2.0).cos().powi(2)
}

/// Particle-like intensity, flat at one half.
pub fn oracle_particle() -> f64 {
    0.5
}

/// Path-0 intensity of the wave/particle mixture: `cos²(θ/2)sin²α + ½cos²α`.
pub fn oracle_mixture(theta: f64, alpha: f64) -> f64 {
    oracle_wave(theta) * alpha.sin().powi(2) + 0.5 * alpha.cos().powi(2)
}

/// Path-0 intensity of the postselected wave/particle superposition:
/// `(1 + sin²α cosθ + √2 sin2α cos²(θ/2)) / (2 + √2 sin2α cosθ)`.
pub fn oracle_superposition(theta: f64, alpha: f64) -> f64 {
    let s2a = (2.0 * alpha).sin();
    (1.0 + alpha.sin().powi(2) * theta.cos() + SQRT_2 * s2a * oracle_wave(theta))
        / (2.0 + SQRT_2 * s2a * theta.cos())
}

/// Closed-form value each scenario detector should report, or `None` for an
/// unknown detector name.
///
/// The V-branch superposition carries `cosα|p⟩ − sinα|w⟩`, which is the H
/// branch with `α → −α`.
pub fn expected_intensity(s: &Scenario, detector: &str) -> Option<f64> {
    let (a, t) = (s.alpha, s.theta);
    let v = match (s.id, detector) {
        (ScenarioId::WheelerWithBs2, "D1") => oracle_wave(t),
        (ScenarioId::WheelerWithBs2, "D2") => 1.0 - oracle_wave(t),
        (ScenarioId::WheelerWithoutBs2, "D1" | "D2") => oracle_particle(),
        (ScenarioId::Fig1Quantum, "D1") | (ScenarioId::Fig2Mixture, "D2") => oracle_mixture(t, a),
        (ScenarioId::Fig1Quantum, "D2") | (ScenarioId::Fig2Mixture, "D3") => 1.0 - oracle_mixture(t, a),
        (ScenarioId::Fig2ParticleWave, "D1" | "D4") => oracle_particle(),
        (ScenarioId::Fig2ParticleWave, "D2") => oracle_wave(t),
        (ScenarioId::Fig2ParticleWave, "D3") => 1.0 - oracle_wave(t),
        (ScenarioId::Fig2Superposition, d) => match (s.branch, d) {
            (Polarization::H, "D2") => oracle_superposition(t, a),
            (Polarization::H, "D3") => 1.0 - oracle_superposition(t, a),
            (Polarization::V, "D1") => oracle_superposition(t, -a),
            (Polarization::V, "D4") => 1.0 - oracle_superposition(t, -a),
            (_, "D1" | "D2" | "D3" | "D4") => 0.0,
            _ => return None,
        },
        _ => return None,
    };
    Some(v)
}

/// `n` evenly spaced points from `lo` to `hi` inclusive; `[lo]` when `n == 1`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// `n` cell midpoints strictly inside `(lo, hi)`.
pub fn open_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| lo + (hi - lo) * (k as f64 + 0.5) / n as f64)
        .collect()
}

/// θ over the open interval (0, 5π), resolving every 2π fringe.
pub fn surface_theta_grid(steps: usize) -> Vec<f64> {
    open_grid(0.0, SURFACE_THETA_MAX, steps)
}

/// α over [0, π/2], endpoints included so the pure particle and wave rows appear.
pub fn surface_alpha_grid(steps: usize) -> Vec<f64> {
    linspace(0.0, SURFACE_ALPHA_MAX, steps)
}

/// One detector's intensity over an α × θ grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub scenario: ScenarioId,
    pub branch: Polarization,
    pub detector: String,
    pub theta_grid: Vec<f64>,
    pub alpha_grid: Vec<f64>,
    /// `values[i][j]` is the intensity at `(alpha_grid[i], theta_grid[j])`.
    pub values: Vec<Vec<f64>>,
}

impl SweepResult {
    pub fn row(&self, alpha_index: usize) -> &[f64] {
        &self.values[alpha_index]
    }

    pub fn max_abs_diff(&self, other: &SweepResult) -> f64 {
        self.values
            .iter()
            .flatten()
            .zip(other.values.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// CSV with header `theta,alpha,intensity`, α-major, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(b"theta,alpha,intensity\n")?;
        for (alpha, row) in self.alpha_grid.iter().zip(&self.values) {
            for (theta, value) in self.theta_grid.iter().zip(row) {
                writeln!(w, "{theta:.16e},{alpha:.16e},{value:.16e}")?;
            }
        }
        w.flush()
    }
}

/// Sweep the scenario's primary detector (or `detector`) over the grid.
///
/// Rows are computed in parallel and assembled by grid index.
pub fn surface(
    id: ScenarioId,
    branch: Polarization,
    detector: Option<&str>,
    theta_grid: &[f64],
    alpha_grid: &[f64],
) -> Result<SweepResult> {
    if theta_grid.is_empty() || alpha_grid.is_empty() {
        return Err(Error::InvalidElement("sweep grids must be nonempty".into()));
    }
    let detector = detector.unwrap_or(id.primary_detector(branch)).to_string();
    let probe = Scenario::new(id, alpha_grid[0], theta_grid[0]).with_branch(branch);
    if probe.circuit().detector_named(&detector).is_none() {
        return Err(Error::InvalidElement(format!("scenario {id} has no detector {detector}")));
    }
    let values = alpha_grid
        .par_iter()
        .map(|&alpha| {
            theta_grid
                .iter()
                .map(|&theta| {
                    let eval = Scenario::new(id, alpha, theta).with_branch(branch).evaluate()?;
                    let reading = eval.reading(&detector).expect("detector checked above");
                    reading.intensity.ok_or(Error::DegeneratePostselection {
                        probability: reading.probability,
                    })
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        scenario: id,
        branch,
        detector,
        theta_grid: theta_grid.to_vec(),
        alpha_grid: alpha_grid.to_vec(),
        values,
    })
}

/// Closed-form surface on the same grid, for side-by-side comparison.
pub fn oracle_surface(
    theta_grid: &[f64],
    alpha_grid: &[f64],
    oracle: impl Fn(f64, f64) -> f64,
) -> Vec<Vec<f64>> {
    alpha_grid
        .iter()
        .map(|&a| theta_grid.iter().map(|&t| oracle(t, a)).collect())
        .collect()
}

/// Worst simulator-vs-oracle deviation for one detector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectorCheck {
    pub detector: String,
    pub branch: Option<Polarization>,
    pub max_deviation: f64,
    pub points: usize,
    /// Grid points where the detector's own polarization branch was empty.
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub scenario: ScenarioId,
    pub tolerance: f64,
    pub max_deviation: f64,
    pub pass: bool,
    pub detectors: Vec<DetectorCheck>,
}

/// Compare every detector of `id` against the closed forms over the grid.
pub fn verify_scenario(id: ScenarioId, theta_grid: &[f64], alpha_grid: &[f64], tol: f64) -> Result<ScenarioReport> {
    verify_scenario_with(id, theta_grid, alpha_grid, tol, expected_intensity)
}

/// [`verify_scenario`] against a caller-supplied oracle.
pub fn verify_scenario_with<F>(
    id: ScenarioId,
    theta_grid: &[f64],
    alpha_grid: &[f64],
    tol: f64,
    oracle: F,
) -> Result<ScenarioReport>
where
    F: Fn(&Scenario, &str) -> Option<f64> + Sync,
{
    if theta_grid.is_empty() || alpha_grid.is_empty() {
        return Err(Error::InvalidElement("verification grids must be nonempty".into()));
    }
    let branches: &[Polarization] = if id == ScenarioId::Fig2Superposition {
        &Polarization::BOTH
    } else {
        &[Polarization::H]
    };
    let mut detectors = Vec::new();
    for &branch in branches {
        let names: Vec<String> = Scenario::new(id, 0.0, 0.0)
            .with_branch(branch)
            .circuit()
            .detectors
            .into_iter()
            .map(|d| d.name)
            .collect();
        // (max deviation, points, skipped) per detector, per α row
        let rows = alpha_grid
            .par_iter()
            .map(|&alpha| {
                let mut acc = vec![(0.0f64, 0usize, 0usize); names.len()];
                for &theta in theta_grid {
                    let s = Scenario::new(id, alpha, theta).with_branch(branch);
                    let eval = s.evaluate()?;
                    for (k, name) in names.iter().enumerate() {
                        let got = eval.intensity(name);
                        let (Some(got), Some(want)) = (got, oracle(&s, name)) else {
                            if got.is_none() {
                                acc[k].2 += 1;
                            } else {
                                acc[k].0 = f64::INFINITY;
                            }
                            continue;
                        };
                        let dev = (got - want).abs();
                        acc[k].0 = if dev.is_nan() { f64::INFINITY } else { acc[k].0.max(dev) };
                        acc[k].1 += 1;
                    }
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        for (k, name) in names.iter().enumerate() {
            let (max_deviation, points, skipped) = rows.iter().fold((0.0f64, 0, 0), |(m, p, s), row| {
                (m.max(row[k].0), p + row[k].1, s + row[k].2)
            });
            detectors.push(DetectorCheck {
                detector: name.clone(),
                branch: (id == ScenarioId::Fig2Superposition).then_some(branch),
                max_deviation,
                points,
                skipped,
            });
        }
    }
    let max_deviation = detectors.iter().map(|d| d.max_deviation).fold(0.0, f64::max);
    let pass = max_deviation < tol && detectors.iter().all(|d| d.points > 0);
    Ok(ScenarioReport {
        scenario: id,
        tolerance: tol,
        max_deviation,
        pass,
        detectors,
    })
}

/// Worst `1 − |⟨simulated|reference⟩|` over an `n × n` grid of (α, θ), for
/// the three reference states: the hyperentangled output, the same after
/// the half-wave plates, and the H-postselected superposition.
pub fn state_identity_deviations(n: usize) -> Result<[f64; 3]> {
    let mut worst = [0.0f64; 3];
    for alpha in linspace(0.0, PI, n) {
        for theta in linspace(0.0, 2.0 * PI, n) {
            let base = Scenario::new(ScenarioId::Fig2Mixture, alpha, theta).evaluate()?.state;
            let hwp = Scenario::new(ScenarioId::Fig2Superposition, alpha, theta).evaluate()?.state;
            let (kept, _) = crate::measurement::postselect(&hwp, Polarization::H)?;
            let devs = [
                1.0 - base.overlap(&hyperentangled_state(alpha, theta)?)?,
                1.0 - hwp.overlap(&rotated_hyperentangled_state(alpha, theta)?)?,
                1.0 - kept.overlap(&superposition_state(alpha, theta)?)?,
            ];
            for (w, d) in worst.iter_mut().zip(devs) {
                *w = w.max(d.abs());
            }
        }
    }
    Ok(worst)
}

/// Max-norm distance between the PBS/BS/PBS network on modes {0,1} with
/// ancillas {2,3} and a bare q-BS, over inputs supported on modes {0,1}.
pub fn qbs_network_deviation() -> Result<f64> {
    let net = compose(&qbs_decomposition(0, 1, 2, 3)?, 4)?;
    let qbs = element_unitary(&Element::Qbs(0, 1), 4)?;
    let diff = net.matrix().columns(0, 4) - qbs.matrix().columns(0, 4);
    Ok(diff.camax())
}

/// Worst `‖U†U − I‖_max` over every element kind for 2 to 4 modes.
pub fn element_unitarity_deviation() -> Result<f64> {
    let mut worst = 0.0f64;
    for modes in 2..=4 {
        let mut elems = Vec::new();
        for i in 0..modes {
            elems.push(Element::Phase(i, 1.234));
            elems.push(Element::Hwp(i, HWP_DIAGONAL_DEG));
            for j in (0..modes).filter(|&j| j != i) {
                elems.extend([Element::Bs(i, j), Element::Pbs(i, j), Element::Qbs(i, j)]);
            }
        }
        for e in elems {
            let u = element_unitary(&e, modes)?;
            let dim = 2 * modes;
            let dev = (u.matrix().adjoint() * u.matrix() - nalgebra::DMatrix::identity(dim, dim)).camax();
            worst = worst.max(dev);
        }
    }
    Ok(worst)
}
