//! Born-rule readout: outcome tables, detectors, postselection, visibility
//! and seeded photon counting.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{BasisLabel, Polarization, PureState};
use crate::{DEGENERATE_TOL, NORM_TOL};

/// Which polarizations a detector responds to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PolFilter {
    H,
    V,
    #[serde(rename = "any")]
    Any,
}

impl PolFilter {
    pub fn matches(self, pol: Polarization) -> bool {
        match self {
            PolFilter::H => pol == Polarization::H,
            PolFilter::V => pol == Polarization::V,
            PolFilter::Any => true,
        }
    }

    pub fn polarization(self) -> Option<Polarization> {
        match self {
            PolFilter::H => Some(Polarization::H),
            PolFilter::V => Some(Polarization::V),
            PolFilter::Any => None,
        }
    }
}

impl From<Polarization> for PolFilter {
    fn from(p: Polarization) -> Self {
        match p {
            Polarization::H => PolFilter::H,
            Polarization::V => PolFilter::V,
        }
    }
}

impl fmt::Display for PolFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PolFilter::H => "H",
            PolFilter::V => "V",
            PolFilter::Any => "any",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectorSpec {
    pub name: String,
    pub mode: usize,
    pub pol: PolFilter,
}

impl DetectorSpec {
    pub fn new(name: impl Into<String>, mode: usize, pol: PolFilter) -> Self {
        DetectorSpec {
            name: name.into(),
            mode,
            pol,
        }
    }

    pub fn fires_on(&self, label: BasisLabel) -> bool {
        label.mode == self.mode && self.pol.matches(label.pol)
    }

    /// Unconditional probability that this detector clicks.
    pub fn probability(&self, state: &PureState) -> f64 {
        Polarization::BOTH
            .iter()
            .map(|&p| BasisLabel::new(self.mode, p))
            .filter(|&l| self.fires_on(l) && l.mode < state.modes())
            .map(|l| state.amplitude(l).norm_sqr())
            .sum()
    }
}

/// An ordered outcome → probability table.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityTable<K> {
    entries: Vec<(K, f64)>,
}

impl<K: PartialEq> ProbabilityTable<K> {
    pub fn new(entries: Vec<(K, f64)>) -> Result<Self> {
        for (_, p) in &entries {
            if !(*p >= -NORM_TOL && *p <= 1.0 + NORM_TOL) {
                return Err(Error::MalformedTable(format!("probability {p} outside [0, 1]")));
            }
        }
        Ok(ProbabilityTable { entries })
    }

    pub fn get(&self, key: &K) -> Option<f64> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, p)| *p)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(K, f64)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|(_, p)| p).sum()
    }
}

/// Born rule over the full basis, in flat-index order.
pub fn outcome_probabilities(state: &PureState) -> ProbabilityTable<BasisLabel> {
    ProbabilityTable {
        entries: state
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(k, a)| (BasisLabel::from_index(k), a.norm_sqr()))
            .collect(),
    }
}

/// Probability of finding the photon in each path mode, polarization ignored.
pub fn mixture_path_probabilities(state: &PureState) -> ProbabilityTable<usize> {
    ProbabilityTable {
        entries: (0..state.modes())
            .map(|m| {
                let p = Polarization::BOTH
                    .iter()
                    .map(|&pol| state.amplitude(BasisLabel::new(m, pol)).norm_sqr())
                    .sum();
                (m, p)
            })
            .collect(),
    }
}

pub fn polarization_probability(state: &PureState, pol: Polarization) -> f64 {
    state.project_polarization(pol).norm_squared()
}

/// Keep the `pol` branch and renormalize. Returns the conditional state and
/// the probability of the branch.
pub fn postselect(state: &PureState, pol: Polarization) -> Result<(PureState, f64)> {
    let branch = state.project_polarization(pol);
    let probability = branch.norm_squared();
    if probability < DEGENERATE_TOL {
        return Err(Error::DegeneratePostselection { probability });
    }
    let conditioned = PureState::new(state.modes(), branch.unscale(probability.sqrt()))?;
    Ok((conditioned, probability))
}

/// `P(event ∧ given) / P(given)`.
pub fn conditional_probability(state: &PureState, event: &DetectorSpec, given: Polarization) -> Result<f64> {
    let p_given = polarization_probability(state, given);
    if p_given < DEGENERATE_TOL {
        return Err(Error::DegeneratePostselection { probability: p_given });
    }
    if !event.pol.matches(given) || event.mode >= state.modes() {
        return Ok(0.0);
    }
    let joint = state.amplitude(BasisLabel::new(event.mode, given)).norm_sqr();
    Ok(joint / p_given)
}

/// What a detector reports for a given final state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectorReading {
    pub name: String,
    pub mode: usize,
    pub pol: PolFilter,
    /// Unconditional click probability.
    pub probability: f64,
    /// The detector's intensity under the circuit's conditioning rule;
    /// `None` when its own polarization branch is empty.
    pub intensity: Option<f64>,
}

/// Reads one detector.
///
/// With a postselected polarization the intensity is conditioned on it.
/// Without one, a polarization-resolving detector is renormalized within its
/// own branch, and a `pol=any` detector reports the plain probability.
pub fn read_detector(state: &PureState, det: &DetectorSpec, postselected: Option<Polarization>) -> Result<DetectorReading> {
    let probability = det.probability(state);
    let intensity = match (postselected, det.pol.polarization()) {
        (Some(pol), _) => Some(conditional_probability(state, det, pol)?),
        (None, Some(pol)) => match conditional_probability(state, det, pol) {
            Ok(p) => Some(p),
            Err(Error::DegeneratePostselection { .. }) => None,
            Err(e) => return Err(e),
        },
        (None, None) => Some(probability),
    };
    Ok(DetectorReading {
        name: det.name.clone(),
        mode: det.mode,
        pol: det.pol,
        probability,
        intensity,
    })
}

/// Fringe visibility `(I_max − I_min)/(I_max + I_min)`.
pub fn visibility(intensities: &[f64]) -> Result<f64> {
    if intensities.is_empty() {
        return Err(Error::UndefinedVisibility("no intensities"));
    }
    if intensities.iter().any(|x| !x.is_finite()) {
        return Err(Error::UndefinedVisibility("non-finite intensity"));
    }
    let max = intensities.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = intensities.iter().cloned().fold(f64::INFINITY, f64::min);
    if max + min <= DEGENERATE_TOL {
        return Err(Error::UndefinedVisibility("I_max + I_min is zero"));
    }
    Ok((max - min) / (max + min))
}

/// Multinomial draw of `shots` photons from `table`.
///
/// The seed feeds `ChaCha8Rng::seed_from_u64`; outcomes are drawn as a chain
/// of conditional binomials in table order, so identical `(table, shots,
/// seed)` always give identical counts.
pub fn sample_shots<K: Clone + PartialEq>(table: &ProbabilityTable<K>, shots: u64, seed: u64) -> Result<Vec<(K, u64)>> {
    if table.is_empty() {
        return Err(Error::MalformedTable("empty table".into()));
    }
    let total = table.total();
    if !((total - 1.0).abs() <= 1e-9) {
        return Err(Error::MalformedTable(format!("probabilities sum to {total}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut remaining = shots;
    let mut mass = 1.0f64;
    let last = table.len() - 1;
    let mut counts = Vec::with_capacity(table.len());
    for (k, (key, p)) in table.iter().enumerate() {
        let p = p.max(0.0);
        let n = if k == last || remaining == 0 {
            if k == last { remaining } else { 0 }
        } else {
            let frac = if mass > 0.0 { (p / mass).clamp(0.0, 1.0) } else { 0.0 };
            let draw = Binomial::new(remaining, frac)
                .map_err(|e| Error::MalformedTable(e.to_string()))?
                .sample(&mut rng);
            mass -= p;
            draw
        };
        remaining -= n;
        counts.push((key.clone(), n));
    }
    Ok(counts)
}
