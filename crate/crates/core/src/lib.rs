//! Single-photon simulator for linear-optics delayed-choice experiments.
//!
//! The photon lives in (path modes) ⊗ (H, V polarization). Beam splitters,
//! polarizing beam splitters, phase shifters, half-wave plates and a
//! polarization-controlled beam splitter act on it as unitaries; detectors
//! read it out through the Born rule, optionally after postselecting a
//! polarization.
//!
//! ```
//! use delayed_choice::experiments::{oracle_superposition, Scenario, ScenarioId};
//!
//! let s = Scenario::new(ScenarioId::Fig2Superposition, std::f64::consts::FRAC_PI_4, 1.0);
//! let d2 = s.evaluate().unwrap().intensity("D2").unwrap();
//! assert!((d2 - oracle_superposition(1.0, std::f64::consts::FRAC_PI_4)).abs() < 1e-12);
//! ```

pub mod bench;
pub mod cli;
pub mod elements;
pub mod error;
pub mod experiments;
pub mod measurement;
pub mod state;

pub use error::{Error, ParseError, Result};

/// Normalization and construction tolerance.
pub const NORM_TOL: f64 = 1e-12;
/// Unitarity tolerance on `‖U†U − I‖_max`.
pub const UNITARY_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted in a density matrix.
pub const PSD_FLOOR: f64 = -1e-10;
/// Below this, a conditioning event is treated as impossible.
pub const DEGENERATE_TOL: f64 = 1e-12;
