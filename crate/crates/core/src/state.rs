//! State vectors and density matrices on (path modes) ⊗ (H, V polarization).
//!
//! Basis ordering is fixed crate-wide: the label `(mode, pol)` lives at flat
//! index `2 * mode + pol.bit()` with `H = 0`, `V = 1`.
//!
//! Path-only states (the particle and wave states) are [`PathState`]s of
//! length `d` and must be tensored with a polarization before they can be
//! evolved or measured.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elements::Unitary;
use crate::error::{Error, Result};
use crate::{NORM_TOL, PSD_FLOOR};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::H, Polarization::V];

    pub fn bit(self) -> usize {
        match self {
            Polarization::H => 0,
            Polarization::V => 1,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Polarization::H => Polarization::V,
            Polarization::V => Polarization::H,
        }
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarization::H => "H",
            Polarization::V => "V",
        })
    }
}

/// One basis vector `|mode, pol⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisLabel {
    pub mode: usize,
    pub pol: Polarization,
}

impl BasisLabel {
    pub fn new(mode: usize, pol: Polarization) -> Self {
        BasisLabel { mode, pol }
    }

    pub fn index(self) -> usize {
        2 * self.mode + self.pol.bit()
    }

    pub fn from_index(k: usize) -> Self {
        let pol = if k.is_multiple_of(2) {
            Polarization::H
        } else {
            Polarization::V
        };
        BasisLabel { mode: k / 2, pol }
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.mode, self.pol)
    }
}

fn check_modes(modes: usize) -> Result<()> {
    if modes < 2 {
        return Err(Error::InvalidDimension(modes));
    }
    Ok(())
}

/// A vector over path modes only, with no polarization factor.
#[derive(Debug, Clone, PartialEq)]
pub struct PathState {
    amplitudes: DVector<Complex64>,
}

impl PathState {
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        check_modes(amplitudes.len())?;
        Ok(PathState { amplitudes })
    }

    pub fn modes(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, mode: usize) -> Complex64 {
        self.amplitudes[mode]
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &PathState) -> Result<Complex64> {
        if self.modes() != other.modes() {
            return Err(Error::DimensionMismatch {
                expected: self.modes(),
                found: other.modes(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `self ⊗ |pol⟩`.
    pub fn with_polarization(&self, pol: Polarization) -> Result<PureState> {
        PureState::from_terms(self.modes(), &[(Complex64::new(1.0, 0.0), self, pol)])
    }

    /// `|self⟩⟨self|` as a path-space density matrix.
    pub fn projector(&self) -> DMatrix<Complex64> {
        &self.amplitudes * self.amplitudes.adjoint()
    }
}

/// The which-path state `(|0⟩ + e^{iθ}|1⟩)/√2`.
pub fn particle_state(theta: f64, modes: usize) -> Result<PathState> {
    check_modes(modes)?;
    let mut amps = DVector::from_element(modes, ZERO);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    amps[0] = Complex64::new(s, 0.0);
    amps[1] = Complex64::from_polar(s, theta);
    PathState::new(amps)
}

/// The interfering state `e^{iθ/2}(cos(θ/2)|0⟩ − i sin(θ/2)|1⟩)`, global phase kept.
pub fn wave_state(theta: f64, modes: usize) -> Result<PathState> {
    check_modes(modes)?;
    let mut amps = DVector::from_element(modes, ZERO);
    let phase = Complex64::from_polar(1.0, theta / 2.0);
    let half = theta / 2.0;
    amps[0] = phase * half.cos();
    amps[1] = phase * Complex64::new(0.0, -half.sin());
    PathState::new(amps)
}

/// A normalized pure state over `modes` path modes ⊗ polarization.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    modes: usize,
    amplitudes: DVector<Complex64>,
}

impl PureState {
    pub fn new(modes: usize, amplitudes: DVector<Complex64>) -> Result<Self> {
        check_modes(modes)?;
        if amplitudes.len() != 2 * modes {
            return Err(Error::DimensionMismatch {
                expected: 2 * modes,
                found: amplitudes.len(),
            });
        }
        let norm_sqr = amplitudes.norm_squared();
        if !((norm_sqr - 1.0).abs() < NORM_TOL) {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(PureState { modes, amplitudes })
    }

    pub fn basis(modes: usize, label: BasisLabel) -> Result<Self> {
        check_modes(modes)?;
        if label.mode >= modes {
            return Err(Error::InvalidMode {
                mode: label.mode,
                modes,
            });
        }
        let mut amps = DVector::from_element(2 * modes, ZERO);
        amps[label.index()] = Complex64::new(1.0, 0.0);
        Ok(PureState {
            modes,
            amplitudes: amps,
        })
    }

    /// `Σ c · path ⊗ |pol⟩`. The sum must come out normalized.
    pub fn from_terms(modes: usize, terms: &[(Complex64, &PathState, Polarization)]) -> Result<Self> {
        check_modes(modes)?;
        let mut amps = DVector::from_element(2 * modes, ZERO);
        for (coeff, path, pol) in terms {
            if path.modes() != modes {
                return Err(Error::DimensionMismatch {
                    expected: modes,
                    found: path.modes(),
                });
            }
            for m in 0..modes {
                amps[BasisLabel::new(m, *pol).index()] += coeff * path.amplitude(m);
            }
        }
        PureState::new(modes, amps)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dim(&self) -> usize {
        2 * self.modes
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, label: BasisLabel) -> Complex64 {
        self.amplitudes[label.index()]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    pub fn apply(&self, unitary: &Unitary) -> Result<PureState> {
        if unitary.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: unitary.dim(),
            });
        }
        PureState::new(self.modes, unitary.matrix() * &self.amplitudes)
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|⟨self|other⟩|`; equals 1 iff the states agree up to a global phase.
    pub fn overlap(&self, other: &PureState) -> Result<f64> {
        self.inner(other).map(|c| c.norm())
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            entries: &self.amplitudes * self.amplitudes.adjoint(),
        }
    }

    /// Zero every amplitude whose polarization is not `pol`, without renormalizing.
    pub(crate) fn project_polarization(&self, pol: Polarization) -> DVector<Complex64> {
        DVector::from_fn(self.dim(), |k, _| {
            if BasisLabel::from_index(k).pol == pol {
                self.amplitudes[k]
            } else {
                ZERO
            }
        })
    }
}

/// The input photon `sinα|mode,H⟩ + cosα|mode,V⟩`.
pub fn source_state(alpha: f64, mode: usize, modes: usize) -> Result<PureState> {
    check_modes(modes)?;
    if mode >= modes {
        return Err(Error::InvalidMode { mode, modes });
    }
    let mut amps = DVector::from_element(2 * modes, ZERO);
    amps[BasisLabel::new(mode, Polarization::H).index()] = Complex64::new(alpha.sin(), 0.0);
    amps[BasisLabel::new(mode, Polarization::V).index()] = Complex64::new(alpha.cos(), 0.0);
    PureState::new(modes, amps)
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Path–polarization hyperentangled output of the interferometer:
/// `cosα|particle⟩|V⟩ + sinα|wave⟩|H⟩`.
pub fn hyperentangled_state(alpha: f64, theta: f64) -> Result<PureState> {
    let p = particle_state(theta, 2)?;
    let w = wave_state(theta, 2)?;
    PureState::from_terms(
        2,
        &[
            (real(alpha.cos()), &p, Polarization::V),
            (real(alpha.sin()), &w, Polarization::H),
        ],
    )
}

/// The hyperentangled state after a Hadamard-like rotation of polarization:
/// `[(cosα|p⟩ + sinα|w⟩)|H⟩ − (cosα|p⟩ − sinα|w⟩)|V⟩]/√2`.
pub fn rotated_hyperentangled_state(alpha: f64, theta: f64) -> Result<PureState> {
    let p = particle_state(theta, 2)?;
    let w = wave_state(theta, 2)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (c, sn) = (alpha.cos() * s, alpha.sin() * s);
    PureState::from_terms(
        2,
        &[
            (real(c), &p, Polarization::H),
            (real(sn), &w, Polarization::H),
            (real(-c), &p, Polarization::V),
            (real(sn), &w, Polarization::V),
        ],
    )
}

/// The normalized wave–particle superposition surviving an H postselection,
/// `(cosα|p⟩ + sinα|w⟩)/√(1 + √2 sinα cosα cosθ)`, tensored with `|H⟩`.
pub fn superposition_state(alpha: f64, theta: f64) -> Result<PureState> {
    let p = particle_state(theta, 2)?;
    let w = wave_state(theta, 2)?;
    let norm =
        (1.0 + std::f64::consts::SQRT_2 * alpha.sin() * alpha.cos() * theta.cos()).sqrt();
    PureState::from_terms(
        2,
        &[
            (real(alpha.cos() / norm), &p, Polarization::H),
            (real(alpha.sin() / norm), &w, Polarization::H),
        ],
    )
}

/// Hermitian, unit-trace, positive-semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::InvalidDensity(format!(
                "not square ({}x{})",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let herm = (&entries - entries.adjoint()).camax();
        if !(herm < NORM_TOL) {
            return Err(Error::InvalidDensity(format!("not Hermitian (deviation {herm:e})")));
        }
        let trace = entries.trace();
        if !((trace - real(1.0)).norm() < NORM_TOL) {
            return Err(Error::InvalidDensity(format!("trace {trace} != 1")));
        }
        let min_eig = entries
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < PSD_FLOOR {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(DensityMatrix { entries })
    }

    /// `Σ w_k |ψ_k⟩⟨ψ_k|` over path states.
    pub fn from_path_mixture(terms: &[(f64, &PathState)]) -> Result<Self> {
        let dim = terms.first().map(|(_, s)| s.modes()).unwrap_or(0);
        let mut acc = DMatrix::from_element(dim, dim, ZERO);
        for (w, s) in terms {
            if s.modes() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: s.modes(),
                });
            }
            acc += s.projector() * real(*w);
        }
        DensityMatrix::new(acc)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries).trace().re
    }

    /// Trace out polarization: `(ρ_path)_{mn} = Σ_p ρ_{(m,p),(n,p)}`.
    pub fn partial_trace_pol(&self) -> Result<DensityMatrix> {
        let dim = self.dim();
        if !dim.is_multiple_of(2) {
            return Err(Error::InvalidDensity(format!(
                "odd dimension {dim} cannot factor as path ⊗ polarization"
            )));
        }
        let modes = dim / 2;
        let reduced = DMatrix::from_fn(modes, modes, |m, n| {
            Polarization::BOTH
                .iter()
                .map(|&p| {
                    self.entries[(BasisLabel::new(m, p).index(), BasisLabel::new(n, p).index())]
                })
                .sum()
        });
        DensityMatrix::new(reduced)
    }

    pub fn max_abs_diff(&self, other: &DMatrix<Complex64>) -> f64 {
        if self.entries.shape() != other.shape() {
            return f64::INFINITY;
        }
        (&self.entries - other).camax()
    }
}
