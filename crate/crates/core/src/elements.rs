//! Optical elements as unitaries on the path ⊗ polarization space.
//!
//! Conventions:
//! - `Bs(i, j)` is a Hadamard on modes `i, j`, for both polarizations.
//! - `Pbs(i, j)` transmits H and swaps V between the two modes.
//! - `Phase(i, θ)` multiplies both polarizations of mode `i` by `e^{iθ}`.
//! - `Hwp(i, φ)` takes `φ` in degrees and applies the Jones matrix
//!   `[[cos2φ, sin2φ], [sin2φ, −cos2φ]]` to mode `i`.
//! - `Qbs(i, j)` is a beam splitter present for H only; V passes untouched.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{BasisLabel, Polarization};
use crate::UNITARY_TOL;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Element {
    Bs(usize, usize),
    Pbs(usize, usize),
    /// Phase shift in radians.
    Phase(usize, f64),
    /// Half-wave plate, fast-axis angle in degrees.
    Hwp(usize, f64),
    Qbs(usize, usize),
}

impl Element {
    pub fn keyword(&self) -> &'static str {
        match self {
            Element::Bs(..) => "bs",
            Element::Pbs(..) => "pbs",
            Element::Phase(..) => "phase",
            Element::Hwp(..) => "hwp",
            Element::Qbs(..) => "qbs",
        }
    }

    pub fn modes_used(&self) -> Vec<usize> {
        match *self {
            Element::Bs(i, j) | Element::Pbs(i, j) | Element::Qbs(i, j) => vec![i, j],
            Element::Phase(i, _) | Element::Hwp(i, _) => vec![i],
        }
    }

    pub fn validate(&self, modes: usize) -> Result<()> {
        for m in self.modes_used() {
            if m >= modes {
                return Err(Error::InvalidMode { mode: m, modes });
            }
        }
        match *self {
            Element::Bs(i, j) | Element::Pbs(i, j) | Element::Qbs(i, j) if i == j => Err(
                Error::InvalidElement(format!("{} needs two distinct modes, got {i} {j}", self.keyword())),
            ),
            Element::Phase(_, x) | Element::Hwp(_, x) if !x.is_finite() => Err(
                Error::InvalidElement(format!("{} angle must be finite", self.keyword())),
            ),
            _ => Ok(()),
        }
    }
}

/// A square matrix with `‖U†U − I‖_max < 1e-10`.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    matrix: DMatrix<Complex64>,
}

impl Unitary {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let n = matrix.nrows();
        let deviation = (matrix.adjoint() * &matrix - DMatrix::<Complex64>::identity(n, n)).camax();
        if !(deviation < UNITARY_TOL) {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Unitary { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Unitary {
            matrix: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn max_abs_diff(&self, other: &Unitary) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        (&self.matrix - &other.matrix).camax()
    }
}

fn idx(mode: usize, pol: Polarization) -> usize {
    BasisLabel::new(mode, pol).index()
}

/// Write a 2x2 block acting on the two basis indices `a`, `b`.
fn set_block(u: &mut DMatrix<Complex64>, a: usize, b: usize, block: [[f64; 2]; 2]) {
    u[(a, a)] = block[0][0].into();
    u[(a, b)] = block[0][1].into();
    u[(b, a)] = block[1][0].into();
    u[(b, b)] = block[1][1].into();
}

pub fn element_unitary(element: &Element, modes: usize) -> Result<Unitary> {
    element.validate(modes)?;
    let dim = 2 * modes;
    let mut u = DMatrix::<Complex64>::identity(dim, dim);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let hadamard = [[s, s], [s, -s]];
    match *element {
        Element::Bs(i, j) => {
            for pol in Polarization::BOTH {
                set_block(&mut u, idx(i, pol), idx(j, pol), hadamard);
            }
        }
        Element::Qbs(i, j) => {
            set_block(&mut u, idx(i, Polarization::H), idx(j, Polarization::H), hadamard);
        }
        Element::Pbs(i, j) => {
            set_block(
                &mut u,
                idx(i, Polarization::V),
                idx(j, Polarization::V),
                [[0.0, 1.0], [1.0, 0.0]],
            );
        }
        Element::Phase(i, theta) => {
            let phase = Complex64::from_polar(1.0, theta);
            for pol in Polarization::BOTH {
                u[(idx(i, pol), idx(i, pol))] = phase;
            }
        }
        Element::Hwp(i, degrees) => {
            let two_phi = 2.0 * degrees.to_radians();
            let (sn, cs) = two_phi.sin_cos();
            set_block(
                &mut u,
                idx(i, Polarization::H),
                idx(i, Polarization::V),
                [[cs, sn], [sn, -cs]],
            );
        }
    }
    Unitary::new(u)
}

/// `U_n ⋯ U_2 U_1`: the first listed element acts first.
pub fn compose(elements: &[Element], modes: usize) -> Result<Unitary> {
    let dim = 2 * modes;
    let mut acc = DMatrix::<Complex64>::identity(dim, dim);
    for e in elements {
        acc = element_unitary(e, modes)?.into_matrix() * acc;
    }
    Unitary::new(acc)
}

/// A PBS/BS/PBS network equivalent to `Qbs(i, j)` when the ancilla modes start empty.
///
/// V light detours through `anc_i`/`anc_j` around the beam splitter and is
/// recombined by the second pair of PBSs.
pub fn qbs_decomposition(i: usize, j: usize, anc_i: usize, anc_j: usize) -> Result<Vec<Element>> {
    let all = [i, j, anc_i, anc_j];
    for (a, x) in all.iter().enumerate() {
        if all[a + 1..].contains(x) {
            return Err(Error::InvalidElement(format!(
                "q-BS network needs four distinct modes, got {i} {j} {anc_i} {anc_j}"
            )));
        }
    }
    Ok(vec![
        Element::Pbs(i, anc_i),
        Element::Pbs(j, anc_j),
        Element::Bs(i, j),
        Element::Pbs(i, anc_i),
        Element::Pbs(j, anc_j),
    ])
}
