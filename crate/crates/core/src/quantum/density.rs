use crate::error::{Error, Result};

use super::matrix::{ComplexMatrix, C64};

/// Hermiticity and trace tolerance applied at construction.
pub const CONSTRUCTION_TOL: f64 = 1e-12;
/// Lowest eigenvalue accepted at construction.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Outcome of [`validate_density`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityReport {
    pub hermiticity_defect: f64,
    /// `|tr ρ − 1|`.
    pub trace_defect: f64,
    /// Smallest eigenvalue of the Hermitian part.
    pub min_eigenvalue: f64,
    pub tolerance: f64,
    pub hermitian: bool,
    pub unit_trace: bool,
    pub positive: bool,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.hermitian && self.unit_trace && self.positive
    }
}

/// Measures how far `mat` is from being a density matrix; every check uses `tol`.
pub fn validate_density(mat: &ComplexMatrix, tol: f64) -> ValidityReport {
    let hermiticity_defect = mat.hermiticity_defect();
    let trace_defect = (mat.trace() - C64::new(1.0, 0.0)).norm();
    let min_eigenvalue = mat.hermitian_eigenvalues().first().copied().unwrap_or(0.0);
    ValidityReport {
        hermiticity_defect,
        trace_defect,
        min_eigenvalue,
        tolerance: tol,
        hermitian: hermiticity_defect <= tol,
        unit_trace: trace_defect <= tol,
        positive: min_eigenvalue >= -tol,
    }
}

/// Hermitian, unit-trace, positive semidefinite state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let herm = mat.hermiticity_defect();
        if herm > CONSTRUCTION_TOL {
            return Err(Error::InvalidDensity(format!(
                "hermiticity defect {herm:e}"
            )));
        }
        let trace = (mat.trace() - C64::new(1.0, 0.0)).norm();
        if trace > CONSTRUCTION_TOL {
            return Err(Error::InvalidDensity(format!("trace defect {trace:e}")));
        }
        let min_eig = mat.hermitian_eigenvalues()[0];
        if min_eig < -POSITIVITY_TOL {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self { mat })
    }

    /// Skips validation; used for propagated states whose drift is tracked separately.
    pub(crate) fn new_unchecked(mat: ComplexMatrix) -> Self {
        Self { mat }
    }

    /// `|k⟩⟨k|`.
    pub fn basis_state(dim: usize, k: usize) -> Self {
        Self {
            mat: ComplexMatrix::transition(dim, k, k),
        }
    }

    /// `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        if populations.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::InvalidDensity(
                "populations must be nonnegative".into(),
            ));
        }
        Self::new(ComplexMatrix::from_real_diagonal(populations))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.mat.diagonal_real()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.mat.get(i, j)
    }

    pub fn report(&self, tol: f64) -> ValidityReport {
        validate_density(&self.mat, tol)
    }
}
