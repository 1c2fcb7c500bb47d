//! Complex-matrix primitives, density-matrix checks and Lindblad generators for `N`-level
//! systems. All matrices use the ordered basis `|0⟩, |1⟩, …, |N−1⟩`.

mod density;
mod lindblad;
mod matrix;

pub use density::{
    validate_density, DensityMatrix, ValidityReport, CONSTRUCTION_TOL, POSITIVITY_TOL,
};
pub use lindblad::{dissipator, generator_apply, vectorized_liouvillian, Generator, LindbladTerm};
pub use matrix::{ComplexMatrix, C64, I, ONE, ZERO};
