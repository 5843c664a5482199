//! Dense linear algebra, spectra and grid discretization.

pub mod expm;
pub mod grid;
pub mod matrix;
pub mod spectrum;
pub mod tridiagonal;

pub use expm::{expm, expm_scaled};
pub use grid::{
    grid_operator, indefinite_inner, kinetic, weak_form_residual, Grid1D, GridOperator, OperatorKind,
};
pub use matrix::{pauli, ComplexMatrix, I, ONE, ZERO};
pub use spectrum::{
    compare_lowest, eig, eigenvalues, match_spectra, observed_order, pairing_check, refinement_study, MatchedPair,
    PairingClass, RefinementLevel, RefinementStudy,
    SpectrumResult,
};
