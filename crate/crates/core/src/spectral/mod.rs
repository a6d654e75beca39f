//! Periodic spectral grid, scalar/vector fields and Fourier multipliers.

pub mod field;
pub mod grid;
pub mod ops;

pub use field::{vector_norm_l2, zero_vector, SpectralField, VectorField};
pub use grid::{build_grid, SpectralGrid};
pub use ops::{
    cutoff_split, dealias, divergence, divergence_residual, gradient, leray_project, spectral_derivative,
    CutoffProfile, FrequencyCutoff, Symbol,
};
