//! Numerical laboratory for the compressible isothermal Euler equations
//! coupled through drag to the incompressible Navier-Stokes equations,
//! written in the log-density perturbation variables `(phi, u, v)`.
//!
//! * [`spectral`]: periodic grid, fields, Fourier multipliers.
//! * [`kernel`]: exact Green matrix, oracles, whole-space radial norms.
//! * [`solver`]: pseudo-spectral exponential integrator for the nonlinear system.
//! * [`diagnostics`]: norms, energy functionals, conserved momentum, decay fits.
//! * [`initial_data`]: admissible initial states and radial spectra.
//!
//! Every numerical type is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the double-precision instantiation used by the CLI.

pub mod diagnostics;
pub mod error;
pub mod initial_data;
pub mod kernel;
pub mod scalar;
pub mod solver;
pub mod spectral;
pub mod state;

pub use error::{Error, Result};
pub use scalar::Real;
pub use state::State;

pub type Grid64 = spectral::SpectralGrid<f64>;
pub type Field64 = spectral::SpectralField<f64>;
pub type State64 = State<f64>;
pub type Weights64 = kernel::KernelWeights<f64>;
pub type Eigen64 = kernel::EigenQuadruple<f64>;

pub type Grid32 = spectral::SpectralGrid<f32>;
pub type Field32 = spectral::SpectralField<f32>;
pub type State32 = State<f32>;
