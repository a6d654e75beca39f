//! Nonlinear time integration, diagnostic pressure recovery and checkpoints.

pub mod checkpoint;
pub mod nonlinear;
pub mod physical;
pub mod pressure;
pub mod simulate;
pub mod stepper;

pub use checkpoint::{load_checkpoint, read_checkpoint, save_checkpoint, write_checkpoint};
pub use nonlinear::{nonlinear_rhs, nonlinear_rhs_with, ExpMode, NonlinearOptions, NonlinearTerms};
pub use physical::{reconstruct_physical, PhysicalFields};
pub use pressure::recover_pressure;
pub use simulate::{simulate, DiagnosticHook, MonitorSummary, SimulationFailure, SimulationOutput};
pub use stepper::{step, Stepper, StepperConfig};
