//! Closed-form linear semigroup of the drag-coupled system.

pub mod asymptotics;
pub mod eigen;
pub mod green;
pub mod oracle;
pub mod propagate;
pub mod quadrature;
pub mod radial;
pub mod weights;

pub use asymptotics::{asymptotics_report, AsymptoticsReport};
pub use eigen::{eigenvalues, EigenQuadruple};
pub use green::{green_hat, GreenMatrix};
pub use oracle::{matrix_exponential_oracle, mode_ode_oracle};
pub use propagate::{apply_propagator, Propagator};
pub use radial::{radial_norm, radial_norms, radial_series, ProfileSet, RadialNorms, RadialOptions, RadialProfile};
pub use weights::{kernel_weights, KernelWeights};
