//! Norms, energy functionals, conserved quantities and decay fits.

pub mod conserved;
pub mod energy;
pub mod fit;
pub mod norms;
pub mod series;

pub use conserved::momentum;
pub use energy::{energy_functionals, EnergyReport, TimeWeightedEnergy};
pub use fit::{decay_fit, lower_bound_check, FitResult, LowerBoundReport};
pub use norms::{sobolev_norms, split_norms};
pub use series::{ChannelKey, DecaySeries};
