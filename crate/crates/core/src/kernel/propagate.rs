use num_complex::Complex;
use rayon::prelude::*;

use super::eigen::eigenvalues;
use super::green::{apply_mode, DIM};
use super::weights::{kernel_weights_detailed, KernelWeights};
use crate::error::Result;
use crate::scalar::Real;
use crate::spectral::SpectralGrid;
use crate::state::State;

/// Exact linear propagator `exp(-t L)` for a fixed grid, time and `c`,
/// with the per-mode weights precomputed.
#[derive(Debug, Clone)]
pub struct Propagator<T: Real> {
    t: T,
    c: T,
    weights: Vec<KernelWeights<T>>,
}

impl<T: Real> Propagator<T> {
    pub fn new(grid: &SpectralGrid<T>, t: T, c: T) -> Self {
        let weights = (0..grid.len())
            .into_par_iter()
            .map(|i| kernel_weights_detailed(&eigenvalues(grid.xi_mag(i), c), t).weights)
            .collect();
        Self { t, c, weights }
    }

    pub fn time(&self) -> T {
        self.t
    }

    pub fn c(&self) -> T {
        self.c
    }

    /// Propagates the seven fields of `state` in place (no validation, time untouched).
    pub fn apply_in_place(&self, state: &mut State<T>) {
        let grid = state.grid().clone();
        let n = grid.len();
        let c = self.c;
        let mut buf: Vec<[Complex<T>; DIM]> = (0..n)
            .map(|i| {
                let f = state.fields();
                std::array::from_fn(|k| f[k].get(i))
            })
            .collect();
        buf.par_iter_mut().enumerate().for_each(|(i, z)| {
            *z = apply_mode(grid.wavevector(i), c, &self.weights[i], z);
        });
        for (k, f) in state.fields_mut().into_iter().enumerate() {
            for (dst, z) in f.coefficients_mut().iter_mut().zip(&buf) {
                *dst = z[k];
            }
        }
    }

    /// Validated propagation; advances `state.t` by the propagator time.
    pub fn apply(&self, state: &State<T>) -> Result<State<T>> {
        state.validate()?;
        let mut out = state.clone();
        self.apply_in_place(&mut out);
        out.t = state.t + self.t;
        Ok(out)
    }
}

/// Homogeneous linear evolution `exp(-t L) U` applied mode by mode.
///
/// Requires divergence-free `v`; the returned state has time `state.t + t`.
pub fn apply_propagator<T: Real>(state: &State<T>, t: T) -> Result<State<T>> {
    if !(t >= T::zero()) {
        return Err(crate::error::Error::Precondition(format!("propagation time must be nonnegative, got {t}")));
    }
    Propagator::new(state.grid(), t, state.c).apply(state)
}
