use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{divergence_residual, zero_vector, SpectralField, SpectralGrid, VectorField};

/// Perturbation triple `(phi, u, v)` in spectral form.
///
/// `phi = ln(rho) - ln(c)` is the log-density perturbation, `u` the
/// compressible velocity and `v` the divergence-free velocity. `c` is the
/// background density.
#[derive(Debug, Clone)]
pub struct State<T: Real> {
    pub phi: SpectralField<T>,
    pub u: VectorField<T>,
    pub v: VectorField<T>,
    pub t: T,
    pub c: T,
}

/// Relative tolerance on `xi . v(xi)` accepted as divergence-free.
pub fn solenoidal_tolerance<T: Real>() -> T {
    T::epsilon().sqrt() * T::lit(1e-2)
}

impl<T: Real> State<T> {
    pub fn zeros(grid: &Arc<SpectralGrid<T>>, c: T) -> Self {
        Self { phi: SpectralField::zeros(grid), u: zero_vector(grid), v: zero_vector(grid), t: T::zero(), c }
    }

    pub fn grid(&self) -> &Arc<SpectralGrid<T>> {
        self.phi.grid()
    }

    /// Checks shared grid, positive `c`, nonnegative `t` and solenoidal `v`.
    pub fn validate(&self) -> Result<()> {
        let g = self.grid();
        if self.u.iter().chain(self.v.iter()).any(|f| f.grid().as_ref() != g.as_ref()) {
            return Err(Error::Precondition("state fields live on different grids".into()));
        }
        if !(self.c > T::zero()) || !self.c.is_finite() {
            return Err(Error::Precondition(format!("model constant c must be positive, got {}", self.c)));
        }
        if !(self.t >= T::zero()) {
            return Err(Error::Precondition(format!("time must be nonnegative, got {}", self.t)));
        }
        let res = divergence_residual(&self.v);
        if res > solenoidal_tolerance::<T>() {
            return Err(Error::Precondition(format!("v is not divergence-free (relative residual {res})")));
        }
        Ok(())
    }

    /// The seven scalar fields in the order `phi, u1, u2, u3, v1, v2, v3`.
    pub fn fields(&self) -> [&SpectralField<T>; 7] {
        [&self.phi, &self.u[0], &self.u[1], &self.u[2], &self.v[0], &self.v[1], &self.v[2]]
    }

    pub fn fields_mut(&mut self) -> [&mut SpectralField<T>; 7] {
        let [u0, u1, u2] = &mut self.u;
        let [v0, v1, v2] = &mut self.v;
        [&mut self.phi, u0, u1, u2, v0, v1, v2]
    }

    pub fn is_finite(&self) -> bool {
        self.fields().iter().all(|f| f.is_finite())
    }

    pub fn symmetrize(&mut self) {
        for f in self.fields_mut() {
            f.symmetrize();
        }
    }

    /// Largest coefficient difference over all seven fields.
    pub fn max_diff(&self, other: &Self) -> T {
        self.fields().iter().zip(other.fields().iter()).map(|(a, b)| a.max_diff(b)).fold(T::zero(), T::max)
    }

    pub fn max_abs_coefficient(&self) -> T {
        self.fields().iter().map(|f| f.max_abs_coefficient()).fold(T::zero(), T::max)
    }
}
