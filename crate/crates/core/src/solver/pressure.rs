//! Diagnostic recovery of the incompressible pressure from the Hodge split
//! `grad P = -c grad (-Delta)^{-1} div (u - v) + grad (-Delta)^{-1} div N`,
//! `N = v.grad(v) - c (e^phi - 1)(u - v)`.

use num_complex::Complex;

use super::nonlinear::{physical_state, NonlinearOptions};
use crate::scalar::Real;
use crate::spectral::ops::dealias_in_place;
use crate::spectral::{SpectralField, VectorField};
use crate::state::State;

/// `N = v.grad(v) - c (e^phi - 1)(u - v)` in spectral form.
pub fn pressure_source<T: Real>(state: &State<T>, opts: &NonlinearOptions) -> VectorField<T> {
    let p = physical_state(state);
    let n = p.phi.len();
    let c = state.c;
    std::array::from_fn(|i| {
        let samples: Vec<T> = (0..n)
            .map(|x| {
                let adv = (0..3).fold(T::zero(), |s, j| s + p.v[j][x] * p.grad_v[i][j][x]);
                adv - c * opts.exp_mode.expm1(p.phi[x]) * (p.u[i][x] - p.v[i][x])
            })
            .collect();
        let mut f = SpectralField::from_physical(state.grid(), &samples);
        if opts.dealias {
            dealias_in_place(&mut f);
        }
        f
    })
}

/// `P^(xi) = (-c i xi.(u^ - v^) + i xi.N^) / |xi|^2`, zero mode 0.
pub fn recover_pressure<T: Real>(state: &State<T>) -> SpectralField<T> {
    recover_pressure_with(state, &NonlinearOptions::default())
}

pub fn recover_pressure_with<T: Real>(state: &State<T>, opts: &NonlinearOptions) -> SpectralField<T> {
    let src = pressure_source(state, opts);
    let grid = state.grid().clone();
    let c = state.c;
    let mut out = SpectralField::zeros(&grid);
    for idx in 0..grid.len() {
        let m2 = grid.xi_mag2(idx);
        if m2 == T::zero() {
            continue;
        }
        let xi = grid.wavevector(idx);
        let mut div = Complex::new(T::zero(), T::zero());
        for a in 0..3 {
            let diff = state.u[a].get(idx) - state.v[a].get(idx);
            div = div + (src[a].get(idx) - diff * c) * xi[a];
        }
        out.set(idx, Complex::new(T::zero(), T::one()) * div / m2);
    }
    out.symmetrize();
    out
}

/// Right-hand side of the velocity equation before the pressure gradient is
/// subtracted: `-N + Delta v + c (u - v)`.
pub fn v_equation_rhs_unprojected<T: Real>(state: &State<T>, opts: &NonlinearOptions) -> VectorField<T> {
    let src = pressure_source(state, opts);
    let grid = state.grid().clone();
    let c = state.c;
    std::array::from_fn(|a| {
        let lap = state.v[a].map_weight(|i| -grid.xi_mag2(i));
        let drag = state.u[a].sub(&state.v[a]).scale(c);
        lap.add(&drag).sub(&src[a])
    })
}
