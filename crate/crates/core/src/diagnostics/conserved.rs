//! Conserved quantities.

use rayon::prelude::*;

use crate::scalar::Real;
use crate::state::State;

/// Total momentum `int (c e^phi u + v) dx` by grid quadrature.
pub fn momentum<T: Real>(state: &State<T>) -> [T; 3] {
    let phys: Vec<Vec<T>> = state.fields().into_par_iter().map(|f| f.to_physical()).collect();
    let c = state.c;
    let dv = state.grid().cell_volume();
    let mut m = [T::zero(); 3];
    for x in 0..phys[0].len() {
        let rho = c * phys[0][x].exp();
        for a in 0..3 {
            m[a] = m[a] + rho * phys[1 + a][x] + phys[4 + a][x];
        }
    }
    m.map(|x| x * dv)
}

/// `|m(t) - m(0)| / |m(0)|` in the Euclidean norm.
pub fn relative_drift<T: Real>(initial: [T; 3], current: [T; 3]) -> T {
    let norm = |v: [T; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let d = norm([current[0] - initial[0], current[1] - initial[1], current[2] - initial[2]]);
    let base = norm(initial);
    if base > T::zero() {
        d / base
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{build_grid, SpectralField};
    use std::f64::consts::PI;

    #[test]
    fn uniform_flow_momentum() {
        let g = build_grid::<f64>(8, 2.0 * PI).unwrap();
        let mut s = State::zeros(&g, 2.0);
        s.u[0] = SpectralField::from_fn(&g, |_| 0.1);
        s.v[1] = SpectralField::from_fn(&g, |_| 0.3);
        let m = momentum(&s);
        let vol = (2.0 * PI).powi(3);
        assert!((m[0] - 0.2 * vol).abs() < 1e-12 * vol);
        assert!((m[1] - 0.3 * vol).abs() < 1e-12 * vol);
        assert!(m[2].abs() < 1e-12);
    }
}
