//! Physical-space reconstruction of the original unknowns.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::state::State;

/// `rho = c e^phi`, `u` and `v` sampled on the physical grid.
#[derive(Debug, Clone)]
pub struct PhysicalFields<T> {
    pub density: Vec<T>,
    pub u: [Vec<T>; 3],
    pub v: [Vec<T>; 3],
}

/// Fails with a blow-up report when `|phi| >= 1` or a sample is not finite.
pub fn reconstruct_physical<T: Real>(state: &State<T>) -> Result<PhysicalFields<T>> {
    let mut phys: Vec<Vec<T>> = state.fields().into_par_iter().map(|f| f.to_physical()).collect();
    let blow = |reason: String| Error::BlowUp { t: state.t.as_f64(), reason };
    if phys.iter().flatten().any(|x| !x.is_finite()) {
        return Err(blow("non-finite field sample".into()));
    }
    let phi_sup = phys[0].iter().fold(T::zero(), |m, x| m.max(x.abs()));
    if phi_sup >= T::one() {
        return Err(blow(format!("|phi| reached {phi_sup}; density is no longer a small perturbation of c")));
    }
    let density = phys[0].iter().map(|p| state.c * p.exp()).collect();
    let v = [phys.remove(4), phys.remove(4), phys.remove(4)];
    let u = [phys.remove(1), phys.remove(1), phys.remove(1)];
    Ok(PhysicalFields { density, u, v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{build_grid, SpectralField};
    use std::f64::consts::PI;

    #[test]
    fn density_of_cosine_perturbation() {
        let g = build_grid::<f64>(8, 2.0 * PI).unwrap();
        let mut s = State::zeros(&g, 1.0);
        let p = reconstruct_physical(&s).unwrap();
        assert!(p.density.iter().all(|&r| r == 1.0));
        s.phi = SpectralField::from_fn(&g, |x| 0.01 * x[0].cos());
        let p = reconstruct_physical(&s).unwrap();
        let max = p.density.iter().copied().fold(0.0, f64::max);
        assert!((max - 0.01f64.exp()).abs() < 1e-14);
    }

    #[test]
    fn large_phi_is_blow_up() {
        let g = build_grid::<f64>(8, 2.0 * PI).unwrap();
        let mut s = State::zeros(&g, 1.0);
        s.phi = SpectralField::from_fn(&g, |x| 1.5 * x[0].cos());
        assert!(matches!(reconstruct_physical(&s), Err(Error::BlowUp { .. })));
    }
}
