//! Spectral Sobolev norms with the box measure.

use crate::error::{Error, Result};
use crate::kernel::radial::MAX_DERIVATIVE;
use crate::scalar::Real;
use crate::spectral::{FrequencyCutoff, SpectralField, VectorField};
use crate::state::State;

/// `||nabla^j f||^2 = L^3 sum |xi|^{2j} |f_k|^2`.
pub fn gradient_energy<T: Real>(f: &SpectralField<T>, j: u32) -> T {
    weighted_energy(f, j, |_| T::one())
}

fn weighted_energy<T: Real>(f: &SpectralField<T>, j: u32, weight: impl Fn(usize) -> T) -> T {
    let g = f.grid();
    let sum = f
        .coefficients()
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (idx, z)| {
            let w = if j == 0 { T::one() } else { g.xi_mag2(idx).powi(j as i32) };
            acc + w * weight(idx) * z.norm_sqr()
        });
    sum * g.volume()
}

/// `[||f||^2, ||grad f||^2, ..., ||nabla^smax f||^2]` in one pass.
pub fn gradient_energies<T: Real>(f: &SpectralField<T>, smax: u32) -> Vec<T> {
    let g = f.grid();
    let mut out = vec![T::zero(); smax as usize + 1];
    for (idx, z) in f.coefficients().iter().enumerate() {
        let r2 = g.xi_mag2(idx);
        let mut w = z.norm_sqr();
        for slot in out.iter_mut() {
            *slot = *slot + w;
            w = w * r2;
        }
    }
    out.into_iter().map(|e| e * g.volume()).collect()
}

/// Sum of [`gradient_energies`] over several fields.
pub fn ladder<'a, T: Real>(fields: impl IntoIterator<Item = &'a SpectralField<T>>, smax: u32) -> Vec<T> {
    let mut out = vec![T::zero(); smax as usize + 1];
    for f in fields {
        for (o, e) in out.iter_mut().zip(gradient_energies(f, smax)) {
            *o = *o + e;
        }
    }
    out
}

pub fn gradient_norm<T: Real>(f: &SpectralField<T>, j: u32) -> T {
    gradient_energy(f, j).sqrt()
}

pub fn vector_gradient_energy<T: Real>(v: &VectorField<T>, j: u32) -> T {
    v.iter().fold(T::zero(), |s, f| s + gradient_energy(f, j))
}

pub fn vector_gradient_norm<T: Real>(v: &VectorField<T>, j: u32) -> T {
    vector_gradient_energy(v, j).sqrt()
}

/// `||nabla^j (phi, u, v)||^2`.
pub fn state_gradient_energy<T: Real>(state: &State<T>, j: u32) -> T {
    state.fields().iter().fold(T::zero(), |s, f| s + gradient_energy(f, j))
}

/// `||nabla^j (u - v)||`.
pub fn difference_norm<T: Real>(state: &State<T>, j: u32) -> T {
    let diff: VectorField<T> = std::array::from_fn(|a| state.u[a].sub(&state.v[a]));
    vector_gradient_norm(&diff, j)
}

/// `||nabla^j (phi, u, v)||` for `j = 0..=s`.
pub fn sobolev_norms<T: Real>(state: &State<T>, s: u32) -> Result<Vec<T>> {
    if s > MAX_DERIVATIVE {
        return Err(Error::Domain(format!("Sobolev order {s} exceeds {MAX_DERIVATIVE}")));
    }
    Ok(ladder(state.fields(), s).into_iter().map(|e| e.sqrt()).collect())
}

/// `||nabla^j f||^2_{H^{s-j}} = sum_{k=j}^{s} ||nabla^k f||^2` for a scalar field.
pub fn hs_energy_from<T: Real>(f: &SpectralField<T>, j: u32, s: u32) -> T {
    gradient_energies(f, s)[j as usize..].iter().fold(T::zero(), |acc, &e| acc + e)
}

pub fn vector_hs_energy_from<T: Real>(v: &VectorField<T>, j: u32, s: u32) -> T {
    v.iter().fold(T::zero(), |acc, f| acc + hs_energy_from(f, j, s))
}

/// `||(phi, u, v)||_{H^s}`.
pub fn hs_norm<T: Real>(state: &State<T>, s: u32) -> T {
    ladder(state.fields(), s).into_iter().fold(T::zero(), |acc, e| acc + e).sqrt()
}

/// Norms of `K_1 U` and `K_inf U` over all seven fields.
pub fn split_norms<T: Real>(state: &State<T>, cut: &FrequencyCutoff<T>, j: u32) -> (T, T) {
    let grid = state.grid();
    let (mut low, mut high) = (T::zero(), T::zero());
    for f in state.fields() {
        low = low + weighted_energy(f, j, |i| cut.low_weight(grid.xi_mag(i)).powi(2));
        high = high + weighted_energy(f, j, |i| cut.high_weight(grid.xi_mag(i)).powi(2));
    }
    (low.sqrt(), high.sqrt())
}

/// `max |f|` over the physical grid.
pub fn linf_norm<T: Real>(f: &SpectralField<T>) -> T {
    f.to_physical().into_iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::build_grid;
    use num_complex::Complex;
    use std::f64::consts::PI;

    #[test]
    fn single_mode_gradient_norm() {
        let g = build_grid::<f64>(8, 2.0 * PI).unwrap();
        let mut f = SpectralField::zeros(&g);
        let amp = 0.3;
        let i = g.index_of([2, 0, 0]).unwrap();
        f.set(i, Complex::new(amp, 0.0));
        // |xi| = 2: ||nabla f|| = 2 A (2 pi)^{3/2}
        let want = 2.0 * amp * (2.0 * PI).powf(1.5);
        assert!((gradient_norm(&f, 1) - want).abs() < 1e-12 * want);
    }

    #[test]
    fn hs_sums_orders() {
        let g = build_grid::<f64>(8, 2.0 * PI).unwrap();
        let f = SpectralField::from_fn(&g, |x| x[0].sin() + 0.5 * (2.0 * x[1]).cos());
        let want: f64 = (1..=3).map(|k| gradient_energy(&f, k)).sum();
        assert!((hs_energy_from(&f, 1, 3) - want).abs() < 1e-12 * want);
    }
}
