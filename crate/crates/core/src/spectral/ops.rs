//! Fourier multipliers: derivatives, `Lambda^p`, the Leray projector,
//! frequency cut-offs and two-thirds dealiasing.

use num_complex::Complex;

use super::field::{SpectralField, VectorField};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Scalar Fourier symbol accepted by [`spectral_derivative`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Symbol<T> {
    /// `d/dx_axis`, symbol `i xi_axis`.
    Gradient(usize),
    /// `Lambda^p`, symbol `|xi|^p`; the zero mode of a negative power is 0.
    LambdaPower(T),
}

/// Applies a scalar Fourier multiplier.
///
/// Odd derivatives zero the unpaired Nyquist planes so that real fields stay real.
pub fn spectral_derivative<T: Real>(field: &SpectralField<T>, symbol: Symbol<T>) -> SpectralField<T> {
    let grid = field.grid().clone();
    match symbol {
        Symbol::Gradient(axis) => {
            assert!(axis < 3, "gradient axis out of range");
            field.map_symbol(|i| {
                if grid.is_nyquist(i) {
                    Complex::new(T::zero(), T::zero())
                } else {
                    Complex::new(T::zero(), grid.wavevector(i)[axis])
                }
            })
        }
        Symbol::LambdaPower(p) => {
            if p == T::zero() {
                return field.clone();
            }
            field.map_weight(|i| {
                let m2 = grid.xi_mag2(i);
                if m2 == T::zero() {
                    // also for p < 0: the mean is dropped
                    T::zero()
                } else {
                    m2.powf(p * T::lit(0.5))
                }
            })
        }
    }
}

pub fn gradient<T: Real>(f: &SpectralField<T>) -> VectorField<T> {
    [
        spectral_derivative(f, Symbol::Gradient(0)),
        spectral_derivative(f, Symbol::Gradient(1)),
        spectral_derivative(f, Symbol::Gradient(2)),
    ]
}

pub fn divergence<T: Real>(v: &VectorField<T>) -> SpectralField<T> {
    spectral_derivative(&v[0], Symbol::Gradient(0))
        .add(&spectral_derivative(&v[1], Symbol::Gradient(1)))
        .add(&spectral_derivative(&v[2], Symbol::Gradient(2)))
}

pub fn curl<T: Real>(v: &VectorField<T>) -> VectorField<T> {
    let d = |f: &SpectralField<T>, a: usize| spectral_derivative(f, Symbol::Gradient(a));
    [
        d(&v[2], 1).sub(&d(&v[1], 2)),
        d(&v[0], 2).sub(&d(&v[2], 0)),
        d(&v[1], 0).sub(&d(&v[0], 1)),
    ]
}

/// Inverse Laplacian `(-Delta)^{-1}`; zero mode mapped to 0.
pub fn inverse_laplacian<T: Real>(f: &SpectralField<T>) -> SpectralField<T> {
    spectral_derivative(f, Symbol::LambdaPower(-T::lit(2.0)))
}

/// Leray projector, symbol `I - xi xi^t / |xi|^2` (identity at `xi = 0`).
pub fn leray_project<T: Real>(v: &VectorField<T>) -> VectorField<T> {
    let grid = v[0].grid().clone();
    let mut out = v.clone();
    for idx in 0..grid.len() {
        let m2 = grid.xi_mag2(idx);
        if m2 == T::zero() {
            continue;
        }
        let xi = grid.wavevector(idx);
        let z = [v[0].get(idx), v[1].get(idx), v[2].get(idx)];
        let dot = (z[0] * xi[0] + z[1] * xi[1] + z[2] * xi[2]) / m2;
        for a in 0..3 {
            out[a].set(idx, z[a] - dot * xi[a]);
        }
    }
    out
}

/// Largest `|xi . v(xi)|` relative to the largest `|xi| |v(xi)|` (0 for a zero field).
pub fn divergence_residual<T: Real>(v: &VectorField<T>) -> T {
    let grid = v[0].grid();
    let mut worst = T::zero();
    let mut scale = T::zero();
    for idx in 0..grid.len() {
        let xi = grid.wavevector(idx);
        let z = [v[0].get(idx), v[1].get(idx), v[2].get(idx)];
        let dot = z[0] * xi[0] + z[1] * xi[1] + z[2] * xi[2];
        worst = worst.max(dot.norm());
        let mag = (z[0].norm_sqr() + z[1].norm_sqr() + z[2].norm_sqr()).sqrt();
        scale = scale.max(mag * grid.xi_mag(idx));
    }
    if scale == T::zero() {
        T::zero()
    } else {
        worst / scale
    }
}

/// Ramp shape of a [`FrequencyCutoff`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutoffProfile {
    /// C-infinity bump-quotient ramp on `[r0, R0]`.
    Smooth,
    /// Indicator of `|xi| <= r0`.
    Sharp,
}

/// Low-frequency weight `chi_1(|xi|)`; the high-frequency weight is `1 - chi_1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyCutoff<T> {
    pub r0: T,
    pub big_r0: T,
    pub profile: CutoffProfile,
}

/// `exp(-1/x)` for `x > 0`, else 0.
fn bump<T: Real>(x: T) -> T {
    if x > T::zero() {
        (-x.recip()).exp()
    } else {
        T::zero()
    }
}

/// C-infinity step equal to 1 for `s >= 1` and 0 for `s <= 0`.
pub fn smooth_step<T: Real>(s: T) -> T {
    let a = bump(s);
    let b = bump(T::one() - s);
    if a + b == T::zero() {
        T::zero()
    } else {
        a / (a + b)
    }
}

impl<T: Real> FrequencyCutoff<T> {
    pub fn new(r0: T, big_r0: T, profile: CutoffProfile) -> Result<Self> {
        if !(r0 > T::zero()) || !(big_r0 > r0) || !big_r0.is_finite() {
            return Err(Error::Config(format!("cutoff radii need 0 < r0 < R0, got r0={r0}, R0={big_r0}")));
        }
        Ok(Self { r0, big_r0, profile })
    }

    pub fn smooth(r0: T, big_r0: T) -> Result<Self> {
        Self::new(r0, big_r0, CutoffProfile::Smooth)
    }

    pub fn sharp(r0: T, big_r0: T) -> Result<Self> {
        Self::new(r0, big_r0, CutoffProfile::Sharp)
    }

    /// `chi_1(|xi|)`.
    pub fn low_weight(&self, xi_mag: T) -> T {
        match self.profile {
            CutoffProfile::Sharp => {
                if xi_mag <= self.r0 {
                    T::one()
                } else {
                    T::zero()
                }
            }
            CutoffProfile::Smooth => {
                if xi_mag <= self.r0 {
                    T::one()
                } else if xi_mag >= self.big_r0 {
                    T::zero()
                } else {
                    smooth_step((self.big_r0 - xi_mag) / (self.big_r0 - self.r0))
                }
            }
        }
    }

    /// `chi_infinity(|xi|) = 1 - chi_1(|xi|)`.
    pub fn high_weight(&self, xi_mag: T) -> T {
        T::one() - self.low_weight(xi_mag)
    }
}

impl Default for FrequencyCutoff<f64> {
    fn default() -> Self {
        Self { r0: 0.25, big_r0: 1.0, profile: CutoffProfile::Smooth }
    }
}

/// Splits a field into `(K_1 f, K_inf f)`; the high part is `f - low` so the sum is exact.
pub fn cutoff_split<T: Real>(field: &SpectralField<T>, cut: &FrequencyCutoff<T>) -> (SpectralField<T>, SpectralField<T>) {
    let grid = field.grid().clone();
    let low = field.map_weight(|i| cut.low_weight(grid.xi_mag(i)));
    let high = field.sub(&low);
    (low, high)
}

/// True if the mode survives the two-thirds rule (`|k_i| <= n/3` on every axis).
#[inline]
pub fn retained_mode(k: [i64; 3], n: usize) -> bool {
    k.iter().all(|&ki| 3 * ki.unsigned_abs() as usize <= n)
}

/// Zeroes every mode with some axis index `|k_i| > n/3`.
pub fn dealias<T: Real>(field: &SpectralField<T>) -> SpectralField<T> {
    let mut out = field.clone();
    dealias_in_place(&mut out);
    out
}

pub fn dealias_in_place<T: Real>(field: &mut SpectralField<T>) {
    let grid = field.grid().clone();
    for (i, z) in field.coefficients_mut().iter_mut().enumerate() {
        if !grid.is_retained(i) {
            *z = Complex::new(T::zero(), T::zero());
        }
    }
}

/// Pseudo-spectral product of two real fields (physical-space multiplication).
pub fn product<T: Real>(a: &SpectralField<T>, b: &SpectralField<T>, dealiased: bool) -> SpectralField<T> {
    let pa = a.to_physical();
    let pb = b.to_physical();
    let prod: Vec<T> = pa.iter().zip(&pb).map(|(x, y)| *x * *y).collect();
    let out = SpectralField::from_physical(a.grid(), &prod);
    if dealiased {
        dealias(&out)
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::build_grid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;
    use std::sync::Arc;

    use crate::spectral::grid::SpectralGrid;

    fn random_field(g: &Arc<SpectralGrid<f64>>, rng: &mut ChaCha8Rng, mean_zero: bool) -> SpectralField<f64> {
        let coef = (0..g.len()).map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let mut f = SpectralField::from_coefficients(g, coef);
        f.symmetrize();
        if mean_zero {
            f.set(0, Complex::new(0.0, 0.0));
        }
        f
    }

    fn random_vector(g: &Arc<SpectralGrid<f64>>, rng: &mut ChaCha8Rng) -> VectorField<f64> {
        [random_field(g, rng, false), random_field(g, rng, false), random_field(g, rng, false)]
    }

    #[test]
    fn lambda_zero_is_identity() {
        let g = build_grid::<f64>(8, 2.0 * PI).unwrap();
        let f = random_field(&g, &mut ChaCha8Rng::seed_from_u64(1), false);
        assert_eq!(spectral_derivative(&f, Symbol::LambdaPower(0.0)).max_diff(&f), 0.0);
    }

    #[test]
    fn lambda_two_scales_single_mode_by_four() {
        let g = build_grid::<f64>(8, 2.0 * PI).unwrap();
        let mut f = SpectralField::zeros(&g);
        let idx = g.index_of([0, 2, 0]).unwrap();
        f.set(idx, Complex::new(1.5, -0.5));
        let out = spectral_derivative(&f, Symbol::LambdaPower(2.0));
        assert!((out.get(idx) - Complex::new(6.0, -2.0)).norm() < 1e-14);
    }

    #[test]
    fn negative_power_inverts_positive_on_mean_zero() {
        let g = build_grid::<f64>(8, 3.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..5 {
            let f = random_field(&g, &mut rng, true);
            let back = spectral_derivative(&spectral_derivative(&f, Symbol::LambdaPower(1.0)), Symbol::LambdaPower(-1.0));
            assert!(back.max_diff(&f) <= 1e-13);
        }
        let mut f = SpectralField::zeros(&g);
        f.set(0, Complex::new(3.0, 0.0));
        assert_eq!(spectral_derivative(&f, Symbol::LambdaPower(-1.0)).get(0), Complex::new(0.0, 0.0));
    }

    #[test]
    fn leray_annihilates_gradients_and_is_idempotent() {
        let g = build_grid::<f64>(8, 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let psi = random_field(&g, &mut rng, false);
        let grad = gradient(&psi);
        let p = leray_project(&grad);
        for a in 0..3 {
            for i in 1..g.len() {
                assert!(p[a].get(i).norm() <= 1e-13 * psi.max_abs_coefficient().max(1.0));
            }
        }
        let v = random_vector(&g, &mut rng);
        let pv = leray_project(&v);
        assert!(divergence_residual(&pv) <= 1e-12);
        let ppv = leray_project(&pv);
        for a in 0..3 {
            assert!(ppv[a].max_diff(&pv[a]) <= 1e-13);
            assert_eq!(pv[a].get(0), v[a].get(0));
        }
    }

    #[test]
    fn cutoff_profile_shape() {
        let cut = FrequencyCutoff::smooth(0.25, 1.0).unwrap();
        let mut prev = 1.0;
        for i in 0..=200 {
            let x = i as f64 * 0.01;
            let w = cut.low_weight(x);
            assert!((0.0..=1.0).contains(&w));
            assert!(w <= prev + 1e-15);
            prev = w;
            if x <= 0.25 {
                assert_eq!(w, 1.0);
            }
            if x >= 1.0 {
                assert_eq!(w, 0.0);
            }
        }
        assert!(FrequencyCutoff::smooth(1.0, 0.5).is_err());
    }

    #[test]
    fn cutoff_split_supports_and_recombination() {
        let g = build_grid::<f64>(16, 2.0 * PI).unwrap();
        let cut = FrequencyCutoff::smooth(1.5, 4.0).unwrap();
        let mut lowonly = SpectralField::zeros(&g);
        lowonly.set(g.index_of([1, 0, 0]).unwrap(), Complex::new(1.0, 0.0));
        let (_, high) = cutoff_split(&lowonly, &cut);
        assert_eq!(high.max_abs_coefficient(), 0.0);
        let mut highonly = SpectralField::zeros(&g);
        highonly.set(g.index_of([5, 0, 0]).unwrap(), Complex::new(1.0, 0.0));
        let (low, _) = cutoff_split(&highonly, &cut);
        assert_eq!(low.max_abs_coefficient(), 0.0);

        let f = random_field(&g, &mut ChaCha8Rng::seed_from_u64(4), false);
        let (low, high) = cutoff_split(&f, &cut);
        assert!(low.add(&high).max_diff(&f) <= 1e-15);
    }

    #[test]
    fn dealias_rules() {
        let g = build_grid::<f64>(8, 2.0 * PI).unwrap();
        let mut inside = SpectralField::zeros(&g);
        inside.set(g.index_of([2, -2, 1]).unwrap(), Complex::new(1.0, 2.0));
        assert_eq!(dealias(&inside).max_diff(&inside), 0.0);
        let mut outside = SpectralField::zeros(&g);
        outside.set(g.index_of([3, 0, 0]).unwrap(), Complex::new(1.0, 0.0));
        assert_eq!(dealias(&outside).max_abs_coefficient(), 0.0);
    }

    #[test]
    fn dealiased_product_matches_direct_convolution() {
        let g = build_grid::<f64>(8, 2.0 * PI).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = dealias(&random_field(&g, &mut rng, false));
        let b = dealias(&random_field(&g, &mut rng, false));
        let got = product(&a, &b, true);
        // continuum convolution of the two spectra, restricted to retained modes
        for p in 0..g.len() {
            let kp = g.mode(p);
            let mut want = Complex::new(0.0, 0.0);
            for q in 0..g.len() {
                let kq = g.mode(q);
                let kr = [kp[0] - kq[0], kp[1] - kq[1], kp[2] - kq[2]];
                if let Some(r) = g.index_of(kr) {
                    want += a.get(q) * b.get(r);
                }
            }
            if !retained_mode(kp, g.n()) {
                want = Complex::new(0.0, 0.0);
            }
            assert!((got.get(p) - want).norm() < 1e-13, "mode {kp:?}");
        }
    }
}
