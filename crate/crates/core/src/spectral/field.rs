use std::sync::Arc;

use num_complex::Complex;

use super::grid::SpectralGrid;
use crate::scalar::Real;

/// Fourier coefficients of one scalar field on a [`SpectralGrid`].
///
/// The represented function is `f(x) = sum_k coef[k] exp(i xi_k . x)`.
#[derive(Debug, Clone)]
pub struct SpectralField<T: Real> {
    grid: Arc<SpectralGrid<T>>,
    coef: Vec<Complex<T>>,
}

/// Three spectral components of a vector field.
pub type VectorField<T> = [SpectralField<T>; 3];

impl<T: Real> SpectralField<T> {
    pub fn zeros(grid: &Arc<SpectralGrid<T>>) -> Self {
        Self { grid: Arc::clone(grid), coef: vec![Complex::new(T::zero(), T::zero()); grid.len()] }
    }

    pub fn from_coefficients(grid: &Arc<SpectralGrid<T>>, coef: Vec<Complex<T>>) -> Self {
        assert_eq!(coef.len(), grid.len(), "coefficient count does not match grid");
        Self { grid: Arc::clone(grid), coef }
    }

    /// Transforms real physical samples (grid storage order).
    pub fn from_physical(grid: &Arc<SpectralGrid<T>>, samples: &[T]) -> Self {
        let mut coef: Vec<Complex<T>> = samples.iter().map(|&x| Complex::new(x, T::zero())).collect();
        grid.forward(&mut coef);
        let mut f = Self::from_coefficients(grid, coef);
        f.symmetrize();
        f
    }

    /// Builds a field by sampling `f` at every physical grid point.
    pub fn from_fn(grid: &Arc<SpectralGrid<T>>, f: impl Fn([T; 3]) -> T) -> Self {
        let samples: Vec<T> = (0..grid.len()).map(|i| f(grid.position(i))).collect();
        Self::from_physical(grid, &samples)
    }

    /// Real physical samples; the imaginary part is discarded.
    pub fn to_physical(&self) -> Vec<T> {
        let mut data = self.coef.clone();
        self.grid.inverse(&mut data);
        data.into_iter().map(|z| z.re).collect()
    }

    /// Complex physical samples (for fields that are not Hermitian).
    pub fn to_physical_complex(&self) -> Vec<Complex<T>> {
        let mut data = self.coef.clone();
        self.grid.inverse(&mut data);
        data
    }

    #[inline]
    pub fn grid(&self) -> &Arc<SpectralGrid<T>> {
        &self.grid
    }

    #[inline]
    pub fn coefficients(&self) -> &[Complex<T>] {
        &self.coef
    }

    #[inline]
    pub fn coefficients_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coef
    }

    pub fn into_coefficients(self) -> Vec<Complex<T>> {
        self.coef
    }

    #[inline]
    pub fn get(&self, idx: usize) -> Complex<T> {
        self.coef[idx]
    }

    #[inline]
    pub fn set(&mut self, idx: usize, z: Complex<T>) {
        self.coef[idx] = z;
    }

    /// Multiplies each coefficient by `symbol(idx)`.
    pub fn map_symbol(&self, symbol: impl Fn(usize) -> Complex<T>) -> Self {
        let coef = self.coef.iter().enumerate().map(|(i, &z)| z * symbol(i)).collect();
        Self { grid: Arc::clone(&self.grid), coef }
    }

    /// Multiplies each coefficient by a real weight `weight(idx)`.
    pub fn map_weight(&self, weight: impl Fn(usize) -> T) -> Self {
        let coef = self.coef.iter().enumerate().map(|(i, &z)| z * weight(i)).collect();
        Self { grid: Arc::clone(&self.grid), coef }
    }

    pub fn scale(&self, a: T) -> Self {
        self.map_weight(|_| a)
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: T, other: &Self) -> Self {
        let coef = self.coef.iter().zip(&other.coef).map(|(&x, &y)| x + y * a).collect();
        Self { grid: Arc::clone(&self.grid), coef }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(T::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(-T::one(), other)
    }

    /// Restores `coef(-k) = conj(coef(k))`; Nyquist-plane modes become real.
    pub fn symmetrize(&mut self) {
        let half = T::lit(0.5);
        for idx in 0..self.coef.len() {
            let m = self.grid.mirror(idx);
            if m < idx {
                continue;
            }
            if m == idx {
                self.coef[idx] = Complex::new(self.coef[idx].re, T::zero());
            } else {
                let a = self.coef[idx];
                let b = self.coef[m].conj();
                let avg = (a + b) * half;
                self.coef[idx] = avg;
                self.coef[m] = avg.conj();
            }
        }
    }

    /// Largest deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> T {
        (0..self.coef.len())
            .map(|i| (self.coef[i] - self.coef[self.grid.mirror(i)].conj()).norm())
            .fold(T::zero(), T::max)
    }

    /// `sum_k |c_k|^2`.
    pub fn coefficient_energy(&self) -> T {
        self.coef.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    /// Box L2 norm, `(L^3 sum_k |c_k|^2)^{1/2}`.
    pub fn norm_l2(&self) -> T {
        (self.grid.volume() * self.coefficient_energy()).sqrt()
    }

    /// Box L2 inner product `Re int f conj(g) dx`.
    pub fn inner(&self, other: &Self) -> T {
        let s = self.coef.iter().zip(&other.coef).fold(T::zero(), |acc, (a, b)| acc + (a * b.conj()).re);
        s * self.grid.volume()
    }

    pub fn max_abs_coefficient(&self) -> T {
        self.coef.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coef.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest coefficient difference.
    pub fn max_diff(&self, other: &Self) -> T {
        self.coef.iter().zip(&other.coef).map(|(a, b)| (a - b).norm()).fold(T::zero(), T::max)
    }
}

/// Zero vector field.
pub fn zero_vector<T: Real>(grid: &Arc<SpectralGrid<T>>) -> VectorField<T> {
    [SpectralField::zeros(grid), SpectralField::zeros(grid), SpectralField::zeros(grid)]
}

/// `(L^3 sum_k |c_k|^2)^{1/2}` summed over the components of a vector field.
pub fn vector_norm_l2<T: Real>(v: &VectorField<T>) -> T {
    v.iter().fold(T::zero(), |acc, f| acc + f.norm_l2().powi(2)).sqrt()
}
