//! Wavenumber lattice of a cubic periodic box and the 3-D transforms on it.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Smallest admissible number of modes per axis.
pub const MIN_MODES: usize = 8;

/// Periodic cube `[0, L)^3` sampled on `n^3` points.
///
/// Storage order for both physical samples and spectral coefficients is
/// row-major `(i0, i1, i2)` with `i2` fastest. Axis index `i` carries the
/// integer wavenumber `k = i` for `i < n/2` and `k = i - n` otherwise, so
/// every axis covers `[-n/2, n/2)` and `xi = 2 pi k / L`.
pub struct SpectralGrid<T: Real> {
    n: usize,
    box_length: T,
    xi_unit: T,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
    // per-mode caches
    xi: Vec<[T; 3]>,
    mag2: Vec<T>,
    nyquist: Vec<bool>,
    mirror: Vec<usize>,
    retained: Vec<bool>,
}

impl<T: Real> fmt::Debug for SpectralGrid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("n", &self.n)
            .field("box_length", &self.box_length)
            .finish()
    }
}

impl<T: Real> PartialEq for SpectralGrid<T> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.box_length == other.box_length
    }
}

/// Builds a grid with `n_per_axis` modes per axis on a box of period `box_length`.
pub fn build_grid<T: Real>(n_per_axis: usize, box_length: T) -> Result<Arc<SpectralGrid<T>>> {
    SpectralGrid::new(n_per_axis, box_length).map(Arc::new)
}

impl<T: Real> SpectralGrid<T> {
    pub fn new(n_per_axis: usize, box_length: T) -> Result<Self> {
        if n_per_axis < MIN_MODES || n_per_axis % 2 != 0 {
            return Err(Error::Config(format!(
                "n_per_axis must be even and >= {MIN_MODES}, got {n_per_axis}"
            )));
        }
        if !(box_length > T::zero()) || !box_length.is_finite() {
            return Err(Error::Config(format!("box_length must be positive, got {box_length}")));
        }
        let mut planner = FftPlanner::new();
        let mut grid = Self {
            n: n_per_axis,
            box_length,
            xi_unit: T::TAU() / box_length,
            forward: planner.plan_fft_forward(n_per_axis),
            inverse: planner.plan_fft_inverse(n_per_axis),
            xi: Vec::new(),
            mag2: Vec::new(),
            nyquist: Vec::new(),
            mirror: Vec::new(),
            retained: Vec::new(),
        };
        let half = (n_per_axis / 2) as i64;
        let len = grid.len();
        grid.xi = (0..len)
            .map(|idx| grid.mode(idx).map(|k| T::from_i64(k).unwrap() * grid.xi_unit))
            .collect();
        grid.mag2 = grid.xi.iter().map(|x| x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).collect();
        grid.nyquist = (0..len).map(|idx| grid.mode(idx).iter().any(|&k| k == -half)).collect();
        let n = n_per_axis;
        let flip = |i: usize| (n - i) % n;
        grid.mirror = (0..len).map(|idx| (flip(idx / (n * n)) * n + flip((idx / n) % n)) * n + flip(idx % n)).collect();
        grid.retained = (0..len).map(|idx| grid.mode(idx).iter().all(|&k| 3 * k.unsigned_abs() as usize <= n)).collect();
        Ok(grid)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn box_length(&self) -> T {
        self.box_length
    }

    /// Number of lattice modes (`n^3`).
    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Smallest nonzero wavenumber magnitude, `2 pi / L`.
    #[inline]
    pub fn xi_unit(&self) -> T {
        self.xi_unit
    }

    /// Largest wavenumber magnitude along a single axis, `pi n / L`.
    pub fn xi_axis_max(&self) -> T {
        T::from_count(self.n / 2) * self.xi_unit
    }

    /// Box volume `L^3`.
    pub fn volume(&self) -> T {
        self.box_length * self.box_length * self.box_length
    }

    /// Volume of one physical grid cell.
    pub fn cell_volume(&self) -> T {
        self.volume() / T::from_count(self.len())
    }

    /// Signed integer wavenumber of axis index `i`.
    #[inline]
    pub fn axis_wavenumber(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    #[inline]
    fn axis_index(&self, k: i64) -> usize {
        k.rem_euclid(self.n as i64) as usize
    }

    /// Integer mode coordinates of flat index `idx`.
    #[inline]
    pub fn mode(&self, idx: usize) -> [i64; 3] {
        let n = self.n;
        [
            self.axis_wavenumber(idx / (n * n)),
            self.axis_wavenumber((idx / n) % n),
            self.axis_wavenumber(idx % n),
        ]
    }

    /// Flat index of an integer mode, if it lies on the lattice.
    pub fn index_of(&self, k: [i64; 3]) -> Option<usize> {
        let half = (self.n / 2) as i64;
        if k.iter().any(|&ki| ki < -half || ki >= half) {
            return None;
        }
        let n = self.n;
        Some((self.axis_index(k[0]) * n + self.axis_index(k[1])) * n + self.axis_index(k[2]))
    }

    /// Wavenumber vector `xi = 2 pi k / L` of flat index `idx`.
    #[inline]
    pub fn wavevector(&self, idx: usize) -> [T; 3] {
        self.xi[idx]
    }

    #[inline]
    pub fn xi_mag2(&self, idx: usize) -> T {
        self.mag2[idx]
    }

    #[inline]
    pub fn xi_mag(&self, idx: usize) -> T {
        self.xi_mag2(idx).sqrt()
    }

    /// Largest `|xi|` over the lattice.
    pub fn xi_max(&self) -> T {
        self.xi_axis_max() * T::lit(3.0).sqrt()
    }

    /// True if any axis of the mode sits on the unpaired Nyquist plane `k = -n/2`.
    #[inline]
    pub fn is_nyquist(&self, idx: usize) -> bool {
        self.nyquist[idx]
    }

    /// Flat index of the mode `-k` (Nyquist planes map onto themselves).
    #[inline]
    pub fn mirror(&self, idx: usize) -> usize {
        self.mirror[idx]
    }

    /// True if the mode survives the two-thirds rule.
    #[inline]
    pub fn is_retained(&self, idx: usize) -> bool {
        self.retained[idx]
    }

    /// Physical coordinate of sample index `i` along an axis.
    #[inline]
    pub fn coordinate(&self, i: usize) -> T {
        T::from_count(i) * self.box_length / T::from_count(self.n)
    }

    /// Physical position of flat sample index `idx`.
    pub fn position(&self, idx: usize) -> [T; 3] {
        let n = self.n;
        [self.coordinate(idx / (n * n)), self.coordinate((idx / n) % n), self.coordinate(idx % n)]
    }

    /// Physical samples to coefficients of `f(x) = sum_k c_k exp(i xi.x)`.
    pub fn forward(&self, data: &mut [Complex<T>]) {
        self.transform(data, &self.forward);
        let scale = T::one() / T::from_count(self.len());
        data.par_iter_mut().for_each(|z| *z = *z * scale);
    }

    /// Coefficients back to physical samples (inverse of [`forward`](Self::forward)).
    pub fn inverse(&self, data: &mut [Complex<T>]) {
        self.transform(data, &self.inverse);
    }

    fn transform(&self, data: &mut [Complex<T>], plan: &Arc<dyn Fft<T>>) {
        let n = self.n;
        assert_eq!(data.len(), self.len(), "buffer does not match grid");
        let zero = Complex::new(T::zero(), T::zero());
        let scratch_len = plan.get_inplace_scratch_len();
        // axes 2 and 1 within each i0-plane: lines along i2 are contiguous,
        // axis 1 is handled by transposing the plane
        data.par_chunks_mut(n * n).for_each(|plane| {
            let mut scratch = vec![zero; scratch_len];
            let mut tmp = vec![zero; n * n];
            plan.process_with_scratch(plane, &mut scratch);
            transpose(plane, &mut tmp, n, n);
            plan.process_with_scratch(&mut tmp, &mut scratch);
            transpose(&tmp, plane, n, n);
        });
        // axis 0: view data as an n x n^2 matrix and transpose it
        let mut tmp = vec![zero; data.len()];
        transpose(data, &mut tmp, n, n * n);
        tmp.par_chunks_mut(n * n).for_each(|chunk| {
            let mut scratch = vec![zero; scratch_len];
            plan.process_with_scratch(chunk, &mut scratch);
        });
        transpose(&tmp, data, n * n, n);
    }
}

/// `dst[c * rows + r] = src[r * cols + c]`.
fn transpose<Z: Copy>(src: &[Z], dst: &mut [Z], rows: usize, cols: usize) {
    const B: usize = 16;
    for r0 in (0..rows).step_by(B) {
        for c0 in (0..cols).step_by(B) {
            for r in r0..(r0 + B).min(rows) {
                for c in c0..(c0 + B).min(cols) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;
    use std::f64::consts::PI;

    #[test]
    fn rejects_bad_sizes() {
        assert!(SpectralGrid::<f64>::new(7, 1.0).is_err());
        assert!(SpectralGrid::<f64>::new(6, 1.0).is_err());
        assert!(SpectralGrid::<f64>::new(8, 0.0).is_err());
        assert!(SpectralGrid::<f64>::new(8, -1.0).is_err());
    }

    #[test]
    fn two_pi_box_gives_integer_wavenumbers() {
        let g = SpectralGrid::<f64>::new(8, 2.0 * PI).unwrap();
        assert_eq!(g.len(), 512);
        for idx in 0..g.len() {
            let k = g.mode(idx);
            let xi = g.wavevector(idx);
            for a in 0..3 {
                assert!((-4..4).contains(&k[a]));
                assert!((xi[a] - k[a] as f64).abs() < 1e-14);
            }
        }
        assert!((g.xi_axis_max() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn smallest_wavenumber() {
        let g = SpectralGrid::<f64>::new(32, 64.0 * PI).unwrap();
        let smallest = (0..g.len())
            .map(|i| g.xi_mag(i))
            .filter(|&x| x > 0.0)
            .fold(f64::INFINITY, f64::min);
        assert!((smallest - 1.0 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn lattices_nest() {
        let a = SpectralGrid::<f64>::new(8, 2.0 * PI).unwrap();
        let b = SpectralGrid::<f64>::new(16, 2.0 * PI).unwrap();
        let set_b: HashSet<[i64; 3]> = (0..b.len()).map(|i| b.mode(i)).collect();
        assert!((0..a.len()).all(|i| set_b.contains(&a.mode(i))));
    }

    #[test]
    fn index_round_trip_and_mirror() {
        let g = SpectralGrid::<f64>::new(8, 1.0).unwrap();
        for idx in 0..g.len() {
            assert_eq!(g.index_of(g.mode(idx)), Some(idx));
            let m = g.mirror(idx);
            assert_eq!(g.mirror(m), idx);
            if !g.is_nyquist(idx) {
                let (k, km) = (g.mode(idx), g.mode(m));
                assert_eq!([-k[0], -k[1], -k[2]], km);
            }
        }
        assert_eq!(g.index_of([4, 0, 0]), None);
    }

    #[test]
    fn transform_round_trip() {
        let g = SpectralGrid::<f64>::new(8, 3.0).unwrap();
        let orig: Vec<Complex<f64>> = (0..g.len())
            .map(|i| Complex::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let mut data = orig.clone();
        g.forward(&mut data);
        g.inverse(&mut data);
        let err = orig.iter().zip(&data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-13, "{err}");
    }

    #[test]
    fn forward_of_plane_wave_is_unit_coefficient() {
        let g = SpectralGrid::<f64>::new(8, 2.0 * PI).unwrap();
        let k = [1i64, -2, 3];
        let mut data: Vec<Complex<f64>> = (0..g.len())
            .map(|i| {
                let x = g.position(i);
                let ph = k[0] as f64 * x[0] + k[1] as f64 * x[1] + k[2] as f64 * x[2];
                Complex::new(ph.cos(), ph.sin())
            })
            .collect();
        g.forward(&mut data);
        let at = g.index_of(k).unwrap();
        for (i, z) in data.iter().enumerate() {
            let want = if i == at { 1.0 } else { 0.0 };
            assert!((z - Complex::new(want, 0.0)).norm() < 1e-13);
        }
    }
}
