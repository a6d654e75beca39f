//! Divided-difference weights from which every Green-matrix block is assembled.

use num_complex::Complex;

use super::eigen::{eigenvalues, EigenQuadruple};
use crate::scalar::Real;

/// Width of the band `|lambda1 - lambda2| < DEGENERATE_BAND` evaluated through
/// the confluent limits.
pub const DEGENERATE_BAND: f64 = 1e-6;

/// The six real scalars of the Green matrix at fixed `(|xi|, t, c)`.
///
/// ```text
/// E1 = (l1 e^{l2 t} - l2 e^{l1 t}) / (l1 - l2)
/// D1 = (e^{l1 t} - e^{l2 t}) / (l1 - l2)
/// F1 = (l1 e^{l1 t} - l2 e^{l2 t}) / (l1 - l2)
/// E2 = ((l3 + 1) e^{l4 t} - (l4 + 1) e^{l3 t}) / (l3 - l4)
/// D2 = (e^{l3 t} - e^{l4 t}) / (l3 - l4)
/// F2 = ((l3 + 1) e^{l3 t} - (l4 + 1) e^{l4 t}) / (l3 - l4)
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KernelWeights<T> {
    pub e1: T,
    pub d1: T,
    pub f1: T,
    pub e2: T,
    pub d2: T,
    pub f2: T,
}

impl<T: Real> KernelWeights<T> {
    pub fn identity() -> Self {
        Self { e1: T::one(), d1: T::zero(), f1: T::one(), e2: T::one(), d2: T::zero(), f2: T::one() }
    }

    pub fn as_array(&self) -> [T; 6] {
        [self.e1, self.d1, self.f1, self.e2, self.d2, self.f2]
    }
}

/// Weights together with the imaginary residue discarded from the
/// complex-conjugate branch.
#[derive(Debug, Clone, Copy)]
pub struct WeightEvaluation<T> {
    pub weights: KernelWeights<T>,
    pub imag_residue: T,
    pub confluent: bool,
}

pub fn kernel_weights<T: Real>(xi_mag: T, t: T, c: T) -> KernelWeights<T> {
    kernel_weights_detailed(&eigenvalues(xi_mag, c), t).weights
}

/// Evaluates the weights for a precomputed eigen quadruple.
pub fn kernel_weights_detailed<T: Real>(eig: &EigenQuadruple<T>, t: T) -> WeightEvaluation<T> {
    if t == T::zero() {
        return WeightEvaluation { weights: KernelWeights::identity(), imag_residue: T::zero(), confluent: false };
    }
    let (l1, l2) = (eig.lambda1, eig.lambda2);
    let gap = (l1 - l2).norm();
    let (e1, d1, f1, residue, confluent) = if gap < T::lit(DEGENERATE_BAND) {
        // confluent limit at the double root lambda = -1/2
        let lam = -T::lit(0.5);
        let ex = (lam * t).exp();
        let lt = lam * t;
        ((T::one() - lt) * ex, t * ex, (T::one() + lt) * ex, T::zero(), true)
    } else {
        let x1 = (l1 * t).exp();
        let x2 = (l2 * t).exp();
        let inv = (l1 - l2).inv();
        let e1 = (l1 * x2 - l2 * x1) * inv;
        let d1 = (x1 - x2) * inv;
        let f1 = (l1 * x1 - l2 * x2) * inv;
        let residue = e1.im.abs().max(d1.im.abs()).max(f1.im.abs());
        (e1.re, d1.re, f1.re, residue, false)
    };

    let (l3, l4) = (eig.lambda3, eig.lambda4);
    let x3 = (l3 * t).exp();
    let x4 = (l4 * t).exp();
    let inv = (l3 - l4).recip();
    let one = T::one();
    let e2 = ((l3 + one) * x4 - (l4 + one) * x3) * inv;
    let d2 = (x3 - x4) * inv;
    let f2 = ((l3 + one) * x3 - (l4 + one) * x4) * inv;

    WeightEvaluation { weights: KernelWeights { e1, d1, f1, e2, d2, f2 }, imag_residue: residue, confluent }
}

/// Weights for the acoustic sector in complex form, without taking real parts.
pub fn acoustic_weights_complex<T: Real>(eig: &EigenQuadruple<T>, t: T) -> [Complex<T>; 3] {
    let (l1, l2) = (eig.lambda1, eig.lambda2);
    let x1 = (l1 * t).exp();
    let x2 = (l2 * t).exp();
    let inv = (l1 - l2).inv();
    [(l1 * x2 - l2 * x1) * inv, (x1 - x2) * inv, (l1 * x1 - l2 * x2) * inv]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Hyperbolic / trigonometric closed forms with mean mu = -1/2 and
    /// half-gap delta; independent of the complex divided differences.
    fn acoustic_closed_form(xi: f64, t: f64) -> [f64; 3] {
        let mu = -0.5;
        let q = 1.0 - 4.0 * xi * xi;
        let (ch, s) = if q >= 0.0 {
            let d = 0.5 * q.sqrt();
            let z = d * t;
            let sinhc = if z.abs() < 1e-8 { 1.0 + z * z / 6.0 } else { z.sinh() / z };
            (z.cosh(), t * sinhc)
        } else {
            let w = 0.5 * (-q).sqrt();
            let z = w * t;
            let sinc = if z.abs() < 1e-8 { 1.0 - z * z / 6.0 } else { z.sin() / z };
            (z.cos(), t * sinc)
        };
        let ex = (mu * t).exp();
        [ex * (ch - mu * s), ex * s, ex * (ch + mu * s)]
    }

    #[test]
    fn identity_at_time_zero() {
        for xi in [0.0, 0.3, 0.5, 2.0] {
            let w = kernel_weights(xi, 0.0f64, 1.0);
            assert_eq!(w.as_array(), [1.0, 0.0, 1.0, 1.0, 0.0, 1.0]);
        }
    }

    #[test]
    fn zero_frequency_solenoidal_weights() {
        let w = kernel_weights(0.0f64, 1.0, 1.0);
        let e = (-2.0f64).exp();
        assert!((w.d2 - (1.0 - e) / 2.0).abs() < 1e-15);
        assert!((w.f2 - (1.0 + e) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_radius_limit() {
        let w = kernel_weights(0.5f64, 2.0, 1.0);
        assert!((w.d1 - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn continuity_across_degenerate_radius() {
        for t in [0.1, 1.0, 5.0, 10.0] {
            let mid = kernel_weights(0.5f64, t, 1.0).as_array();
            for xi in [0.5 - 1e-7, 0.5 + 1e-7] {
                let side = kernel_weights(xi, t, 1.0).as_array();
                for (a, b) in mid.iter().zip(&side) {
                    assert!((a - b).abs() <= 1e-5, "t={t} xi={xi}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn weights_are_real(xi in 0.0f64..10.0, t in 0.0f64..20.0, c in 0.1f64..5.0) {
            let ev = kernel_weights_detailed(&eigenvalues(xi, c), t);
            prop_assert!(ev.imag_residue <= 1e-13);
        }

        #[test]
        fn matches_closed_forms(xi in 0.0f64..6.0, t in 0.0f64..10.0) {
            let w = kernel_weights(xi, t, 1.0);
            let cf = acoustic_closed_form(xi, t);
            prop_assert!((w.e1 - cf[0]).abs() <= 1e-10);
            prop_assert!((w.d1 - cf[1]).abs() <= 1e-10);
            prop_assert!((w.f1 - cf[2]).abs() <= 1e-10);
        }
    }
}
