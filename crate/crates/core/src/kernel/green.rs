//! Mode-wise Green matrix of the linearized system.
//!
//! Unknowns are ordered `(phi, u1, u2, u3, v1, v2, v3)`. With
//! `P = I - xi xi^t / |xi|^2` (identity at `xi = 0`) and `Q = I - P`:
//!
//! ```text
//! G11 = E1              G12 = -i xi^t D1        G13 = 0
//! G21 = -i xi D1        G22 = E2 P + F1 Q       G23 = D2 I
//! G31 = 0               G32 = c D2 P            G33 = F2 I
//! ```
//!
//! `G23` and `G33` act as written only on divergence-free `v`.

use num_complex::Complex;

use super::weights::{kernel_weights, KernelWeights};
use crate::scalar::Real;

pub const DIM: usize = 7;

/// Dense 7x7 complex matrix.
pub type GreenMatrix<T> = [[Complex<T>; DIM]; DIM];

pub fn zero_matrix<T: Real>() -> GreenMatrix<T> {
    [[Complex::new(T::zero(), T::zero()); DIM]; DIM]
}

pub fn identity_matrix<T: Real>() -> GreenMatrix<T> {
    let mut m = zero_matrix();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex::new(T::one(), T::zero());
    }
    m
}

pub fn matmul<T: Real>(a: &GreenMatrix<T>, b: &GreenMatrix<T>) -> GreenMatrix<T> {
    let mut out = zero_matrix();
    for i in 0..DIM {
        for k in 0..DIM {
            let aik = a[i][k];
            if aik == Complex::new(T::zero(), T::zero()) {
                continue;
            }
            for j in 0..DIM {
                out[i][j] = out[i][j] + aik * b[k][j];
            }
        }
    }
    out
}

/// Largest entrywise modulus of `a - b`.
pub fn max_entry_diff<T: Real>(a: &GreenMatrix<T>, b: &GreenMatrix<T>) -> T {
    let mut m = T::zero();
    for i in 0..DIM {
        for j in 0..DIM {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

/// Longitudinal projector `xi xi^t / |xi|^2`, zero at `xi = 0`.
pub fn longitudinal<T: Real>(xi: [T; 3]) -> [[T; 3]; 3] {
    let m2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    let mut q = [[T::zero(); 3]; 3];
    if m2 > T::zero() {
        for a in 0..3 {
            for b in 0..3 {
                q[a][b] = xi[a] * xi[b] / m2;
            }
        }
    }
    q
}

/// Leray symbol `I - xi xi^t / |xi|^2`, identity at `xi = 0`.
pub fn leray_symbol<T: Real>(xi: [T; 3]) -> [[T; 3]; 3] {
    let q = longitudinal(xi);
    let mut p = [[T::zero(); 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            p[a][b] = if a == b { T::one() } else { T::zero() } - q[a][b];
        }
    }
    p
}

fn magnitude<T: Real>(xi: [T; 3]) -> T {
    (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt()
}

/// Assembles the Green matrix from precomputed weights.
pub fn green_from_weights<T: Real>(xi: [T; 3], c: T, w: &KernelWeights<T>) -> GreenMatrix<T> {
    let re = |x: T| Complex::new(x, T::zero());
    let q = longitudinal(xi);
    let p = leray_symbol(xi);
    let mut g = zero_matrix();
    g[0][0] = re(w.e1);
    for a in 0..3 {
        g[0][1 + a] = Complex::new(T::zero(), -xi[a] * w.d1);
        g[1 + a][0] = Complex::new(T::zero(), -xi[a] * w.d1);
        for b in 0..3 {
            g[1 + a][1 + b] = re(w.e2 * p[a][b] + w.f1 * q[a][b]);
            g[4 + a][1 + b] = re(c * w.d2 * p[a][b]);
        }
        g[1 + a][4 + a] = re(w.d2);
        g[4 + a][4 + a] = re(w.f2);
    }
    g
}

/// Fourier transform of the Green function at wavevector `xi` and time `t`.
pub fn green_hat<T: Real>(xi: [T; 3], t: T, c: T) -> GreenMatrix<T> {
    let w = kernel_weights(magnitude(xi), t, c);
    green_from_weights(xi, c, &w)
}

/// `diag(1, I, P)`: restriction to states with divergence-free `v`.
pub fn admissible_projector<T: Real>(xi: [T; 3]) -> GreenMatrix<T> {
    let p = leray_symbol(xi);
    let mut m = identity_matrix();
    for a in 0..3 {
        for b in 0..3 {
            m[4 + a][4 + b] = Complex::new(p[a][b], T::zero());
        }
    }
    m
}

/// Applies the Green action to one mode vector `(phi, u, v)` without forming the matrix.
#[inline]
pub fn apply_mode<T: Real>(xi: [T; 3], c: T, w: &KernelWeights<T>, z: &[Complex<T>; DIM]) -> [Complex<T>; DIM] {
    let m2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    let u = [z[1], z[2], z[3]];
    let v = [z[4], z[5], z[6]];
    let xi_dot_u = u[0] * xi[0] + u[1] * xi[1] + u[2] * xi[2];
    let i = Complex::new(T::zero(), T::one());
    let mut out = [Complex::new(T::zero(), T::zero()); DIM];
    out[0] = z[0] * w.e1 - i * xi_dot_u * w.d1;
    let proj = if m2 > T::zero() { xi_dot_u / m2 } else { Complex::new(T::zero(), T::zero()) };
    for a in 0..3 {
        let ul = proj * xi[a];
        let us = u[a] - ul;
        out[1 + a] = -i * z[0] * (xi[a] * w.d1) + ul * w.f1 + us * w.e2 + v[a] * w.d2;
        out[4 + a] = us * (c * w.d2) + v[a] * w.f2;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_at_time_zero() {
        for xi in [[0.0, 0.0, 0.0], [0.3, -0.2, 1.1], [3.0, 4.0, 0.0]] {
            let g = green_hat(xi, 0.0f64, 1.3);
            assert_eq!(max_entry_diff(&g, &identity_matrix()), 0.0);
        }
    }

    #[test]
    fn phi_and_v_never_couple() {
        let g = green_hat([0.4, -1.2, 0.7], 2.5f64, 0.8);
        for a in 0..3 {
            assert_eq!(g[0][4 + a], Complex::new(0.0, 0.0));
            assert_eq!(g[4 + a][0], Complex::new(0.0, 0.0));
        }
    }

    #[test]
    fn apply_mode_matches_dense_matrix_on_admissible_vectors() {
        let xi = [0.7f64, -0.3, 1.4];
        let c = 1.7;
        let t = 0.9;
        let w = kernel_weights(magnitude(xi), t, c);
        let g = green_from_weights(xi, c, &w);
        let pi = admissible_projector(xi);
        let raw: [Complex<f64>; DIM] = std::array::from_fn(|k| Complex::new(0.3 * k as f64 - 1.0, 0.1 * (k * k) as f64));
        let mut z = [Complex::new(0.0, 0.0); DIM];
        for r in 0..DIM {
            for k in 0..DIM {
                z[r] += pi[r][k] * raw[k];
            }
        }
        let fast = apply_mode(xi, c, &w, &z);
        for r in 0..DIM {
            let dense: Complex<f64> = (0..DIM).map(|k| g[r][k] * z[k]).sum();
            assert!((dense - fast[r]).norm() < 1e-14);
        }
    }
}
