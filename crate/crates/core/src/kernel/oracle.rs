//! Independent references for the closed-form Green matrix: adaptive
//! Dormand-Prince integration of `dX/dt = -B(xi) X` and a Taylor
//! scaling-and-squaring matrix exponential.

use num_complex::Complex;

use super::green::{identity_matrix, leray_symbol, matmul, zero_matrix, GreenMatrix, DIM};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Fourier symbol `B(xi)` of the linear operator, `dU/dt = -B U`.
///
/// Rows: `phi` gets `i xi^t u`; `u` gets `i xi phi + u - v`;
/// `v` gets `-c P u + (c + |xi|^2) v`.
pub fn mode_symbol<T: Real>(xi: [T; 3], c: T) -> GreenMatrix<T> {
    let re = |x: T| Complex::new(x, T::zero());
    let p = leray_symbol(xi);
    let m2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    let mut b = zero_matrix();
    for a in 0..3 {
        b[0][1 + a] = Complex::new(T::zero(), xi[a]);
        b[1 + a][0] = Complex::new(T::zero(), xi[a]);
        b[1 + a][1 + a] = re(T::one());
        b[1 + a][4 + a] = re(-T::one());
        for k in 0..3 {
            b[4 + a][1 + k] = re(-c * p[a][k]);
        }
        b[4 + a][4 + a] = re(c + m2);
    }
    b
}

fn scaled_sum<T: Real>(x: &GreenMatrix<T>, terms: &[(T, &GreenMatrix<T>)]) -> GreenMatrix<T> {
    let mut out = *x;
    for &(coef, k) in terms {
        if coef == T::zero() {
            continue;
        }
        for i in 0..DIM {
            for j in 0..DIM {
                out[i][j] = out[i][j] + k[i][j] * coef;
            }
        }
    }
    out
}

/// Step-size and tolerance controls for [`mode_ode_oracle_with`].
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub tolerance: f64,
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { tolerance: 1e-12, min_step: 1e-14, max_steps: 2_000_000 }
    }
}

pub fn mode_ode_oracle<T: Real>(xi: [T; 3], t: T, c: T) -> Result<GreenMatrix<T>> {
    mode_ode_oracle_with(xi, t, c, OdeOptions::default())
}

/// Integrates `dX/dt = -B(xi) X`, `X(0) = I` with Dormand-Prince 5(4).
pub fn mode_ode_oracle_with<T: Real>(xi: [T; 3], t: T, c: T, opts: OdeOptions) -> Result<GreenMatrix<T>> {
    if !(t >= T::zero()) {
        return Err(Error::Domain(format!("oracle time must be nonnegative, got {t}")));
    }
    let mut neg_b = mode_symbol(xi, c);
    for row in neg_b.iter_mut() {
        for z in row.iter_mut() {
            *z = -*z;
        }
    }
    let f = |x: &GreenMatrix<T>| matmul(&neg_b, x);

    // Dormand-Prince tableau
    let l = T::lit;
    let a21 = l(1.0 / 5.0);
    let (a31, a32) = (l(3.0 / 40.0), l(9.0 / 40.0));
    let (a41, a42, a43) = (l(44.0 / 45.0), l(-56.0 / 15.0), l(32.0 / 9.0));
    let (a51, a52, a53, a54) = (l(19372.0 / 6561.0), l(-25360.0 / 2187.0), l(64448.0 / 6561.0), l(-212.0 / 729.0));
    let (a61, a62, a63, a64, a65) =
        (l(9017.0 / 3168.0), l(-355.0 / 33.0), l(46732.0 / 5247.0), l(49.0 / 176.0), l(-5103.0 / 18656.0));
    let (b1, b3, b4, b5, b6) = (l(35.0 / 384.0), l(500.0 / 1113.0), l(125.0 / 192.0), l(-2187.0 / 6784.0), l(11.0 / 84.0));
    let (e1, e3, e4, e5, e6, e7) = (
        l(71.0 / 57600.0),
        l(-71.0 / 16695.0),
        l(71.0 / 1920.0),
        l(-17253.0 / 339200.0),
        l(22.0 / 525.0),
        l(-1.0 / 40.0),
    );

    let tol = l(opts.tolerance);
    let mut x = identity_matrix::<T>();
    let mut time = T::zero();
    let norm_b = neg_b.iter().flatten().map(|z| z.norm()).fold(T::zero(), T::max);
    let mut h = if norm_b > T::zero() { (l(0.1) / norm_b).min(t) } else { t };
    let mut k1 = f(&x);
    let mut steps = 0usize;
    while time < t {
        if steps >= opts.max_steps {
            return Err(Error::Oracle(format!("step budget exhausted at t = {time}")));
        }
        if h < l(opts.min_step) {
            return Err(Error::Oracle(format!("step size underflow at t = {time}")));
        }
        let last = time + h >= t;
        if last {
            h = t - time;
        }
        let k2 = f(&scaled_sum(&x, &[(h * a21, &k1)]));
        let k3 = f(&scaled_sum(&x, &[(h * a31, &k1), (h * a32, &k2)]));
        let k4 = f(&scaled_sum(&x, &[(h * a41, &k1), (h * a42, &k2), (h * a43, &k3)]));
        let k5 = f(&scaled_sum(&x, &[(h * a51, &k1), (h * a52, &k2), (h * a53, &k3), (h * a54, &k4)]));
        let k6 = f(&scaled_sum(&x, &[(h * a61, &k1), (h * a62, &k2), (h * a63, &k3), (h * a64, &k4), (h * a65, &k5)]));
        let next = scaled_sum(&x, &[(h * b1, &k1), (h * b3, &k3), (h * b4, &k4), (h * b5, &k5), (h * b6, &k6)]);
        let k7 = f(&next);
        let err_m = scaled_sum(
            &zero_matrix(),
            &[(h * e1, &k1), (h * e3, &k3), (h * e4, &k4), (h * e5, &k5), (h * e6, &k6), (h * e7, &k7)],
        );
        let mut err = T::zero();
        for i in 0..DIM {
            for j in 0..DIM {
                let scale = T::one().max(next[i][j].norm());
                err = err.max(err_m[i][j].norm() / scale);
            }
        }
        steps += 1;
        if err <= tol {
            time = if last { t } else { time + h };
            x = next;
            k1 = k7;
        }
        let factor = if err == T::zero() { l(5.0) } else { (l(0.9) * (tol / err).powf(l(0.2))).max(l(0.2)).min(l(5.0)) };
        h = h * factor;
    }
    Ok(x)
}

/// `exp(-t B(xi))` by Taylor series with scaling and squaring.
pub fn matrix_exponential_oracle<T: Real>(xi: [T; 3], t: T, c: T) -> GreenMatrix<T> {
    let mut a = mode_symbol(xi, c);
    for row in a.iter_mut() {
        for z in row.iter_mut() {
            *z = -*z * t;
        }
    }
    expm(&a)
}

/// Matrix exponential via Taylor polynomial on `A / 2^s` followed by `s` squarings.
pub fn expm<T: Real>(a: &GreenMatrix<T>) -> GreenMatrix<T> {
    let norm = a.iter().map(|row| row.iter().map(|z| z.norm()).fold(T::zero(), |x, y| x + y)).fold(T::zero(), T::max);
    let mut squarings = 0u32;
    let mut scale = T::one();
    while norm * scale > T::lit(0.25) {
        scale = scale * T::lit(0.5);
        squarings += 1;
    }
    let mut scaled = *a;
    for row in scaled.iter_mut() {
        for z in row.iter_mut() {
            *z = *z * scale;
        }
    }
    let mut result = identity_matrix::<T>();
    let mut term = identity_matrix::<T>();
    for k in 1..=24 {
        term = matmul(&term, &scaled);
        let inv_k = T::one() / T::from_count(k);
        for row in term.iter_mut() {
            for z in row.iter_mut() {
                *z = *z * inv_k;
            }
        }
        result = scaled_sum(&result, &[(T::one(), &term)]);
    }
    for _ in 0..squarings {
        result = matmul(&result, &result);
    }
    result
}
