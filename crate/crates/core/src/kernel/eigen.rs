use num_complex::Complex;

use crate::scalar::Real;

/// Roots of the two characteristic quadratics at one `|xi|`.
///
/// `lambda1, lambda2` solve `l^2 + l + |xi|^2 = 0` (density / curl-free
/// velocity sector), `lambda3, lambda4` solve
/// `l^2 + (c + 1 + |xi|^2) l + |xi|^2 = 0` (solenoidal sector).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenQuadruple<T> {
    pub lambda1: Complex<T>,
    pub lambda2: Complex<T>,
    pub lambda3: T,
    pub lambda4: T,
    pub xi_mag: T,
    pub c: T,
}

/// Computes the four eigenvalues, avoiding cancellation in the small roots.
pub fn eigenvalues<T: Real>(xi_mag: T, c: T) -> EigenQuadruple<T> {
    let half = T::lit(0.5);
    let r2 = xi_mag * xi_mag;
    let disc = T::one() - T::lit(4.0) * r2;
    let (lambda1, lambda2) = if disc >= T::zero() {
        // lambda2 carries no cancellation; lambda1 from the product of roots
        let l2 = -(T::one() + disc.sqrt()) * half;
        (Complex::new(r2 / l2, T::zero()), Complex::new(l2, T::zero()))
    } else {
        let im = (-disc).sqrt() * half;
        (Complex::new(-half, im), Complex::new(-half, -im))
    };

    let b = c + T::one() + r2;
    // b^2 - 4 r^2 factored to keep relative accuracy
    let d = ((xi_mag - T::one()).powi(2) + c) * ((xi_mag + T::one()).powi(2) + c);
    let lambda4 = -(b + d.sqrt()) * half;
    let lambda3 = r2 / lambda4;

    EigenQuadruple { lambda1, lambda2, lambda3, lambda4, xi_mag, c }
}

impl<T: Real> EigenQuadruple<T> {
    /// `-max Re(lambda_i)`, the local spectral gap.
    pub fn gap(&self) -> T {
        let m = self.lambda1.re.max(self.lambda2.re).max(self.lambda3).max(self.lambda4);
        -m
    }
}
