//! Whole-space L2 norms of the linear evolution for radially structured data.
//!
//! Initial spectra are taken of the form
//!
//! ```text
//! phi0(xi) = a(|xi|)
//! u0(xi)   = -i (xi/|xi|) b(|xi|) + P(xi) w_u s_u(|xi|)
//! v0(xi)   = P(xi) w_v s_v(|xi|)
//! ```
//!
//! with real profiles `a, b, s_u, s_v`, fixed polarizations `w_u, w_v` and
//! `P(xi) = I - xi xi^t / |xi|^2`; such data are Fourier transforms of real
//! fields. Along the flow every component keeps this form with time dependent
//! radial coefficients, so each L2 norm reduces to a 1-D integral in `|xi|`
//! with exactly computed angular factors. Plancherel is taken with
//! `f^(xi) = int f(x) exp(-i x.xi) dx`, i.e. `||f||^2 = (2 pi)^-3 ||f^||^2`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::quadrature::{integrate, QuadratureOptions};
use super::weights::kernel_weights;
use crate::diagnostics::series::{channel, ChannelKey, DecaySeries};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::ops::smooth_step;

/// Largest derivative order accepted by [`radial_norms`].
pub const MAX_DERIVATIVE: u32 = 6;

/// Which slot of the data a profile fills.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Component {
    Density,
    CurlFreeVelocity,
    SolenoidalVelocity,
}

/// Radial amplitude law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum ProfileShape {
    Zero,
    /// `amplitude |xi|^power exp(-|xi|^2 / (2 sigma^2))`.
    Gaussian { amplitude: f64, sigma: f64, power: f64 },
    /// `amplitude` on `[0, radius/2]`, C-infinity ramp to 0 on `[radius/2, radius]`.
    SmoothIndicator { amplitude: f64, radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub component: Component,
    #[serde(flatten)]
    pub shape: ProfileShape,
}

impl RadialProfile {
    pub fn zero(component: Component) -> Self {
        Self { component, shape: ProfileShape::Zero }
    }

    pub fn gaussian(component: Component, amplitude: f64, sigma: f64, power: f64) -> Self {
        Self { component, shape: ProfileShape::Gaussian { amplitude, sigma, power } }
    }

    pub fn smooth_indicator(component: Component, amplitude: f64, radius: f64) -> Self {
        Self { component, shape: ProfileShape::SmoothIndicator { amplitude, radius } }
    }

    pub fn is_zero(&self) -> bool {
        match self.shape {
            ProfileShape::Zero => true,
            ProfileShape::Gaussian { amplitude, .. } | ProfileShape::SmoothIndicator { amplitude, .. } => amplitude == 0.0,
        }
    }

    /// Radius beyond which the profile is treated as zero.
    pub fn support_radius(&self) -> f64 {
        match self.shape {
            ProfileShape::Zero => 0.0,
            // e^{-50} in amplitude, e^{-100} in the squared integrand
            ProfileShape::Gaussian { sigma, power, .. } => sigma * (100.0 + 2.0 * power.max(0.0)).sqrt() + sigma,
            ProfileShape::SmoothIndicator { radius, .. } => radius,
        }
    }

    /// Radii where the profile is not smooth or changes character.
    fn breakpoints(&self) -> Vec<f64> {
        match self.shape {
            ProfileShape::SmoothIndicator { radius, .. } => vec![0.5 * radius, radius],
            ProfileShape::Gaussian { sigma, .. } => vec![sigma, 3.0 * sigma],
            ProfileShape::Zero => vec![],
        }
    }

    pub fn value<T: Real>(&self, xi_mag: T) -> T {
        match self.shape {
            ProfileShape::Zero => T::zero(),
            ProfileShape::Gaussian { amplitude, sigma, power } => {
                let s = T::lit(sigma);
                let g = (-(xi_mag * xi_mag) / (T::lit(2.0) * s * s)).exp();
                let p = if power == 0.0 { T::one() } else { xi_mag.powf(T::lit(power)) };
                T::lit(amplitude) * p * g
            }
            ProfileShape::SmoothIndicator { amplitude, radius } => {
                let r = T::lit(radius);
                let half = r * T::lit(0.5);
                let w = if xi_mag <= half {
                    T::one()
                } else if xi_mag >= r {
                    T::zero()
                } else {
                    smooth_step((r - xi_mag) / (r - half))
                };
                T::lit(amplitude) * w
            }
        }
    }

    /// Rejects profiles whose weighted square is not integrable.
    pub fn validate(&self, j: u32) -> Result<()> {
        let bad = |msg: String| Err(Error::Domain(msg));
        match self.shape {
            ProfileShape::Zero => Ok(()),
            ProfileShape::Gaussian { amplitude, sigma, power } => {
                if !amplitude.is_finite() || !(sigma > 0.0) || !sigma.is_finite() || !power.is_finite() {
                    return bad(format!("gaussian profile parameters invalid: {self:?}"));
                }
                // |xi|^{2j + 2 power + 2} must be integrable at the origin
                if 2.0 * f64::from(j) + 2.0 * power + 2.0 <= -1.0 {
                    return bad(format!("profile power {power} is not square integrable for j = {j}"));
                }
                Ok(())
            }
            ProfileShape::SmoothIndicator { amplitude, radius } => {
                if !amplitude.is_finite() || !(radius > 0.0) || !radius.is_finite() {
                    return bad(format!("indicator profile parameters invalid: {self:?}"));
                }
                Ok(())
            }
        }
    }
}

/// Complete set of radial initial data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSet {
    pub phi: RadialProfile,
    pub u_curl_free: RadialProfile,
    pub u_solenoidal: RadialProfile,
    pub u_polarization: [f64; 3],
    pub v: RadialProfile,
    pub v_polarization: [f64; 3],
}

impl ProfileSet {
    /// Gaussian data in every slot with a common width.
    pub fn gaussian(amplitude: f64, sigma: f64) -> Self {
        Self {
            phi: RadialProfile::gaussian(Component::Density, amplitude, sigma, 0.0),
            u_curl_free: RadialProfile::gaussian(Component::CurlFreeVelocity, amplitude, sigma, 0.0),
            u_solenoidal: RadialProfile::gaussian(Component::SolenoidalVelocity, amplitude, sigma, 0.0),
            u_polarization: [1.0, 0.0, 0.0],
            v: RadialProfile::gaussian(Component::SolenoidalVelocity, amplitude, sigma, 0.0),
            v_polarization: [0.0, 0.0, 1.0],
        }
    }

    /// Only a density perturbation.
    pub fn density_only(profile: RadialProfile) -> Self {
        Self {
            phi: profile,
            u_curl_free: RadialProfile::zero(Component::CurlFreeVelocity),
            u_solenoidal: RadialProfile::zero(Component::SolenoidalVelocity),
            u_polarization: [1.0, 0.0, 0.0],
            v: RadialProfile::zero(Component::SolenoidalVelocity),
            v_polarization: [0.0, 0.0, 1.0],
        }
    }

    fn profiles(&self) -> [&RadialProfile; 4] {
        [&self.phi, &self.u_curl_free, &self.u_solenoidal, &self.v]
    }

    pub fn validate(&self, j: u32) -> Result<()> {
        let expect = [
            (&self.phi, Component::Density),
            (&self.u_curl_free, Component::CurlFreeVelocity),
            (&self.u_solenoidal, Component::SolenoidalVelocity),
            (&self.v, Component::SolenoidalVelocity),
        ];
        for (p, comp) in expect {
            if p.component != comp {
                return Err(Error::Domain(format!("profile tagged {:?} placed in a {comp:?} slot", p.component)));
            }
            p.validate(j)?;
        }
        for w in [self.u_polarization, self.v_polarization] {
            let n = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
            if !((n - 1.0).abs() < 1e-12) {
                return Err(Error::Domain(format!("polarization {w:?} is not a unit vector")));
            }
        }
        Ok(())
    }

    pub fn support_radius(&self) -> f64 {
        self.profiles().iter().map(|p| p.support_radius()).fold(0.0, f64::max)
    }
}

/// Controls for [`radial_norms`].
#[derive(Debug, Clone, Copy)]
pub struct RadialOptions<T> {
    pub quadrature: QuadratureOptions<T>,
    /// Upper integration limit; defaults to the largest profile support radius.
    pub xi_max: Option<T>,
    /// Half-angle of the cone around `w_v` excluded from the `v_outside_cone` channel.
    pub cone_half_angle: Option<T>,
}

impl<T: Real> Default for RadialOptions<T> {
    fn default() -> Self {
        Self { quadrature: QuadratureOptions::default(), xi_max: None, cone_half_angle: None }
    }
}

/// L2 norms of `nabla^j` of the evolved fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialNorms<T> {
    pub phi: T,
    pub u: T,
    pub v: T,
    /// `||nabla^j (phi, u, v)||`, Euclidean combination of the three.
    pub total: T,
    pub u_minus_v: T,
    /// `v` restricted to directions outside the polarization cone (equals `v` without a cone).
    pub v_outside_cone: T,
}

/// Angular integrals over a direction set `S` (full sphere, or the sphere minus
/// a double cone of half-angle `alpha` around the unit axis `w`):
/// `omega = |S|` and `M = int_S xi^ xi^t`, stored as `m_axis w w^t + m_perp (I - w w^t)`.
#[derive(Debug, Clone, Copy)]
struct AngularSet<T> {
    omega: T,
    m_axis: T,
    m_perp: T,
    axis: [T; 3],
}

impl<T: Real> AngularSet<T> {
    fn sphere() -> Self {
        let four_pi = T::lit(4.0) * T::PI();
        let third = four_pi / T::lit(3.0);
        Self { omega: four_pi, m_axis: third, m_perp: third, axis: [T::zero(), T::zero(), T::one()] }
    }

    fn outside_cone(axis: [T; 3], half_angle: T) -> Self {
        let mu = half_angle.cos();
        let pi = T::PI();
        let mu3 = mu * mu * mu;
        Self {
            omega: T::lit(4.0) * pi * mu,
            m_axis: T::lit(4.0) * pi * mu3 / T::lit(3.0),
            m_perp: T::lit(2.0) * pi * (mu - mu3 / T::lit(3.0)),
            axis,
        }
    }

    /// `int_S (P x) . (P y) dOmega` for fixed vectors `x, y`.
    fn transverse_pair(&self, x: [T; 3], y: [T; 3]) -> T {
        let dot = |a: [T; 3], b: [T; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        let (xa, ya) = (dot(x, self.axis), dot(y, self.axis));
        let xmy = self.m_axis * xa * ya + self.m_perp * (dot(x, y) - xa * ya);
        self.omega * dot(x, y) - xmy
    }
}

/// Radial coefficients of the evolved data at one `|xi|`.
struct Evolved<T> {
    phi: T,
    w: T,
    /// solenoidal u on (P w_u, P w_v)
    us: (T, T),
    /// v on (P w_u, P w_v)
    v: (T, T),
}

fn evolve<T: Real>(set: &ProfileSet, xi: T, t: T, c: T) -> Evolved<T> {
    let k = kernel_weights(xi, t, c);
    let a = set.phi.value(xi);
    let b = set.u_curl_free.value(xi);
    let su = set.u_solenoidal.value(xi);
    let sv = set.v.value(xi);
    Evolved {
        phi: k.e1 * a - k.d1 * xi * b,
        w: k.d1 * xi * a + k.f1 * b,
        us: (k.e2 * su, k.d2 * sv),
        v: (c * k.d2 * su, k.f2 * sv),
    }
}

/// Whole-space norms of `nabla^j (phi, u, v)(t)` for radial data.
pub fn radial_norms<T: Real>(set: &ProfileSet, t: T, j: u32, c: T, opts: &RadialOptions<T>) -> Result<RadialNorms<T>> {
    if j > MAX_DERIVATIVE {
        return Err(Error::Domain(format!("derivative order {j} exceeds {MAX_DERIVATIVE}")));
    }
    if !(t >= T::zero()) || !(c > T::zero()) {
        return Err(Error::Domain(format!("need t >= 0 and c > 0, got t = {t}, c = {c}")));
    }
    set.validate(j)?;
    let xi_max = opts.xi_max.unwrap_or_else(|| T::lit(set.support_radius()));
    let wu: [T; 3] = set.u_polarization.map(T::lit);
    let wv: [T; 3] = set.v_polarization.map(T::lit);
    let sphere = AngularSet::sphere();
    let cone = match opts.cone_half_angle {
        Some(alpha) => AngularSet::outside_cone(wv, alpha),
        None => sphere,
    };
    let sol = |s: &AngularSet<T>, coef: (T, T)| {
        coef.0 * coef.0 * s.transverse_pair(wu, wu)
            + T::lit(2.0) * coef.0 * coef.1 * s.transverse_pair(wu, wv)
            + coef.1 * coef.1 * s.transverse_pair(wv, wv)
    };
    let four_pi = T::lit(4.0) * T::PI();

    let mut breaks: Vec<T> = vec![T::lit(0.5)];
    let diffusive = (T::one() + t).sqrt().recip();
    for m in [0.25, 1.0, 4.0, 16.0] {
        breaks.push(diffusive * T::lit(m));
    }
    for p in set.profiles() {
        breaks.extend(p.breakpoints().into_iter().map(T::lit));
    }

    let radial_weight = |xi: T| xi.powi(2 * j as i32 + 2);
    let channel = |which: u8| -> Result<T> {
        let f = |xi: T| {
            let e = evolve(set, xi, t, c);
            let ang = match which {
                0 => four_pi * e.phi * e.phi,
                1 => four_pi * e.w * e.w + sol(&sphere, e.us),
                2 => sol(&sphere, e.v),
                3 => four_pi * e.w * e.w + sol(&sphere, (e.us.0 - e.v.0, e.us.1 - e.v.1)),
                _ => sol(&cone, e.v),
            };
            ang * radial_weight(xi)
        };
        let r = integrate(f, T::zero(), xi_max, &breaks, &opts.quadrature)?;
        Ok(r.value.max(T::zero()))
    };
    let norm = T::lit(8.0) * T::PI().powi(3);
    let phi2 = channel(0)? / norm;
    let u2 = channel(1)? / norm;
    let v2 = channel(2)? / norm;
    let uv2 = channel(3)? / norm;
    let vc2 = if opts.cone_half_angle.is_some() { channel(4)? / norm } else { v2 };
    Ok(RadialNorms {
        phi: phi2.sqrt(),
        u: u2.sqrt(),
        v: v2.sqrt(),
        total: (phi2 + u2 + v2).sqrt(),
        u_minus_v: uv2.sqrt(),
        v_outside_cone: vc2.sqrt(),
    })
}

/// `||nabla^j (phi, u, v)(t)||_{L2}` for radial data.
pub fn radial_norm<T: Real>(set: &ProfileSet, t: T, j: u32, c: T) -> Result<T> {
    radial_norms(set, t, j, c, &RadialOptions::default()).map(|n| n.total)
}

/// Samples [`radial_norms`] at `times` for every order in `orders`.
///
/// Channels: `total`, `phi`, `u`, `v`, `u_minus_v` and `v_outside_cone`, each per `j`.
pub fn radial_series(
    set: &ProfileSet,
    times: &[f64],
    orders: &[u32],
    c: f64,
    opts: &RadialOptions<f64>,
) -> Result<DecaySeries> {
    let rows: Vec<Vec<(ChannelKey, f64)>> = times
        .par_iter()
        .map(|&t| {
            let mut row = Vec::with_capacity(6 * orders.len());
            for &j in orders {
                let n = radial_norms(set, t, j, c, opts)?;
                row.push((ChannelKey::new(channel::TOTAL, j), n.total));
                row.push((ChannelKey::new(channel::PHI, j), n.phi));
                row.push((ChannelKey::new(channel::U, j), n.u));
                row.push((ChannelKey::new(channel::V, j), n.v));
                row.push((ChannelKey::new(channel::U_MINUS_V, j), n.u_minus_v));
                row.push((ChannelKey::new(channel::V_OUTSIDE_CONE, j), n.v_outside_cone));
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let mut series = DecaySeries::new();
    for (t, row) in times.iter().zip(rows) {
        series.push(*t, &row)?;
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_zero_reproduces_initial_norm() {
        // ||phi0||^2 = (2 pi)^-3 4 pi A^2 int r^2 e^{-r^2/s^2} dr = A^2 s^3 / (8 pi^{3/2})
        let (amp, sigma) = (2.0, 0.7);
        let set = ProfileSet::density_only(RadialProfile::gaussian(Component::Density, amp, sigma, 0.0));
        let n = radial_norms(&set, 0.0f64, 0, 1.0, &RadialOptions::default()).unwrap();
        let want = (amp * amp * sigma.powi(3) / (8.0 * std::f64::consts::PI.powf(1.5))).sqrt();
        assert!((n.phi - want).abs() <= 1e-10 * want);
        assert_eq!(n.u, 0.0);
        assert_eq!(n.v, 0.0);
    }

    #[test]
    fn cone_factor_matches_direct_angular_quadrature() {
        let set = AngularSet::<f64>::outside_cone([0.0, 0.0, 1.0], 0.4);
        // brute force over the sphere
        let (nt, np) = (2000, 64);
        let w = [0.0, 0.0, 1.0];
        let mut acc = 0.0;
        for it in 0..nt {
            let th = (it as f64 + 0.5) * std::f64::consts::PI / nt as f64;
            if th.cos().abs() > 0.4f64.cos() {
                continue;
            }
            for ip in 0..np {
                let ph = (ip as f64 + 0.5) * 2.0 * std::f64::consts::PI / np as f64;
                let n = [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()];
                let d = n[2];
                let pw: Vec<f64> = (0..3).map(|a| w[a] - d * n[a]).collect();
                let dw = th.sin() * std::f64::consts::PI / nt as f64 * 2.0 * std::f64::consts::PI / np as f64;
                acc += pw.iter().map(|x| x * x).sum::<f64>() * dw;
            }
        }
        assert!((set.transverse_pair(w, w) - acc).abs() < 2e-3 * acc);
    }

    #[test]
    fn rejects_non_integrable_profile() {
        let set = ProfileSet::density_only(RadialProfile::gaussian(Component::Density, 1.0, 1.0, -2.0));
        assert!(matches!(radial_norm(&set, 1.0f64, 0, 1.0), Err(Error::Domain(_))));
        let set = ProfileSet::gaussian(1.0, 1.0);
        assert!(radial_norm(&set, 1.0f64, 7, 1.0).is_err());
    }
}
