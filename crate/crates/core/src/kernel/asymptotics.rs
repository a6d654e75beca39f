//! Low-frequency expansions of the eigenvalues and the high-frequency spectral gap.

use serde::Serialize;

use super::eigen::eigenvalues;

/// Outcome of [`asymptotics_report`].
///
/// Each `c_lambda*` is the smallest `C` with `|lambda_i - approx_i| <= C |xi|^4`
/// over the sampled low band.
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticsReport {
    pub c: f64,
    pub low_band_max: f64,
    pub low_band_samples: usize,
    pub c_lambda1: f64,
    pub c_lambda2: f64,
    pub c_lambda3: f64,
    pub c_lambda4: f64,
    pub r0: f64,
    pub xi_max: f64,
    /// `min over |xi| in [r0, xi_max]` of `-max_i Re(lambda_i)`.
    pub spectral_gap: f64,
    pub gap_attained_at: f64,
    pub gap_positive: bool,
}

/// Upper end of the band on which the quartic remainders are fitted.
pub const LOW_BAND: f64 = 0.05;

/// Fits the quartic remainder constants on `(0, LOW_BAND]` and the gap on `[r0, xi_max]`.
pub fn asymptotics_report(c: f64, r0: f64, xi_max: f64, samples: usize) -> AsymptoticsReport {
    let samples = samples.max(2);
    let mut cl = [0.0f64; 4];
    for i in 1..=samples {
        let xi = LOW_BAND * i as f64 / samples as f64;
        let r2 = xi * xi;
        let r4 = r2 * r2;
        let e = eigenvalues(xi, c);
        let approx = [
            -r2,
            -1.0 + r2,
            -r2 / (c + 1.0),
            -(c + 1.0) - c * r2 / (c + 1.0),
        ];
        let got = [e.lambda1.re, e.lambda2.re, e.lambda3, e.lambda4];
        for k in 0..4 {
            cl[k] = cl[k].max((got[k] - approx[k]).abs() / r4);
        }
    }

    let grid = samples.max(2000);
    let mut gap = f64::INFINITY;
    let mut at = r0;
    for i in 0..=grid {
        let xi = r0 + (xi_max - r0) * i as f64 / grid as f64;
        let g = eigenvalues(xi, c).gap();
        if g < gap {
            gap = g;
            at = xi;
        }
    }
    AsymptoticsReport {
        c,
        low_band_max: LOW_BAND,
        low_band_samples: samples,
        c_lambda1: cl[0],
        c_lambda2: cl[1],
        c_lambda3: cl[2],
        c_lambda4: cl[3],
        r0,
        xi_max,
        spectral_gap: gap,
        gap_attained_at: at,
        gap_positive: gap > 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_remainders_at_small_frequency() {
        let e = eigenvalues(0.01f64, 1.0);
        assert!((e.lambda1.re + 1e-4).abs() <= 2e-8);
        assert!((e.lambda3 + 5e-5).abs() <= 2e-8);
    }

    #[test]
    fn gap_at_default_radius() {
        let r = asymptotics_report(1.0, 0.25, 8.0, 200);
        assert!(r.gap_positive);
        assert!(r.spectral_gap >= 0.03, "{}", r.spectral_gap);
        assert!((r.gap_attained_at - 0.25).abs() < 1e-12);
    }
}
