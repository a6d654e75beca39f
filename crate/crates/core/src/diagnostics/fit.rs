//! Power-law fits of `log(norm)` against `log(1 + t)`.

use serde::Serialize;

use super::series::{ChannelKey, DecaySeries};
use crate::error::{Error, Result};

/// Fewest samples accepted by [`decay_fit`].
pub const MIN_FIT_SAMPLES: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub channel: String,
    pub j: u32,
    pub slope: f64,
    #[serde(skip)]
    pub intercept: f64,
    /// Largest absolute deviation of `log(norm)` from the fitted line.
    pub residual: f64,
    pub window: (f64, f64),
}

/// Least-squares line through `(log(1 + t), log(value))` for `t` in `window`.
pub fn fit_power_law(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<(f64, f64, f64)> {
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(t, _)| **t >= window.0 && **t <= window.1)
        .map(|(t, v)| (*t, *v))
        .collect();
    if pts.len() < MIN_FIT_SAMPLES {
        return Err(Error::Domain(format!(
            "window [{}, {}] holds {} samples, need at least {MIN_FIT_SAMPLES}",
            window.0,
            window.1,
            pts.len()
        )));
    }
    if let Some((t, v)) = pts.iter().find(|(_, v)| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::Domain(format!("non-positive norm {v} at t = {t}; cannot take logarithms")));
    }
    let xy: Vec<(f64, f64)> = pts.iter().map(|(t, v)| ((1.0 + t).ln(), v.ln())).collect();
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Domain("fit window spans a single time".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = xy.iter().map(|p| (p.1 - intercept - slope * p.0).abs()).fold(0.0, f64::max);
    Ok((slope, intercept, residual))
}

pub fn decay_fit(series: &DecaySeries, key: &ChannelKey, window: (f64, f64)) -> Result<FitResult> {
    let values = series.channel(key).ok_or_else(|| Error::Domain(format!("series has no channel {key}")))?;
    let (slope, intercept, residual) = fit_power_law(series.times(), values, window)?;
    Ok(FitResult { channel: key.name.clone(), j: key.j, slope, intercept, residual, window })
}

/// Window `[t_end / 100, t_end]`.
pub fn default_window(t_end: f64) -> (f64, f64) {
    (t_end / 100.0, t_end)
}

/// Spread of the compensated norm `(1 + t)^{3/4 + j/2} ||nabla^j .||`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundReport {
    pub channel: String,
    pub j: u32,
    pub exponent: f64,
    pub min: f64,
    pub max: f64,
    pub spread: f64,
    pub allowed_spread: f64,
    pub window: (f64, f64),
    pub passed: bool,
}

pub const DEFAULT_SPREAD: f64 = 10.0;

pub fn lower_bound_check(
    series: &DecaySeries,
    key: &ChannelKey,
    window: (f64, f64),
    allowed_spread: f64,
) -> Result<LowerBoundReport> {
    let values = series.channel(key).ok_or_else(|| Error::Domain(format!("series has no channel {key}")))?;
    let exponent = 0.75 + 0.5 * key.j as f64;
    let comp: Vec<f64> = series
        .times()
        .iter()
        .zip(values)
        .filter(|(t, _)| **t >= window.0 && **t <= window.1)
        .map(|(t, v)| (1.0 + t).powf(exponent) * v)
        .collect();
    if comp.is_empty() {
        return Err(Error::Domain(format!("no samples in window [{}, {}]", window.0, window.1)));
    }
    let min = comp.iter().copied().fold(f64::INFINITY, f64::min);
    let max = comp.iter().copied().fold(0.0, f64::max);
    let spread = if min > 0.0 { max / min } else { f64::INFINITY };
    Ok(LowerBoundReport {
        channel: key.name.clone(),
        j: key.j,
        exponent,
        min,
        max,
        spread,
        allowed_spread,
        window,
        passed: min > 0.0 && spread <= allowed_spread,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::series::log_spaced;

    fn power_series(p: f64) -> DecaySeries {
        let mut s = DecaySeries::new();
        for t in log_spaced(1.0, 1e4, 40) {
            s.push(t, &[(ChannelKey::new("phi", 0), 3.0 * (1.0 + t).powf(p))]).unwrap();
        }
        s
    }

    #[test]
    fn exact_power_law() {
        let s = power_series(-0.75);
        let f = decay_fit(&s, &ChannelKey::new("phi", 0), (1e2, 1e4)).unwrap();
        assert!((f.slope + 0.75).abs() <= 1e-6);
        assert!(f.residual < 1e-10);
    }

    #[test]
    fn too_few_samples_and_zero_norms() {
        let s = power_series(-1.0);
        assert!(decay_fit(&s, &ChannelKey::new("phi", 0), (1e3, 1.5e3)).is_err());
        let mut z = DecaySeries::new();
        for t in log_spaced(1.0, 10.0, 10) {
            z.push(t, &[(ChannelKey::new("phi", 0), 0.0)]).unwrap();
        }
        assert!(matches!(decay_fit(&z, &ChannelKey::new("phi", 0), (1.0, 10.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn lower_bound_on_exact_rate() {
        let s = power_series(-0.75);
        let r = lower_bound_check(&s, &ChannelKey::new("phi", 0), (1e2, 1e4), DEFAULT_SPREAD).unwrap();
        assert!(r.passed);
        assert!((r.spread - 1.0).abs() < 1e-12);
    }
}
