//! Time integration to `t_end` with sampled diagnostics and per-step monitors.

use serde::Serialize;

use super::stepper::{Stepper, StepperConfig};
use crate::diagnostics::conserved::{momentum, relative_drift};
use crate::diagnostics::energy::{energy_functionals, TimeWeightedEnergy, DEFAULT_GAMMA1};
use crate::diagnostics::norms::{difference_norm, hs_norm, state_gradient_energy, vector_gradient_norm};
use crate::diagnostics::series::{channel, ChannelKey, DecaySeries};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::divergence_residual;
use crate::state::State;

/// Extra channels evaluated at every sample.
pub trait DiagnosticHook<T: Real> {
    fn sample(&mut self, state: &State<T>) -> Result<Vec<(ChannelKey, f64)>>;

    /// Channel names that may hold negative values.
    fn signed_channels(&self) -> Vec<String> {
        Vec::new()
    }
}

/// Worst values seen by the per-step monitors.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MonitorSummary {
    pub steps: usize,
    pub samples: usize,
    /// Largest `(L_{n+1} - L_n) / L_n` of the Lyapunov functional.
    pub max_energy_increase: f64,
    /// Largest relative `max |xi . v|` after a step.
    pub max_div_residual: f64,
    /// Largest `|m(t) - m(0)| / |m(0)|` over the samples.
    pub max_momentum_drift: f64,
    /// Largest `(dE/dt + D) / D` for the plain energy, by differences per step.
    pub dissipation_margin: f64,
    /// Final running sup `M(t)`.
    pub time_weighted: f64,
}

#[derive(Debug, Clone)]
pub struct SimulationOutput<T: Real> {
    pub series: DecaySeries,
    pub final_state: State<T>,
    pub monitor: MonitorSummary,
}

/// A failed run with everything sampled before the failure.
#[derive(Debug)]
pub struct SimulationFailure {
    pub error: Error,
    pub series: DecaySeries,
    pub monitor: MonitorSummary,
}

impl std::fmt::Display for SimulationFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (after {} samples)", self.error, self.series.len())
    }
}

impl std::error::Error for SimulationFailure {}

/// Number of steps of size `dt` covering `t_end`.
pub fn step_count<T: Real>(cfg: &StepperConfig<T>) -> Result<usize> {
    let ratio = (cfg.t_end / cfg.dt).as_f64();
    let n = ratio.round();
    if n < 1.0 || (ratio - n).abs() > 1e-9 * ratio.max(1.0) {
        return Err(Error::Config(format!("t_end = {} is not a whole multiple of dt = {}", cfg.t_end, cfg.dt)));
    }
    Ok(n as usize)
}

struct Sampler {
    s: u32,
    gamma1: f64,
    momentum0: Option<[f64; 3]>,
    m: TimeWeightedEnergy,
}

impl Sampler {
    fn sample<T: Real>(&mut self, state: &State<T>, monitor: &mut MonitorSummary) -> Result<Vec<(ChannelKey, f64)>> {
        let mut out = Vec::new();
        for j in 0..=self.s {
            out.push((ChannelKey::new(channel::TOTAL, j), state_gradient_energy(state, j).sqrt().as_f64()));
        }
        let uv = difference_norm(state, 0).as_f64();
        out.push((ChannelKey::new(channel::U_MINUS_V, 0), uv));
        let vel = (vector_gradient_norm(&state.u, 0).powi(2) + vector_gradient_norm(&state.v, 0).powi(2)).sqrt().as_f64();
        out.push((ChannelKey::new(channel::RELAXATION_RATIO, 0), if vel > 0.0 { uv / vel } else { 0.0 }));
        out.push((ChannelKey::new(channel::DIV_V, 0), divergence_residual(&state.v).as_f64()));
        let e = energy_functionals(state, self.s, T::lit(self.gamma1))?;
        out.push((ChannelKey::new(channel::HS_ENERGY, self.s), e.hs_energy.as_f64()));
        out.push((ChannelKey::new(channel::LYAPUNOV, self.s), e.lyapunov.as_f64()));
        let mt = self.m.update(state.t.as_f64(), hs_norm(state, self.s).as_f64());
        out.push((ChannelKey::new(channel::TIME_WEIGHTED, self.s), mt));
        let m = momentum(state).map(|x| x.as_f64());
        let m0 = *self.momentum0.get_or_insert(m);
        monitor.max_momentum_drift = monitor.max_momentum_drift.max(relative_drift(m0, m));
        for (a, x) in m.iter().enumerate() {
            out.push((ChannelKey::new(channel::MOMENTUM, a as u32), *x));
        }
        monitor.time_weighted = mt;
        monitor.samples += 1;
        Ok(out)
    }
}

fn plain_pair<T: Real>(state: &State<T>, s: u32) -> Result<(f64, f64, f64)> {
    let e = energy_functionals(state, s, T::lit(DEFAULT_GAMMA1))?;
    Ok((e.lyapunov.as_f64(), e.hs_energy.as_f64(), e.plain_dissipation.as_f64()))
}

/// Runs `data` to `cfg.t_end`, sampling every `cfg.cadence` steps and at the end.
pub fn simulate<T: Real>(
    data: &State<T>,
    cfg: &StepperConfig<T>,
    hooks: &mut [&mut dyn DiagnosticHook<T>],
) -> std::result::Result<SimulationOutput<T>, SimulationFailure> {
    let mut series = DecaySeries::new();
    let mut monitor = MonitorSummary::default();
    series.mark_signed(channel::MOMENTUM);
    for h in hooks.iter() {
        for name in h.signed_channels() {
            series.mark_signed(&name);
        }
    }
    macro_rules! fail {
        ($e:expr) => {
            match $e {
                Ok(v) => v,
                Err(error) => return Err(SimulationFailure { error, series, monitor }),
            }
        };
    }
    let steps = fail!(step_count(cfg));
    fail!(cfg.check_stability(data));
    let stepper = fail!(Stepper::new(data, *cfg));
    let s = cfg.sobolev_order;
    let mut sampler = Sampler { s, gamma1: DEFAULT_GAMMA1, momentum0: None, m: TimeWeightedEnergy::new() };

    let mut take_sample = |state: &State<T>, series: &mut DecaySeries, monitor: &mut MonitorSummary| -> Result<()> {
        let mut values = sampler.sample(state, monitor)?;
        for h in hooks.iter_mut() {
            values.extend(h.sample(state)?);
        }
        series.push(state.t.as_f64(), &values)
    };

    let mut state = data.clone();
    fail!(take_sample(&state, &mut series, &mut monitor));
    let (mut lyap, mut plain, mut diss) = fail!(plain_pair(&state, s));
    let dt = cfg.dt.as_f64();
    for n in 1..=steps {
        state = fail!(stepper.step(&state));
        monitor.steps = n;
        let (l1, p1, d1) = fail!(plain_pair(&state, s));
        if lyap > 0.0 {
            monitor.max_energy_increase = monitor.max_energy_increase.max((l1 - lyap) / lyap);
        }
        let d_avg = 0.5 * (diss + d1);
        if d_avg > 0.0 {
            // plain energy is hs_energy / 2
            let rate = 0.5 * (p1 - plain) / dt;
            monitor.dissipation_margin = monitor.dissipation_margin.max((rate + d_avg) / d_avg);
        }
        (lyap, plain, diss) = (l1, p1, d1);
        monitor.max_div_residual = monitor.max_div_residual.max(divergence_residual(&state.v).as_f64());
        if n % cfg.cadence == 0 || n == steps {
            fail!(take_sample(&state, &mut series, &mut monitor));
        }
    }
    Ok(SimulationOutput { series, final_state: state, monitor })
}
