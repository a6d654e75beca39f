//! The batch experiments. Each one writes its artifacts under the output
//! directory and returns the checks an asserted run enforces.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use dragflow::diagnostics::fit::{decay_fit, default_window, lower_bound_check};
use dragflow::diagnostics::series::{channel, log_spaced, ChannelKey, DecaySeries};
use dragflow::initial_data::{generic_gaussian, lower_bound_profiles, single_mode, DataKind};
use dragflow::kernel::green::{admissible_projector, matmul, max_entry_diff, GreenMatrix};
use dragflow::kernel::quadrature::QuadratureOptions;
use dragflow::kernel::{asymptotics_report, green_hat, kernel_weights, mode_ode_oracle, radial_series, ProfileSet, RadialOptions};
use dragflow::solver::{save_checkpoint, simulate, StepperConfig};
use dragflow::spectral::build_grid;
use dragflow::{Error, Result, State64};

use crate::config::{Experiment, RunConfig};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), value, threshold, passed: value <= threshold }
    }

    fn within(name: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        Self { name: name.into(), value, threshold: tol, passed: (value - target).abs() <= tol }
    }

    fn holds(name: impl Into<String>, value: f64, ok: bool) -> Self {
        Self { name: name.into(), value, threshold: 0.0, passed: ok }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub experiment: &'static str,
    pub seconds: f64,
    pub checks: Vec<Check>,
    pub artifacts: Vec<PathBuf>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Outcome of a run that stopped early but still wrote partial output.
pub struct Aborted {
    pub error: Error,
    pub report: Report,
}

pub fn run(cfg: &RunConfig, experiment: Experiment) -> std::result::Result<Report, Aborted> {
    let start = Instant::now();
    let mut report = Report { experiment: experiment.name(), seconds: 0.0, checks: Vec::new(), artifacts: Vec::new() };
    let outcome = fs::create_dir_all(&cfg.out).map_err(Error::from).and_then(|_| match experiment {
        Experiment::ValidateKernel => validate_kernel(cfg, &mut report),
        Experiment::Asymptotics => asymptotics(cfg, &mut report),
        Experiment::KernelDecay => kernel_decay(cfg, &mut report),
        Experiment::LowerBound => lower_bound(cfg, &mut report),
        Experiment::Simulate => run_simulation(cfg, &mut report),
        Experiment::Fit => fit(cfg, &mut report),
    });
    report.seconds = start.elapsed().as_secs_f64();
    match outcome {
        Ok(()) => Ok(report),
        Err(error) => Err(Aborted { error, report }),
    }
}

fn write_json(path: &Path, value: &impl Serialize, report: &mut Report) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
    fs::write(path, text + "\n")?;
    report.artifacts.push(path.to_path_buf());
    Ok(())
}

fn write_series(path: &Path, series: &DecaySeries, report: &mut Report) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    series.write_csv(&mut w)?;
    w.flush()?;
    report.artifacts.push(path.to_path_buf());
    Ok(())
}

fn restricted(m: &GreenMatrix<f64>, xi: [f64; 3]) -> GreenMatrix<f64> {
    matmul(m, &admissible_projector(xi))
}

#[derive(Serialize)]
struct KernelSample {
    xi: [f64; 3],
    t: f64,
    c: f64,
    oracle_error: f64,
    semigroup_error: f64,
}

fn validate_kernel(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let v = &cfg.validate;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let draws: Vec<([f64; 3], f64, f64, f64)> = (0..v.samples)
        .map(|_| {
            // uniform direction, uniform radius
            let z: f64 = rng.gen_range(-1.0..1.0);
            let az: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = rng.gen_range(0.0..v.xi_max);
            let s = (1.0 - z * z).sqrt();
            let xi = [r * s * az.cos(), r * s * az.sin(), r * z];
            let t = rng.gen_range(0.0..v.t_max);
            let c = v.c_values[rng.gen_range(0..v.c_values.len())];
            let split = rng.gen_range(0.0..1.0);
            (xi, t, c, split)
        })
        .collect();
    let samples: Vec<KernelSample> = draws
        .par_iter()
        .map(|&(xi, t, c, split)| {
            let g = restricted(&green_hat(xi, t, c), xi);
            let oracle = restricted(&mode_ode_oracle(xi, t, c)?, xi);
            let (t1, t2) = (t * split, t * (1.0 - split));
            let composed = matmul(&green_hat(xi, t1, c), &restricted(&green_hat(xi, t2, c), xi));
            Ok(KernelSample {
                xi,
                t,
                c,
                oracle_error: max_entry_diff(&g, &oracle),
                semigroup_error: max_entry_diff(&g, &composed),
            })
        })
        .collect::<Result<_>>()?;
    let worst_oracle = samples.iter().map(|s| s.oracle_error).fold(0.0, f64::max);
    let worst_semigroup = samples.iter().map(|s| s.semigroup_error).fold(0.0, f64::max);

    let mut jump: f64 = 0.0;
    for &c in &v.c_values {
        for t in [0.1, 1.0, 5.0, v.t_max] {
            let mid = kernel_weights(0.5, t, c).as_array();
            for xi in [0.5 - 1e-7, 0.5 + 1e-7] {
                let side = kernel_weights(xi, t, c).as_array();
                for (a, b) in mid.iter().zip(&side) {
                    jump = jump.max((a - b).abs());
                }
            }
        }
    }
    report.checks.push(Check::at_most("oracle_max_error", worst_oracle, v.tolerance));
    report.checks.push(Check::at_most("semigroup_max_error", worst_semigroup, v.semigroup_tolerance));
    report.checks.push(Check::at_most("degenerate_radius_jump", jump, v.continuity_tolerance));
    write_json(&cfg.out.join("validate_kernel.json"), &samples, report)
}

fn asymptotics(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let a = &cfg.asymptotics;
    let r = asymptotics_report(cfg.c, cfg.cutoff.r0, a.xi_max, a.samples);
    report.checks.push(Check::at_most("quartic_constant_lambda1", r.c_lambda1, a.quartic_bound));
    report.checks.push(Check::at_most("quartic_constant_lambda3", r.c_lambda3, a.quartic_bound));
    report.checks.push(Check::holds("spectral_gap", r.spectral_gap, r.gap_positive));
    write_json(&cfg.out.join("asymptotics.json"), &r, report)
}

fn radial_options(cfg: &RunConfig, cone: Option<f64>) -> RadialOptions<f64> {
    RadialOptions {
        quadrature: QuadratureOptions {
            rel_tol: cfg.quadrature.rel_tol,
            max_intervals: cfg.quadrature.max_intervals,
            ..QuadratureOptions::default()
        },
        xi_max: cfg.quadrature.xi_max,
        cone_half_angle: cone,
    }
}

fn kernel_decay(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let d = &cfg.decay;
    let set = ProfileSet::gaussian(d.amplitude, d.sigma);
    let times = log_spaced(d.t_min, d.t_max, d.samples);
    let series = radial_series(&set, &times, &d.orders, cfg.c, &radial_options(cfg, None))?;
    let window = d.fit_window();
    let mut fits = Vec::new();
    for (i, &j) in d.orders.iter().enumerate() {
        let f = decay_fit(&series, &ChannelKey::new(channel::TOTAL, j), window)?;
        let tol = d.slope_tolerance.get(i).copied().unwrap_or(0.05);
        report.checks.push(Check::within(format!("slope_total_j{j}"), f.slope, -0.75 - 0.5 * f64::from(j), tol));
        fits.push(f);
    }
    let uv = decay_fit(&series, &ChannelKey::new(channel::U_MINUS_V, 0), window)?;
    report.checks.push(Check::at_most("slope_u_minus_v", uv.slope, d.relaxation_slope_max));
    fits.push(uv);
    write_series(&cfg.out.join("kernel_decay.csv"), &series, report)?;
    write_json(&cfg.out.join("kernel_decay_fits.json"), &fits, report)
}

fn lower_bound(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let l = &cfg.lower_bound;
    let set = lower_bound_profiles(l.c0, l.r0)?;
    let times = log_spaced(cfg.decay.t_min, cfg.decay.t_max, cfg.decay.samples);
    let series = radial_series(&set, &times, &[0], cfg.c, &radial_options(cfg, Some(l.cone_half_angle)))?;
    let window = cfg.decay.fit_window();
    let mut out = Vec::new();
    for name in [channel::PHI, channel::V_OUTSIDE_CONE] {
        let r = lower_bound_check(&series, &ChannelKey::new(name, 0), window, l.spread)?;
        report.checks.push(Check { name: format!("spread_{name}"), value: r.spread, threshold: l.spread, passed: r.passed });
        out.push(r);
    }
    write_series(&cfg.out.join("lower_bound.csv"), &series, report)?;
    write_json(&cfg.out.join("lower_bound.json"), &out, report)
}

fn torus_data(cfg: &RunConfig) -> Result<State64> {
    let grid = build_grid::<f64>(cfg.grid.n, cfg.grid.box_length)?;
    let d = &cfg.data;
    match d.kind {
        DataKind::GenericGaussian => Ok(generic_gaussian(d, &grid)?.state),
        DataKind::SingleMode => single_mode(&grid, d.field, d.mode, d.amplitude, d.polarization, d.c),
        DataKind::Zero => Ok(State64::zeros(&grid, d.c)),
        DataKind::LowerBound => Err(Error::Config(
            "data.kind = \"lower-bound\" describes whole-space spectra; use the lower-bound experiment".into(),
        )),
    }
}

/// Ratio must be non-increasing at every sample from `after` on.
fn ratio_increase(series: &DecaySeries, after: f64) -> f64 {
    let Some(r) = series.channel(&ChannelKey::new(channel::RELAXATION_RATIO, 0)) else {
        return f64::INFINITY;
    };
    let mut worst: f64 = 0.0;
    let pts: Vec<(f64, f64)> = series.times().iter().copied().zip(r.iter().copied()).filter(|p| p.0 >= after).collect();
    for w in pts.windows(2) {
        worst = worst.max(w[1].1 - w[0].1);
    }
    worst
}

fn run_simulation(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let st = &cfg.stepper;
    let data = torus_data(cfg)?;
    let stepper = StepperConfig {
        dt: st.dt,
        t_end: st.t_end,
        dealias: st.dealias,
        cadence: st.cadence,
        exp_order: st.exp_order,
        nonlinear: st.nonlinear,
        sobolev_order: st.sobolev_order,
    };
    let csv = cfg.out.join("simulate.csv");
    match simulate(&data, &stepper, &mut []) {
        Ok(out) => {
            let m = &out.monitor;
            let ch = &cfg.simulate;
            report.checks.push(Check::at_most("div_v_residual", m.max_div_residual, ch.div_tolerance));
            report.checks.push(Check::at_most("momentum_drift", m.max_momentum_drift, ch.momentum_tolerance));
            report.checks.push(Check::at_most("energy_increase", m.max_energy_increase, ch.energy_tolerance));
            report.checks.push(Check::at_most("relaxation_ratio_increase", ratio_increase(&out.series, ch.ratio_after), 0.0));
            write_series(&csv, &out.series, report)?;
            write_json(&cfg.out.join("simulate_monitor.json"), m, report)?;
            if st.checkpoint {
                let path = cfg.out.join("final.ckpt");
                save_checkpoint(&out.final_state, &path)?;
                report.artifacts.push(path);
            }
            Ok(())
        }
        Err(fail) => {
            if !fail.series.is_empty() {
                write_series(&csv, &fail.series, report)?;
            }
            Err(fail.error)
        }
    }
}

fn fit(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let f = &cfg.fit;
    let input = f.input.clone().unwrap_or_else(|| cfg.out.join("kernel_decay.csv"));
    let file = File::open(&input)
        .map_err(|e| Error::Config(format!("fit.input {} cannot be opened: {e}", input.display())))?;
    let series = DecaySeries::read_csv(BufReader::new(file))?;
    let t_end = series.times().last().copied().unwrap_or(0.0);
    let window = f.window.map_or_else(|| default_window(t_end), |[a, b]| (a, b));
    let result = decay_fit(&series, &ChannelKey::new(f.channel.clone(), f.j), window)?;
    report.checks.push(Check::holds(format!("slope_{}_j{}", f.channel, f.j), result.slope, result.slope.is_finite()));
    write_json(&cfg.out.join("fit.json"), &result, report)
}
