//! Run configuration: one TOML file, every key optional, unknown keys rejected.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use dragflow::initial_data::DataSpec;
use dragflow::spectral::CutoffProfile;
use dragflow::Error;

/// The six batch experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    ValidateKernel,
    Asymptotics,
    KernelDecay,
    LowerBound,
    Simulate,
    Fit,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::ValidateKernel,
        Experiment::Asymptotics,
        Experiment::KernelDecay,
        Experiment::LowerBound,
        Experiment::Simulate,
        Experiment::Fit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::ValidateKernel => "validate-kernel",
            Experiment::Asymptotics => "asymptotics",
            Experiment::KernelDecay => "kernel-decay",
            Experiment::LowerBound => "lower-bound",
            Experiment::Simulate => "simulate",
            Experiment::Fit => "fit",
        }
    }

    pub fn parse(name: &str) -> Result<Self, Error> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == name)
            .ok_or_else(|| Error::Config(format!("unknown experiment `{name}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub n: usize,
    pub box_length: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { n: 32, box_length: 16.0 * PI }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StepperSection {
    pub dt: f64,
    pub t_end: f64,
    pub dealias: bool,
    pub cadence: usize,
    pub exp_order: Option<u32>,
    pub nonlinear: bool,
    pub sobolev_order: u32,
    /// Write the final state as a binary checkpoint.
    pub checkpoint: bool,
}

impl Default for StepperSection {
    fn default() -> Self {
        Self {
            dt: 0.05,
            t_end: 50.0,
            dealias: true,
            cadence: 10,
            exp_order: None,
            nonlinear: true,
            sobolev_order: 3,
            checkpoint: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CutoffConfig {
    pub r0: f64,
    pub big_r0: f64,
    pub profile: CutoffProfile,
}

impl Default for CutoffConfig {
    fn default() -> Self {
        Self { r0: 0.25, big_r0: 1.0, profile: CutoffProfile::Smooth }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub max_intervals: usize,
    /// Upper integration radius; the profile support radius when absent.
    pub xi_max: Option<f64>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-10, max_intervals: 4000, xi_max: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ValidateConfig {
    pub samples: usize,
    pub xi_max: f64,
    pub t_max: f64,
    pub c_values: Vec<f64>,
    pub tolerance: f64,
    pub semigroup_tolerance: f64,
    pub continuity_tolerance: f64,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        Self {
            samples: 100,
            xi_max: 8.0,
            t_max: 10.0,
            c_values: vec![0.5, 1.0, 2.0],
            tolerance: 1e-9,
            semigroup_tolerance: 1e-10,
            continuity_tolerance: 1e-5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AsymptoticsConfig {
    pub xi_max: f64,
    pub samples: usize,
    /// Largest accepted quartic remainder constant.
    pub quartic_bound: f64,
}

impl Default for AsymptoticsConfig {
    fn default() -> Self {
        Self { xi_max: 8.0, samples: 200, quartic_bound: 2.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecayConfig {
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
    pub orders: Vec<u32>,
    /// Fit window; `[t_max / 100, t_max]` when absent.
    pub window: Option<[f64; 2]>,
    /// Gaussian data `amplitude exp(-|xi|^2 / (2 sigma^2))` in every component.
    pub amplitude: f64,
    pub sigma: f64,
    pub slope_tolerance: Vec<f64>,
    /// Largest accepted slope of `||u - v||`.
    pub relaxation_slope_max: f64,
}

impl Default for DecayConfig {
    fn default() -> Self {
        Self {
            t_min: 1.0,
            t_max: 1e4,
            samples: 49,
            orders: vec![0, 1, 2],
            window: None,
            amplitude: 1.0,
            sigma: 1.0,
            slope_tolerance: vec![0.05, 0.05, 0.07],
            relaxation_slope_max: -1.15,
        }
    }
}

impl DecayConfig {
    pub fn fit_window(&self) -> (f64, f64) {
        match self.window {
            Some([a, b]) => (a, b),
            None => dragflow::diagnostics::fit::default_window(self.t_max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LowerBoundConfig {
    pub c0: f64,
    pub r0: f64,
    pub spread: f64,
    /// Half-angle (radians) of the cone around the `v` polarization left out.
    pub cone_half_angle: f64,
}

impl Default for LowerBoundConfig {
    fn default() -> Self {
        Self { c0: 1.0, r0: 0.25, spread: 10.0, cone_half_angle: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulateChecks {
    pub div_tolerance: f64,
    pub momentum_tolerance: f64,
    pub energy_tolerance: f64,
    /// The relaxation ratio must decrease from this time on.
    pub ratio_after: f64,
}

impl Default for SimulateChecks {
    fn default() -> Self {
        Self { div_tolerance: 1e-12, momentum_tolerance: 1e-8, energy_tolerance: 1e-10, ratio_after: 5.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FitConfig {
    /// CSV series to fit; the `kernel-decay` output in `--out` when absent.
    pub input: Option<PathBuf>,
    pub channel: String,
    pub j: u32,
    pub window: Option<[f64; 2]>,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self { input: None, channel: "total".into(), j: 0, window: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub experiment: Option<Experiment>,
    pub seed: u64,
    pub c: f64,
    pub out: PathBuf,
    pub grid: GridConfig,
    pub stepper: StepperSection,
    pub data: DataSpec,
    pub cutoff: CutoffConfig,
    pub quadrature: QuadratureConfig,
    pub validate: ValidateConfig,
    pub asymptotics: AsymptoticsConfig,
    pub decay: DecayConfig,
    pub lower_bound: LowerBoundConfig,
    pub simulate: SimulateChecks,
    pub fit: FitConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            experiment: None,
            seed: 0,
            c: 1.0,
            out: PathBuf::from("out"),
            grid: GridConfig::default(),
            stepper: StepperSection::default(),
            data: DataSpec::default(),
            cutoff: CutoffConfig::default(),
            quadrature: QuadratureConfig::default(),
            validate: ValidateConfig::default(),
            asymptotics: AsymptoticsConfig::default(),
            decay: DecayConfig::default(),
            lower_bound: LowerBoundConfig::default(),
            simulate: SimulateChecks::default(),
            fit: FitConfig::default(),
        }
    }
}

fn positive(name: &str, x: f64) -> Result<(), Error> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive, got {x}")))
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, Error> {
        toml::from_str(text).map_err(|e| Error::Config(format!("invalid configuration: {}", e.message())))
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Checks documented ranges; the data constant follows `c`.
    pub fn validate(&mut self) -> Result<(), Error> {
        positive("c", self.c)?;
        self.data.c = self.c;
        self.data.seed = self.seed;
        self.data.validate()?;
        positive("grid.box_length", self.grid.box_length)?;
        if self.grid.n < 8 || self.grid.n % 2 != 0 {
            return Err(Error::Config(format!("grid.n must be even and >= 8, got {}", self.grid.n)));
        }
        positive("stepper.dt", self.stepper.dt)?;
        positive("stepper.t_end", self.stepper.t_end)?;
        if self.stepper.cadence == 0 {
            return Err(Error::Config("stepper.cadence must be at least 1".into()));
        }
        if matches!(self.stepper.exp_order, Some(k) if k < 3) {
            return Err(Error::Config("stepper.exp_order must be at least 3".into()));
        }
        if self.stepper.sobolev_order > 6 {
            return Err(Error::Config("stepper.sobolev_order must be at most 6".into()));
        }
        positive("cutoff.r0", self.cutoff.r0)?;
        if !(self.cutoff.big_r0 > self.cutoff.r0) {
            return Err(Error::Config(format!(
                "cutoff.big_r0 must exceed cutoff.r0 ({} <= {})",
                self.cutoff.big_r0, self.cutoff.r0
            )));
        }
        positive("quadrature.rel_tol", self.quadrature.rel_tol)?;
        if let Some(x) = self.quadrature.xi_max {
            positive("quadrature.xi_max", x)?;
        }
        if self.validate.samples == 0 {
            return Err(Error::Config("validate.samples must be at least 1".into()));
        }
        positive("validate.xi_max", self.validate.xi_max)?;
        positive("validate.t_max", self.validate.t_max)?;
        if self.validate.c_values.is_empty() {
            return Err(Error::Config("validate.c_values must not be empty".into()));
        }
        for &c in &self.validate.c_values {
            positive("validate.c_values", c)?;
        }
        positive("asymptotics.xi_max", self.asymptotics.xi_max)?;
        positive("decay.t_min", self.decay.t_min)?;
        if !(self.decay.t_max > self.decay.t_min) {
            return Err(Error::Config("decay.t_max must exceed decay.t_min".into()));
        }
        if self.decay.samples < 2 {
            return Err(Error::Config("decay.samples must be at least 2".into()));
        }
        if self.decay.orders.iter().any(|&j| j > 6) {
            return Err(Error::Config("decay.orders entries must be at most 6".into()));
        }
        positive("decay.sigma", self.decay.sigma)?;
        positive("decay.amplitude", self.decay.amplitude)?;
        positive("lower_bound.c0", self.lower_bound.c0)?;
        positive("lower_bound.r0", self.lower_bound.r0)?;
        positive("lower_bound.spread", self.lower_bound.spread)?;
        if !(self.lower_bound.cone_half_angle >= 0.0 && self.lower_bound.cone_half_angle < 0.5 * PI) {
            return Err(Error::Config("lower_bound.cone_half_angle must lie in [0, pi/2)".into()));
        }
        Ok(())
    }

    /// Resolved parameters of `experiment` and the checks an asserted run applies.
    pub fn describe(&self, experiment: Option<Experiment>) -> String {
        let mut s = String::new();
        let list: Vec<Experiment> = match experiment.or(self.experiment) {
            Some(e) => vec![e],
            None => Experiment::ALL.to_vec(),
        };
        let _ = writeln!(s, "seed = {}, c = {}, out = {}", self.seed, self.c, self.out.display());
        let _ = writeln!(
            s,
            "cutoff: r0 = {}, R0 = {}, profile = {:?}",
            self.cutoff.r0, self.cutoff.big_r0, self.cutoff.profile
        );
        let _ = writeln!(s, "{} experiment(s):", list.len());
        for e in list {
            let _ = writeln!(s, "\n[{}]", e.name());
            match e {
                Experiment::ValidateKernel => {
                    let v = &self.validate;
                    let _ = writeln!(
                        s,
                        "  {} random samples, |xi| <= {}, t <= {}, c in {:?}",
                        v.samples, v.xi_max, v.t_max, v.c_values
                    );
                    let _ = writeln!(s, "  assert: max error vs mode ODE oracle <= {:e}", v.tolerance);
                    let _ = writeln!(s, "  assert: semigroup defect <= {:e}", v.semigroup_tolerance);
                    let _ = writeln!(s, "  assert: weight jump across |xi| = 1/2 <= {:e}", v.continuity_tolerance);
                }
                Experiment::Asymptotics => {
                    let a = &self.asymptotics;
                    let _ = writeln!(s, "  low band |xi| <= 0.05, gap on [{}, {}], {} samples", self.cutoff.r0, a.xi_max, a.samples);
                    let _ = writeln!(s, "  assert: quartic constants of lambda1, lambda3 <= {}", a.quartic_bound);
                    let _ = writeln!(s, "  assert: spectral gap > 0");
                }
                Experiment::KernelDecay => {
                    let d = &self.decay;
                    let (a, b) = d.fit_window();
                    let _ = writeln!(
                        s,
                        "  gaussian data amplitude {} sigma {}, t in [{}, {}] ({} log-spaced samples), orders {:?}",
                        d.amplitude, d.sigma, d.t_min, d.t_max, d.samples, d.orders
                    );
                    for (i, j) in d.orders.iter().enumerate() {
                        let tol = d.slope_tolerance.get(i).copied().unwrap_or(0.05);
                        let _ = writeln!(
                            s,
                            "  assert: slope of ||nabla^{j} (phi,u,v)|| on [{a}, {b}] = {} +- {tol}",
                            -0.75 - 0.5 * f64::from(*j)
                        );
                    }
                    let _ = writeln!(s, "  assert: slope of ||u - v|| <= {}", d.relaxation_slope_max);
                }
                Experiment::LowerBound => {
                    let l = &self.lower_bound;
                    let (a, b) = self.decay.fit_window();
                    let _ = writeln!(
                        s,
                        "  c0 = {}, r0 = {}, cone half-angle {} rad, t in [{}, {}]",
                        l.c0, l.r0, l.cone_half_angle, self.decay.t_min, self.decay.t_max
                    );
                    let _ = writeln!(
                        s,
                        "  assert: (1+t)^(3/4) ||phi|| and ||v outside cone|| within a factor {} on [{a}, {b}]",
                        l.spread
                    );
                }
                Experiment::Simulate => {
                    let st = &self.stepper;
                    let ch = &self.simulate;
                    let _ = writeln!(
                        s,
                        "  grid n = {}, L = {}, dt = {}, t_end = {}, cadence {}, nonlinear {}, dealias {}",
                        self.grid.n, self.grid.box_length, st.dt, st.t_end, st.cadence, st.nonlinear, st.dealias
                    );
                    let _ = writeln!(
                        s,
                        "  data {:?}, amplitude {}, width {}, bumps {}",
                        self.data.kind, self.data.amplitude, self.data.width, self.data.bumps
                    );
                    let _ = writeln!(s, "  assert: div v <= {:e} at every step", ch.div_tolerance);
                    let _ = writeln!(s, "  assert: momentum drift <= {:e}", ch.momentum_tolerance);
                    let _ = writeln!(s, "  assert: energy increase per step <= {:e}", ch.energy_tolerance);
                    let _ = writeln!(s, "  assert: ||u - v|| / ||(u, v)|| decreasing after t = {}", ch.ratio_after);
                }
                Experiment::Fit => {
                    let f = &self.fit;
                    let input = f
                        .input
                        .clone()
                        .unwrap_or_else(|| self.out.join("kernel_decay.csv"));
                    let _ = writeln!(s, "  input {}, channel {} j = {}, window {:?}", input.display(), f.channel, f.j, f.window);
                }
            }
        }
        s
    }
}
