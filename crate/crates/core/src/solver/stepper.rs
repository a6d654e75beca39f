//! Exponential trapezoidal (ETD2) time stepping with the exact linear propagator.
//!
//! ```text
//! U*      = G(dt) (U_n + dt F(U_n))
//! U_{n+1} = G(dt) (U_n + dt/2 F(U_n)) + dt/2 F(U*)
//! ```

use super::nonlinear::{nonlinear_rhs_internal, ExpMode, NonlinearOptions};
use crate::error::{Error, Result};
use crate::kernel::eigen::eigenvalues;
use crate::kernel::propagate::Propagator;
use crate::scalar::Real;
use crate::spectral::ops::{dealias_in_place, leray_project};
use crate::state::State;

/// Largest admissible `dt * max |Re lambda|` over the lattice.
pub const LINEAR_GUARD: f64 = 4.0;
/// Largest admissible `dt * max|u, v| * |xi|_max`.
pub const CFL_GUARD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperConfig<T> {
    pub dt: T,
    pub t_end: T,
    pub dealias: bool,
    /// Sample diagnostics every `cadence` steps.
    pub cadence: usize,
    /// Taylor order for `e^phi - 1`; `None` uses `exp_m1`.
    pub exp_order: Option<u32>,
    /// Disables the nonlinear terms (pure linear propagation).
    pub nonlinear: bool,
    /// Sobolev order of the monitored energy functional.
    pub sobolev_order: u32,
}

impl<T: Real> StepperConfig<T> {
    pub fn new(dt: T, t_end: T) -> Self {
        Self { dt, t_end, dealias: true, cadence: 10, exp_order: None, nonlinear: true, sobolev_order: 3 }
    }

    pub fn nonlinear_options(&self) -> NonlinearOptions {
        NonlinearOptions {
            dealias: self.dealias,
            exp_mode: self.exp_order.map_or(ExpMode::Exact, ExpMode::Taylor),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > T::zero()) || !self.dt.is_finite() {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end > T::zero()) || !self.t_end.is_finite() {
            return Err(Error::Config(format!("t_end must be positive, got {}", self.t_end)));
        }
        if self.cadence == 0 {
            return Err(Error::Config("output cadence must be a positive integer".into()));
        }
        if let Some(k) = self.exp_order {
            if k < 3 {
                return Err(Error::Config(format!("exponential truncation order must be >= 3, got {k}")));
            }
        }
        Ok(())
    }

    /// Checks `dt max|Re lambda| <= 4` and the advective CFL bound for `state`.
    pub fn check_stability(&self, state: &State<T>) -> Result<()> {
        let grid = state.grid();
        let xi_max = grid.xi_max();
        let stiff = eigenvalues(xi_max, state.c);
        let rate = (-stiff.lambda4).max(-stiff.lambda2.re);
        if self.dt * rate > T::lit(LINEAR_GUARD) {
            return Err(Error::Config(format!(
                "dt = {} violates the linear guard dt * max|Re lambda| <= {LINEAR_GUARD} (max|Re lambda| = {rate})",
                self.dt
            )));
        }
        if self.nonlinear {
            let vmax = velocity_sup(state);
            if self.dt * vmax * xi_max > T::lit(CFL_GUARD) {
                return Err(Error::Config(format!(
                    "dt = {} violates the advective bound dt * max|u,v| * |xi|_max <= {CFL_GUARD}",
                    self.dt
                )));
            }
        }
        Ok(())
    }
}

/// `max |u|, |v|` over the physical grid.
pub fn velocity_sup<T: Real>(state: &State<T>) -> T {
    let comps: Vec<Vec<T>> = state.u.iter().chain(state.v.iter()).map(|f| f.to_physical()).collect();
    let n = comps[0].len();
    let mut m = T::zero();
    for x in 0..n {
        let u2 = comps[0][x] * comps[0][x] + comps[1][x] * comps[1][x] + comps[2][x] * comps[2][x];
        let v2 = comps[3][x] * comps[3][x] + comps[4][x] * comps[4][x] + comps[5][x] * comps[5][x];
        m = m.max(u2.max(v2).sqrt());
    }
    m
}

pub(crate) fn axpy_state<T: Real>(x: &State<T>, a: T, y: &State<T>) -> State<T> {
    let mut out = x.clone();
    for (o, f) in out.fields_mut().into_iter().zip(y.fields()) {
        *o = o.axpy(a, f);
    }
    out
}

/// Reusable stepper holding the propagator for a fixed `dt`.
#[derive(Debug, Clone)]
pub struct Stepper<T: Real> {
    cfg: StepperConfig<T>,
    opts: NonlinearOptions,
    propagator: Propagator<T>,
}

impl<T: Real> Stepper<T> {
    pub fn new(state: &State<T>, cfg: StepperConfig<T>) -> Result<Self> {
        cfg.validate()?;
        state.validate()?;
        Ok(Self {
            cfg,
            opts: cfg.nonlinear_options(),
            propagator: Propagator::new(state.grid(), cfg.dt, state.c),
        })
    }

    pub fn config(&self) -> &StepperConfig<T> {
        &self.cfg
    }

    fn forcing(&self, state: &State<T>) -> Result<State<T>> {
        let (terms, phi_sup) = nonlinear_rhs_internal(state, &self.opts);
        if !(phi_sup < T::one()) {
            return Err(Error::BlowUp {
                t: state.t.as_f64(),
                reason: format!("|phi| reached {phi_sup}; density left the small-perturbation regime"),
            });
        }
        Ok(terms.into_state(state.t, state.c))
    }

    /// Advances `state` by one step of size `dt`.
    pub fn step(&self, state: &State<T>) -> Result<State<T>> {
        let dt = self.cfg.dt;
        let half = dt * T::lit(0.5);
        let mut next = if self.cfg.nonlinear {
            let f0 = self.forcing(state)?;
            let mut predictor = axpy_state(state, dt, &f0);
            self.propagator.apply_in_place(&mut predictor);
            predictor.t = state.t + dt;
            let f1 = self.forcing(&predictor)?;
            let mut base = axpy_state(state, half, &f0);
            self.propagator.apply_in_place(&mut base);
            axpy_state(&base, half, &f1)
        } else {
            let mut s = state.clone();
            self.propagator.apply_in_place(&mut s);
            s
        };
        next.t = state.t + dt;
        if self.cfg.nonlinear {
            next.v = leray_project(&next.v);
            if self.cfg.dealias {
                for f in next.fields_mut() {
                    dealias_in_place(f);
                }
            }
            next.symmetrize();
        }
        if !next.is_finite() {
            return Err(Error::BlowUp { t: next.t.as_f64(), reason: "non-finite coefficients".into() });
        }
        Ok(next)
    }
}

/// One ETD2 step of size `cfg.dt`, after checking the stability guards.
pub fn step<T: Real>(state: &State<T>, cfg: &StepperConfig<T>) -> Result<State<T>> {
    cfg.check_stability(state)?;
    Stepper::new(state, *cfg)?.step(state)
}
