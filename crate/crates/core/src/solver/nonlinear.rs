//! Quadratic and drag nonlinearities, evaluated pseudo-spectrally.

use rayon::prelude::*;

use crate::scalar::Real;
use crate::spectral::ops::{dealias_in_place, leray_project, spectral_derivative, Symbol};
use crate::spectral::{SpectralField, VectorField};
use crate::state::State;

/// `f1 = -u.grad(phi)`, `f2 = -u.grad(u)`,
/// `f3 = -J(v.grad(v)) + J(c (e^phi - 1)(u - v))`.
#[derive(Debug, Clone)]
pub struct NonlinearTerms<T: Real> {
    pub f1: SpectralField<T>,
    pub f2: VectorField<T>,
    pub f3: VectorField<T>,
}

/// How `e^phi - 1` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExpMode {
    /// Full-accuracy `exp_m1`.
    #[default]
    Exact,
    /// Taylor polynomial `sum_{k=1}^{order} phi^k / k!`.
    Taylor(u32),
}

impl ExpMode {
    #[inline]
    pub fn expm1<T: Real>(self, x: T) -> T {
        match self {
            ExpMode::Exact => x.exp_m1(),
            ExpMode::Taylor(order) => {
                let mut term = T::one();
                let mut sum = T::zero();
                for k in 1..=order {
                    term = term * x / T::from_count(k as usize);
                    sum = sum + term;
                }
                sum
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NonlinearOptions {
    pub dealias: bool,
    pub exp_mode: ExpMode,
}

impl Default for NonlinearOptions {
    fn default() -> Self {
        Self { dealias: true, exp_mode: ExpMode::Exact }
    }
}

/// Physical-space samples needed by the nonlinear terms.
pub(crate) struct PhysicalState<T> {
    pub phi: Vec<T>,
    pub u: [Vec<T>; 3],
    pub v: [Vec<T>; 3],
    /// `grad_phi[j] = d_j phi`
    pub grad_phi: [Vec<T>; 3],
    /// `grad_u[i][j] = d_j u_i`
    pub grad_u: [[Vec<T>; 3]; 3],
    pub grad_v: [[Vec<T>; 3]; 3],
}

pub(crate) fn physical_state<T: Real>(state: &State<T>) -> PhysicalState<T> {
    // 28 independent inverse transforms
    let mut jobs: Vec<(&SpectralField<T>, Option<usize>)> = Vec::with_capacity(28);
    jobs.push((&state.phi, None));
    for j in 0..3 {
        jobs.push((&state.phi, Some(j)));
    }
    for f in state.u.iter().chain(state.v.iter()) {
        jobs.push((f, None));
        for j in 0..3 {
            jobs.push((f, Some(j)));
        }
    }
    let mut out: Vec<Vec<T>> = jobs
        .par_iter()
        .map(|(f, d)| match d {
            None => f.to_physical(),
            Some(j) => spectral_derivative(f, Symbol::Gradient(*j)).to_physical(),
        })
        .collect();
    let mut take = || out.remove(0);
    let phi = take();
    let grad_phi = [take(), take(), take()];
    let mut u: [Vec<T>; 3] = Default::default();
    let mut grad_u: [[Vec<T>; 3]; 3] = Default::default();
    for i in 0..3 {
        u[i] = take();
        grad_u[i] = [take(), take(), take()];
    }
    let mut v: [Vec<T>; 3] = Default::default();
    let mut grad_v: [[Vec<T>; 3]; 3] = Default::default();
    for i in 0..3 {
        v[i] = take();
        grad_v[i] = [take(), take(), take()];
    }
    PhysicalState { phi, u, v, grad_phi, grad_u, grad_v }
}

fn to_spectral<T: Real>(state: &State<T>, samples: Vec<T>, dealias: bool) -> SpectralField<T> {
    let mut f = SpectralField::from_physical(state.grid(), &samples);
    if dealias {
        dealias_in_place(&mut f);
    }
    f
}

/// Nonlinear terms plus `max |phi|` over the physical grid.
pub(crate) fn nonlinear_rhs_internal<T: Real>(state: &State<T>, opts: &NonlinearOptions) -> (NonlinearTerms<T>, T) {
    let p = physical_state(state);
    let n = p.phi.len();
    let c = state.c;
    let phi_sup = p.phi.iter().fold(T::zero(), |m, x| m.max(x.abs()));

    let f1: Vec<T> = (0..n).map(|x| -(0..3).fold(T::zero(), |s, j| s + p.u[j][x] * p.grad_phi[j][x])).collect();
    let mut f2: [Vec<T>; 3] = Default::default();
    let mut w: [Vec<T>; 3] = Default::default();
    for i in 0..3 {
        f2[i] = (0..n).map(|x| -(0..3).fold(T::zero(), |s, j| s + p.u[j][x] * p.grad_u[i][j][x])).collect();
        w[i] = (0..n)
            .map(|x| {
                let adv = (0..3).fold(T::zero(), |s, j| s + p.v[j][x] * p.grad_v[i][j][x]);
                let drag = c * opts.exp_mode.expm1(p.phi[x]) * (p.u[i][x] - p.v[i][x]);
                drag - adv
            })
            .collect();
    }
    let [f2a, f2b, f2c] = f2;
    let [wa, wb, wc] = w;
    let mut fields: Vec<SpectralField<T>> = vec![f1, f2a, f2b, f2c, wa, wb, wc]
        .into_par_iter()
        .map(|s| to_spectral(state, s, opts.dealias))
        .collect();
    let w3: VectorField<T> = [fields.remove(4), fields.remove(4), fields.remove(4)];
    let mut f3 = leray_project(&w3);
    for f in f3.iter_mut() {
        f.symmetrize();
    }
    let f1 = fields.remove(0);
    let f2 = [fields.remove(0), fields.remove(0), fields.remove(0)];
    (NonlinearTerms { f1, f2, f3 }, phi_sup)
}

/// Nonlinear terms with dealiasing and full-accuracy `e^phi - 1`.
pub fn nonlinear_rhs<T: Real>(state: &State<T>) -> NonlinearTerms<T> {
    nonlinear_rhs_internal(state, &NonlinearOptions::default()).0
}

pub fn nonlinear_rhs_with<T: Real>(state: &State<T>, opts: &NonlinearOptions) -> NonlinearTerms<T> {
    nonlinear_rhs_internal(state, opts).0
}

impl<T: Real> NonlinearTerms<T> {
    /// Packs the terms into a [`State`] shell so they can be propagated.
    pub fn into_state(self, t: T, c: T) -> State<T> {
        State { phi: self.f1, u: self.f2, v: self.f3, t, c }
    }
}
