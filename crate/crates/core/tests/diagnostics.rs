use std::f64::consts::PI;

use num_complex::Complex;

use dragflow::diagnostics::energy::TimeWeightedEnergy;
use dragflow::diagnostics::fit::{decay_fit, fit_power_law};
use dragflow::diagnostics::norms::{gradient_norm, linf_norm, split_norms};
use dragflow::diagnostics::series::{log_spaced, ChannelKey, DecaySeries, CSV_HEADER};
use dragflow::diagnostics::{energy_functionals, momentum, sobolev_norms};
use dragflow::initial_data::{generic_gaussian, DataSpec};
use dragflow::kernel::apply_propagator;
use dragflow::spectral::{build_grid, FrequencyCutoff};
use dragflow::{Error, State64};

fn data(amplitude: f64, seed: u64, c: f64) -> State64 {
    let grid = build_grid::<f64>(16, 16.0 * PI).unwrap();
    let spec = DataSpec { amplitude, seed, c, ..DataSpec::default() };
    generic_gaussian(&spec, &grid).unwrap().state
}

#[test]
fn energy_functional_limits() {
    let s = data(5e-2, 1, 1.0);
    let e = energy_functionals(&s, 3, 0.0).unwrap();
    assert_eq!(e.lyapunov, e.plain_energy);
    assert_eq!(e.dissipation, e.plain_dissipation);
    assert_eq!(e.e_js.len(), 4);

    let z = State64::zeros(s.grid(), 1.0);
    let e = energy_functionals(&z, 3, 0.05).unwrap();
    assert_eq!((e.hs_energy, e.lyapunov, e.dissipation), (0.0, 0.0, 0.0));

    for seed in 0..5 {
        let e = energy_functionals(&data(5e-2, seed, 0.7), 3, 0.1).unwrap();
        assert!(e.equivalence_holds());
    }
}

#[test]
fn sobolev_order_limit() {
    let s = data(1e-2, 0, 1.0);
    assert_eq!(sobolev_norms(&s, 6).unwrap().len(), 7);
    assert!(matches!(sobolev_norms(&s, 7), Err(Error::Domain(_))));
}

#[test]
fn derivative_norms_are_log_convex() {
    let s = data(5e-2, 2, 1.0);
    for f in s.fields() {
        for j in 1..5 {
            let mid = gradient_norm(f, j).powi(2);
            assert!(mid <= gradient_norm(f, j - 1) * gradient_norm(f, j + 1) * (1.0 + 1e-12));
        }
    }
}

#[test]
fn single_mode_gradient_norm() {
    let grid = build_grid::<f64>(8, 2.0 * PI).unwrap();
    let mut s = State64::zeros(&grid, 1.0);
    let (i, m) = (grid.index_of([2, 0, 0]).unwrap(), grid.index_of([-2, 0, 0]).unwrap());
    s.phi.set(i, Complex::new(0.5, 0.0));
    s.phi.set(m, Complex::new(0.5, 0.0));
    // cos(2 x1): ||f|| = sqrt(L^3 / 2), one derivative multiplies by 2
    let l3 = (2.0 * PI).powi(3);
    assert!((gradient_norm(&s.phi, 0) - (l3 / 2.0).sqrt()).abs() <= 1e-12);
    assert!((gradient_norm(&s.phi, 1) - 2.0 * (l3 / 2.0).sqrt()).abs() <= 1e-12);
    assert!((linf_norm(&s.phi) - 1.0).abs() <= 1e-14);
}

#[test]
fn sharp_split_is_orthogonal() {
    let s = data(5e-2, 3, 1.0);
    let cut = FrequencyCutoff::sharp(0.4, 1.0).unwrap();
    for j in 0..3 {
        let (lo, hi) = split_norms(&s, &cut, j);
        let total: f64 = s.fields().iter().map(|f| gradient_norm(f, j).powi(2)).sum();
        assert!((lo * lo + hi * hi - total).abs() <= 1e-12 * total);
    }
}

#[test]
fn linear_flow_keeps_mean_momentum() {
    let s = data(5e-2, 4, 2.0);
    let mean = |s: &State64, a: usize| s.u[a].get(0) * s.c + s.v[a].get(0);
    let later = apply_propagator(&s, 9.0).unwrap();
    for a in 0..3 {
        assert!((mean(&s, a) - mean(&later, a)).norm() <= 1e-15);
    }
    // generated data carries a nonzero mean by construction
    assert!(momentum(&s).iter().any(|m| m.abs() > 0.0));
}

#[test]
fn time_weighted_sup_is_monotone() {
    let mut m = TimeWeightedEnergy::new();
    let mut last = 0.0;
    for (t, norm) in [(0.0, 1.0), (1.0, 0.2), (3.0, 0.5), (10.0, 0.01)] {
        let v = m.update(t, norm);
        assert!(v >= last);
        last = v;
    }
    assert_eq!(m.value(), 0.5 * 4.0f64.powf(0.75));
}

fn series() -> DecaySeries {
    let mut s = DecaySeries::new();
    s.mark_signed("momentum");
    for t in log_spaced(1.0, 1e3, 30) {
        s.push(
            t,
            &[
                (ChannelKey::new("total", 0), 2.0 * (1.0 + t).powf(-0.75)),
                (ChannelKey::new("total", 1), (1.0 + t).powf(-1.25) / 3.0),
                (ChannelKey::new("momentum", 2), -1e-3 / (1.0 + t)),
            ],
        )
        .unwrap();
    }
    s
}

#[test]
fn fit_is_idempotent() {
    let s = series();
    let key = ChannelKey::new("total", 1);
    let f = decay_fit(&s, &key, (10.0, 1e3)).unwrap();
    let refit: Vec<f64> = s.times().iter().map(|t| (f.intercept + f.slope * (1.0 + t).ln()).exp()).collect();
    let (slope, _, residual) = fit_power_law(s.times(), &refit, (10.0, 1e3)).unwrap();
    assert!((slope - f.slope).abs() <= 1e-12);
    assert!(residual <= 1e-12);
}

#[test]
fn csv_is_deterministic_and_readable() {
    let s = series();
    let (mut a, mut b) = (Vec::new(), Vec::new());
    s.write_csv(&mut a).unwrap();
    s.write_csv(&mut b).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a.clone()).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# dragflow "));
    assert_eq!(lines.next().unwrap(), CSV_HEADER);
    assert_eq!(text.lines().count(), 2 + 30 * 3);
    let back = DecaySeries::read_csv(&a[..]).unwrap();
    assert_eq!(back.times().len(), 30);
    let key = ChannelKey::new("momentum", 2);
    for (x, y) in back.channel(&key).unwrap().iter().zip(s.channel(&key).unwrap()) {
        assert!((x - y).abs() <= 1e-14 * y.abs());
    }
}

#[test]
fn negative_norms_are_rejected() {
    let mut s = DecaySeries::new();
    assert!(s.push(0.0, &[(ChannelKey::new("total", 0), -1.0)]).is_err());
}
