use std::f64::consts::PI;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use dragflow::diagnostics::norms::{difference_norm, vector_gradient_norm};
use dragflow::initial_data::{generic_gaussian, lower_bound_profiles, DataSpec};
use dragflow::kernel::green::{admissible_projector, matmul, max_entry_diff};
use dragflow::kernel::radial::Component;
use dragflow::kernel::{
    apply_propagator, eigenvalues, green_hat, matrix_exponential_oracle, mode_ode_oracle, radial_norms, ProfileSet,
    RadialOptions, RadialProfile,
};
use dragflow::spectral::{build_grid, divergence_residual};
use dragflow::State64;

#[test]
fn low_frequency_eigenvalues() {
    let e = eigenvalues(0.01f64, 1.0);
    assert!((e.lambda1.re + 1e-4).abs() <= 2e-8);
    assert!((e.lambda3 + 5e-5).abs() <= 2e-8);
}

#[test]
fn two_oracles_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let xi = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        let t = rng.gen_range(0.0..4.0);
        let c = rng.gen_range(0.3..3.0);
        let a = mode_ode_oracle(xi, t, c).unwrap();
        let b = matrix_exponential_oracle(xi, t, c);
        assert!(max_entry_diff(&a, &b) <= 1e-9);
    }
}

#[test]
fn zero_frequency_keeps_mean_density() {
    for t in [0.5, 3.0, 20.0] {
        let g = green_hat([0.0; 3], t, 1.5);
        assert!((g[0][0] - Complex::new(1.0, 0.0)).norm() <= 1e-15);
        for k in 1..7 {
            assert!(g[0][k].norm() <= 1e-15);
        }
    }
}

#[test]
fn green_preserves_solenoidal_sector() {
    let xi = [0.3, -1.2, 0.7];
    let g = matmul(&green_hat(xi, 2.0, 1.0), &admissible_projector(xi));
    for col in 0..7 {
        let dot: Complex<f64> = (0..3).map(|a| g[4 + a][col] * xi[a]).sum();
        assert!(dot.norm() <= 1e-15);
    }
}

fn plain_energy(s: &State64) -> f64 {
    s.phi.norm_l2().powi(2) + vector_gradient_norm(&s.u, 0).powi(2) + vector_gradient_norm(&s.v, 0).powi(2) / s.c
}

#[test]
fn linear_energy_identity() {
    let grid = build_grid::<f64>(16, 16.0 * PI).unwrap();
    let spec = DataSpec { amplitude: 5e-2, c: 2.0, ..DataSpec::default() };
    let data = generic_gaussian(&spec, &grid).unwrap().state;
    let t = 1.5;
    let mut residuals = Vec::new();
    for h in [1e-2, 5e-3] {
        let plus = plain_energy(&apply_propagator(&data, t + h).unwrap());
        let minus = plain_energy(&apply_propagator(&data, t - h).unwrap());
        let mid = apply_propagator(&data, t).unwrap();
        let diss = 2.0 * difference_norm(&mid, 0).powi(2) + 2.0 / mid.c * vector_gradient_norm(&mid.v, 1).powi(2);
        residuals.push(((plus - minus) / (2.0 * h) + diss).abs() / diss);
    }
    assert!(residuals[0] <= 1e-3, "{residuals:?}");
    // central differences: halving h quarters the residual
    let ratio = residuals[0] / residuals[1];
    assert!((ratio - 4.0).abs() <= 0.5, "{residuals:?}");
}

#[test]
fn propagation_keeps_v_divergence_free() {
    let grid = build_grid::<f64>(16, 16.0 * PI).unwrap();
    let data = generic_gaussian(&DataSpec::default(), &grid).unwrap().state;
    let s = apply_propagator(&data, 7.0).unwrap();
    assert!(divergence_residual(&s.v) <= 1e-13);
    assert_eq!(s.t, 7.0);
}

fn gaussian_set() -> ProfileSet {
    let mut set = ProfileSet::gaussian(1.0, 1.0);
    set.u_polarization = [0.0, 0.6, 0.8];
    set.v_polarization = [1.0, 0.0, 0.0];
    set
}

/// `(2 pi)^-3 h^3 sum |xi|^{2j} |G(t, xi) U0(xi)|^2` over a cubic lattice.
fn lattice_norm(set: &ProfileSet, t: f64, j: u32, c: f64, h: f64, half: usize) -> f64 {
    let wu = set.u_polarization;
    let wv = set.v_polarization;
    let side = 2 * half + 1;
    let total: f64 = (0..side * side)
        .into_par_iter()
        .map(|ab| {
            let (a, b) = (ab / side, ab % side);
            let mut acc = 0.0;
            for k in 0..side {
                let xi = [
                    (a as f64 - half as f64) * h,
                    (b as f64 - half as f64) * h,
                    (k as f64 - half as f64) * h,
                ];
                let r = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
                if r == 0.0 {
                    continue;
                }
                let hat = xi.map(|x| x / r);
                let proj = |w: [f64; 3]| {
                    let d = hat[0] * w[0] + hat[1] * w[1] + hat[2] * w[2];
                    [w[0] - d * hat[0], w[1] - d * hat[1], w[2] - d * hat[2]]
                };
                let (pu, pv) = (proj(wu), proj(wv));
                let (av, bv, su, sv) =
                    (set.phi.value(r), set.u_curl_free.value(r), set.u_solenoidal.value(r), set.v.value(r));
                let mut z = [Complex::new(0.0, 0.0); 7];
                z[0] = Complex::new(av, 0.0);
                for i in 0..3 {
                    z[1 + i] = Complex::new(pu[i] * su, -hat[i] * bv);
                    z[4 + i] = Complex::new(pv[i] * sv, 0.0);
                }
                let g = green_hat(xi, t, c);
                let mut e = 0.0;
                for row in &g {
                    let y: Complex<f64> = row.iter().zip(&z).map(|(g, z)| g * z).sum();
                    e += y.norm_sqr();
                }
                acc += e * r.powi(2 * j as i32);
            }
            acc
        })
        .sum();
    (total * h.powi(3) / (2.0 * PI).powi(3)).sqrt()
}

#[test]
fn radial_norm_matches_lattice_sum() {
    let set = gaussian_set();
    for (j, c) in [(0u32, 1.0), (1, 0.5)] {
        let quad = radial_norms(&set, 100.0, j, c, &RadialOptions::default()).unwrap().total;
        let brute = lattice_norm(&set, 100.0, j, c, 0.01, 60);
        assert!((quad - brute).abs() <= 5e-3 * brute, "j={j}: {quad} vs {brute}");
    }
}

#[test]
fn radial_norm_at_time_zero() {
    let set = gaussian_set();
    let quad = radial_norms(&set, 0.0, 0, 1.0, &RadialOptions::default()).unwrap();
    let brute = lattice_norm(&set, 0.0, 0, 1.0, 0.1, 60);
    // the lattice sum only sees the direction jump at the origin to O(h^3)
    assert!((quad.total - brute).abs() <= 1e-3 * brute, "{} vs {brute}", quad.total);
}

#[test]
fn cone_channel_is_bounded_by_full_norm() {
    let set = lower_bound_profiles(1.0, 0.25).unwrap();
    assert!(set.u_solenoidal.is_zero());
    let opts = RadialOptions { cone_half_angle: Some(0.5), ..RadialOptions::default() };
    for t in [0.0, 10.0, 1e3] {
        let n = radial_norms(&set, t, 0, 1.0, &opts).unwrap();
        assert!(n.v_outside_cone <= n.v && n.v_outside_cone > 0.0);
    }
}

#[test]
fn non_integrable_profile_is_rejected() {
    let bad = RadialProfile::gaussian(Component::Density, 1.0, 1.0, -3.0);
    let set = ProfileSet::density_only(bad);
    assert!(radial_norms(&set, 1.0, 0, 1.0, &RadialOptions::default()).is_err());
}
