use std::f64::consts::{LN_2, PI};

use proptest::prelude::*;
use statrs::function::gamma::digamma;
use tjchain::bethe::{solve_log_bae_regime1, QuantumNumbers};
use tjchain::continuum::quadrature::{composite, half_line};
use tjchain::continuum::*;
use tjchain::{BoundaryParams, Error, Regime};

const INF: f64 = f64::INFINITY;

fn params(xi: f64, xi_prime: f64) -> BoundaryParams {
    BoundaryParams::with_tilt(xi, xi_prime, PI / 3.0).unwrap()
}

fn regime_sets() -> Vec<(Regime, BoundaryParams)> {
    vec![
        (Regime::I, params(1.9, 0.5)),
        (Regime::II, params(0.9, 1.123)),
        (Regime::III, params(-0.9, -0.9)),
        (Regime::IV, params(-0.9, 2.9)),
    ]
}

/// `β(a) = ½[ψ((a+1)/2) − ψ(a/2)]`.
fn beta_digamma(a: f64) -> f64 {
    0.5 * (digamma(0.5 * (a + 1.0)) - digamma(0.5 * a))
}

#[test]
fn kernel_values_and_identities() {
    assert!((kernel_a(2.0, 0.0) - 1.0 / PI).abs() < 1e-15);
    for &m in &[0.3, 1.0, 2.0, 5.5] {
        for &x in &[-3.0, -0.2, 0.0, 0.7, 4.0] {
            assert!((kernel_theta(m, -x) + kernel_theta(m, x)).abs() < 1e-15);
            let h = 1e-5;
            let fd = (kernel_theta(m, x + h) - kernel_theta(m, x - h)) / (2.0 * h);
            assert!((fd / (2.0 * PI) - kernel_a(m, x)).abs() < 1e-8 * kernel_a(m, x).max(1.0));
        }
        let k = KernelSpec::new(m).unwrap();
        assert!((k.upper_tail(-1e12) - 1.0).abs() < 1e-12);
    }
    assert!(KernelSpec::new(0.0).is_err());
}

#[test]
fn kernel_fourier_transform_by_quadrature() {
    let rule = composite(0.0, 2000.0, 0.5, 10);
    let ft = 2.0 * rule.integrate(|x| kernel_a(2.0, x) * x.cos());
    assert!((ft - (-1f64).exp()).abs() < 1e-6, "{ft}");
    assert!((KernelSpec::new(2.0).unwrap().fourier(1.0) - (-1f64).exp()).abs() < 1e-15);
}

#[test]
fn bulk_density_at_half_filling() {
    let (_, p) = regime_sets()[0];
    let d = solve_half_filling(Regime::I, &p, INF, &GridSpec::default()).unwrap();
    assert!((d.eval(0.0) - LN_2 / PI).abs() < 1e-9);
    assert!((d.filling() - 0.5).abs() < 1e-10);
    assert!(d.rho.iter().all(|&r| r > 0.0));
    assert!(d.grid.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn bulk_energy_is_minus_two_ln_two() {
    let (_, p) = regime_sets()[0];
    let e = ground_energy(Regime::I, &p, 1.0, INF, &GridSpec::default()).unwrap();
    assert!((e.per_site + 2.0 * LN_2).abs() < 1e-9, "{}", e.per_site);
    assert_eq!(find_q0(Regime::I, &p, 1.0, INF, &GridSpec::default()).unwrap(), 0.0);
}

#[test]
fn finite_size_half_filling_density_matches_fourier_forms() {
    let grid = GridSpec::default();
    for (regime, p) in regime_sets() {
        for len in [INF, 10.0, 64.0] {
            let d = solve_half_filling(regime, &p, len, &grid).unwrap();
            let worst = (0..=50)
                .map(|k| {
                    let x = 0.1 * k as f64;
                    (d.eval(x) - halffilling_density_regular(regime, &p, x, len).unwrap()).abs()
                })
                .fold(0.0, f64::max);
            assert!(worst <= 1e-6, "{regime:?} L = {len}: {worst:e}");
            // the regular part plus the hole atom integrates to the transform at w = 0
            let f0 = halffilling_density_fourier(regime, &p, 0.0, len).unwrap();
            assert!((d.filling() - f0).abs() < 1e-9);
        }
    }
}

#[test]
fn fourier_forms_limits() {
    let p = params(1.0, 0.0);
    assert!((halffilling_density_fourier(Regime::I, &p, 0.0, 7.0).unwrap() - 0.5).abs() < 1e-15);
    for (regime, p) in regime_sets() {
        for &w in &[0.0f64, 0.4, 2.0] {
            let bulk = (-w).exp() / (1.0 + (-w).exp());
            let far = halffilling_density_fourier(regime, &p, w, 1e12).unwrap();
            assert!((far - bulk).abs() < 1e-11);
            assert_eq!(halffilling_density_fourier(regime, &p, w, INF).unwrap(), bulk);
        }
    }
}

#[test]
fn fourier_filling_is_half_minus_order_one_over_len() {
    let (regime, p) = regime_sets()[0];
    for len in [8.0, 32.0, 128.0] {
        let f = halffilling_density_fourier(regime, &p, 0.0, len).unwrap();
        assert!((f - 0.5).abs() <= 1.0 / len);
    }
}

#[test]
fn solved_density_satisfies_equation_off_grid() {
    let grid = GridSpec::default();
    let fine = half_line(0.0, 40.0, 0.5, 12, 64);
    for (regime, p) in regime_sets() {
        let d = solve_density(regime, &p, 0.8, 20.0, &grid).unwrap();
        let fine_shifted = half_line(0.8, 40.0, 0.5, 12, 64);
        assert!(d.residual_on(&fine_shifted, 20.0) <= 1e-8, "{regime:?}");
        let h = solve_half_filling(regime, &p, 20.0, &grid).unwrap();
        assert!(h.residual_on(&fine, 20.0) <= 1e-8, "{regime:?}");
    }
}

#[test]
fn filling_decreases_with_q0() {
    let grid = GridSpec::default();
    for (regime, p) in regime_sets() {
        for len in [INF, 30.0] {
            let fillings: Vec<f64> = (0..10)
                .map(|k| solve_density(regime, &p, 0.5 * k as f64, len, &grid).unwrap().filling())
                .collect();
            assert!(fillings.windows(2).all(|w| w[1] < w[0]), "{regime:?} {fillings:?}");
        }
    }
}

#[test]
fn find_q0_meets_filling_target() {
    let grid = GridSpec::default();
    for (regime, p) in regime_sets() {
        for (n, len) in [(0.3, INF), (0.75, 40.0), (1.0, 40.0)] {
            let q0 = find_q0(regime, &p, n, len, &grid).unwrap();
            let d = density_at_filling(regime, &p, n, len, &grid).unwrap();
            assert_eq!(d.q0, q0);
            let target = filling_target(regime, n, len).unwrap();
            assert!((d.filling() - target).abs() <= 1e-8, "{regime:?} n = {n}");
            assert!(d.rho.iter().all(|&r| r >= 0.0));
        }
    }
}

#[test]
fn empty_band_pushes_q0_to_cutoff() {
    let (regime, p) = regime_sets()[0];
    let grid = GridSpec::default();
    let q_small = find_q0(regime, &p, 0.05, INF, &grid).unwrap();
    assert!(q_small > 10.0, "{q_small}");
    assert!(matches!(find_q0(regime, &p, 0.001, INF, &grid), Err(Error::UnreachableFilling { .. })));
    assert!(find_q0(regime, &p, 0.0, INF, &grid).is_err());
    assert!(find_q0(regime, &p, 1.2, INF, &grid).is_err());
}

#[test]
fn regime_one_energy_equals_two_string_form() {
    let (regime, p) = regime_sets()[0];
    let n = 0.7;
    let grid = GridSpec::default();
    let d = density_at_filling(regime, &p, n, INF, &grid).unwrap();
    let printed = -2.0 * d.moment(|x| 2.0 - 1.0 / (1.0 + x * x));
    let two_string = -2.0 * n + d.moment(|x| 2.0 / (1.0 + x * x));
    assert!((printed - two_string).abs() < 1e-8);
    let e = ground_energy(regime, &p, n, INF, &grid).unwrap();
    assert!((e.per_site - printed).abs() < 1e-14);
}

#[test]
fn report_components_sum_to_total() {
    for (regime, p) in regime_sets() {
        let e = ground_energy(regime, &p, 0.8, 25.0, &GridSpec::default()).unwrap();
        assert!((e.total - (e.bulk + e.boundary_string + e.hole)).abs() < 1e-12);
        assert_eq!(e.hole, 0.0);
        assert!((e.per_site * 25.0 - e.total).abs() < 1e-10);
        assert_eq!(e.boundary_string, boundary_string_energy(regime, &p));
    }
    // 1/(1.123 − 1.261129)
    let c = boundary_string_energy(Regime::II, &params(0.9, 1.123));
    assert!((c + 7.239609).abs() < 1e-6, "{c}");
    let p = params(-0.9, 2.9);
    let both = 1.0 / (-0.9 - 0.81) + 1.0 / (2.9 - 2.9 * 2.9);
    assert!((boundary_string_energy(Regime::IV, &p) - both).abs() < 1e-15);
}

#[test]
fn energy_curve_is_decreasing_and_convex() {
    let (regime, p) = regime_sets()[0];
    let ns: Vec<f64> = (1..=10).map(|k| 0.1 * k as f64).collect();
    let curve = energy_vs_filling(regime, &p, INF, &ns, &GridSpec::default()).unwrap();
    assert!(curve.windows(2).all(|w| w[1].1 < w[0].1), "{curve:?}");
    assert!(curve.windows(3).all(|w| w[0].1 + w[2].1 - 2.0 * w[1].1 > 0.0), "{curve:?}");
}

#[test]
fn series_oracle_matches_digamma() {
    for &a in &[0.5, 1.0, 1.5, 2.0 - 0.5, 1.0 + 1.9, 2.9, 3.9, 17.0] {
        assert!((alternating_beta(a).unwrap() - beta_digamma(a)).abs() < 1e-12, "a = {a}");
    }
    assert!((alternating_beta(1.0).unwrap() - LN_2).abs() < 1e-12);
    assert!((alternating_beta(0.5).unwrap() - PI / 2.0).abs() < 1e-12);
}

#[test]
fn surface_energy_quadrature_matches_series() {
    let grids: [(Regime, [(f64, f64); 5]); 4] = [
        (Regime::I, [(1.9, 0.5), (0.1, -2.0), (0.5, 0.9), (3.0, 0.0), (1.0, -0.5)]),
        (Regime::II, [(0.9, 1.123), (0.2, 1.5), (2.0, 3.0), (1.0, 1.05), (0.5, 2.2)]),
        (Regime::III, [(-0.9, -0.9), (-0.1, 0.5), (-2.0, -3.0), (-0.5, 0.95), (-1.5, 0.0)]),
        (Regime::IV, [(-0.9, 2.9), (-0.1, 1.1), (-2.0, 1.5), (-0.5, 4.0), (-1.2, 2.0)]),
    ];
    for (regime, set) in grids {
        for (xi, xp) in set {
            let p = params(xi, xp);
            let quad = surface_energy(regime, &p).unwrap();
            let series = surface_energy_series(regime, &p).unwrap();
            assert!((quad - series).abs() <= 1e-10, "{regime:?} ({xi}, {xp}): {quad} vs {series}");
        }
    }
}

#[test]
fn surface_energy_from_density_matches_printed_formula() {
    for (regime, p) in regime_sets() {
        let e = ground_energy(regime, &p, 1.0, 12.0, &GridSpec::default()).unwrap();
        let printed = surface_energy(regime, &p).unwrap();
        assert!((e.surface - printed).abs() < 1e-8, "{regime:?}: {} vs {printed}", e.surface);
    }
}

#[test]
fn grid_refinement_changes_surface_energy_below_1e8() {
    let grid = GridSpec::default();
    for (regime, p) in regime_sets() {
        let coarse = ground_energy(regime, &p, 1.0, 12.0, &grid).unwrap().surface;
        let fine = ground_energy(regime, &p, 1.0, 12.0, &grid.refined()).unwrap().surface;
        assert!((coarse - fine).abs() <= 1e-8, "{regime:?}: {:e}", coarse - fine);
    }
}

#[test]
fn surface_energy_rejects_wrong_regime() {
    let p = params(-0.5, 0.5);
    assert!(matches!(surface_energy(Regime::I, &p), Err(Error::RegimeMismatch(_))));
    assert!(surface_energy(Regime::III, &p).is_ok());
    assert!(solve_density(Regime::II, &p, 0.0, INF, &GridSpec::default()).is_err());
}

#[test]
fn invalid_grid_rejected() {
    let (regime, p) = regime_sets()[0];
    let g = GridSpec { lambda_max: 10.0, ..GridSpec::default() };
    assert!(solve_density(regime, &p, 0.0, INF, &g).is_err());
    assert!(solve_density(regime, &p, -0.1, INF, &GridSpec::default()).is_err());
}

#[test]
fn surface_curves_have_expected_shape() {
    let xs: Vec<f64> = (1..=30).map(|k| 0.1 * k as f64).collect();
    // regime (i): negative, decreasing in ξ, finite as ξ → 0⁺
    let c = surface_vs_parameter(Regime::I, &params(1.0, 0.5), SurfaceAxis::Xi, &xs).unwrap();
    assert!(c.iter().all(|r| r.1 < 0.0) && c.windows(2).all(|w| w[1].1 < w[0].1));
    // regime (ii): pole at ξ′ → 1⁺
    let xps: Vec<f64> = (1..=20).map(|k| 1.0 + 0.1 * k as f64).collect();
    let c = surface_vs_parameter(Regime::II, &params(0.9, 2.0), SurfaceAxis::XiPrime, &xps).unwrap();
    assert!(c.windows(2).all(|w| w[1].1 > w[0].1));
    let near = surface_energy(Regime::II, &params(0.9, 1.0 + 1e-6)).unwrap();
    assert!(near < -1e5);
    // regime (iii): pole at ξ → 0⁻
    let near = surface_energy(Regime::III, &params(-1e-6, -0.9)).unwrap();
    assert!(near < -1e5);
}

#[test]
fn curve_csv_has_header_and_twelve_digits() {
    let mut out = Vec::new();
    write_curve_csv(["n", "E_over_L"], &[(0.5, -1.0 / 3.0)], &mut out).unwrap();
    let s = String::from_utf8(out).unwrap();
    assert_eq!(s, "n,E_over_L\n5.00000000000e-1,-3.33333333333e-1\n");
}

#[test]
fn log_equation_centers_follow_continuum_density() {
    let len = 64;
    let p = params(1.9, 0.5);
    let centers = solve_log_bae_regime1(&QuantumNumbers::ground_state(len, len / 2).unwrap(), &p, len).unwrap();
    let mut centers: Vec<f64> = centers.into_iter().map(f64::abs).collect();
    centers.sort_by(f64::total_cmp);
    let d = solve_half_filling(Regime::I, &p, len as f64, &GridSpec::default()).unwrap();
    // cumulative distribution of the regular density on the half-line
    let total: f64 = d.weights.iter().zip(&d.rho).map(|(w, r)| w * r).sum();
    let cdf = |x: f64| composite(0.0, x, 0.25, 10).integrate(|y| d.eval(y)) / total;
    let m = centers.len() as f64;
    let ks = centers
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / m).abs().max((f - (i + 1) as f64 / m).abs())
        })
        .fold(0.0, f64::max);
    assert!(ks <= 0.05, "Kolmogorov distance {ks}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kernel_is_positive_even_and_normalized(m in 0.05f64..10.0, x in -50.0f64..50.0) {
        let k = KernelSpec::new(m).unwrap();
        prop_assert!(k.a(x) > 0.0);
        prop_assert!((k.a(x) - k.a(-x)).abs() < 1e-15);
        prop_assert!((k.upper_tail(x) + k.upper_tail(-x) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn series_recurrence(a in 0.05f64..20.0) {
        let lhs = alternating_beta(a).unwrap() + alternating_beta(a + 1.0).unwrap();
        prop_assert!((lhs - 1.0 / a).abs() < 1e-11);
    }

    #[test]
    fn quadrature_agrees_with_series_in_regime_one(xi in 0.01f64..4.0, xp in -4.0f64..0.99) {
        let p = params(xi, xp);
        let d = surface_energy(Regime::I, &p).unwrap() - surface_energy_series(Regime::I, &p).unwrap();
        prop_assert!(d.abs() < 1e-10);
    }

    #[test]
    fn quadrature_agrees_with_series_in_regime_four(xi in -4.0f64..-0.01, xp in 1.01f64..5.0) {
        let p = params(xi, xp);
        let d = surface_energy(Regime::IV, &p).unwrap() - surface_energy_series(Regime::IV, &p).unwrap();
        prop_assert!(d.abs() < 1e-10);
    }
}
