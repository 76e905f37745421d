use std::f64::consts::PI;

use proptest::prelude::*;
use tjchain::scaling::{delta_e_series, fit_power_law, EnergySource, ScalingSeries};
use tjchain::BoundaryParams;

#[test]
fn delta_e_is_positive_and_decreasing_for_tilted_fields() {
    let p = BoundaryParams::with_tilt(-0.413, 0.613, PI / 3.0).unwrap();
    let points = delta_e_series(&[4, 6, 8], &p, EnergySource::Ed).unwrap();
    assert!(points.iter().all(|q| q.delta_e > 0.0));
    assert!(points.windows(2).all(|w| w[1].delta_e < w[0].delta_e));
    assert!(points.iter().all(|q| (q.delta_e - (q.energy - q.energy_hom).abs()).abs() < 1e-12));
}

#[test]
fn parallel_fields_give_no_inhomogeneous_contribution() {
    let p = BoundaryParams::with_tilt(0.413, 2.413, 0.0).unwrap();
    for q in delta_e_series(&[4, 6], &p, EnergySource::Ed).unwrap() {
        assert!(q.delta_e < 1e-8, "L = {}: {}", q.len, q.delta_e);
    }
}

#[test]
fn bae_and_ed_sources_agree_on_small_chains() {
    let p = BoundaryParams::with_tilt(0.413, -3.0, PI / 3.0).unwrap();
    let ed = delta_e_series(&[2, 4], &p, EnergySource::Ed).unwrap();
    let bae = delta_e_series(&[2, 4], &p, EnergySource::Bae).unwrap();
    for (a, b) in ed.iter().zip(&bae) {
        assert!((a.energy - b.energy).abs() < 1e-8);
    }
}

fn series() -> impl Strategy<Value = Vec<(f64, f64)>> {
    (0.01f64..2.0, -2.0f64..0.0, prop::collection::vec(-0.05f64..0.05, 6)).prop_map(|(g, b, noise)| {
        (0..6).map(|k| {
            let l = 4.0 + 2.0 * k as f64;
            (l, g * l.powf(b) * noise[k].exp())
        })
        .collect()
    })
}

proptest! {
    #[test]
    fn rescaling_values_rescales_only_the_amplitude(pts in series(), c in 0.1f64..10.0) {
        let a = fit_power_law(&pts).unwrap();
        let scaled: Vec<(f64, f64)> = pts.iter().map(|&(l, d)| (l, c * d)).collect();
        let b = fit_power_law(&scaled).unwrap();
        prop_assert!((b.beta - a.beta).abs() < 1e-9);
        prop_assert!((b.gamma / a.gamma - c).abs() < 1e-9 * c);
        prop_assert!((b.r_squared - a.r_squared).abs() < 1e-9);
    }

    #[test]
    fn rescaling_sizes_keeps_the_exponent(pts in series(), c in 0.5f64..4.0) {
        let a = fit_power_law(&pts).unwrap();
        let b = fit_power_law(&pts.iter().map(|&(l, d)| (c * l, d)).collect::<Vec<_>>()).unwrap();
        prop_assert!((b.beta - a.beta).abs() < 1e-9);
    }

    #[test]
    fn exact_power_laws_survive_subsampling(g in 0.01f64..2.0, b in -2.0f64..0.0, skip in 0usize..3) {
        let pts: Vec<(usize, f64)> = (2..=12).step_by(2).map(|l| (l, g * (l as f64).powf(b))).collect();
        let sub: Vec<(usize, f64)> = pts.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, p)| *p).collect();
        let fit = ScalingSeries::new(sub).unwrap().fit.unwrap();
        prop_assert!((fit.beta - b).abs() < 1e-9);
        prop_assert!((fit.gamma - g).abs() < 1e-9 * g.max(1.0));
    }
}
