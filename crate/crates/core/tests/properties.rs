use std::f64::consts::PI;

use proptest::prelude::*;

use flamefront::bifurcation::{kernel_cubic, nonlinear_bifurcation_alpha};
use flamefront::geometry::{min_nonadjacent_gap, reconstruct_curve};
use flamefront::model::{
    dispersion_linear, length_from_theta, residual, unstable_modes, WaveParams,
};
use flamefront::spectral::{self, ThetaProfile};
use flamefront::ModelKind;

fn even_nx() -> impl Strategy<Value = usize> {
    (4usize..=40).prop_map(|h| 2 * h)
}

fn sine_series(max_modes: usize, scale: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-scale..scale, 1..=max_modes)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn values_survive_round_trip(nx in even_nx(), seed in prop::collection::vec(-5.0f64..5.0, 80)) {
        let vals = seed[..nx].to_vec();
        let p = ThetaProfile::from_values(vals.clone()).unwrap();
        let back = spectral::inverse(p.coeffs());
        for (a, b) in vals.iter().zip(&back) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        let e_grid = vals.iter().map(|v| v * v).sum::<f64>() / nx as f64;
        let e_modes: f64 = p.coeffs().iter().map(|c| c.norm_sqr()).sum();
        prop_assert!((e_grid - e_modes).abs() <= 1e-12 * e_grid.max(1.0));
    }

    #[test]
    fn derivative_of_sine_series_is_exact(b in sine_series(6, 1.0)) {
        let nx = 32;
        let p = ThetaProfile::from_sine_coeffs(nx, &b).unwrap();
        let d = spectral::deriv(&p, 1).unwrap();
        for (j, s) in spectral::grid_points(nx).iter().enumerate() {
            let expect: f64 = b.iter().enumerate().map(|(i, bk)| bk * (i + 1) as f64 * ((i + 1) as f64 * s).cos()).sum();
            prop_assert!((d.values()[j] - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn length_never_below_period(b in sine_series(5, 0.8)) {
        let p = ThetaProfile::from_sine_coeffs(64, &b).unwrap();
        if let Ok(l) = length_from_theta(&p) {
            prop_assert!(l >= 2.0 * PI * (1.0 - 1e-15));
        }
    }

    #[test]
    fn residual_of_odd_profile_is_even(b in sine_series(5, 0.3), alpha in -3.5f64..20.0, beta in 0.5f64..2.0) {
        let nx = 64;
        let p = ThetaProfile::from_sine_coeffs(nx, &b).unwrap();
        let params = WaveParams::for_profile(&p, alpha, beta).unwrap();
        for kind in [ModelKind::Linear, ModelKind::Nonlinear] {
            let r = residual(&p, &params, kind);
            let scale = r.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for j in 1..nx {
                prop_assert!((r[j] - r[nx - j]).abs() <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn resample_up_and_down_is_identity(b in sine_series(7, 1.0)) {
        let p = ThetaProfile::from_sine_coeffs(16, &b).unwrap();
        let q = p.resample(48).unwrap().resample(16).unwrap();
        for (a, c) in p.values().iter().zip(q.values()) {
            prop_assert!((a - c).abs() < 1e-13);
        }
    }

    #[test]
    fn gap_matches_independent_scan(b in sine_series(3, 1.2)) {
        let p = ThetaProfile::from_sine_coeffs(48, &b).unwrap();
        if let Ok(c) = reconstruct_curve(&p) {
            let n = c.x.len() - 1;
            let mut best = f64::INFINITY;
            for i in 0..n {
                for j in 0..n {
                    let cyc = (i + n - j) % n;
                    if cyc < 2 || cyc > n - 2 {
                        continue;
                    }
                    for m in [-1.0, 0.0, 1.0] {
                        best = best.min(((c.x[i] - c.x[j] - 2.0 * PI * m).powi(2) + (c.y[i] - c.y[j]).powi(2)).sqrt());
                    }
                }
            }
            let gap = min_nonadjacent_gap(&c);
            prop_assert!((gap - best).abs() <= 1e-12 * best);
        }
    }

    #[test]
    fn unstable_modes_are_exactly_the_growing_ones(alpha in -10.0f64..200.0) {
        let modes = unstable_modes(alpha);
        for k in 1..=20u32 {
            let grows = dispersion_linear(alpha, k as f64) > 0.0;
            prop_assert_eq!(grows, modes.contains(&k));
        }
    }

    #[test]
    fn nonlinear_root_brackets_sign_change(k0 in 1u32..2000) {
        let a = nonlinear_bifurcation_alpha(k0).unwrap();
        prop_assert!(a > -4.0 && a < -3.0);
        let (lo, hi) = (a - 1e-12, a + 1e-12);
        prop_assert!(kernel_cubic(lo, k0) >= 0.0 && kernel_cubic(hi, k0) <= 0.0);
    }
}
