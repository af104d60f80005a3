use std::f64::consts::PI;

use proptest::prelude::*;
use splitkdv_core::logistic::{dt_admissible, flow_a, flow_b, LogisticFlowA, LogisticFlowB};
use splitkdv_core::spectral::{
    dealiased_product, derivative, l2_inner, sobolev_norm, PeriodicGrid, RealField,
};
use splitkdv_core::splitting::{
    extension_eval, godunov_step, run_splitting, traditional_extension_eval, SplitScheme, TimeGrid,
};

#[test]
fn godunov_step_on_logistic() {
    let v = godunov_step(&LogisticFlowA, &LogisticFlowB, &0.5, 0.1).unwrap();
    let expected = 0.5 / (1.0 - 0.05) * (-0.1f64).exp();
    assert_eq!(v, expected);
    assert!((v - 0.47623).abs() < 1e-5);
}

#[test]
fn reversed_order_differs_at_second_order_per_step() {
    let gap = |dt: f64| {
        let g = flow_a(flow_b(0.5, dt).unwrap(), dt);
        let r = flow_b(flow_a(0.5, dt), dt).unwrap();
        (g - r).abs()
    };
    for dt in [0.1, 0.05, 0.025] {
        let ratio = gap(dt) / gap(dt / 2.0);
        assert!((ratio - 4.0).abs() < 0.2, "{ratio}");
    }
}

#[test]
fn traditional_extension_midpoint_is_the_b_flow() {
    let dt = 0.1;
    let traj = run_splitting(
        &LogisticFlowA,
        &LogisticFlowB,
        0.5,
        &TimeGrid::new(1.0, dt).unwrap(),
        SplitScheme::Godunov,
    )
    .unwrap();
    for n in [0usize, 3, 9] {
        let mid = traj.grid().t(n) + 0.5 * dt;
        let v = traditional_extension_eval(&LogisticFlowA, &LogisticFlowB, &traj, mid).unwrap();
        let expected = flow_b(*traj.state(n), dt).unwrap();
        assert!(((v - expected) / expected).abs() < 1e-14);
        let end = traj.grid().t(n + 1);
        let a = traditional_extension_eval(&LogisticFlowA, &LogisticFlowB, &traj, end).unwrap();
        let b = extension_eval(&LogisticFlowA, &LogisticFlowB, &traj, end, end).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn runs_are_bitwise_deterministic() {
    let grid = PeriodicGrid::new(2.0 * PI, 64).unwrap();
    let u0 = RealField::from_fn(grid.clone(), |x| 0.3 * x.sin() + 0.1 * (3.0 * x).cos());
    let a = splitkdv_core::kdv::AiryFlow::new(grid.clone());
    let b = splitkdv_core::kdv::BurgersFlow::new(grid);
    let tg = TimeGrid::new(0.5, 0.05).unwrap();
    let r1 = run_splitting(&a, &b, u0.clone(), &tg, SplitScheme::Strang).unwrap();
    let r2 = run_splitting(&a, &b, u0, &tg, SplitScheme::Strang).unwrap();
    for ((_, x), (_, y)) in r1.states().iter().zip(r2.states()) {
        assert_eq!(x.values(), y.values());
    }
}

/// Direct evaluation of the truncated convolution `Σ_{p+q=m} f̂_p ĝ_q` for `|m| <= N/3`.
fn brute_force_product(f: &RealField, g: &RealField) -> RealField {
    let grid = f.grid().clone();
    let cut = grid.dealias_cutoff();
    let fs = f.to_spectrum();
    let gs = g.to_spectrum();
    let coeff = |s: &splitkdv_core::spectral::Spectrum, m: i64| {
        if m.abs() > cut {
            num_complex::Complex64::new(0.0, 0.0)
        } else {
            s.coeff(m).unwrap()
        }
    };
    let l = grid.length();
    RealField::from_fn(grid.clone(), |x| {
        let mut total = 0.0;
        for m in -cut..=cut {
            let mut c = num_complex::Complex64::new(0.0, 0.0);
            for p in -cut..=cut {
                let q = m - p;
                if q.abs() <= cut {
                    c += coeff(&fs, p) * coeff(&gs, q);
                }
            }
            let k = 2.0 * PI * m as f64 / l;
            total += (c * num_complex::Complex64::from_polar(1.0, k * x)).re;
        }
        total
    })
}

#[test]
fn dealiased_product_has_no_aliasing() {
    for n in [8usize, 16, 32] {
        let grid = PeriodicGrid::new(3.0, n).unwrap();
        let band = (n / 3) as f64;
        let f = RealField::from_fn(grid.clone(), |x| {
            (1..=band as i32)
                .map(|m| (2.0 * PI * m as f64 * x / 3.0 + m as f64).cos() / m as f64)
                .sum::<f64>()
                + 0.4
        });
        let g = RealField::from_fn(grid.clone(), |x| {
            (1..=band as i32)
                .map(|m| (2.0 * PI * m as f64 * x / 3.0).sin() * (0.5 + m as f64))
                .sum::<f64>()
        });
        let fast = dealiased_product(&f, &g).unwrap();
        let slow = brute_force_product(&f, &g);
        for (a, b) in fast.values().iter().zip(slow.values()) {
            assert!((a - b).abs() < 1e-12, "N = {n}: {a} vs {b}");
        }
    }
}

#[test]
fn product_with_one_is_truncation() {
    let grid = PeriodicGrid::new(2.0 * PI, 32).unwrap();
    let g = RealField::from_fn(grid.clone(), |x| {
        x.sin() + (5.0 * x).cos() + 0.2 * (10.0 * x).sin()
    });
    let p = dealiased_product(&RealField::constant(grid, 1.0), &g).unwrap();
    for (a, b) in p.values().iter().zip(g.values()) {
        assert!((a - b).abs() < 1e-13);
    }
}

#[test]
fn inner_product_examples() {
    let grid = PeriodicGrid::new(2.0 * PI, 32).unwrap();
    let s = RealField::from_fn(grid.clone(), f64::sin);
    let c = RealField::from_fn(grid.clone(), f64::cos);
    assert!(l2_inner(&s, &c).unwrap().abs() < 1e-12);
    let ss = l2_inner(&s, &s).unwrap();
    assert!((ss - sobolev_norm(&s, 0).powi(2)).abs() < 1e-12);
    assert!((l2_inner(&s.scaled(2.0), &s).unwrap() - 2.0 * ss).abs() < 1e-12);
    assert_eq!(derivative(&s, 0).values(), s.values());
    assert!(derivative(&RealField::constant(grid, 3.0), 4).max_abs() < 1e-15);
}

proptest! {
    #[test]
    fn admissible_steps_never_blow_up(u0 in 0.01f64..0.99, t_final in 0.2f64..5.0, frac in 0.05f64..0.999) {
        let bound = dt_admissible(u0, t_final);
        let dt = frac * bound.min(t_final);
        let grid = TimeGrid::new(t_final, dt).unwrap();
        for scheme in SplitScheme::ALL {
            prop_assert!(run_splitting(&LogisticFlowA, &LogisticFlowB, u0, &grid, scheme).is_ok());
        }
    }
}
