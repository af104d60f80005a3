use proptest::prelude::*;
use splitkdv_core::kdv::airy_evolve;
use splitkdv_core::spectral::{
    derivative, l2_inner, sobolev_inner, sobolev_norm, PeriodicGrid, RealField, Spectrum,
};

fn field(l: f64, values: Vec<f64>) -> RealField {
    let grid = PeriodicGrid::new(l, values.len()).unwrap();
    RealField::new(grid, values).unwrap()
}

/// Random band-limited field: modes up to N/3, decaying amplitudes.
fn smooth_field(l: f64, n: usize, coeffs: &[(f64, f64)]) -> RealField {
    let grid = PeriodicGrid::new(l, n).unwrap();
    RealField::from_fn(grid, |x| {
        coeffs
            .iter()
            .enumerate()
            .map(|(m, (a, b))| {
                let k = 2.0 * std::f64::consts::PI * m as f64 / l;
                let decay = 1.0 / (1.0 + m as f64).powi(2);
                decay * (a * (k * x).cos() + b * (k * x).sin())
            })
            .sum()
    })
}

fn sizes() -> impl Strategy<Value = usize> {
    prop::sample::select(vec![8usize, 16, 32, 64, 128])
}

fn raw_field() -> impl Strategy<Value = (f64, Vec<f64>)> {
    (1.0f64..50.0, sizes())
        .prop_flat_map(|(l, n)| (Just(l), prop::collection::vec(-10.0f64..10.0, n)))
}

fn smooth() -> impl Strategy<Value = RealField> {
    (1.0f64..50.0, prop::sample::select(vec![32usize, 64, 128])).prop_flat_map(|(l, n)| {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n / 3)
            .prop_map(move |c| smooth_field(l, n, &c))
    })
}

proptest! {
    #[test]
    fn round_trip((l, values) in raw_field()) {
        let f = field(l, values);
        let back = f.to_spectrum().to_field();
        let scale = 1.0 + f.max_abs();
        for (a, b) in f.values().iter().zip(back.values()) {
            prop_assert!((a - b).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn parseval((l, values) in raw_field()) {
        let f = field(l, values);
        let direct: f64 = f.grid().dx() * f.values().iter().map(|v| v * v).sum::<f64>();
        let spectral = sobolev_norm(&f, 0).powi(2);
        prop_assert!((direct - spectral).abs() <= 1e-12 * (1.0 + direct));
    }

    #[test]
    fn spectrum_reconstruction((l, values) in raw_field()) {
        let f = field(l, values);
        let s = f.to_spectrum();
        let rebuilt = Spectrum::from_coeffs(f.grid().clone(), s.coeffs().to_vec()).unwrap();
        prop_assert_eq!(rebuilt.coeffs(), s.coeffs());
    }

    #[test]
    fn derivative_is_linear(
        (l, values) in raw_field(),
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
        order in 0u32..5,
        shift in 0usize..8,
    ) {
        let f = field(l, values.clone());
        let mut rotated = values;
        let shift = shift % rotated.len();
        rotated.rotate_left(shift);
        let g = field(l, rotated);
        let lhs = derivative(&f.lin_comb(a, &g, b).unwrap(), order);
        let rhs = derivative(&f, order).lin_comb(a, &derivative(&g, order), b).unwrap();
        let scale = 1.0 + lhs.max_abs().max(rhs.max_abs());
        for (x, y) in lhs.values().iter().zip(rhs.values()) {
            prop_assert!((x - y).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn integration_by_parts(f in smooth(), shift in 1usize..10) {
        let mut values = f.values().to_vec();
        values.rotate_left(shift);
        let g = RealField::new(f.grid().clone(), values).unwrap();
        let lhs = l2_inner(&derivative(&f, 1), &g).unwrap();
        let rhs = -l2_inner(&f, &derivative(&g, 1)).unwrap();
        let scale = sobolev_norm(&f, 1) * sobolev_norm(&g, 1);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + scale));
    }

    #[test]
    fn third_derivative_is_skew_in_every_sobolev_inner_product(f in smooth(), s in 0u32..6) {
        let v = sobolev_inner(&f, &derivative(&f, 3), s).unwrap();
        let scale = sobolev_norm(&f, s) * sobolev_norm(&derivative(&f, 3), s);
        prop_assert!(v.abs() <= 1e-10 * (1.0 + scale));
    }

    #[test]
    fn sobolev_norms_increase_with_index((l, values) in raw_field(), s in 0u32..8) {
        let f = field(l, values);
        prop_assert!(sobolev_norm(&f, s) <= sobolev_norm(&f, s + 1) * (1.0 + 1e-14));
    }

    #[test]
    fn airy_preserves_norms_and_composes(f in smooth(), t1 in -2.0f64..2.0, t2 in -2.0f64..2.0, s in 0u32..6) {
        let once = airy_evolve(&f, t1 + t2);
        let twice = airy_evolve(&airy_evolve(&f, t1), t2);
        let d = sobolev_norm(&once.checked_sub(&twice).unwrap(), 0);
        prop_assert!(d <= 1e-12 * (1.0 + sobolev_norm(&f, 0)));
        let (a, b) = (sobolev_norm(&f, s), sobolev_norm(&once, s));
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a));
    }
}
