use nalgebra::Vector4;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use prolate_core::boundary_algebra::*;
use prolate_core::endpoint_forms::*;
use prolate_core::report::{read_samples, round_sig, to_json};

fn unitary(seed: u64) -> UnitaryMatrix2 {
    UnitaryMatrix2::random(&mut StdRng::seed_from_u64(seed))
}

fn complex() -> impl Strategy<Value = C64> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn boundary_values() -> impl Strategy<Value = BoundaryValues> {
    prop::array::uniform4(complex()).prop_map(BoundaryValues::from_array)
}

proptest! {
    #[test]
    fn unitary_subspace_round_trip(seed in any::<u64>()) {
        let u = unitary(seed);
        let s = subspace_from_unitary(&u);
        prop_assert!(self_orthogonality_residual(&s) <= 1e-10);
        prop_assert!(is_j_self_orthogonal(&s).unwrap());
        prop_assert!(unitary_from_subspace(&s).unwrap().max_distance(&u) <= 1e-10);
    }

    #[test]
    fn boundary_matrix_annihilates_its_kernel(seed in any::<u64>()) {
        let u = unitary(seed);
        let b = boundary_condition_matrix(&u);
        for k in boundary_kernel(&u) {
            let v = Vector4::from(k);
            prop_assert!((b * v).norm() <= 1e-12 * (1.0 + b.norm()));
            prop_assert!((v.norm() - 1.0).abs() <= 1e-12);
        }
        prop_assert!(self_orthogonality_residual(&extension_subspace(&u)) <= 1e-10);
    }

    #[test]
    fn concomitant_is_skew_hermitian(x0 in complex(), x1 in complex(), y0 in complex(), y1 in complex(), u in -0.999..0.999f64) {
        let a = 1.5;
        let t = u * a;
        let xy = concomitant((x0, x1), (y0, y1), t, a);
        let yx = concomitant((y0, y1), (x0, x1), t, a);
        prop_assert!((xy + yx.conj()).norm() <= 1e-12 * (1.0 + xy.norm()));
    }

    #[test]
    fn boundary_form_is_hermitian(x in boundary_values(), y in boundary_values(), a in 0.2..5.0f64) {
        let xy = omega_from_boundary_values(&x, &y, a);
        let yx = omega_from_boundary_values(&y, &x, a);
        let scale = 1.0 + x.max_abs() * y.max_abs() / a;
        prop_assert!((xy - yx.conj()).norm() <= 1e-13 * scale);
        prop_assert!(omega_from_boundary_values(&x, &x, a).im.abs() <= 1e-13 * (1.0 + x.max_abs().powi(2) / a));
    }

    #[test]
    fn rounding_is_idempotent_and_survives_json(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let r = round_sig(x);
        prop_assert_eq!(round_sig(r), r);
        if x != 0.0 {
            prop_assert!((r - x).abs() <= 1e-14 * x.abs());
        }
        let text = to_json(&vec![x]).unwrap();
        let back: Vec<f64> = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back[0], r);
    }

    #[test]
    fn samples_parse_back(rows in prop::collection::vec((-1.0..1.0f64, -1e3..1e3f64, -1e3..1e3f64), 1..40), header in any::<bool>()) {
        let mut text = if header { "t,re,im\n".to_string() } else { String::new() };
        for (t, re, im) in &rows {
            text.push_str(&format!("{t},{re},{im}\n"));
        }
        let (t, x) = read_samples(&text).unwrap();
        prop_assert_eq!(t.len(), rows.len());
        for ((t, x), (t0, re, im)) in t.iter().zip(&x).zip(&rows) {
            prop_assert_eq!(*t, *t0);
            prop_assert_eq!(*x, C64::new(*re, *im));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn series_and_numeric_boundary_values_agree(c1 in complex(), c2 in complex(), lam in -5.0..20.0f64, right in any::<bool>(), a in 0.5..2.0f64) {
        let ep = if right { Endpoint::PlusA } else { Endpoint::MinusA };
        let (x1, x2) = frobenius_pair(C64::new(lam, 0.0), ep, a, DEFAULT_TERMS, true).unwrap();
        let lim = boundary_values_numeric(
            |s| {
                let (j1, j2) = (x1.eval_at_distance(s).unwrap(), x2.eval_at_distance(s).unwrap());
                (j1.value * c1 + j2.value * c2, j1.d1 * c1 + j2.d1 * c2)
            },
            ep,
            a,
        )
        .unwrap();
        let (b, c) = boundary_values_series(c1, c2);
        let scale = 1.0 + c1.norm() + c2.norm();
        prop_assert!((lim.b - b).norm() <= 1e-6 * scale, "b {} vs {}", lim.b, b);
        prop_assert!((lim.c - c).norm() <= 1e-6 * scale, "c {} vs {}", lim.c, c);
    }
}
