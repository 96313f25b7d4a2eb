//! Property tests for the evaluation layer.

use num_complex::Complex64;
use proptest::prelude::*;
use tanlab_core::tangent::{tan_stable, MoebiusMap, TangentMap};

proptest! {
    #[test]
    fn tan_is_exactly_odd(re in -50.0f64..50.0, im in -50.0f64..50.0) {
        let z = Complex64::new(re, im);
        let a = tan_stable(z);
        let b = tan_stable(-z);
        prop_assert_eq!(a, -b);
    }

    #[test]
    fn evaluation_is_odd(
        lre in -2.0f64..2.0, lim in -2.0f64..2.0,
        re in -5.0f64..5.0, im in -5.0f64..5.0,
    ) {
        prop_assume!(Complex64::new(lre, lim).norm() > 1e-3);
        let map = TangentMap::new(Complex64::new(lre, lim)).unwrap();
        let z = Complex64::new(re, im);
        match (map.evaluate(z).finite(), map.evaluate(-z).finite()) {
            (Some(a), Some(b)) => prop_assert_eq!(a, -b),
            (None, None) => {}
            other => prop_assert!(false, "pole asymmetry: {:?}", other),
        }
    }

    #[test]
    fn inverse_branch_round_trip(
        wre in -3.0f64..3.0, wim in -3.0f64..3.0,
        k in -3i32..=3,
    ) {
        let lambda = Complex64::new(1.0, 0.5);
        let map = TangentMap::new(lambda).unwrap();
        let w = Complex64::new(wre, wim);
        // keep away from the omitted values where the branch blows up
        prop_assume!((w - Complex64::new(-0.5, 1.0)).norm() > 1e-2);
        prop_assume!((w - Complex64::new(0.5, -1.0)).norm() > 1e-2);
        let z = map.inverse_branch(w, k).unwrap();
        let back = map.evaluate(z).finite().unwrap();
        prop_assert!((back - w).norm() < 1e-8 * (1.0 + w.norm()),
            "round trip through branch {} off by {:e}", k, (back - w).norm());
        // branch index recoverable from the real part
        let z0 = map.inverse_branch(w, 0).unwrap();
        let got_k = ((z.re - z0.re) / std::f64::consts::PI).round() as i32;
        prop_assert_eq!(got_k, k);
    }

    #[test]
    fn moebius_inverse_composes_to_identity(
        are in -2.0f64..2.0, aim in -2.0f64..2.0,
        bre in -2.0f64..2.0, bim in -2.0f64..2.0,
        zre in -3.0f64..3.0, zim in -3.0f64..3.0,
    ) {
        let a = Complex64::new(are, aim);
        let b = Complex64::new(bre, bim);
        let m = match MoebiusMap::new(a, b, Complex64::new(0.3, -0.1), Complex64::new(1.0, 0.0)) {
            Ok(m) => m,
            Err(_) => return Ok(()), // degenerate draw
        };
        let z = Complex64::new(zre, zim);
        let w = m.apply(z);
        prop_assume!(w.is_finite());
        let back = m.inverse().apply(w);
        prop_assert!((back - z).norm() < 1e-8 * (1.0 + z.norm()));
    }
}
