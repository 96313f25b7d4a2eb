//! The production recurrence against an independent series-composition
//! solver of the conjugacy equation.

mod common;

use tanlab_core::rotation::RotationNumber;
use tanlab_core::siegel;

#[test]
fn recurrence_matches_composition_oracle() {
    for rn in [RotationNumber::golden(40, 50), RotationNumber::sqrt2_minus_1(40, 50)] {
        let series = siegel::linearizer(&rn, 30, 50).unwrap();
        let oracle = common::composition_oracle(&rn, 30, 50);
        for n in 1..=30 {
            let diff = series.coeff(n).unwrap().sub(&oracle[n - 1]).abs().to_f64();
            assert!(diff < 1e-20, "c_{n} differs by {diff:.3e} (theta = {})", rn.theta());
        }
    }
}

#[test]
fn oracle_agrees_at_higher_precision() {
    let rn = RotationNumber::golden(40, 80);
    let series = siegel::linearizer(&rn, 30, 80).unwrap();
    let oracle = common::composition_oracle(&rn, 30, 80);
    for n in 1..=30 {
        let diff = series.coeff(n).unwrap().sub(&oracle[n - 1]).abs().to_f64();
        assert!(diff < 1e-50, "c_{n} differs by {diff:.3e}");
    }
}

#[test]
fn radius_stable_in_truncation_order() {
    let rn = RotationNumber::golden(40, 50);
    let r200 = siegel::conformal_radius(&siegel::linearizer(&rn, 200, 50).unwrap())
        .unwrap()
        .0;
    let r400 = siegel::conformal_radius(&siegel::linearizer(&rn, 400, 50).unwrap())
        .unwrap()
        .0;
    let rel = (r200 - r400).abs() / r400;
    assert!(rel < 0.05, "r200 = {r200}, r400 = {r400}, rel {rel:.4}");
}
