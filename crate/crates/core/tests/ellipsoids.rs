use proptest::prelude::*;
use trl_core::ellipsoids::{bm_distance_euclidean, contact_points, ellipsoid_decomposition, identity_decomposition, john, loewner, Side};
use trl_core::scalar::rat_int;
use trl_core::NormedSpace;

fn polygon(v: &[[i64; 2]]) -> Option<NormedSpace> {
    NormedSpace::poly_v(2, v.iter().map(|p| vec![rat_int(p[0]), rat_int(p[1])]).collect()).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn john_inside_and_loewner_outside(v in prop::collection::vec(prop::array::uniform2(-6i64..=6), 3)) {
        let Some(x) = polygon(&v) else { return Ok(()) };
        let l = loewner(&x).unwrap();
        let j = john(&x).unwrap();
        // Every vertex lies in the Loewner ellipsoid, and every facet
        // functional is at most one on the John ellipsoid.
        for p in x.extreme_points_f64().unwrap() {
            prop_assert!(l.norm(p) <= 1.0 + 1e-6);
        }
        for f in x.dual_extreme_points_f64().unwrap() {
            prop_assert!(j.dual_norm(f) <= 1.0 + 1e-6);
        }
        for (side, e) in [(Side::John, &j), (Side::Loewner, &l)] {
            let c = contact_points(&x, e, side).unwrap();
            let dec = ellipsoid_decomposition(&c, e).unwrap();
            prop_assert!((dec.weight_sum() - 2.0).abs() <= 1e-8);
        }
        let d = bm_distance_euclidean(&x).unwrap();
        prop_assert!(d.interval.lower.value <= d.interval.upper.value + 1e-12);
        prop_assert!(d.interval.lower.value >= 1.0 - 1e-9);
        prop_assert!(d.interval.upper.value <= 2f64.sqrt() + 1e-9);
    }
}

#[test]
fn orthonormal_basis_decomposes_the_identity() {
    let s = 0.5f64.sqrt();
    let dec = identity_decomposition(&[vec![s, s], vec![s, -s]]).unwrap();
    assert!((dec.weight_sum() - 2.0).abs() < 1e-12);
    assert!(dec.weights.iter().all(|w| (w - 1.0).abs() < 1e-9));
}

#[test]
fn regular_hexagon_distance() {
    // The John and Loewner ellipsoids of an affine-regular hexagon are
    // proportional, so the distance is their ratio.
    let x = polygon(&[[1, 0], [0, 1], [-1, 1]]).unwrap();
    let d = bm_distance_euclidean(&x).unwrap();
    assert!(d.proportional);
    assert!((d.interval.upper.value - 2.0 / 3f64.sqrt()).abs() < 1e-6);
}
