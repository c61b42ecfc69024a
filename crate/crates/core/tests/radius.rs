use proptest::prelude::*;
use trl_core::ellipsoids::bm_distance_euclidean;
use trl_core::operators::{nuclear_norm, operator_norm};
use trl_core::radius::{
    factorization_bound, ntp_gap, rho_k, rho_report, schoenberg_search, tau_infty_bounds, tau_k, tau_k_with, Split, TauMethod,
    TauPath,
};
use trl_core::scalar::{rat, rat_int, Rat};
use trl_core::{Error, LinearOperator, NormedSpace, Settings};

fn hadamard() -> LinearOperator {
    let h = vec![vec![rat(1, 2), rat(1, 2)], vec![rat(1, 2), rat(-1, 2)]];
    LinearOperator::new(h, NormedSpace::linf(2), NormedSpace::l1(2)).unwrap()
}

fn symmetric_s() -> LinearOperator {
    let m = vec![vec![rat_int(1), rat(1, 3)], vec![rat(1, 3), rat_int(1)]];
    LinearOperator::new(m, NormedSpace::l1(2), NormedSpace::l1(2)).unwrap()
}

fn hexagon() -> NormedSpace {
    NormedSpace::poly_v(2, vec![vec![rat_int(2), rat_int(0)], vec![rat_int(1), rat_int(2)], vec![rat_int(-1), rat_int(1)]]).unwrap()
}

fn kron(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut out = Vec::new();
    for ra in a {
        for rb in b {
            out.push(ra.iter().flat_map(|x| rb.iter().map(move |y| x * y)).collect());
        }
    }
    out
}

fn signs(n: usize) -> Vec<Vec<Rat>> {
    (0..1usize << n)
        .map(|m| (0..n).map(|i| rat_int(if m >> i & 1 == 1 { -1 } else { 1 })).collect())
        .collect()
}

/// `τ_2(T)²` for `T: ℓ∞² → ℓ1²`: both balls of `ε_2` are cubes, so the
/// value is a bilinear maximum over sign vectors.
fn brute_tau2_linf_l1(m: &[Vec<Rat>]) -> Rat {
    let k = kron(m, m);
    let mut best = Rat::default();
    for b in signs(4) {
        let w: Vec<Rat> = k.iter().map(|r| r.iter().zip(&b).map(|(x, y)| x * y).sum()).collect();
        for g in signs(4) {
            let v: Rat = w.iter().zip(&g).map(|(x, y)| x * y).sum();
            if v > best {
                best = v;
            }
        }
    }
    best
}

fn matrix() -> impl Strategy<Value = Vec<Vec<Rat>>> {
    prop::collection::vec(prop::collection::vec((-5i64..=5, 1i64..=3).prop_map(|(n, d)| rat(n, d)), 2), 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sign_enumeration_matches_brute_force(m in matrix()) {
        let t = LinearOperator::new(m.clone(), NormedSpace::linf(2), NormedSpace::l1(2)).unwrap();
        let r = tau_k(&t, 2, &Settings::default()).unwrap();
        prop_assert_eq!(r.power_exact.unwrap(), brute_tau2_linf_l1(&m));
    }

    #[test]
    fn tau_chain_below_nuclear(m in matrix()) {
        let s = Settings::default();
        let t = LinearOperator::new(m, hexagon(), NormedSpace::l1(2)).unwrap();
        let t1 = tau_k(&t, 1, &s).unwrap();
        let t2 = tau_k(&t, 2, &s).unwrap();
        let nuc = nuclear_norm(&t, &s).unwrap().result;
        prop_assert!(t1.certified && t2.certified);
        prop_assert!(t1.value <= t2.value + 1e-12);
        prop_assert!(t2.value <= nuc.value + 1e-12);
    }

    #[test]
    fn tau_is_adjoint_invariant(m in matrix(), k in 2usize..=3) {
        let s = Settings::default();
        let t = LinearOperator::new(m, NormedSpace::linf(2), hexagon()).unwrap();
        let a = tau_k(&t, k, &s).unwrap();
        let b = tau_k(&t.adjoint(), k, &s).unwrap();
        prop_assert_eq!(a.power_exact.unwrap(), b.power_exact.unwrap());
    }

    #[test]
    fn vertex_enumeration_agrees_with_signs(m in matrix()) {
        let s = Settings::default();
        let t = LinearOperator::new(m, NormedSpace::l1(2), NormedSpace::linf(2)).unwrap();
        let a = tau_k(&t, 2, &s).unwrap();
        let b = tau_k_with(&t, 2, &s, TauMethod::VertexEnumeration).unwrap();
        prop_assert_eq!(a.path, TauPath::SignEnumeration);
        prop_assert_eq!(a.power_exact.unwrap(), b.power_exact.unwrap());
    }

    #[test]
    fn ideal_property(m in matrix(), a in matrix(), b in matrix()) {
        let s = Settings::default();
        let t = LinearOperator::new(m, NormedSpace::linf(2), NormedSpace::l1(2)).unwrap();
        let a = LinearOperator::new(a, NormedSpace::linf(2), NormedSpace::linf(2)).unwrap();
        let b = LinearOperator::new(b, NormedSpace::l1(2), NormedSpace::l1(2)).unwrap();
        let bta = b.compose(&t.compose(&a).unwrap()).unwrap();
        let na = operator_norm(&a, &s).unwrap().exact.unwrap();
        let nb = operator_norm(&b, &s).unwrap().exact.unwrap();
        let lhs = tau_k(&bta, 2, &s).unwrap().power_exact.unwrap();
        let rhs = tau_k(&t, 2, &s).unwrap().power_exact.unwrap();
        prop_assert!(lhs <= &nb * &nb * &na * &na * rhs);
    }

    #[test]
    fn rho_is_dual_invariant(v in prop::collection::vec(prop::collection::vec(-4i64..=4, 2), 3)) {
        let s = Settings::default();
        let pts: Vec<Vec<Rat>> = v.iter().map(|p| p.iter().map(|&c| rat_int(c)).collect()).collect();
        let Ok(x) = NormedSpace::poly_v(2, pts) else { return Ok(()) };
        let a = rho_k(&x, 2, &s).unwrap();
        let b = rho_k(&x.dual(), 2, &s).unwrap();
        prop_assert_eq!(a.power_exact.unwrap(), b.power_exact.unwrap());
    }

    #[test]
    fn alternating_is_a_lower_bound(m in matrix()) {
        let s = Settings::default().with_starts(8);
        let t = LinearOperator::new(m, hexagon(), NormedSpace::l1(2)).unwrap();
        let exact = tau_k(&t, 2, &s).unwrap();
        let heur = tau_k_with(&t, 2, &s, TauMethod::Heuristic).unwrap();
        prop_assert!(!heur.certified);
        prop_assert!(heur.value <= exact.value + 1e-9);
    }
}

#[test]
fn superadditivity_on_fixed_operators() {
    let s = Settings::default();
    for op in [hadamard(), symmetric_s()] {
        let p: Vec<Rat> = (1..=4).map(|k| tau_k(&op, k, &s).unwrap().power_exact.unwrap()).collect();
        for k1 in 1..=3 {
            for k2 in 1..=4 - k1 {
                assert!(p[k1 + k2 - 1] >= &p[k1 - 1] * &p[k2 - 1], "k1={k1} k2={k2}");
            }
        }
    }
}

#[test]
fn hadamard_powers() {
    let s = Settings::default();
    let want = [rat_int(1), rat_int(2), rat(5, 2), rat_int(4)];
    for (k, w) in (1..=4).zip(want) {
        assert_eq!(tau_k(&hadamard(), k, &s).unwrap().power_exact.unwrap(), w);
    }
    let r = tau_infty_bounds(&hadamard(), 4, &s).unwrap();
    assert!(r.interval.certified);
    assert!((r.interval.lower.value - 2f64.sqrt()).abs() < 1e-12);
    assert!((r.interval.upper.value - 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn rho_k_below_dimension_power() {
    let s = Settings::default();
    for x in [NormedSpace::l1(2), NormedSpace::linf(2), hexagon(), NormedSpace::l1(3)] {
        let n = x.dim() as f64;
        for k in 2..=3 {
            if x.dim() == 3 && k == 3 {
                continue;
            }
            let r = rho_k(&x, k, &s).unwrap();
            assert!(r.value <= n.powf(1.0 - 1.0 / k as f64) + 1e-12, "{} k={k}", x.label());
        }
    }
}

#[test]
fn polyhedral_rho_interval_is_consistent() {
    let r = rho_report(&hexagon(), 2, &Settings::default()).unwrap();
    assert!(r.interval.lower.value <= r.interval.upper.value + 1e-12);
    assert!(r.interval.lower.value >= 2f64.sqrt() - 1e-12);
    assert!(r.interval.upper.value <= 2.0 + 1e-12);
}

#[test]
fn ntp_outcomes() {
    let s = Settings::default();
    let r = ntp_gap(&hadamard(), 4, &s).unwrap();
    assert!(r.gap_certified);
    let euclid = LinearOperator::new(vec![vec![rat_int(1), rat_int(2)], vec![rat_int(0), rat_int(1)]], NormedSpace::l2(2), NormedSpace::l1(2)).unwrap();
    let r = ntp_gap(&euclid, 2, &s).unwrap();
    assert!(r.euclidean && !r.gap_certified);
    assert!(r.interval.width() <= 1e-6);
    // The identity on ℓ1² has τ_∞ = √2 < 2 = ‖id‖_N.
    let id = LinearOperator::identity(NormedSpace::l1(2));
    match ntp_gap(&id, 2, &s) {
        Ok(r) => assert!(r.gap_certified),
        Err(Error::NotCertifiable { .. }) => panic!("the identity on l1^2 has a certified gap"),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn weak_triangle_at_level_two() {
    let s = Settings::default();
    let l1 = NormedSpace::l1(2);
    let t = LinearOperator::new(vec![vec![rat(1, 2), rat_int(0)], vec![rat_int(0), rat_int(1)]], l1.clone(), l1).unwrap();
    let st = symmetric_s().add(&t).unwrap();
    let lhs = tau_k(&st, 2, &s).unwrap().value;
    let u = tau_infty_bounds(&symmetric_s(), 2, &s).unwrap().interval.upper.value;
    let nuc = nuclear_norm(&t, &s).unwrap().result.upper;
    assert!(lhs <= u + nuc + 1e-12);
    // ... while the plain triangle inequality fails.
    assert!(lhs > tau_k(&symmetric_s(), 2, &s).unwrap().value + tau_k(&t, 2, &s).unwrap().value);
}

#[test]
fn factorization_bounds() {
    let s = Settings::default();
    let id2 = vec![vec![rat_int(1), rat_int(0)], vec![rat_int(0), rat_int(1)]];
    let split = Split { name: "euclid".into(), q1: id2.clone(), q2: hadamard().matrix().to_vec() };
    let f = factorization_bound(&hadamard(), &split, &s).unwrap();
    assert!((f.bound.value - 2f64.sqrt()).abs() < 1e-12);

    for n in 2..=3 {
        let id = LinearOperator::identity(NormedSpace::l2(n));
        let split = Split { name: "id".into(), q1: id.matrix().to_vec(), q2: id.matrix().to_vec() };
        let f = factorization_bound(&id, &split, &s).unwrap();
        assert!((f.bound.value - n as f64).abs() < 1e-6, "n={n}: {}", f.bound.value);
    }

    let bad = Split { name: "bad".into(), q1: id2.clone(), q2: id2 };
    assert!(matches!(factorization_bound(&hadamard(), &bad, &s), Err(Error::InvalidInput(_))));
}

#[test]
fn tensor_square_evidence() {
    let s = Settings::default();
    let (x, xx) = (NormedSpace::l1(2), NormedSpace::l1(4));
    let r = rho_report(&x, 2, &s).unwrap().interval.upper.value;
    let rr = rho_report(&xx, 2, &s).unwrap().interval.upper.value;
    assert!(rr <= r * r + 1e-12);
    let d = bm_distance_euclidean(&x).unwrap().interval.upper.value;
    let dd = bm_distance_euclidean(&xx).unwrap().interval.lower.value;
    assert!(dd >= d * d - 1e-9);
}

#[test]
fn parallelogram_violations() {
    let pair = schoenberg_search(&NormedSpace::linf(2), 10, 0).unwrap();
    assert!(pair.value < 4.0 - 1e-9);
    let l4 = NormedSpace::lp(2, 4.0).unwrap();
    let pair = schoenberg_search(&l4, 10_000, 1).unwrap();
    assert!(pair.value < 4.0 - 1e-9);
    assert!((l4.norm(&pair.x).unwrap() - 1.0).abs() < 1e-5);
    assert!(schoenberg_search(&NormedSpace::l2(3), 10_000, 1).is_none());
}

#[test]
fn rotated_l4_plane_has_a_gap() {
    // 2^{1/4}·R(π/6) maps the John disc of ℓ₄² onto its Loewner disc.
    let (c, sn) = ((std::f64::consts::PI / 6.0).cos(), (std::f64::consts::PI / 6.0).sin());
    let a = 2f64.powf(0.25);
    let l4 = NormedSpace::lp(2, 4.0).unwrap();
    let t = LinearOperator::from_f64(&[vec![a * c, -a * sn], vec![a * sn, a * c]], l4.clone(), l4).unwrap();
    let r = ntp_gap(&t, 2, &Settings::default()).unwrap();
    assert!(r.gap_certified);
    assert!(r.tau_upper.value < r.nuclear_lower - 0.05);
}
