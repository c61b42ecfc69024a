use num_traits::Signed;
use proptest::prelude::*;
use trl_core::operators::{nuclear_norm, operator_norm};
use trl_core::scalar::{rat, Rat};
use trl_core::{LinearOperator, NormedSpace, Settings};

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<Rat>>> {
    prop::collection::vec(prop::collection::vec((-6i64..=6, 1i64..=3).prop_map(|(n, d)| rat(n, d)), cols), rows)
}

fn sign_vectors(n: usize) -> Vec<Vec<Rat>> {
    (0..1usize << n)
        .map(|m| (0..n).map(|i| rat(if m >> i & 1 == 1 { -1 } else { 1 }, 1)).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn classical_operator_norms(m in matrix(3, 2)) {
        let s = Settings::default();
        let col_sum = (0..2).map(|j| m.iter().map(|r| r[j].abs()).sum::<Rat>()).max().unwrap();
        let t = LinearOperator::new(m.clone(), NormedSpace::l1(2), NormedSpace::l1(3)).unwrap();
        prop_assert_eq!(operator_norm(&t, &s).unwrap().exact.unwrap(), col_sum);

        let row_sum = m.iter().map(|r| r.iter().map(|v| v.abs()).sum::<Rat>()).max().unwrap();
        let t = LinearOperator::new(m.clone(), NormedSpace::linf(2), NormedSpace::linf(3)).unwrap();
        prop_assert_eq!(operator_norm(&t, &s).unwrap().exact.unwrap(), row_sum);

        // ℓ∞ → ℓ1 by brute force over both sign cubes.
        let brute = sign_vectors(2)
            .iter()
            .flat_map(|x| sign_vectors(3).into_iter().map(move |y| (x.clone(), y)))
            .map(|(x, y)| m.iter().zip(&y).map(|(r, yi)| yi * r.iter().zip(&x).map(|(a, b)| a * b).sum::<Rat>()).sum::<Rat>())
            .max()
            .unwrap();
        let t = LinearOperator::new(m, NormedSpace::linf(2), NormedSpace::l1(3)).unwrap();
        prop_assert_eq!(operator_norm(&t, &s).unwrap().exact.unwrap(), brute);
    }

    #[test]
    fn adjoint_and_nuclear_bounds(m in matrix(2, 2)) {
        let s = Settings::default();
        let hexagon = NormedSpace::poly_v(2, vec![vec![rat(2, 1), rat(0, 1)], vec![rat(1, 1), rat(2, 1)], vec![rat(-1, 1), rat(1, 1)]]).unwrap();
        let t = LinearOperator::new(m, hexagon, NormedSpace::linf(2)).unwrap();
        let op = operator_norm(&t, &s).unwrap();
        let adj = operator_norm(&t.adjoint(), &s).unwrap();
        prop_assert_eq!(op.exact.clone().unwrap(), adj.exact.unwrap());
        let nuc = nuclear_norm(&t, &s).unwrap();
        prop_assert!(nuc.result.exact.unwrap() >= op.exact.unwrap());
        // Trace duality: Tr(QT) = ‖T‖_N.
        let a = t.matrix_f64();
        let tr: f64 = (0..2).map(|j| (0..2).map(|i| nuc.witness[j][i] * a[i][j]).sum::<f64>()).sum();
        prop_assert!((tr - nuc.result.value).abs() <= 1e-9 * (1.0 + tr.abs()));
    }

    #[test]
    fn euclidean_operator_norm_is_spectral(m in prop::collection::vec(-3.0f64..3.0, 4)) {
        let t = LinearOperator::from_f64(&[m[..2].to_vec(), m[2..].to_vec()], NormedSpace::l2(2), NormedSpace::l2(2)).unwrap();
        let a = nalgebra::Matrix2::new(m[0], m[1], m[2], m[3]);
        let sv = a.singular_values();
        let s = Settings::default();
        prop_assert!((operator_norm(&t, &s).unwrap().value - sv.max()).abs() < 1e-9);
        prop_assert!((nuclear_norm(&t, &s).unwrap().result.value - sv.sum()).abs() < 1e-9);
    }
}

#[test]
fn composition_is_submultiplicative() {
    let s = Settings::default();
    let a = LinearOperator::new(vec![vec![rat(1, 1), rat(2, 1)], vec![rat(0, 1), rat(-1, 1)]], NormedSpace::l1(2), NormedSpace::linf(2)).unwrap();
    let b = LinearOperator::new(vec![vec![rat(1, 2), rat(1, 1)], vec![rat(3, 1), rat(0, 1)]], NormedSpace::linf(2), NormedSpace::l1(2)).unwrap();
    let ab = b.compose(&a).unwrap();
    let n = |t: &LinearOperator| operator_norm(t, &s).unwrap().exact.unwrap();
    assert!(n(&ab) <= n(&a) * n(&b));
}

#[test]
fn dimension_mismatch_is_an_error() {
    assert!(LinearOperator::new(vec![vec![rat(1, 1)]], NormedSpace::l1(2), NormedSpace::l1(1)).is_err());
}
