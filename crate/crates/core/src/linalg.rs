//! Small dense `f64` helpers on top of nalgebra.

use nalgebra::DMatrix;

pub fn to_dmatrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(r, c, |i, j| rows[i][j])
}

pub fn from_dmatrix(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Upper factor `C` with `M = Cᵀ C` (so `‖Cx‖₂² = xᵀMx`), or `None` if `M`
/// is not positive definite.
pub fn gram_factor(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let chol = symmetrize(m).cholesky()?;
    Some(chol.l().transpose())
}

pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Kronecker power of a dense row-major matrix.
pub fn kron_power<T: Clone + std::ops::Mul<Output = T>>(m: &[Vec<T>], k: usize, one: T) -> Vec<Vec<T>> {
    let mut out = vec![vec![one]];
    for _ in 0..k {
        out = kron(&out, m);
    }
    out
}

pub fn kron<T: Clone + std::ops::Mul<Output = T>>(a: &[Vec<T>], b: &[Vec<T>]) -> Vec<Vec<T>> {
    let (ar, ac) = (a.len(), a.first().map_or(0, Vec::len));
    let (br, bc) = (b.len(), b.first().map_or(0, Vec::len));
    (0..ar * br)
        .map(|i| {
            (0..ac * bc)
                .map(|j| a[i / br][j / bc].clone() * b[i % br][j % bc].clone())
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_of_identity_blocks() {
        let h = vec![vec![1, 1], vec![1, -1]];
        let h2 = kron_power(&h, 2, 1);
        assert_eq!(h2[3], vec![1, -1, -1, 1]);
        assert_eq!(h2.len(), 4);
    }

    #[test]
    fn gram_factor_reproduces_matrix() {
        let m = DMatrix::from_row_slice(2, 2, &[4.0, 1.0, 1.0, 3.0]);
        let c = gram_factor(&m).unwrap();
        assert!((c.transpose() * &c - &m).norm() < 1e-12);
        assert!(gram_factor(&DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0])).is_none());
    }
}
