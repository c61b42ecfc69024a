//! Minimum-volume origin-centred ellipsoid containing `{±v_j}`.
//!
//! Khachiyan's multiplicative scheme with Todd–Yildirim away steps, on one
//! weight per ± pair: `X(u) = Σ u_j v_j v_jᵀ`, `κ_j = v_jᵀ X(u)⁻¹ v_j`,
//! stopping once `max κ_j / n - 1 <= eps`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::symmetrize;

pub const MVEE_EPS: f64 = 1e-10;
const MAX_ITERS: usize = 200_000;

/// Matrix `M` of `{x : xᵀMx <= 1}`, scaled so the farthest point lies on
/// the boundary.
pub fn mvee(points: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = points.first().map_or(0, Vec::len);
    let m = points.len();
    if n == 0 {
        return Err(Error::InvalidInput("no points".into()));
    }
    let vs: Vec<DVector<f64>> = points.iter().map(|p| DVector::from_column_slice(p)).collect();
    let mut u = vec![1.0 / m as f64; m];
    let nf = n as f64;

    let build = |u: &[f64]| -> DMatrix<f64> {
        let mut x = DMatrix::zeros(n, n);
        for (w, v) in u.iter().zip(&vs) {
            if *w > 0.0 {
                x += v * v.transpose() * *w;
            }
        }
        x
    };

    let mut x_inv = None;
    for iter in 0..MAX_ITERS {
        let x = build(&u);
        let inv = symmetrize(&x)
            .try_inverse()
            .ok_or(Error::NotFullDimensional { rank: 0, dim: n })?;
        let kappa: Vec<f64> = vs.iter().map(|v| (v.transpose() * &inv * v)[(0, 0)]).collect();
        let (j, kj) = kappa
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |b, (i, k)| if k > b.1 { (i, k) } else { b });
        let (l, kl) = kappa
            .iter()
            .copied()
            .enumerate()
            .filter(|(i, _)| u[*i] > 0.0)
            .fold((0, f64::INFINITY), |b, (i, k)| if k < b.1 { (i, k) } else { b });
        if kj / nf - 1.0 <= MVEE_EPS {
            x_inv = Some(inv);
            break;
        }
        if iter + 1 == MAX_ITERS {
            return Err(Error::NoConvergence { iterations: MAX_ITERS, lower: 0.0, upper: kj / nf - 1.0 });
        }
        if kj - nf >= nf - kl {
            let beta = (kj / nf - 1.0) / (kj - 1.0);
            for w in u.iter_mut() {
                *w *= 1.0 - beta;
            }
            u[j] += beta;
        } else {
            // Away step, clipped so the weight stays nonnegative.
            let mut beta = (kl / nf - 1.0) / (kl - 1.0);
            let limit = -u[l] / (1.0 - u[l]);
            let drop = beta <= limit;
            if drop {
                beta = limit;
            }
            for w in u.iter_mut() {
                *w *= 1.0 - beta;
            }
            u[l] += beta;
            if drop {
                u[l] = 0.0;
            }
        }
    }
    let inv = x_inv.expect("loop exits with a matrix");
    let mut mat = symmetrize(&(inv / nf));
    let far = vs
        .iter()
        .map(|v| (v.transpose() * &mat * v)[(0, 0)])
        .fold(0.0f64, f64::max);
    mat /= far;
    Ok(symmetrize(&mat))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_gives_circumscribed_disc() {
        let m = mvee(&[vec![1.0, 1.0], vec![1.0, -1.0]]).unwrap();
        assert!((m[(0, 0)] - 0.5).abs() < 1e-9);
        assert!((m[(1, 1)] - 0.5).abs() < 1e-9);
        assert!(m[(0, 1)].abs() < 1e-9);
    }

    #[test]
    fn regular_hexagon_gives_disc() {
        let pts: Vec<Vec<f64>> = (0..3)
            .map(|k| {
                let t = std::f64::consts::PI * k as f64 / 3.0;
                vec![t.cos(), t.sin()]
            })
            .collect();
        let m = mvee(&pts).unwrap();
        assert!((m - DMatrix::identity(2, 2)).amax() < 1e-9);
    }
}
