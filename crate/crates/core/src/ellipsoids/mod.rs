//! John and Loewner ellipsoids, contact points, decompositions of the
//! identity and the Banach–Mazur distance to Euclidean space.

pub mod mvee;
pub mod nnls;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::bounds::{Bound, BoundInterval, BoundSource, ExactRoot};
use crate::error::{Error, Result};
use crate::linalg::{from_dmatrix, gram_factor, symmetrize, to_dmatrix};
use crate::scalar::{canonical_pairs, rat_int};
use crate::spaces::{NormedSpace, SpaceKind};

/// Tolerance for classifying contact points.
pub const CONTACT_TOL: f64 = 1e-7;
/// Residual allowed in `Σ c_i v_i v_iᵀ = I`.
pub const DECOMPOSITION_TOL: f64 = 1e-8;
/// Relative Frobenius distance for proportional John/Loewner ellipsoids.
pub const PROPORTIONAL_TOL: f64 = 1e-7;

/// `{x : xᵀMx <= 1}` with `M` symmetric positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct Ellipsoid {
    m: DMatrix<f64>,
    m_inv: DMatrix<f64>,
    /// `C` with `M = CᵀC`; `x ↦ Cx` maps the ellipsoid onto the unit ball.
    frame: DMatrix<f64>,
}

impl Serialize for Ellipsoid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(1))?;
        map.serialize_entry("M", &from_dmatrix(&self.m))?;
        map.end()
    }
}

impl Ellipsoid {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::InvalidInput("ellipsoid matrix must be square".into()));
        }
        let m = symmetrize(&m);
        let frame = gram_factor(&m).ok_or_else(|| Error::InvalidInput("ellipsoid matrix is not positive definite".into()))?;
        let m_inv = symmetrize(&m.clone().try_inverse().ok_or(Error::InvalidInput("singular ellipsoid".into()))?);
        Ok(Ellipsoid { m, m_inv, frame })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Ellipsoid::new(to_dmatrix(rows))
    }

    /// Euclidean ball of radius `r`.
    pub fn ball(n: usize, r: f64) -> Self {
        Ellipsoid::new(DMatrix::identity(n, n) / (r * r)).expect("positive radius")
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        from_dmatrix(&self.m)
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        let v = DVector::from_column_slice(x);
        (v.transpose() * &self.m * &v)[(0, 0)].max(0.0).sqrt()
    }

    pub fn dual_norm(&self, f: &[f64]) -> f64 {
        let v = DVector::from_column_slice(f);
        (v.transpose() * &self.m_inv * &v)[(0, 0)].max(0.0).sqrt()
    }

    /// Polar ellipsoid `{f : fᵀM⁻¹f <= 1}`.
    pub fn polar(&self) -> Ellipsoid {
        Ellipsoid::new(self.m_inv.clone()).expect("inverse of a positive definite matrix")
    }

    /// `r·E`.
    pub fn scaled(&self, r: f64) -> Ellipsoid {
        Ellipsoid::new(&self.m / (r * r)).expect("positive scale")
    }

    /// Coordinates in the frame where the ellipsoid is the unit ball.
    pub fn to_frame(&self, x: &[f64]) -> Vec<f64> {
        (&self.frame * DVector::from_column_slice(x)).iter().copied().collect()
    }

    pub fn log_det(&self) -> f64 {
        self.m.clone().cholesky().map_or(f64::NAN, |c| 2.0 * c.l().diagonal().iter().map(|d| d.ln()).sum::<f64>())
    }

    /// The ellipsoid's norm as a normed space.
    pub fn as_space(&self) -> NormedSpace {
        NormedSpace::ellipsoid(self.rows()).expect("valid ellipsoid")
    }
}

/// Radius of the Loewner ball of `ℓ_p^n` (and of `S_p^n` with `n` the side).
fn lp_loewner_radius(n: usize, p: f64) -> f64 {
    let e = (0.5 - 1.0 / p).max(0.0);
    (n as f64).powf(e)
}

fn lp_john_radius(n: usize, p: f64) -> f64 {
    let e = (0.5 - 1.0 / p).min(0.0);
    (n as f64).powf(e)
}

/// Minimal-volume ellipsoid containing `B_X`.
pub fn loewner(x: &NormedSpace) -> Result<Ellipsoid> {
    match x.kind() {
        SpaceKind::Lp { n, p } => Ok(Ellipsoid::ball(*n, lp_loewner_radius(*n, *p))),
        SpaceKind::Schatten { n, p } => Ok(Ellipsoid::ball(n * n, lp_loewner_radius(*n, *p))),
        SpaceKind::Ellipsoid { m, .. } => Ellipsoid::new(m.clone()),
        SpaceKind::PolyV(_) | SpaceKind::PolyH(_) => {
            let pts = x.extreme_points_f64()?;
            Ellipsoid::new(mvee::mvee(pts)?)
        }
    }
}

/// Maximal-volume ellipsoid inside `B_X`: the polar of the Loewner
/// ellipsoid of `X*`.
pub fn john(x: &NormedSpace) -> Result<Ellipsoid> {
    match x.kind() {
        SpaceKind::Lp { n, p } => Ok(Ellipsoid::ball(*n, lp_john_radius(*n, *p))),
        SpaceKind::Schatten { n, p } => Ok(Ellipsoid::ball(n * n, lp_john_radius(*n, *p))),
        _ => Ok(loewner(&x.dual())?.polar()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    John,
    Loewner,
}

fn classify(deviation: f64, tol: f64) -> Result<bool> {
    let d = deviation.abs();
    if d <= tol {
        Ok(true)
    } else if d <= 10.0 * tol {
        Err(Error::ToleranceAmbiguous { deviation: d, tol })
    } else {
        Ok(false)
    }
}

fn sign_points(n: usize, scale: f64) -> Vec<Vec<f64>> {
    (0..1usize << (n - 1))
        .map(|mask| {
            (0..n)
                .map(|i| if i > 0 && mask >> (n - 1 - i) & 1 == 1 { -scale } else { scale })
                .collect()
        })
        .collect()
}

fn unit_points(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| (0..n).map(|j| (i == j) as u8 as f64).collect()).collect()
}

fn canonical_f64(points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    canonical_pairs(points)
}

/// Points with `‖x‖_X = ‖x‖_E = 1`, one per ± pair.
///
/// For polyhedral balls the Loewner side scans the vertices and the John
/// side scans the facets; `ℓ_p` balls use their closed forms. For Euclidean
/// balls every unit vector touches, and an orthonormal basis is returned.
pub fn contact_points(x: &NormedSpace, e: &Ellipsoid, side: Side) -> Result<Vec<Vec<f64>>> {
    contact_points_tol(x, e, side, CONTACT_TOL)
}

pub fn contact_points_tol(x: &NormedSpace, e: &Ellipsoid, side: Side, tol: f64) -> Result<Vec<Vec<f64>>> {
    if e.dim() != x.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), got: e.dim() });
    }
    let candidates: Vec<Vec<f64>> = match x.kind() {
        SpaceKind::Lp { n, p } if *p != 2.0 && *n > 1 => {
            let n = *n;
            let spread = sign_points(n, (n as f64).powf(-1.0 / p));
            // Unit vectors touch the John ball for p >= 2 and the Loewner ball
            // for p <= 2; normalized sign vectors the other way round.
            match (side, *p > 2.0) {
                (Side::John, true) | (Side::Loewner, false) => unit_points(n),
                _ => spread,
            }
        }
        SpaceKind::Schatten { n, p } if *p != 2.0 && *n > 1 => {
            let rank_one = unit_points(n * n);
            match (side, *p > 2.0) {
                (Side::John, true) | (Side::Loewner, false) => rank_one,
                _ => {
                    return Err(Error::NotSupported(
                        "contact points of Schatten balls on the full-rank side".into(),
                    ))
                }
            }
        }
        SpaceKind::PolyV(_) | SpaceKind::PolyH(_) => {
            return polyhedral_contacts(x, e, side, tol);
        }
        // Euclidean balls: any orthonormal basis of the ellipsoid frame.
        _ => {
            let inv = e.frame.clone().try_inverse().ok_or(Error::InvalidInput("singular frame".into()))?;
            (0..x.dim()).map(|j| inv.column(j).iter().copied().collect()).collect()
        }
    };
    let mut out = Vec::new();
    for c in candidates {
        let dx = x.norm(&c)? - 1.0;
        let de = e.norm(&c) - 1.0;
        if classify(dx, tol)? && classify(de, tol)? {
            out.push(c);
        } else {
            return Err(Error::InvalidInput(format!(
                "ellipsoid is not the {side:?} ellipsoid of {}",
                x.label()
            )));
        }
    }
    Ok(canonical_f64(out))
}

fn polyhedral_contacts(x: &NormedSpace, e: &Ellipsoid, side: Side, tol: f64) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::new();
    match side {
        Side::Loewner => {
            for v in x.extreme_points_f64()? {
                let dev = e.norm(v) - 1.0;
                if dev > 10.0 * tol {
                    return Err(Error::InvalidInput("ellipsoid does not contain the unit ball".into()));
                }
                if classify(dev, tol)? {
                    out.push(v.clone());
                }
            }
        }
        Side::John => {
            for f in x.dual_extreme_points_f64()? {
                let s = e.dual_norm(f);
                if s - 1.0 > 10.0 * tol {
                    return Err(Error::InvalidInput("ellipsoid is not inside the unit ball".into()));
                }
                if classify(s - 1.0, tol)? {
                    let y = &e.m_inv * DVector::from_column_slice(f) / s;
                    out.push(y.iter().copied().collect());
                }
            }
        }
    }
    Ok(canonical_f64(out))
}

/// `Σ c_i v_i v_iᵀ = I` with `c_i > 0` and unit `v_i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityDecomposition {
    pub weights: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    /// Frobenius norm of `Σ c_i v_i v_iᵀ - I`.
    pub residual: f64,
}

impl IdentityDecomposition {
    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Nonnegative weights decomposing the identity over Euclidean unit
/// vectors (± pairs are merged first).
pub fn identity_decomposition(contacts: &[Vec<f64>]) -> Result<IdentityDecomposition> {
    let n = contacts.first().map_or(0, Vec::len);
    if n == 0 {
        return Err(Error::InfeasibleDecomposition { residual: f64::INFINITY });
    }
    let vectors: Vec<Vec<f64>> = canonical_f64(
        contacts
            .iter()
            .map(|v| {
                let s = crate::linalg::norm2(v);
                v.iter().map(|x| x / s).collect()
            })
            .collect(),
    );
    // Rows: entries (i, j) with i <= j; off-diagonals weighted by √2 so the
    // residual is the Frobenius norm.
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let r2 = std::f64::consts::SQRT_2;
    let a = DMatrix::from_fn(pairs.len(), vectors.len(), |r, c| {
        let (i, j) = pairs[r];
        let w = if i == j { 1.0 } else { r2 };
        w * vectors[c][i] * vectors[c][j]
    });
    let b = DVector::from_fn(pairs.len(), |r, _| if pairs[r].0 == pairs[r].1 { 1.0 } else { 0.0 });
    let c = nnls::nnls(&a, &b);
    let residual = (&a * &c - &b).norm();
    if residual > DECOMPOSITION_TOL {
        return Err(Error::InfeasibleDecomposition { residual });
    }
    let (weights, vectors): (Vec<f64>, Vec<Vec<f64>>) = c
        .iter()
        .zip(vectors)
        .filter(|(w, _)| **w > 0.0)
        .map(|(w, v)| (*w, v))
        .unzip();
    Ok(IdentityDecomposition { weights, vectors, residual })
}

/// Decomposition for contact points of `X` with respect to `E`, expressed in
/// the frame where `E` is the unit ball.
pub fn ellipsoid_decomposition(contacts: &[Vec<f64>], e: &Ellipsoid) -> Result<IdentityDecomposition> {
    let framed: Vec<Vec<f64>> = contacts.iter().map(|c| e.to_frame(c)).collect();
    identity_decomposition(&framed)
}

/// Banach–Mazur distance to `ℓ_2^n` with the ellipsoids used for it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceReport {
    pub interval: BoundInterval,
    /// Smallest `α` with `Loewner ⊆ α·John`.
    pub alpha: f64,
    pub proportional: bool,
}

fn closed_form(value: f64, exact: Option<ExactRoot>, name: &str) -> DistanceReport {
    let bound = match exact {
        Some(root) => Bound::exact(root, BoundSource::ClosedForm(name.into())),
        None => Bound::new(value, BoundSource::ClosedForm(name.into()), true),
    };
    DistanceReport { interval: BoundInterval::point(bound), alpha: value, proportional: true }
}

/// `n^{|1/2 - 1/p|}`, exact as a root when `p ∈ {1, 2, ∞}`.
fn lp_distance(n: usize, p: f64) -> (f64, Option<ExactRoot>) {
    let e = (0.5 - 1.0 / p).abs();
    let v = (n as f64).powf(e);
    let exact = if p == 2.0 {
        Some(ExactRoot::new(rat_int(1), 1))
    } else if p == 1.0 || p.is_infinite() {
        Some(ExactRoot::new(rat_int(n as i64), 2))
    } else {
        None
    };
    (v, exact)
}

/// `d(X, ℓ_2^n)`: exact when the John and Loewner ellipsoids are
/// proportional, otherwise an enclosure from volumes and containments.
pub fn bm_distance_euclidean(x: &NormedSpace) -> Result<DistanceReport> {
    match x.kind() {
        SpaceKind::Lp { n, p } => {
            let (v, exact) = lp_distance(*n, *p);
            return Ok(closed_form(v, exact, "l_p"));
        }
        SpaceKind::Schatten { n, p } => {
            let (v, exact) = lp_distance(*n, *p);
            return Ok(closed_form(v, exact, "schatten"));
        }
        SpaceKind::Ellipsoid { .. } => return Ok(closed_form(1.0, Some(ExactRoot::new(rat_int(1), 1)), "ellipsoid")),
        _ => {}
    }
    let n = x.dim();
    let j = john(x)?;
    let l = loewner(x)?;
    // α² = λ_max of M_J relative to M_L.
    let c = l.frame.clone();
    let c_inv = c.clone().try_inverse().ok_or(Error::InvalidInput("singular ellipsoid".into()))?;
    let rel = symmetrize(&(c_inv.transpose() * j.matrix() * &c_inv));
    let alpha = rel.symmetric_eigenvalues().max().max(0.0).sqrt();
    let diff = (l.matrix() * (alpha * alpha) - j.matrix()).norm() / j.matrix().norm();
    if diff <= PROPORTIONAL_TOL {
        let b = Bound::new(alpha, BoundSource::EllipsoidRatio, true);
        return Ok(DistanceReport { interval: BoundInterval::point(b), alpha, proportional: true });
    }
    let volume = ((j.log_det() - l.log_det()) / (2.0 * n as f64)).exp();
    let r_john = x.extreme_points_f64()?.iter().map(|v| j.norm(v)).fold(0.0, f64::max);
    let r_loewner = x.dual_extreme_points_f64()?.iter().map(|f| l.dual_norm(f)).fold(0.0, f64::max);
    let upper = crate::bounds::best_upper(vec![
        Bound::exact(ExactRoot::new(rat_int(n as i64), 2), BoundSource::General("sqrt(n)".into())),
        Bound::new(alpha, BoundSource::EllipsoidRatio, true),
        Bound::new(r_john, BoundSource::Containment, true),
        Bound::new(r_loewner, BoundSource::Containment, true),
    ])
    .expect("nonempty");
    let lower = Bound::new(volume.min(upper.value), BoundSource::VolumeRatio, true);
    Ok(DistanceReport { interval: BoundInterval::new(lower, upper), alpha, proportional: false })
}
