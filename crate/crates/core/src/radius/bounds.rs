//! Enclosures for `τ_∞(T)` and `ρ_∞(X)`.

use num_traits::Zero;
use serde::Serialize;

use super::tau::{rho_k, tau_k, TauResult};
use crate::bounds::{best_lower, best_upper, Bound, BoundInterval, BoundSource, ExactRoot};
use crate::ellipsoids::{bm_distance_euclidean, john, loewner};
use crate::error::{Error, Result};
use crate::linalg::gram_factor;
use crate::operators::{nuclear_norm, LinearOperator};
use crate::scalar::{invert, mat_mul, rat_approx, rat_int, transpose, Rat};
use crate::settings::Settings;
use crate::spaces::{NormedSpace, SpaceKind};

/// Largest denominator used when rationalizing ellipsoid frames.
const FRAME_DEN: i64 = 1_000_000;

/// A factorization `T = Q₁ Q₂` through `ℓ₂^r`.
#[derive(Debug, Clone)]
pub struct Split {
    pub name: String,
    /// `ℓ₂^r -> Y`.
    pub q1: Vec<Vec<Rat>>,
    /// `X -> ℓ₂^r`.
    pub q2: Vec<Vec<Rat>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorizationBound {
    pub split: String,
    pub bound: Bound,
    /// `‖Q₁Q₁ᵀ‖_N(Y* -> Y)`.
    pub left: f64,
    /// `‖Q₂ᵀQ₂‖_N(X -> X*)`.
    pub right: f64,
}

/// `sqrt(‖Q₁Q₁ᵀ: Y* -> Y‖_N) · sqrt(‖Q₂ᵀQ₂: X -> X*‖_N)`, using certified
/// upper bounds for both nuclear norms.
pub fn factorization_bound(t: &LinearOperator, split: &Split, s: &Settings) -> Result<FactorizationBound> {
    let (x, y) = (t.domain(), t.codomain());
    let product = mat_mul(&split.q1, &split.q2);
    if product.as_slice() != t.matrix() {
        return Err(Error::InvalidInput(format!("split '{}' does not factor the operator", split.name)));
    }
    let left_op = LinearOperator::new(mat_mul(&split.q1, &transpose(&split.q1)), y.dual(), y.clone())?;
    let right_op = LinearOperator::new(mat_mul(&transpose(&split.q2), &split.q2), x.clone(), x.dual())?;
    let l = nuclear_norm(&left_op, s)?.result;
    let r = nuclear_norm(&right_op, s)?.result;
    let value = (l.upper * r.upper).max(0.0).sqrt();
    let source = BoundSource::Factorization(split.name.clone());
    let bound = match (&l.exact, &r.exact) {
        (Some(a), Some(b)) => Bound::exact(ExactRoot::new(a * b, 2), source),
        _ => Bound::new(value, source, true),
    };
    Ok(FactorizationBound { split: split.name.clone(), bound, left: l.upper, right: r.upper })
}

fn identity(n: usize) -> Vec<Vec<Rat>> {
    (0..n).map(|i| (0..n).map(|j| rat_int((i == j) as i64)).collect()).collect()
}

/// Frame `C` (rationalized) of an ellipsoid `xᵀMx <= 1`.
fn rational_frame(m: &nalgebra::DMatrix<f64>) -> Option<Vec<Vec<Rat>>> {
    let c = gram_factor(m)?;
    let rows: Vec<Vec<Rat>> = (0..c.nrows()).map(|i| (0..c.ncols()).map(|j| rat_approx(c[(i, j)], FRAME_DEN)).collect()).collect();
    invert(&rows).map(|_| rows)
}

fn frames(x: &NormedSpace) -> Vec<(&'static str, Vec<Vec<Rat>>)> {
    let mut out = vec![("coordinate", identity(x.dim()))];
    if let Some(c) = john(x).ok().and_then(|e| rational_frame(e.matrix())) {
        out.push(("john", c));
    }
    if let Some(c) = loewner(x).ok().and_then(|e| rational_frame(e.matrix())) {
        out.push(("loewner", c));
    }
    out
}

/// Splits through the coordinate, John and Loewner frames of either side.
pub fn canonical_splits(t: &LinearOperator) -> Vec<Split> {
    let mut out = Vec::new();
    for (name, r) in frames(t.domain()) {
        let r_inv = invert(&r).expect("checked invertible");
        out.push(Split { name: format!("domain:{name}"), q1: mat_mul(t.matrix(), &r_inv), q2: r });
    }
    for (name, r) in frames(t.codomain()) {
        let r_inv = invert(&r).expect("checked invertible");
        out.push(Split { name: format!("codomain:{name}"), q1: r_inv, q2: mat_mul(&r, t.matrix()) });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauInftyReport {
    pub interval: BoundInterval,
    pub taus: Vec<TauResult>,
    pub nuclear_lower: f64,
    pub nuclear_upper: f64,
    pub factorizations: Vec<FactorizationBound>,
}

pub fn tau_infty_bounds(t: &LinearOperator, kmax: usize, s: &Settings) -> Result<TauInftyReport> {
    if t.is_zero() {
        let b = Bound::exact(ExactRoot::new(Rat::zero(), 1), BoundSource::General("zero operator".into()));
        return Ok(TauInftyReport {
            interval: BoundInterval::point(b),
            taus: vec![],
            nuclear_lower: 0.0,
            nuclear_upper: 0.0,
            factorizations: vec![],
        });
    }
    let nuc = nuclear_norm(t, s)?.result;
    let nuclear_bound = |v: f64| match &nuc.exact {
        Some(e) => Bound::exact(ExactRoot::new(e.clone(), 1), BoundSource::Nuclear),
        None => Bound::new(v, BoundSource::Nuclear, nuc.certified),
    };

    if t.domain().is_euclidean() || t.codomain().is_euclidean() {
        let mut lower = nuclear_bound(nuc.lower);
        let mut upper = nuclear_bound(nuc.upper);
        lower.source = BoundSource::EuclideanCollapse;
        upper.source = BoundSource::EuclideanCollapse;
        return Ok(TauInftyReport {
            interval: BoundInterval::new(lower, upper),
            taus: vec![],
            nuclear_lower: nuc.lower,
            nuclear_upper: nuc.upper,
            factorizations: vec![],
        });
    }

    let mut lowers = Vec::new();
    let mut taus = Vec::new();
    for k in 1..=kmax.max(1) {
        let r = match tau_k(t, k, s) {
            Ok(r) => r,
            Err(Error::SizeCapExceeded { .. }) => break,
            Err(e) => return Err(e),
        };
        let b = match &r.exact {
            Some(e) => Bound::exact(e.clone(), BoundSource::TauExact(k)),
            None if r.certified => Bound::new(r.value, BoundSource::TauExact(k), true),
            None => Bound::new(r.value, BoundSource::TauHeuristic(k), r.lower_bound),
        };
        lowers.push(b);
        taus.push(r);
    }
    let dx = bm_distance_euclidean(t.domain())?.interval.upper.value;
    let dy = bm_distance_euclidean(t.codomain())?.interval.upper.value;
    lowers.push(Bound::new(nuc.lower / dx.min(dy), BoundSource::NuclearOverDistance, nuc.certified));

    let mut uppers = vec![nuclear_bound(nuc.upper)];
    let mut factorizations = Vec::new();
    for split in canonical_splits(t) {
        let f = factorization_bound(t, &split, s)?;
        uppers.push(f.bound.clone());
        factorizations.push(f);
    }
    let lower = best_lower(lowers).expect("nonempty");
    let upper = best_upper(uppers).expect("nonempty");
    Ok(TauInftyReport {
        interval: BoundInterval::new(lower, upper),
        taus,
        nuclear_lower: nuc.lower,
        nuclear_upper: nuc.upper,
        factorizations,
    })
}

// ---------------------------------------------------------------------------
// ρ_∞

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusReport {
    pub space: String,
    pub dim: usize,
    pub interval: BoundInterval,
    pub closed_form: bool,
    pub rho_k: Vec<TauResult>,
}

/// `n^{num/den}` as an exact root.
fn power_root(n: usize, num: i64, den: i64) -> ExactRoot {
    let g = num_integer::gcd(num, den);
    let (num, den) = (num / g, den / g);
    let radicand = num_traits::pow(Rat::from_integer((n as i64).into()), num as usize);
    ExactRoot::new(radicand, den as u32)
}

/// Exponent `1 - |1/2 - 1/p|` as a fraction when `p` is an integer or `∞`.
fn lp_exponent(p: f64) -> Option<(i64, i64)> {
    if p.is_infinite() {
        return Some((1, 2));
    }
    if p.fract() != 0.0 || p > 1e6 {
        return None;
    }
    let q = p as i64;
    Some((2 * q - (q - 2).abs(), 2 * q))
}

/// Closed form for `ρ_∞` on ℓ_p, Schatten and Euclidean spaces.
pub fn rho_closed_form(x: &NormedSpace) -> Option<Bound> {
    let label = |s: &str| BoundSource::ClosedForm(s.into());
    match x.kind() {
        SpaceKind::Lp { n, p } => {
            let value = (*n as f64).powf(1.0 - (0.5 - 1.0 / p).abs());
            Some(match lp_exponent(*p) {
                Some((a, b)) => Bound::exact(power_root(*n, a, b), label("l_p")),
                None => Bound::new(value, label("l_p"), true),
            })
        }
        SpaceKind::Schatten { n, p } => {
            let value = (*n as f64).powf(2.0 - (0.5 - 1.0 / p).abs());
            Some(match lp_exponent(*p) {
                Some((a, b)) => Bound::exact(power_root(*n, a + b, b), label("schatten")),
                None => Bound::new(value, label("schatten"), true),
            })
        }
        SpaceKind::Ellipsoid { .. } => Some(Bound::exact(power_root(x.dim(), 1, 1), label("euclidean"))),
        _ => None,
    }
}

/// Rationalized symmetric matrix of the John ellipsoid.
fn john_gram(x: &NormedSpace) -> Result<Vec<Vec<Rat>>> {
    let m = john(x)?.matrix().clone();
    let n = m.nrows();
    let mut g = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = rat_approx(0.5 * (m[(i, j)] + m[(j, i)]), FRAME_DEN);
            g[i][j] = v.clone();
            g[j][i] = v;
        }
    }
    Ok(g)
}

pub fn rho_report(x: &NormedSpace, kmax: usize, s: &Settings) -> Result<RadiusReport> {
    let n = x.dim();
    let name = x.label().to_string();
    if let Some(b) = rho_closed_form(x) {
        return Ok(RadiusReport { space: name, dim: n, interval: BoundInterval::point(b), closed_form: true, rho_k: vec![] });
    }
    if !x.is_polyhedral() {
        return Err(Error::NotSupported("radius bounds need a polyhedral or closed-form space".into()));
    }
    let general = |s: &str| BoundSource::General(s.into());
    let mut lowers = vec![Bound::exact(power_root(n, 1, 2), general("sqrt(n)"))];
    let mut uppers = vec![Bound::exact(power_root(n, 1, 1), general("n"))];

    let d = bm_distance_euclidean(x)?;
    lowers.push(Bound::new(n as f64 / d.interval.upper.value, BoundSource::NuclearOverDistance, d.interval.upper.certified));
    if d.proportional {
        uppers.push(Bound::new(n as f64 / d.alpha, BoundSource::EllipsoidRatio, true));
    }

    let mut rho = Vec::new();
    for k in 1..=kmax.max(1) {
        match rho_k(x, k, s) {
            Ok(r) => {
                if r.certified {
                    lowers.push(match &r.exact {
                        Some(e) => Bound::exact(e.clone(), BoundSource::TauExact(k)),
                        None => Bound::new(r.value, BoundSource::TauExact(k), true),
                    });
                }
                rho.push(r);
            }
            Err(Error::SizeCapExceeded { .. }) => break,
            Err(e) => return Err(e),
        }
    }

    // id = G⁻¹ ∘ G through the John ellipsoid.
    let g = john_gram(x)?;
    if let Some(g_inv) = invert(&g) {
        let a = nuclear_norm(&LinearOperator::new(g_inv, x.dual(), x.clone())?, s)?.result;
        let b = nuclear_norm(&LinearOperator::new(g, x.clone(), x.dual())?, s)?.result;
        let source = BoundSource::Factorization("john".into());
        uppers.push(match (&a.exact, &b.exact) {
            (Some(p), Some(q)) if (p * q) > Rat::zero() => Bound::exact(ExactRoot::new(p * q, 2), source),
            _ => Bound::new((a.upper * b.upper).sqrt(), source, true),
        });
    }
    let lower = best_lower(lowers).expect("nonempty");
    let upper = best_upper(uppers).expect("nonempty");
    Ok(RadiusReport { space: name, dim: n, interval: BoundInterval::new(lower, upper), closed_form: false, rho_k: rho })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn hadamard() -> LinearOperator {
        let h = vec![vec![rat(1, 2), rat(1, 2)], vec![rat(1, 2), rat(-1, 2)]];
        LinearOperator::new(h, NormedSpace::linf(2), NormedSpace::l1(2)).unwrap()
    }

    #[test]
    fn hadamard_interval() {
        let r = tau_infty_bounds(&hadamard(), 4, &Settings::default()).unwrap();
        // τ_4 = 4^{1/4} = √2 is attained and the coordinate split gives √2.
        assert!((r.interval.lower.value - 2f64.sqrt()).abs() < 1e-12);
        assert!((r.interval.upper.value - 2f64.sqrt()).abs() < 1e-12);
        assert!(r.interval.certified);
    }

    #[test]
    fn closed_forms() {
        let b = rho_closed_form(&NormedSpace::lp(3, 4.0).unwrap()).unwrap();
        assert_eq!(b.exact.unwrap().to_string(), "(27)^(1/4)");
        let b = rho_closed_form(&NormedSpace::schatten(2, f64::INFINITY).unwrap()).unwrap();
        assert!((b.value - 2f64.powf(1.5)).abs() < 1e-12);
    }

    #[test]
    fn square_as_polytope() {
        let x = NormedSpace::poly_v(2, vec![vec![rat_int(1), rat_int(1)], vec![rat_int(1), rat_int(-1)]]).unwrap();
        let r = rho_report(&x, 2, &Settings::default()).unwrap();
        assert!((r.interval.lower.value - 2f64.sqrt()).abs() < 1e-9);
        assert!((r.interval.upper.value - 2f64.sqrt()).abs() < 1e-6);
    }
}
