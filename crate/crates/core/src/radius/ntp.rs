//! Certified gaps between `τ_∞` and the nuclear norm.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::bounds::{factorization_bound, tau_infty_bounds, FactorizationBound, Split};
use crate::bounds::{best_upper, Bound, BoundInterval};
use crate::error::{Error, Result};
use crate::operators::{nuclear_norm, LinearOperator};
use crate::scalar::{invert, mat_mul, rat, rat_approx, Rat};
use crate::settings::Settings;
use crate::spaces::NormedSpace;

/// Margin by which the upper bound on `τ_∞` must undercut the nuclear norm.
pub const GAP_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NtpReport {
    pub interval: BoundInterval,
    pub tau_upper: Bound,
    pub nuclear_lower: f64,
    pub nuclear_upper: f64,
    /// One side is Euclidean, so `τ_∞` equals the nuclear norm.
    pub euclidean: bool,
    pub gap_certified: bool,
}

/// Certify `τ_∞(T) < ‖T‖_N`, or that no gap exists when a side is
/// Euclidean. Otherwise `NotCertifiable`.
pub fn ntp_gap(t: &LinearOperator, kmax: usize, s: &Settings) -> Result<NtpReport> {
    ntp_gap_with_splits(t, kmax, &[], s)
}

pub fn ntp_gap_with_splits(t: &LinearOperator, kmax: usize, extra: &[Split], s: &Settings) -> Result<NtpReport> {
    let report = tau_infty_bounds(t, kmax, s)?;
    let euclidean = t.domain().is_euclidean() || t.codomain().is_euclidean();
    if euclidean || t.is_zero() {
        return Ok(NtpReport {
            tau_upper: report.interval.upper.clone(),
            interval: report.interval,
            nuclear_lower: report.nuclear_lower,
            nuclear_upper: report.nuclear_upper,
            euclidean,
            gap_certified: false,
        });
    }
    let mut uppers = vec![report.interval.upper.clone()];
    for split in extra {
        uppers.push(factorization_bound(t, split, s)?.bound);
    }
    let tau_upper = best_upper(uppers).expect("nonempty");
    let mut interval = report.interval;
    if tau_upper.value < interval.upper.value {
        interval = BoundInterval::new(interval.lower, tau_upper.clone());
    }
    if tau_upper.value < report.nuclear_lower - GAP_MARGIN {
        Ok(NtpReport {
            interval,
            tau_upper,
            nuclear_lower: report.nuclear_lower,
            nuclear_upper: report.nuclear_upper,
            euclidean: false,
            gap_certified: true,
        })
    } else {
        Err(Error::NotCertifiable { nuclear: report.nuclear_lower, tau_upper: tau_upper.value })
    }
}

/// Unit vectors `x, y` with `‖x+y‖² + ‖x-y‖² < 4` (`value`, normalized by
/// `(‖x‖² + ‖y‖²)/2` against rounding), i.e. a violation of the
/// parallelogram inequality in the direction that rules out an inner product.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchoenbergPair {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub value: f64,
}

fn unit_rational(space: &NormedSpace, v: &[f64]) -> Option<Vec<Rat>> {
    let n = space.norm(v).ok()?;
    if n <= 0.0 {
        return None;
    }
    Some(v.iter().map(|c| rat_approx(c / n, 1_000_000)).collect())
}

fn parallelogram(space: &NormedSpace, x: &[f64], y: &[f64]) -> f64 {
    let p: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
    let m: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    space.norm(&p).unwrap_or(f64::INFINITY).powi(2) + space.norm(&m).unwrap_or(f64::INFINITY).powi(2)
}

/// Coordinate pairs first, then seeded random pairs.
pub fn schoenberg_search(space: &NormedSpace, trials: usize, seed: u64) -> Option<SchoenbergPair> {
    let n = space.dim();
    let check = |x: &[f64], y: &[f64]| -> Option<SchoenbergPair> {
        let xr = crate::scalar::to_f64_vec(&unit_rational(space, x)?);
        let yr = crate::scalar::to_f64_vec(&unit_rational(space, y)?);
        // Rounding leaves the vectors only nearly unit, so compare against
        // 2(‖x‖² + ‖y‖²), which any inner-product norm attains exactly.
        let scale = space.norm(&xr).ok()?.powi(2) + space.norm(&yr).ok()?.powi(2);
        let v = 2.0 * parallelogram(space, &xr, &yr) / scale;
        (v < 4.0 - 1e-9).then_some(SchoenbergPair { x: xr, y: yr, value: v })
    };
    for i in 0..n {
        for j in i + 1..n {
            let mut x = vec![0.0; n];
            let mut y = vec![0.0; n];
            x[i] = 1.0;
            y[j] = 1.0;
            if let Some(p) = check(&x, &y) {
                return Some(p);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let y: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        if let Some(p) = check(&x, &y) {
            return Some(p);
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstructionReport {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub factorization: FactorizationBound,
    pub nuclear: f64,
    pub gap_certified: bool,
}

/// For a plane `X` and unit `x, y`: `Q₂ = ½[[1,1],[1,-1]]·[x y]⁻¹` and
/// `Q₁(a, b) = a(x+y) + b(x-y)` factor `id_X` through `ℓ₂²`.
pub fn two_point_split(x: &[Rat], y: &[Rat]) -> Result<(Split, Vec<Vec<Rat>>)> {
    if x.len() != 2 || y.len() != 2 {
        return Err(Error::NotSupported("the two-point construction needs a plane".into()));
    }
    let basis = vec![vec![x[0].clone(), y[0].clone()], vec![x[1].clone(), y[1].clone()]];
    let p = invert(&basis).ok_or_else(|| Error::InvalidInput("x and y must be independent".into()))?;
    let h = vec![vec![rat(1, 2), rat(1, 2)], vec![rat(1, 2), rat(-1, 2)]];
    let q2 = mat_mul(&h, &p);
    let q1 = vec![
        vec![&x[0] + &y[0], &x[0] - &y[0]],
        vec![&x[1] + &y[1], &x[1] - &y[1]],
    ];
    let t = mat_mul(&q1, &q2);
    Ok((Split { name: "two-point".into(), q1, q2 }, t))
}

pub fn two_point_construction(space: &NormedSpace, x: &[Rat], y: &[Rat], s: &Settings) -> Result<ConstructionReport> {
    let (split, t) = two_point_split(x, y)?;
    let op = LinearOperator::new(t, space.clone(), space.clone())?;
    let factorization = factorization_bound(&op, &split, s)?;
    let nuc = nuclear_norm(&op, s)?.result;
    Ok(ConstructionReport {
        x: crate::scalar::to_f64_vec(x),
        y: crate::scalar::to_f64_vec(y),
        gap_certified: factorization.bound.value < nuc.lower - GAP_MARGIN,
        factorization,
        nuclear: nuc.lower,
    })
}

/// The construction on the first Schoenberg pair found in `space`.
pub fn search_construction(space: &NormedSpace, trials: usize, seed: u64, s: &Settings) -> Result<Option<ConstructionReport>> {
    let Some(pair) = schoenberg_search(space, trials, seed) else { return Ok(None) };
    let to_rat = |v: &[f64]| v.iter().map(|c| rat_approx(*c, 1_000_000)).collect::<Vec<_>>();
    two_point_construction(space, &to_rat(&pair.x), &to_rat(&pair.y), s).map(Some)
}
