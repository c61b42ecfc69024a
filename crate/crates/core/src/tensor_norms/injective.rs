//! Injective norm `ε(z) = sup |(λ_1 ⊗ … ⊗ λ_k)(z)|` over `λ_i ∈ B_{X_i*}`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::tensor::{axis_to_back, contract_all_but, Tensor};
use crate::error::Result;
use crate::linalg::{gram_factor, singular_values};
use crate::scalar::{Rat, Scalar};
use crate::settings::Settings;
use crate::spaces::NormedSpace;

/// Functionals `λ_i ∈ B_{X_i*}` and the value they attain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankOneWitness {
    pub functionals: Vec<Vec<f64>>,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Direct formula (order one, closed forms).
    Direct,
    /// Scan over extreme points of all but one factor.
    Enumeration,
    /// Singular values in Euclidean frames.
    Svd,
    /// Certified search over the circle of a two-dimensional factor.
    BranchAndBound,
    /// Multistart alternating ascent (lower bound only).
    Alternating,
    /// Exact linear program over product atoms.
    Lp,
    /// Column generation with injective pricing.
    ColumnGeneration,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InjectiveResult {
    /// Attained by the witness, so always a valid lower bound.
    pub value: f64,
    #[serde(skip)]
    pub exact: Option<Rat>,
    /// Rigorous upper bound, when one is known.
    pub upper: Option<f64>,
    pub witness: RankOneWitness,
    pub certified: bool,
    pub method: Method,
}

/// Relative gap under which a branch-and-bound enclosure counts as exact.
pub const BNB_TOL: f64 = 1e-9;
const BNB_MAX_EVALS: usize = 2_000_000;

pub fn injective_norm(z: &Tensor, s: &Settings) -> Result<InjectiveResult> {
    let k = z.order();
    let factors = z.factors();
    if k == 1 {
        return order_one(z, s);
    }
    if let Some(plan) = enumeration_plan(z, s) {
        return enumerate(z, s, plan);
    }
    if k == 2 && factors.iter().all(NormedSpace::is_euclidean) {
        return svd_path(z);
    }
    if k == 2 {
        if let Some(slot) = (0..2).find(|&i| factors[i].dim() == 2 && !factors[i].is_polyhedral()) {
            return branch_and_bound(z, slot);
        }
    }
    alternating(z, s)
}

/// Which path `injective_norm` will take, without running it.
pub fn planned_method(z: &Tensor, s: &Settings) -> Method {
    let f = z.factors();
    if z.order() == 1 {
        Method::Direct
    } else if enumeration_plan(z, s).is_some() {
        Method::Enumeration
    } else if z.order() == 2 && f.iter().all(NormedSpace::is_euclidean) {
        Method::Svd
    } else if z.order() == 2 && f.iter().any(|x| x.dim() == 2 && !x.is_polyhedral()) {
        Method::BranchAndBound
    } else {
        Method::Alternating
    }
}

fn order_one(z: &Tensor, s: &Settings) -> Result<InjectiveResult> {
    let x = &z.factors()[0];
    let value = x.norm(z.values())?;
    let exact = if s.exact() && x.is_polyhedral() { Some(x.norm_exact(z.exact())?) } else { None };
    let l = x.norming_functional(z.values())?;
    let value = exact.as_ref().map_or(value, Scalar::to_f64);
    Ok(InjectiveResult {
        value,
        exact,
        upper: Some(value),
        witness: RankOneWitness { functionals: vec![l], value },
        certified: true,
        method: Method::Direct,
    })
}

struct Plan {
    free: usize,
}

fn enumeration_plan(z: &Tensor, s: &Settings) -> Option<Plan> {
    let factors = z.factors();
    let counts: Vec<Option<usize>> = factors
        .iter()
        .map(|f| if f.is_polyhedral() { f.dual_extreme_points().ok().map(<[_]>::len) } else { None })
        .collect();
    let missing: Vec<usize> = (0..counts.len()).filter(|&i| counts[i].is_none()).collect();
    let free = match missing.len() {
        0 => (0..counts.len()).max_by_key(|&i| (counts[i], i)).expect("nonempty"),
        1 => missing[0],
        _ => return None,
    };
    let mut total: usize = 1;
    for (i, c) in counts.iter().enumerate() {
        if i != free {
            total = total.checked_mul(c.expect("enumerable"))?;
        }
    }
    (total <= s.caps.enumeration).then_some(Plan { free })
}

/// Best (value, choice indices) over extreme-point tuples, ties broken by
/// the lexicographically smallest index tuple.
fn scan<F: Scalar>(
    coeffs: &[F],
    lead: &[usize],
    exts: &[Vec<Vec<F>>],
    norm: &(dyn Fn(&[F]) -> F + Sync),
) -> (F, Vec<usize>) {
    fn rec<F: Scalar>(
        data: &[F],
        level: usize,
        lead: &[usize],
        exts: &[Vec<Vec<F>>],
        norm: &(dyn Fn(&[F]) -> F + Sync),
        path: &mut Vec<usize>,
        best: &mut Option<(F, Vec<usize>)>,
    ) {
        if level == lead.len() {
            let v = norm(data);
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                *best = Some((v, path.clone()));
            }
            return;
        }
        let d = lead[level];
        let inner = data.len() / d;
        for (ci, f) in exts[level].iter().enumerate() {
            let mut next = vec![F::zero(); inner];
            for i in 0..d {
                if f[i].is_zero() {
                    continue;
                }
                for r in 0..inner {
                    next[r] = next[r].clone() + f[i].clone() * data[i * inner + r].clone();
                }
            }
            path.push(ci);
            rec(&next, level + 1, lead, exts, norm, path, best);
            path.pop();
        }
    }

    if lead.is_empty() {
        return (norm(coeffs), Vec::new());
    }
    let d0 = lead[0];
    let inner = coeffs.len() / d0;
    let partial: Vec<(F, Vec<usize>)> = exts[0]
        .par_iter()
        .enumerate()
        .map(|(ci, f)| {
            let mut next = vec![F::zero(); inner];
            for i in 0..d0 {
                if f[i].is_zero() {
                    continue;
                }
                for r in 0..inner {
                    next[r] = next[r].clone() + f[i].clone() * coeffs[i * inner + r].clone();
                }
            }
            let mut best = None;
            let mut path = vec![ci];
            rec(&next, 1, lead, exts, norm, &mut path, &mut best);
            best.expect("nonempty extreme point sets")
        })
        .collect();
    // Collected in index order, so a strict comparison keeps the first best.
    partial
        .into_iter()
        .fold(None, |acc: Option<(F, Vec<usize>)>, cand| match acc {
            Some(cur) if cur.0 >= cand.0 => Some(cur),
            _ => Some(cand),
        })
        .expect("nonempty")
}

fn enumerate(z: &Tensor, s: &Settings, plan: Plan) -> Result<InjectiveResult> {
    let factors = z.factors();
    let free = plan.free;
    let free_space = &factors[free];
    let others: Vec<usize> = (0..factors.len()).filter(|&i| i != free).collect();
    let lead: Vec<usize> = others.iter().map(|&i| factors[i].dim()).collect();
    let use_exact = s.exact() && free_space.is_polyhedral();

    let (value_f, exact, choice) = if use_exact {
        let (coeffs, _) = axis_to_back(z.exact(), z.shape(), free);
        let exts: Vec<Vec<Vec<Rat>>> = others
            .iter()
            .map(|&i| factors[i].dual_extreme_points().map(<[_]>::to_vec))
            .collect::<Result<_>>()?;
        let norm = |c: &[Rat]| free_space.norm_exact(c).expect("dimension checked");
        let (v, choice) = scan(&coeffs, &lead, &exts, &norm);
        (v.to_f64(), Some(v), choice)
    } else {
        let (coeffs, _) = axis_to_back(z.values(), z.shape(), free);
        let exts: Vec<Vec<Vec<f64>>> = others
            .iter()
            .map(|&i| factors[i].dual_extreme_points_f64().map(<[_]>::to_vec))
            .collect::<Result<_>>()?;
        let norm = |c: &[f64]| free_space.norm(c).expect("dimension checked");
        let (v, choice) = scan(&coeffs, &lead, &exts, &norm);
        (v, None, choice)
    };

    // Rebuild the witness in slot order.
    let mut functionals: Vec<Vec<f64>> = vec![Vec::new(); factors.len()];
    for (pos, &i) in others.iter().enumerate() {
        functionals[i] = factors[i].dual_extreme_points_f64()?[choice[pos]].clone();
    }
    let c = contract_all_but(z.values(), z.shape(), &functionals_with_placeholder(&functionals, free, free_space.dim()), Some(free));
    functionals[free] = free_space.norming_functional(&c)?;
    let attained = z.pair(&functionals);
    let value = exact.as_ref().map_or(value_f, Scalar::to_f64);
    Ok(InjectiveResult {
        value,
        exact,
        upper: Some(value),
        witness: RankOneWitness { functionals, value: attained.abs() },
        certified: true,
        method: Method::Enumeration,
    })
}

fn functionals_with_placeholder(f: &[Vec<f64>], free: usize, dim: usize) -> Vec<Vec<f64>> {
    let mut out = f.to_vec();
    out[free] = vec![0.0; dim];
    out
}

/// Order two with both factors Euclidean: `ε = σ_max(C₁ Z C₂ᵀ)` in the
/// frames `M_i = C_iᵀ C_i`.
fn svd_path(z: &Tensor) -> Result<InjectiveResult> {
    let (w, c1, c2) = euclidean_frame(z);
    let svd = w.svd(true, true);
    let (u, vt) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
    let (i, &sigma) = svd
        .singular_values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("nonempty");
    let a = u.column(i).into_owned();
    let b = vt.row(i).transpose();
    let l1: Vec<f64> = (c1.transpose() * a).iter().copied().collect();
    let l2: Vec<f64> = (c2.transpose() * b).iter().copied().collect();
    let attained = z.pair(&[l1.clone(), l2.clone()]);
    Ok(InjectiveResult {
        value: sigma,
        exact: None,
        upper: Some(sigma),
        witness: RankOneWitness { functionals: vec![l1, l2], value: attained.abs() },
        certified: true,
        method: Method::Svd,
    })
}

/// `W = C₁ Z C₂ᵀ` with the Gram factors of both Euclidean factors.
pub(crate) fn euclidean_frame(z: &Tensor) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let f = z.factors();
    let (r, c) = (z.shape()[0], z.shape()[1]);
    let zm = DMatrix::from_row_slice(r, c, z.values());
    let c1 = gram_factor(&f[0].gram().expect("euclidean")).expect("positive definite");
    let c2 = gram_factor(&f[1].gram().expect("euclidean")).expect("positive definite");
    (&c1 * zm * c2.transpose(), c1, c2)
}

#[derive(PartialEq)]
struct Interval {
    ub: f64,
    a: f64,
    b: f64,
    ga: f64,
    gb: f64,
    pa: [f64; 2],
    pb: [f64; 2],
    fa: [f64; 2],
    fb: [f64; 2],
}

impl Eq for Interval {}

impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ub.total_cmp(&other.ub).then(other.a.total_cmp(&self.a))
    }
}

/// Corner of the tangent triangle over the arc from `pa` to `pb`: the
/// point where the supporting lines `fa = 1` and `fb = 1` meet, provided
/// it lies beyond the chord.
fn tangent_corner(pa: &[f64; 2], pb: &[f64; 2], fa: &[f64; 2], fb: &[f64; 2]) -> Option<[f64; 2]> {
    let det = fa[0] * fb[1] - fa[1] * fb[0];
    if det.abs() < 1e-14 {
        return None;
    }
    let q = [(fb[1] - fa[1]) / det, (fa[0] - fb[0]) / det];
    let n = [pb[1] - pa[1], pa[0] - pb[0]];
    let c = n[0] * pa[0] + n[1] * pa[1];
    let side = |p: &[f64; 2]| (n[0] * p[0] + n[1] * p[1] - c) * c.signum();
    (c != 0.0 && side(&q) >= 0.0).then_some(q)
}

/// Order two, `slot` a non-polyhedral plane: maximize
/// `g(λ) = ‖z(λ, ·)‖` over the boundary of `B_{X_slot*}`.
///
/// Two rigorous bounds on an arc between unit points `p_a`, `p_b`, both
/// using that `g` is a seminorm:
/// - any unit `v` on the arc is `μ·w` for a chord point `w` with
///   `μ <= 1 / (1 - ‖p_a - p_b‖/2)`;
/// - the arc lies in the triangle spanned by `p_a`, `p_b` and the corner
///   `q` of the supporting lines at `p_a` and `p_b`, so `g <= max(g(p_a),
///   g(p_b), g(q))`. This one is second order on smooth balls.
fn branch_and_bound(z: &Tensor, slot: usize) -> Result<InjectiveResult> {
    let factors = z.factors();
    let xs = &factors[slot];
    let xs_dual = xs.dual();
    let other = 1 - slot;
    let xo = &factors[other];
    let funcs_for = |l: &[f64]| -> Vec<Vec<f64>> {
        let mut f = vec![vec![0.0; factors[0].dim()], vec![0.0; factors[1].dim()]];
        f[slot] = l.to_vec();
        f
    };
    let g = |p: &[f64; 2]| -> f64 {
        let c = contract_all_but(z.values(), z.shape(), &funcs_for(p), Some(other));
        xo.norm(&c).expect("dimension checked")
    };
    let point = |theta: f64| -> ([f64; 2], [f64; 2]) {
        let d = [theta.cos(), theta.sin()];
        let s = xs.dual_norm(&d).expect("dimension checked");
        let p = [d[0] / s, d[1] / s];
        let f = xs_dual.norming_functional(&p).expect("dimension checked");
        (p, [f[0], f[1]])
    };
    let bound = |ga: f64, gb: f64, pa: &[f64; 2], pb: &[f64; 2], fa: &[f64; 2], fb: &[f64; 2]| -> f64 {
        let dist = xs.dual_norm(&[pa[0] - pb[0], pa[1] - pb[1]]).expect("dimension checked");
        let chord = if dist >= 1.0 { f64::INFINITY } else { ga.max(gb) / (1.0 - dist / 2.0) };
        let tangent = tangent_corner(pa, pb, fa, fb).map_or(f64::INFINITY, |q| ga.max(gb).max(g(&q)));
        chord.min(tangent) * (1.0 + 1e-12)
    };

    let pieces = 64;
    let thetas: Vec<f64> = (0..=pieces).map(|i| std::f64::consts::PI * i as f64 / pieces as f64).collect();
    let pts: Vec<([f64; 2], [f64; 2])> = thetas.iter().map(|&t| point(t)).collect();
    let gs: Vec<f64> = pts.iter().map(|(p, _)| g(p)).collect();
    let mut best = 0.0f64;
    let mut best_p = pts[0].0;
    for ((p, _), &v) in pts.iter().zip(&gs) {
        if v > best {
            best = v;
            best_p = *p;
        }
    }
    let mut heap = BinaryHeap::new();
    for i in 0..pieces {
        let ((pa, fa), (pb, fb)) = (pts[i], pts[i + 1]);
        heap.push(Interval {
            ub: bound(gs[i], gs[i + 1], &pa, &pb, &fa, &fb),
            a: thetas[i],
            b: thetas[i + 1],
            ga: gs[i],
            gb: gs[i + 1],
            pa,
            pb,
            fa,
            fb,
        });
    }
    let mut discarded = 0.0f64;
    let mut evals = pieces + 1;
    let upper = loop {
        let Some(top) = heap.pop() else { break best.max(discarded) };
        if top.ub <= best * (1.0 + BNB_TOL) || evals >= BNB_MAX_EVALS {
            break top.ub.max(best).max(discarded);
        }
        let mid = 0.5 * (top.a + top.b);
        let (pm, fm) = point(mid);
        let gm = g(&pm);
        evals += 1;
        if gm > best {
            best = gm;
            best_p = pm;
        }
        for child in [
            Interval {
                ub: bound(top.ga, gm, &top.pa, &pm, &top.fa, &fm),
                a: top.a,
                b: mid,
                ga: top.ga,
                gb: gm,
                pa: top.pa,
                pb: pm,
                fa: top.fa,
                fb: fm,
            },
            Interval {
                ub: bound(gm, top.gb, &pm, &top.pb, &fm, &top.fb),
                a: mid,
                b: top.b,
                ga: gm,
                gb: top.gb,
                pa: pm,
                pb: top.pb,
                fa: fm,
                fb: top.fb,
            },
        ] {
            if child.ub <= best * (1.0 + BNB_TOL) {
                discarded = discarded.max(child.ub);
            } else {
                heap.push(child);
            }
        }
    };
    let mut functionals = funcs_for(&best_p);
    let c = contract_all_but(z.values(), z.shape(), &functionals, Some(other));
    functionals[other] = xo.norming_functional(&c)?;
    let attained = z.pair(&functionals).abs();
    let certified = upper - best <= BNB_TOL * best.max(1e-300) * 2.0;
    Ok(InjectiveResult {
        value: best,
        exact: None,
        upper: Some(upper),
        witness: RankOneWitness { functionals, value: attained },
        certified,
        method: Method::BranchAndBound,
    })
}

/// One alternating-ascent run from random functionals.
pub(crate) fn ascend(z: &Tensor, rng: &mut ChaCha8Rng, max_sweeps: usize) -> (f64, Vec<Vec<f64>>) {
    let factors = z.factors();
    let mut funcs: Vec<Vec<f64>> = factors
        .iter()
        .map(|f| {
            let v: Vec<f64> = (0..f.dim()).map(|_| StandardNormal.sample(rng)).collect();
            let s = f.dual_norm(&v).unwrap_or(1.0).max(1e-300);
            v.iter().map(|x| x / s).collect()
        })
        .collect();
    ascend_from(z, &mut funcs, max_sweeps)
}

/// Alternating ascent from the given functionals (updated in place).
pub(crate) fn ascend_from(z: &Tensor, funcs: &mut [Vec<f64>], max_sweeps: usize) -> (f64, Vec<Vec<f64>>) {
    let factors = z.factors();
    let mut value = 0.0f64;
    for _ in 0..max_sweeps {
        let prev = value;
        for j in 0..factors.len() {
            let c = contract_all_but(z.values(), z.shape(), funcs, Some(j));
            funcs[j] = factors[j].norming_functional(&c).expect("dimension checked");
            value = factors[j].norm(&c).expect("dimension checked");
        }
        if value - prev <= 1e-12 * value.max(1e-300) {
            break;
        }
    }
    (value, funcs.to_vec())
}

fn lex_witness(a: &[Vec<f64>], b: &[Vec<f64>]) -> Ordering {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
}

/// Deterministic multistart ascent: start `i` uses stream `i` of a ChaCha
/// generator seeded with `seed`; the best value wins, ties go to the
/// lexicographically smallest witness.
pub fn multistart(z: &Tensor, seed: u64, starts: usize, max_sweeps: usize) -> (f64, Vec<Vec<f64>>) {
    let runs: Vec<(f64, Vec<Vec<f64>>)> = (0..starts.max(1))
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            ascend(z, &mut rng, max_sweeps)
        })
        .collect();
    runs.into_iter()
        .reduce(|a, b| match a.0.total_cmp(&b.0) {
            Ordering::Greater => a,
            Ordering::Less => b,
            Ordering::Equal => {
                if lex_witness(&b.1, &a.1) == Ordering::Less {
                    b
                } else {
                    a
                }
            }
        })
        .expect("at least one start")
}

fn alternating(z: &Tensor, s: &Settings) -> Result<InjectiveResult> {
    let (value, functionals) = multistart(z, s.seed, s.starts, s.max_sweeps);
    let attained = z.pair(&functionals).abs();
    Ok(InjectiveResult {
        value: attained,
        exact: None,
        upper: flattening_bound(z),
        witness: RankOneWitness { functionals, value: attained.max(value.min(attained)) },
        certified: false,
        method: Method::Alternating,
    })
}

/// For `ℓ_2` factors: `ε(z) <= σ_max` of every unfolding (the remaining
/// slots only get bigger when relaxed to a Hilbert–Schmidt ball).
pub fn flattening_bound(z: &Tensor) -> Option<f64> {
    let all_l2 = z.factors().iter().all(|f| f.lp_exponent() == Some(2.0));
    if !all_l2 {
        return None;
    }
    (0..z.order())
        .map(|axis| {
            let (data, shape) = axis_to_back(z.values(), z.shape(), axis);
            let cols = shape[shape.len() - 1];
            let rows = data.len() / cols;
            let m = DMatrix::from_row_slice(rows, cols, &data);
            singular_values(&m).first().copied().unwrap_or(0.0)
        })
        .min_by(f64::total_cmp)
}

/// Exact evaluation of a rational witness (used by tests and reports).
pub fn pair_exact(z: &Tensor, funcs: &[Vec<Rat>]) -> Rat {
    contract_all_but(z.exact(), z.shape(), funcs, None)[0].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn max_abs_entry_over_linf() {
        let f = vec![NormedSpace::linf(2); 3];
        let coeffs: Vec<Rat> = (0..8).map(|i| rat(i * 7 % 5 - 2, 3)).collect();
        let z = Tensor::new(f, coeffs.clone()).unwrap();
        let r = injective_norm(&z, &Settings::default()).unwrap();
        let max = coeffs.iter().map(|c| c.abs()).max().unwrap();
        assert_eq!(r.exact.unwrap(), max);
        assert!(r.certified);
        assert!((r.witness.value - r.value).abs() < 1e-12);
    }

    #[test]
    fn crossnorm_on_rank_one() {
        let f = vec![NormedSpace::l1(2), NormedSpace::linf(3)];
        let z = Tensor::rank_one(f, &[vec![rat_int(1), rat_int(-2)], vec![rat(1, 2), rat_int(3), rat_int(0)]]).unwrap();
        let r = injective_norm(&z, &Settings::default()).unwrap();
        assert_eq!(r.exact.unwrap(), rat_int(9));
    }

    #[test]
    fn euclidean_order_two() {
        let f = vec![NormedSpace::l2(2), NormedSpace::l2(2)];
        let z = Tensor::from_f64(f, &[1.0, 1.0, 1.0, -1.0]).unwrap();
        let r = injective_norm(&z, &Settings::default()).unwrap();
        assert_eq!(r.method, Method::Svd);
        assert!((r.value - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn branch_and_bound_matches_svd_on_l2() {
        let f = vec![NormedSpace::lp(2, 2.0).unwrap(), NormedSpace::lp(2, 3.0).unwrap()];
        let z = Tensor::from_f64(f, &[0.3, -1.2, 0.8, 0.5]).unwrap();
        let r = injective_norm(&z, &Settings::default()).unwrap();
        assert_eq!(r.method, Method::BranchAndBound);
        assert!(r.certified);
        let (v, _) = multistart(&z, 0, 32, 200);
        assert!(v <= r.upper.unwrap() + 1e-12);
        assert!((v - r.value).abs() < 1e-8);
    }
}
