//! Search for tensors in `(ℓ₂ⁿ)^{⊗k}` with a large Hilbert–Schmidt to
//! injective ratio. Such a tensor bounds `ρ_k(ℓ₂ⁿ)` from below through
//! `(‖z‖_HS / ε(z))^{2/k}`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::injective::{flattening_bound, multistart};
use super::tensor::{checked_size, Tensor};
use crate::error::{Error, Result};
use crate::linalg::{norm2, singular_values};
use crate::settings::Caps;
use crate::spaces::NormedSpace;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntangledWitness {
    pub n: usize,
    pub k: usize,
    pub coeffs: Vec<f64>,
    pub hs: f64,
    /// Best value found by ascent.
    pub eps_lower: f64,
    /// Rigorous upper bound on the injective norm.
    pub eps_upper: f64,
    /// `(hs / eps_upper)^{2/k}`, a certified lower bound.
    pub ratio_bound: f64,
    pub trials: usize,
    pub source: String,
}

const KEEP: usize = 3;
const GRID_DEG: f64 = 1.0;

/// `Re((e₁ + i e₂)^{⊗k}) / 2^{(k-1)/2}`, unit Hilbert–Schmidt norm.
pub fn phase_tensor(k: usize) -> Vec<f64> {
    let scale = 2f64.powf((k as f64 - 1.0) / 2.0);
    (0..1usize << k)
        .map(|idx| {
            // The entry is Re(i^m) with m the number of second-coordinate slots.
            let m = idx.count_ones() as usize;
            let re = match m % 4 {
                0 => 1.0,
                2 => -1.0,
                _ => 0.0,
            };
            re / scale
        })
        .collect()
}

/// Products of normalized maximally entangled pairs, padded with `e₁` when
/// `k` is odd.
pub fn paired_tensor(n: usize, k: usize) -> Vec<f64> {
    let mut pair = vec![0.0; n * n];
    for i in 0..n {
        pair[i * n + i] = 1.0 / (n as f64).sqrt();
    }
    let mut out = vec![1.0];
    for _ in 0..k / 2 {
        out = out.iter().flat_map(|a| pair.iter().map(move |b| a * b)).collect();
    }
    if k % 2 == 1 {
        let mut e = vec![0.0; n];
        e[0] = 1.0;
        out = out.iter().flat_map(|a| e.iter().map(move |b| a * b)).collect();
    }
    out
}

/// Certified `ε` upper bound for a tensor over `ℓ₂ⁿ` factors.
pub fn eps_upper_bound(z: &Tensor) -> f64 {
    let n = z.shape()[0];
    let k = z.order();
    if k == 1 {
        return z.hs_norm();
    }
    if k == 2 {
        let m = nalgebra::DMatrix::from_row_slice(n, n, z.values());
        return singular_values(&m)[0] * (1.0 + 1e-14);
    }
    let flat = flattening_bound(z).unwrap_or(f64::INFINITY);
    if n == 2 {
        flat.min(grid_bound(z))
    } else {
        flat
    }
}

/// Grid over the first `k - 1` unit circles with the last slot exact.
/// A unit vector lies within `δ = 2 sin(step/4)` of a grid point (up to
/// sign), so `ε <= max / (1 - (k-1) δ)`.
fn grid_bound(z: &Tensor) -> f64 {
    let k = z.order();
    let steps = (180.0 / GRID_DEG).round() as usize;
    let step = std::f64::consts::PI / steps as f64;
    let dirs: Vec<[f64; 2]> = (0..steps).map(|i| [(i as f64 * step).cos(), (i as f64 * step).sin()]).collect();
    let delta = 2.0 * (step / 4.0).sin();
    let shrink = 1.0 - (k as f64 - 1.0) * delta;
    assert!(shrink > 0.0, "grid too coarse for this order");

    // Contract the first slot in parallel, the rest recursively.
    let best = dirs
        .par_iter()
        .map(|d0| {
            let first = contract_first(z.values(), d0);
            grid_rec(&first, &dirs)
        })
        .reduce(|| 0.0, f64::max);
    best / shrink * (1.0 + 1e-12)
}

fn contract_first(data: &[f64], d: &[f64; 2]) -> Vec<f64> {
    let half = data.len() / 2;
    (0..half).map(|r| d[0] * data[r] + d[1] * data[half + r]).collect()
}

fn grid_rec(data: &[f64], dirs: &[[f64; 2]]) -> f64 {
    if data.len() == 2 {
        return data[0].hypot(data[1]);
    }
    dirs.iter().map(|d| grid_rec(&contract_first(data, d), dirs)).fold(0.0, f64::max)
}

struct Candidate {
    coeffs: Vec<f64>,
    score: f64,
    source: String,
}

pub fn entangled_witness(n: usize, k: usize, trials: usize, seed: u64) -> Result<EntangledWitness> {
    if n < 1 || k < 1 {
        return Err(Error::InvalidInput("entangled witness needs n >= 1 and k >= 1".into()));
    }
    let factors = vec![NormedSpace::l2(n); k];
    let size = checked_size(&vec![n; k], Caps::global())?;

    let mk = |c: &[f64]| Tensor::from_f64(factors.clone(), c);
    let cheap = |t: &Tensor, s: u64| -> f64 {
        let (eps, _) = multistart(t, s, 4, 50);
        t.hs_norm() / eps.max(1e-300)
    };

    let mut structured = vec![Candidate { coeffs: paired_tensor(n, k), score: 0.0, source: "paired".into() }];
    if n == 2 {
        structured.push(Candidate { coeffs: phase_tensor(k), score: 0.0, source: "phase".into() });
    }

    let mut random: Vec<Candidate> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut c: Vec<f64> = (0..size).map(|_| StandardNormal.sample(&mut rng)).collect();
            let h = norm2(&c).max(1e-300);
            c.iter_mut().for_each(|v| *v /= h);
            let t = mk(&c).expect("valid shape");
            let score = cheap(&t, seed ^ (i as u64).rotate_left(17));
            Candidate { coeffs: c, score, source: format!("random#{i}") }
        })
        .collect();
    random.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.source.cmp(&b.source)));
    random.truncate(KEEP);

    let mut best: Option<EntangledWitness> = None;
    for cand in structured.into_iter().chain(random) {
        let t = mk(&cand.coeffs)?;
        let hs = t.hs_norm();
        let eps_upper = eps_upper_bound(&t);
        let (eps_lower, _) = multistart(&t, seed, 16, 200);
        let ratio_bound = (hs / eps_upper).powf(2.0 / k as f64);
        let w = EntangledWitness {
            n,
            k,
            coeffs: cand.coeffs,
            hs,
            eps_lower,
            eps_upper,
            ratio_bound,
            trials,
            source: cand.source,
        };
        if best.as_ref().is_none_or(|b| w.ratio_bound > b.ratio_bound) {
            best = Some(w);
        }
    }
    Ok(best.expect("at least one candidate"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_tensor_is_normalized() {
        for k in 1..=5 {
            let t = phase_tensor(k);
            assert!((norm2(&t) - 1.0).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn grid_bound_is_above_ascent() {
        let t = Tensor::from_f64(vec![NormedSpace::l2(2); 3], &phase_tensor(3)).unwrap();
        let up = eps_upper_bound(&t);
        let (low, _) = multistart(&t, 1, 16, 200);
        assert!(low <= up);
        assert!((low - 0.5).abs() < 1e-9);
        assert!(up - 0.5 < 0.02);
    }
}
