//! `τ_k(T) = ‖T^{⊗k}: ε_k(X) -> π_k(Y)‖^{1/k}`.
//!
//! `τ_k^k` is the largest pairing `⟨ψ, T^{⊗k} z⟩` over extreme points `z`
//! of `B_{ε_k(X)}` and `ψ` of `B_{ε_k(Y*)}`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bounds::ExactRoot;
use crate::convex_kernel::{enumerate_vertices, HPolytope};
use crate::error::{Error, Result};
use crate::linalg::{dot, kron_power};
use crate::operators::{operator_norm, LinearOperator};
use crate::scalar::{format_rat, mat_vec, to_f64_vec, transpose, Rat};
use crate::settings::{Arithmetic, Settings};
use crate::spaces::NormedSpace;
use crate::tensor_norms::{injective_norm, outer, projective_norm, projective_norm_warm, Tensor};

/// Requested algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TauMethod {
    #[default]
    Auto,
    /// Sign vectors of parallelotope balls (exact enumeration, or a
    /// heuristic flip search when there are too many).
    Parallelotope,
    /// Vertices of `B_{ε_k(X)}` from their facet description.
    VertexEnumeration,
    /// Alternating projective-norm certificates.
    Heuristic,
}

/// Algorithm actually used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TauPath {
    Zero,
    OperatorNorm,
    SignEnumeration,
    SignAscent,
    VertexEnumeration,
    Alternating,
}

fn ser_rat<S: Serializer>(r: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&format_rat(r)),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauResult {
    pub k: usize,
    /// `τ_k`.
    pub value: f64,
    /// `τ_k^k`.
    pub power: f64,
    #[serde(serialize_with = "ser_rat")]
    pub power_exact: Option<Rat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactRoot>,
    /// `z ∈ B_{ε_k(X)}` attaining the value.
    pub witness_z: Vec<f64>,
    /// `ψ ∈ B_{ε_k(Y*)}` attaining the value.
    pub witness_psi: Vec<f64>,
    /// The value is exact (or certified to solver precision).
    pub certified: bool,
    /// The value is at least a rigorous lower bound.
    pub lower_bound: bool,
    pub path: TauPath,
}

impl TauResult {
    fn from_power(k: usize, power: f64, power_exact: Option<Rat>, z: Vec<f64>, psi: Vec<f64>, certified: bool, path: TauPath) -> Self {
        let power = power_exact.as_ref().map_or(power, crate::scalar::rat_to_f64);
        let exact = power_exact.as_ref().map(|p| ExactRoot::new(p.clone(), k as u32));
        TauResult {
            k,
            value: power.max(0.0).powf(1.0 / k as f64),
            power,
            power_exact,
            exact,
            witness_z: z,
            witness_psi: psi,
            certified,
            lower_bound: true,
            path,
        }
    }
}

pub fn tau_k(t: &LinearOperator, k: usize, s: &Settings) -> Result<TauResult> {
    tau_k_with(t, k, s, TauMethod::Auto)
}

pub fn tau_k_with(t: &LinearOperator, k: usize, s: &Settings, method: TauMethod) -> Result<TauResult> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let nk = t.cols().checked_pow(k as u32);
    let mk = t.rows().checked_pow(k as u32);
    match (nk, mk) {
        (Some(a), Some(b)) if a <= s.caps.tensor_entries && b <= s.caps.tensor_entries => {}
        _ => {
            return Err(Error::SizeCapExceeded {
                size: nk.unwrap_or(usize::MAX).max(mk.unwrap_or(usize::MAX)),
                cap: s.caps.tensor_entries,
            })
        }
    }
    if t.is_zero() {
        let z = vec![0.0; nk.unwrap_or(0)];
        let psi = vec![0.0; mk.unwrap_or(0)];
        return Ok(TauResult::from_power(k, 0.0, Some(Rat::zero()), z, psi, true, TauPath::Zero));
    }
    match method {
        TauMethod::Auto => {
            if k == 1 {
                return via_operator_norm(t, s);
            }
            if let Some(r) = parallelotope(t, k, s)? {
                return Ok(r);
            }
            if t.domain().is_polyhedral() && t.codomain().is_polyhedral() {
                match vertex_enumeration(t, k, s) {
                    Ok(r) => return Ok(r),
                    Err(Error::DimensionCapExceeded { .. } | Error::FacetCapExceeded { .. } | Error::SizeCapExceeded { .. } | Error::NotSupported(_)) => {}
                    Err(e) => return Err(e),
                }
            }
            alternating(t, k, s)
        }
        TauMethod::Parallelotope => parallelotope(t, k, s)?
            .ok_or_else(|| Error::NotSupported("both B_X and B_{Y*} must be parallelotopes".into())),
        TauMethod::VertexEnumeration => vertex_enumeration(t, k, s),
        TauMethod::Heuristic => alternating(t, k, s),
    }
}

fn via_operator_norm(t: &LinearOperator, s: &Settings) -> Result<TauResult> {
    let r = operator_norm(t, s)?;
    let [z, psi] = <[Vec<f64>; 2]>::try_from(r.witness.functionals.clone()).expect("order two");
    let mut out = TauResult::from_power(1, r.value, r.exact.clone(), z, psi, r.certified, TauPath::OperatorNorm);
    out.lower_bound = true;
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parallelotope balls

/// `B_X = A·cube` and `B_{Y*} = B·cube`.
fn parallelotope_maps(t: &LinearOperator) -> Option<(Vec<Vec<Rat>>, Vec<Vec<Rat>>)> {
    let a = t.domain().parallelotope_map()?;
    let b = t.codomain().dual().parallelotope_map()?;
    Some((a, b))
}

/// `D·M` as integers, with `D` the common denominator.
fn integer_scaled(m: &[Vec<Rat>]) -> (Vec<Vec<BigInt>>, BigInt) {
    let d = m.iter().flatten().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints = m
        .iter()
        .map(|r| r.iter().map(|v| (v * Rat::from_integer(d.clone())).to_integer()).collect())
        .collect();
    (ints, d)
}

fn l1_i128(y: &[i128]) -> i128 {
    y.iter().map(|v| v.abs()).sum()
}

fn parallelotope(t: &LinearOperator, k: usize, s: &Settings) -> Result<Option<TauResult>> {
    let Some((a, b)) = parallelotope_maps(t) else { return Ok(None) };
    // M = Bᵀ T A
    let m = crate::scalar::mat_mul(&crate::scalar::mat_mul(&transpose(&b), t.matrix()), &a);
    let (m_int, d) = integer_scaled(&m);
    let kp = kron_power(&m_int, k, BigInt::one());
    let rows = kp.len();
    let cols = kp[0].len();

    // Stay inside i128: every partial sum is bounded by the full ℓ1 mass.
    let mass: BigInt = kp.iter().flatten().map(|v| v.abs()).sum();
    let fits = mass.to_i128().is_some_and(|v| v < i128::MAX / 4);
    let bits = cols - 1;
    let a_pow = kron_power(&a, k, Rat::one());
    let b_pow = kron_power(&b, k, Rat::one());

    if fits && bits <= s.caps.sign_log2 as usize {
        let colv: Vec<Vec<i128>> = (0..cols).map(|j| (0..rows).map(|i| kp[i][j].to_i128().expect("fits")).collect()).collect();
        let mut y: Vec<i128> = (0..rows).map(|i| colv.iter().map(|c| c[i]).sum()).collect();
        let mut beta = vec![1i8; cols];
        let mut best = l1_i128(&y);
        let mut best_beta = beta.clone();
        let mut best_y = y.clone();
        for g in 1u64..(1u64 << bits) {
            let j = g.trailing_zeros() as usize + 1;
            let c = &colv[j];
            if beta[j] == 1 {
                for (yi, ci) in y.iter_mut().zip(c) {
                    *yi -= 2 * ci;
                }
            } else {
                for (yi, ci) in y.iter_mut().zip(c) {
                    *yi += 2 * ci;
                }
            }
            beta[j] = -beta[j];
            let v = l1_i128(&y);
            if v > best {
                best = v;
                best_beta.clone_from(&beta);
                best_y.clone_from(&y);
            }
        }
        let power = Rat::new(BigInt::from(best), d.pow(k as u32));
        let z = apply_signs(&a_pow, &best_beta);
        let signs: Vec<i8> = best_y.iter().map(|v| if *v < 0 { -1 } else { 1 }).collect();
        let psi = apply_signs(&b_pow, &signs);
        return Ok(Some(TauResult::from_power(k, 0.0, Some(power), z, psi, true, TauPath::SignEnumeration)));
    }

    // Too many sign vectors: local flip search from seeded random starts.
    let scale = crate::scalar::rat_to_f64(&Rat::from_integer(d.clone())).powi(k as i32);
    let kf: Vec<Vec<f64>> = kp.iter().map(|r| r.iter().map(|v| v.to_f64().unwrap_or(f64::MAX) / scale).collect()).collect();
    let colf: Vec<Vec<f64>> = (0..cols).map(|j| (0..rows).map(|i| kf[i][j]).collect()).collect();
    let runs: Vec<(f64, Vec<i8>, Vec<f64>)> = (0..s.starts.max(1))
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
            rng.set_stream(i as u64);
            let mut beta: Vec<i8> = (0..cols).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
            let mut y: Vec<f64> = (0..rows).map(|r| (0..cols).map(|j| beta[j] as f64 * colf[j][r]).sum()).collect();
            let mut val: f64 = y.iter().map(|v| v.abs()).sum();
            loop {
                let mut improved = false;
                for j in 0..cols {
                    let b = beta[j] as f64;
                    let cand: f64 = y.iter().zip(&colf[j]).map(|(yi, ci)| (yi - 2.0 * b * ci).abs()).sum();
                    if cand > val * (1.0 + 1e-14) {
                        for (yi, ci) in y.iter_mut().zip(&colf[j]) {
                            *yi -= 2.0 * b * ci;
                        }
                        beta[j] = -beta[j];
                        val = cand;
                        improved = true;
                    }
                }
                if !improved {
                    break;
                }
            }
            (val, beta, y)
        })
        .collect();
    let (val, beta, y) = runs
        .into_iter()
        .reduce(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
        .expect("one start");
    let z = apply_signs(&a_pow, &beta);
    let signs: Vec<i8> = y.iter().map(|v| if *v < 0.0 { -1 } else { 1 }).collect();
    let psi = apply_signs(&b_pow, &signs);
    Ok(Some(TauResult::from_power(k, val, None, z, psi, false, TauPath::SignAscent)))
}

fn apply_signs(m: &[Vec<Rat>], signs: &[i8]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(signs).map(|(v, &s)| crate::scalar::rat_to_f64(v) * s as f64).sum())
        .collect()
}

// ---------------------------------------------------------------------------
// Vertex enumeration

/// `B_{ε_k(X)}` cut out by products of extreme points of `B_{X*}`.
pub fn injective_ball_vertices(x: &NormedSpace, k: usize, s: &Settings) -> Result<Vec<Vec<Rat>>> {
    let dual_ext = x.dual_extreme_points()?;
    let mut facets: Vec<Vec<Vec<Rat>>> = vec![vec![]];
    for _ in 0..k {
        facets = facets
            .into_iter()
            .flat_map(|f| {
                dual_ext.iter().map(move |e| {
                    let mut f = f.clone();
                    f.push(e.clone());
                    f
                })
            })
            .collect();
    }
    let rows: Vec<Vec<Rat>> = facets.iter().map(|f| outer(f, Rat::one())).collect();
    let dim = x.dim().pow(k as u32);
    let h = HPolytope::new(dim, rows)?;
    Ok(enumerate_vertices(&h, &s.caps)?.vertices().to_vec())
}

fn vertex_enumeration(t: &LinearOperator, k: usize, s: &Settings) -> Result<TauResult> {
    // Enumerate the cheaper side: sign vectors when `B_X` is a
    // parallelotope, otherwise swap to `T*` when `B_{Y*}` is one.
    if t.domain().parallelotope_map().is_none() && t.codomain().dual().parallelotope_map().is_some() {
        let mut r = vertex_enumeration(&t.adjoint(), k, s)?;
        std::mem::swap(&mut r.witness_z, &mut r.witness_psi);
        return Ok(r);
    }
    let x_vertices = match t.domain().parallelotope_map() {
        Some(a) => parallelotope_vertices(&a, k, s)?,
        None => injective_ball_vertices(t.domain(), k, s)?,
    };
    let kp = t.kron_power(k);
    let y_map = t.codomain().dual().parallelotope_map();
    let psi_side: PsiSide = match &y_map {
        Some(b) => PsiSide::Parallelotope(transpose(&kron_power(b, k, Rat::one()))),
        None => PsiSide::Projective(vec![t.codomain().clone(); k]),
    };
    if x_vertices.len() > s.caps.enumeration {
        return Err(Error::SizeCapExceeded { size: x_vertices.len(), cap: s.caps.enumeration });
    }
    let exact = Settings { arithmetic: Arithmetic::Exact, ..s.clone() };
    let images: Vec<Vec<Rat>> = x_vertices.par_iter().map(|z| mat_vec(&kp, z)).collect();
    // LPs in floating point first; only near-maximal candidates are
    // re-solved exactly.
    let keep: Vec<usize> = match &psi_side {
        PsiSide::Parallelotope(_) => (0..images.len()).collect(),
        PsiSide::Projective(_) => {
            let float = Settings { arithmetic: Arithmetic::Float, ..s.clone() };
            let approx: Vec<f64> = images.par_iter().map(|w| psi_side.approx(w, &float)).collect::<Result<_>>()?;
            let top = approx.iter().cloned().fold(0.0, f64::max);
            let margin = FILTER_MARGIN * top.max(1.0);
            (0..images.len()).filter(|&i| approx[i] >= top - margin).collect()
        }
    };
    let scored: Vec<(usize, Rat, Vec<f64>)> = keep
        .par_iter()
        .map(|&i| psi_side.best(&images[i], &exact).map(|(v, psi)| (i, v, psi)))
        .collect::<Result<_>>()?;
    let best = scored
        .iter()
        .fold(&scored[0], |b, c| if c.1 > b.1 { c } else { b });
    let (best_i, power, psi) = best.clone();
    Ok(TauResult::from_power(k, 0.0, Some(power), to_f64_vec(&x_vertices[best_i]), psi, true, TauPath::VertexEnumeration))
}

/// Relative slack for the floating-point prefilter, far above LP round-off.
const FILTER_MARGIN: f64 = 1e-6;

/// Vertices `A^{⊗k} σ` of `B_{ε_k(X)}` for `B_X = A·cube`, one per ± pair.
fn parallelotope_vertices(a: &[Vec<Rat>], k: usize, s: &Settings) -> Result<Vec<Vec<Rat>>> {
    let ak = kron_power(a, k, Rat::one());
    let bits = ak[0].len() - 1;
    if bits > s.caps.sign_log2 as usize {
        return Err(Error::SizeCapExceeded { size: 1usize.checked_shl(bits as u32).unwrap_or(usize::MAX), cap: 1 << s.caps.sign_log2 });
    }
    Ok((0..1usize << bits)
        .map(|mask| {
            let sigma: Vec<Rat> = (0..=bits)
                .map(|j| if j > 0 && mask >> (j - 1) & 1 == 1 { -Rat::one() } else { Rat::one() })
                .collect();
            mat_vec(&ak, &sigma)
        })
        .collect())
}

enum PsiSide {
    /// Transposed `B^{⊗k}`; the best pairing is an ℓ1 norm.
    Parallelotope(Vec<Vec<Rat>>),
    /// `max ⟨ψ, w⟩` over `B_{ε_k(Y*)}` is the projective norm over `Y`,
    /// solved exactly by LP; its certificate is the maximizing `ψ`.
    Projective(Vec<NormedSpace>),
}

impl PsiSide {
    fn approx(&self, w: &[Rat], s: &Settings) -> Result<f64> {
        match self {
            PsiSide::Parallelotope(_) => Ok(0.0),
            PsiSide::Projective(ys) => Ok(projective_norm(&Tensor::from_f64(ys.clone(), &to_f64_vec(w))?, s)?.value),
        }
    }

    fn best(&self, w: &[Rat], s: &Settings) -> Result<(Rat, Vec<f64>)> {
        match self {
            PsiSide::Parallelotope(bt) => {
                let c = mat_vec(bt, w);
                let v: Rat = c.iter().map(|x| x.abs()).sum();
                // ψ = B^{⊗k} sign(c)
                let signs: Vec<Rat> = c.iter().map(|x| if x.is_negative() { -Rat::one() } else { Rat::one() }).collect();
                let b = transpose(bt);
                Ok((v, to_f64_vec(&mat_vec(&b, &signs))))
            }
            PsiSide::Projective(ys) => {
                let r = projective_norm(&Tensor::new(ys.clone(), w.to_vec())?, s)?;
                match (r.exact, r.certified) {
                    (Some(v), true) => Ok((v, r.certificate)),
                    _ => Err(Error::NotSupported("exact projective norm unavailable".into())),
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Alternating certificates

/// Slot solves inside the sweeps only steer the ascent, so they run with a
/// small multistart budget; the final witness norms use the full one.
const SLOT_STARTS: usize = 8;

fn alternating(t: &LinearOperator, k: usize, s: &Settings) -> Result<TauResult> {
    let nk_entries = t.cols().max(t.rows()).saturating_pow(k as u32);
    let smooth = !t.domain().is_polyhedral() || !t.codomain().is_polyhedral();
    if smooth && k > 1 && nk_entries > s.caps.smooth_entries {
        return Err(Error::SizeCapExceeded { size: nk_entries, cap: s.caps.smooth_entries });
    }
    let float = Settings { arithmetic: Arithmetic::Float, ..s.clone() };
    let slot = Settings { starts: s.starts.min(SLOT_STARTS), ..float.clone() };
    let kp: Vec<Vec<f64>> = t.kron_power(k).iter().map(|r| to_f64_vec(r)).collect();
    let kpt = transpose(&kp);
    let xs = vec![t.domain().clone(); k];
    let ys = vec![t.codomain().clone(); k];
    let x_duals = vec![t.domain().dual(); k];
    let y_duals = vec![t.codomain().dual(); k];
    let n = t.cols();
    let nk = kpt.len();
    let sweeps = s.max_sweeps.min(100);

    let run = |mut z: Vec<f64>| -> Result<(f64, Vec<f64>, Vec<f64>)> {
        let mut value = f64::NEG_INFINITY;
        let mut psi = Vec::new();
        let (mut warm_y, mut warm_x) = (Vec::new(), Vec::new());
        for _ in 0..sweeps {
            let w: Vec<f64> = kp.iter().map(|r| dot(r, &z)).collect();
            let pw = projective_norm_warm(&Tensor::from_f64(ys.clone(), &w)?, &slot, &warm_y)?;
            psi = pw.certificate;
            warm_y = pw.decomposition.atoms;
            let v: Vec<f64> = kpt.iter().map(|r| dot(r, &psi)).collect();
            let pv = projective_norm_warm(&Tensor::from_f64(x_duals.clone(), &v)?, &slot, &warm_x)?;
            let new_z = pv.certificate;
            warm_x = pv.decomposition.atoms;
            let new_value = dot(&v, &new_z);
            z = new_z;
            let done = new_value - value <= 1e-12 * new_value.abs().max(1e-300);
            value = value.max(new_value);
            if done {
                break;
            }
        }
        Ok((value, z, psi))
    };

    // Structured start: Σ e_i^{⊗k} (the identity when k = 2), then random.
    let mut starts: Vec<Vec<f64>> = Vec::new();
    let mut diag = vec![0.0; nk];
    for i in 0..n {
        let idx: usize = (0..k).fold(0, |acc, _| acc * n + i);
        diag[idx] = 1.0;
    }
    starts.push(diag);
    for i in 0..s.starts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
        rng.set_stream(i as u64);
        starts.push((0..nk).map(|_| StandardNormal.sample(&mut rng)).collect());
    }
    let runs: Vec<(f64, Vec<f64>, Vec<f64>)> = starts
        .into_par_iter()
        .map(|z0| {
            let eps = injective_norm(&Tensor::from_f64(xs.clone(), &z0)?, &slot)?;
            let scale = eps.upper.unwrap_or(eps.value).max(1e-300);
            run(z0.iter().map(|v| v / scale).collect())
        })
        .collect::<Result<_>>()?;
    let (value, z, psi) = runs
        .into_iter()
        .reduce(|a, b| match b.0.total_cmp(&a.0) {
            Ordering::Greater => b,
            _ => a,
        })
        .expect("one start");

    // Rescale by certified norms of the witnesses so the value is a
    // rigorous lower bound whenever those norms are certified.
    let ez = injective_norm(&Tensor::from_f64(xs, &z)?, &float)?;
    let ep = injective_norm(&Tensor::from_f64(y_duals, &psi)?, &float)?;
    let pairing: f64 = kp.iter().zip(&psi).map(|(r, p)| p * dot(r, &z)).sum();
    let (zu, pu) = (ez.upper.filter(|_| ez.certified), ep.upper.filter(|_| ep.certified));
    let mut out = match (zu, pu) {
        (Some(a), Some(b)) => {
            let power = pairing / (a.max(1.0) * b.max(1.0));
            let mut r = TauResult::from_power(k, power, None, z, psi, false, TauPath::Alternating);
            r.lower_bound = true;
            r
        }
        _ => {
            let mut r = TauResult::from_power(k, value.max(pairing), None, z, psi, false, TauPath::Alternating);
            r.lower_bound = false;
            r
        }
    };
    out.power = out.power.max(0.0);
    Ok(out)
}

/// `τ_k(id_X)`.
pub fn rho_k(x: &NormedSpace, k: usize, s: &Settings) -> Result<TauResult> {
    tau_k(&LinearOperator::identity(x.clone()), k, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn hadamard() -> LinearOperator {
        let h = vec![vec![rat(1, 2), rat(1, 2)], vec![rat(1, 2), rat(-1, 2)]];
        LinearOperator::new(h, NormedSpace::linf(2), NormedSpace::l1(2)).unwrap()
    }

    #[test]
    fn hadamard_powers() {
        let h = hadamard();
        let s = Settings::default();
        let expect = [rat_int(1), rat_int(2), rat(5, 2), rat_int(4)];
        for (k, e) in (1..=4).zip(expect) {
            let r = tau_k(&h, k, &s).unwrap();
            assert_eq!(r.power_exact.unwrap(), e, "k={k}");
        }
    }

    #[test]
    fn witnesses_attain_the_value() {
        let h = hadamard();
        let r = tau_k(&h, 3, &Settings::default()).unwrap();
        let kp: Vec<Vec<f64>> = h.kron_power(3).iter().map(|r| to_f64_vec(r)).collect();
        let pairing: f64 = kp.iter().zip(&r.witness_psi).map(|(row, p)| p * dot(row, &r.witness_z)).sum();
        assert!((pairing - 2.5).abs() < 1e-12);
    }

    #[test]
    fn enumeration_agrees_with_signs() {
        let s_op = vec![vec![rat_int(1), rat(1, 3)], vec![rat(1, 3), rat_int(1)]];
        let t = LinearOperator::new(s_op, NormedSpace::l1(2), NormedSpace::l1(2)).unwrap();
        let a = tau_k_with(&t, 2, &Settings::default(), TauMethod::VertexEnumeration).unwrap();
        let b = tau_k_with(&t, 2, &Settings::default(), TauMethod::Parallelotope).unwrap();
        assert_eq!(a.power_exact, b.power_exact);
        assert_eq!(a.power_exact.unwrap(), rat_int(2));
    }

    #[test]
    fn zero_operator() {
        let t = LinearOperator::new(vec![vec![rat_int(0); 2]; 2], NormedSpace::l2(2), NormedSpace::l2(2)).unwrap();
        let r = tau_k(&t, 3, &Settings::default()).unwrap();
        assert_eq!(r.value, 0.0);
    }
}
