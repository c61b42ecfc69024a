//! Projective norm `π(z) = inf Σ|w_j| Π‖x_j^i‖` over decompositions
//! `z = Σ w_j x_j^1 ⊗ … ⊗ x_j^k`.

use serde::Serialize;

use super::injective::{euclidean_frame, injective_norm, multistart, planned_method, Method};
use super::tensor::{outer, Tensor};
use crate::convex_kernel::{minimize_equality, EqOutcome};
use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::scalar::{to_f64_vec, Rat, Scalar};
use crate::settings::{Arithmetic, Settings};
use crate::spaces::NormedSpace;

/// `z ≈ Σ w_j a_j`, each atom given by unit vectors (one per factor).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NuclearDecomposition {
    pub weights: Vec<f64>,
    pub atoms: Vec<Vec<Vec<f64>>>,
    /// Max-entry error of the reconstruction.
    pub residual: f64,
}

impl NuclearDecomposition {
    pub fn cost(&self) -> f64 {
        self.weights.iter().map(|w| w.abs()).sum()
    }

    pub fn reconstruct(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for (w, atom) in self.weights.iter().zip(&self.atoms) {
            let a = outer(atom, *w);
            if out.is_empty() {
                out = a;
            } else {
                for (o, v) in out.iter_mut().zip(a) {
                    *o += v;
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectiveResult {
    pub value: f64,
    #[serde(skip)]
    pub exact: Option<Rat>,
    pub lower: f64,
    pub upper: f64,
    pub decomposition: NuclearDecomposition,
    /// `φ` over the dual factors with `ε(φ) <= 1` (up to the stated bounds)
    /// and `⟨φ, z⟩ = value`.
    pub certificate: Vec<f64>,
    #[serde(skip)]
    pub certificate_exact: Option<Vec<Rat>>,
    pub certified: bool,
    pub method: Method,
    pub iterations: usize,
}

/// Upper limit on product atoms for the exact LP path.
const LP_ATOM_CAP: usize = 20_000;
const PRICING_TOL: f64 = 1e-7;
const GAP_TOL: f64 = 1e-6;

pub fn projective_norm(z: &Tensor, s: &Settings) -> Result<ProjectiveResult> {
    dispatch(z, s, &[], false)
}

/// As [`projective_norm`], with extra starting atoms for the column
/// generation path (e.g. the decomposition of a nearby tensor). Other
/// paths ignore them. Meant for inner loops: at the iteration cap the last
/// iterate is returned uncertified instead of `NoConvergence`.
pub fn projective_norm_warm(z: &Tensor, s: &Settings, warm: &[Vec<Vec<f64>>]) -> Result<ProjectiveResult> {
    dispatch(z, s, warm, true)
}

fn dispatch(z: &Tensor, s: &Settings, warm: &[Vec<Vec<f64>>], lenient: bool) -> Result<ProjectiveResult> {
    let factors = z.factors();
    if z.order() == 1 {
        return order_one(z, s);
    }
    if factors.iter().all(NormedSpace::is_polyhedral) {
        let mut atoms: usize = 1;
        let mut ok = true;
        for f in factors {
            match f.extreme_points() {
                Ok(e) => atoms = atoms.saturating_mul(e.len()),
                Err(_) => ok = false,
            }
        }
        if ok && atoms <= LP_ATOM_CAP.min(s.caps.enumeration) {
            return if s.exact() { lp::<Rat>(z) } else { lp::<f64>(z) };
        }
    }
    if z.order() == 2 && factors.iter().all(NormedSpace::is_euclidean) {
        return svd_path(z);
    }
    column_generation(z, s, warm, lenient)
}

fn order_one(z: &Tensor, s: &Settings) -> Result<ProjectiveResult> {
    let x = &z.factors()[0];
    let exact = if s.exact() && x.is_polyhedral() { Some(x.norm_exact(z.exact())?) } else { None };
    let value = exact.as_ref().map_or(x.norm(z.values())?, Scalar::to_f64);
    use num_traits::Signed;
    // The best dual extreme point norms `z` exactly.
    let certificate_exact = match &exact {
        Some(_) => {
            let duals = x.dual_extreme_points()?;
            let score = |f: &Vec<Rat>| crate::scalar::dot(f, z.exact()).abs();
            duals.iter().max_by(|a, b| score(a).cmp(&score(b))).map(|f| {
                let sign = if crate::scalar::dot(f, z.exact()) < Rat::default() { -1 } else { 1 };
                f.iter().map(|v| v * Rat::from_integer(sign.into())).collect::<Vec<Rat>>()
            })
        }
        None => None,
    };
    let decomposition = if value > 0.0 {
        NuclearDecomposition {
            weights: vec![value],
            atoms: vec![vec![z.values().iter().map(|v| v / value).collect()]],
            residual: 0.0,
        }
    } else {
        NuclearDecomposition { weights: vec![], atoms: vec![], residual: 0.0 }
    };
    Ok(ProjectiveResult {
        value,
        exact,
        lower: value,
        upper: value,
        decomposition,
        certificate: match &certificate_exact {
            Some(c) => crate::scalar::to_f64_vec(c),
            None => x.norming_functional(z.values())?,
        },
        certificate_exact,
        certified: true,
        method: Method::Direct,
        iterations: 0,
    })
}

/// Minimize `Σ (w⁺_j + w⁻_j)` subject to `Σ (w⁺_j - w⁻_j) a_j = z` over all
/// products of extreme points; the LP duals are a norming functional.
fn lp<F: Scalar + 'static>(z: &Tensor) -> Result<ProjectiveResult> {
    let factors = z.factors();
    let exts: Vec<&[Vec<Rat>]> = factors.iter().map(|f| f.extreme_points()).collect::<Result<_>>()?;
    let mut atoms: Vec<Vec<Vec<Rat>>> = vec![vec![]];
    for e in &exts {
        atoms = atoms
            .into_iter()
            .flat_map(|a| {
                e.iter().map(move |p| {
                    let mut a = a.clone();
                    a.push(p.clone());
                    a
                })
            })
            .collect();
    }
    let cols: Vec<Vec<F>> = atoms
        .iter()
        .map(|a| outer(a, Rat::from_integer(1.into())).iter().map(F::from_rat).collect())
        .collect();
    let n = z.len();
    let rows: Vec<Vec<F>> = (0..n)
        .map(|i| cols.iter().flat_map(|c| [c[i].clone(), -c[i].clone()]).collect())
        .collect();
    let b: Vec<F> = z.exact().iter().map(F::from_rat).collect();
    let cost = vec![F::one(); 2 * cols.len()];
    let (value, x, duals) = match minimize_equality(&rows, &b, &cost) {
        EqOutcome::Optimal { value, x, duals } => (value, x, duals),
        // Product atoms span the whole tensor space.
        _ => return Err(Error::InfeasibleDecomposition { residual: f64::NAN }),
    };
    let mut weights = Vec::new();
    let mut used = Vec::new();
    for (j, a) in atoms.iter().enumerate() {
        let w = x[2 * j].clone() - x[2 * j + 1].clone();
        if !w.is_negligible() {
            weights.push(w.to_f64());
            used.push(a.iter().map(|v| to_f64_vec(v)).collect::<Vec<_>>());
        }
    }
    let mut decomposition = NuclearDecomposition { weights, atoms: used, residual: 0.0 };
    decomposition.residual = residual(&decomposition, z.values());
    let value_f = value.to_f64();
    let (exact, certificate_exact) = if F::EXACT {
        (Some(as_rat(&value)), Some(duals.iter().map(as_rat).collect::<Vec<_>>()))
    } else {
        (None, None)
    };
    Ok(ProjectiveResult {
        value: value_f,
        exact,
        lower: value_f,
        upper: value_f,
        decomposition,
        certificate: to_f64_vec(&duals),
        certificate_exact,
        certified: true,
        method: Method::Lp,
        iterations: 1,
    })
}

fn as_rat<F: Scalar + 'static>(v: &F) -> Rat {
    let any: &dyn std::any::Any = v;
    any.downcast_ref::<Rat>().cloned().expect("exact scalar is Rat")
}

fn residual(d: &NuclearDecomposition, z: &[f64]) -> f64 {
    let r = d.reconstruct();
    if r.is_empty() {
        return z.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    }
    r.iter().zip(z).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
}

/// Order two, Euclidean factors: `π = Σ σ_i(C₁ Z C₂ᵀ)`.
fn svd_path(z: &Tensor) -> Result<ProjectiveResult> {
    let (w, c1, c2) = euclidean_frame(z);
    let svd = w.svd(true, true);
    let (u, vt) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
    let value: f64 = svd.singular_values.iter().sum();
    let c1_inv = c1.clone().try_inverse().expect("invertible");
    let c2_inv = c2.clone().try_inverse().expect("invertible");
    let mut weights = Vec::new();
    let mut atoms = Vec::new();
    for (i, &sigma) in svd.singular_values.iter().enumerate() {
        if sigma <= 1e-15 * value.max(1e-300) {
            continue;
        }
        let a: Vec<f64> = (&c1_inv * u.column(i)).iter().copied().collect();
        let b: Vec<f64> = (&c2_inv * vt.row(i).transpose()).iter().copied().collect();
        weights.push(sigma);
        atoms.push(vec![a, b]);
    }
    let q = c1.transpose() * &u * &vt * &c2;
    let certificate: Vec<f64> = (0..q.nrows()).flat_map(|i| (0..q.ncols()).map(move |j| (i, j))).map(|(i, j)| q[(i, j)]).collect();
    let mut decomposition = NuclearDecomposition { weights, atoms, residual: 0.0 };
    decomposition.residual = residual(&decomposition, z.values());
    Ok(ProjectiveResult {
        value,
        exact: None,
        lower: value,
        upper: value,
        decomposition,
        certificate,
        certificate_exact: None,
        certified: true,
        method: Method::Svd,
        iterations: 1,
    })
}

fn unit_atom(factors: &[NormedSpace], vecs: Vec<Vec<f64>>) -> Option<Vec<Vec<f64>>> {
    vecs.into_iter()
        .zip(factors)
        .map(|(v, f)| {
            let n = f.norm(&v).ok()?;
            (n > 1e-300).then(|| v.iter().map(|x| x / n).collect())
        })
        .collect()
}

/// Same atom up to sign.
fn is_duplicate(flat: &[Vec<f64>], f: &[f64]) -> bool {
    flat.iter().any(|c| {
        let d: f64 = c.iter().zip(f).map(|(x, y)| (x - y).abs()).sum();
        let e: f64 = c.iter().zip(f).map(|(x, y)| (x + y).abs()).sum();
        d.min(e) < 1e-12
    })
}

fn column_generation(z: &Tensor, s: &Settings, warm: &[Vec<Vec<f64>>], lenient: bool) -> Result<ProjectiveResult> {
    let factors = z.factors();
    let duals: Vec<NormedSpace> = factors.iter().map(NormedSpace::dual).collect();
    let float = Settings { arithmetic: Arithmetic::Float, ..s.clone() };
    let n = z.len();

    // Start from normalized basis products so the LP is always feasible.
    let mut atoms: Vec<Vec<Vec<f64>>> = Vec::new();
    let mut idx = vec![0usize; factors.len()];
    for _ in 0..n {
        let vecs: Vec<Vec<f64>> = idx
            .iter()
            .zip(factors)
            .map(|(&i, f)| {
                let mut e = vec![0.0; f.dim()];
                e[i] = 1.0;
                e
            })
            .collect();
        atoms.push(unit_atom(factors, vecs).expect("basis vectors are nonzero"));
        for pos in (0..idx.len()).rev() {
            idx[pos] += 1;
            if idx[pos] < factors[pos].dim() {
                break;
            }
            idx[pos] = 0;
        }
    }
    let mut flat: Vec<Vec<f64>> = atoms.iter().map(|a| outer(a, 1.0)).collect();
    for w in warm {
        let shapes_match = w.len() == factors.len() && w.iter().zip(factors).all(|(v, f)| v.len() == f.dim());
        if let Some(a) = unit_atom(factors, w.clone()).filter(|_| shapes_match) {
            let f = outer(&a, 1.0);
            if !is_duplicate(&flat, &f) {
                atoms.push(a);
                flat.push(f);
            }
        }
    }

    let mut lower = 0.0f64;
    let mut upper = f64::INFINITY;
    for it in 1..=s.caps.colgen_iters {
        let rows: Vec<Vec<f64>> = (0..n).map(|i| flat.iter().flat_map(|c| [c[i], -c[i]]).collect()).collect();
        let cost = vec![1.0; 2 * flat.len()];
        let EqOutcome::Optimal { value, x, duals: phi } = minimize_equality(&rows, z.values(), &cost) else {
            return Err(Error::NoConvergence { iterations: it, lower, upper });
        };
        upper = upper.min(value);
        let phi_t = Tensor::from_f64(duals.clone(), &phi)?;

        // Cheap pricing first; only confirm with the full engine when it
        // finds nothing.
        let planned = planned_method(&phi_t, &float);
        let quick = if matches!(planned, Method::Enumeration | Method::Svd) {
            None
        } else {
            Some(multistart(&phi_t, s.seed.wrapping_add(it as u64), 8, s.max_sweeps))
        };
        let mut new_atom = None;
        let mut confirmed = None;
        if let Some((v, w)) = &quick {
            if *v > 1.0 + PRICING_TOL {
                new_atom = Some(w.clone());
            }
        }
        if new_atom.is_none() {
            let r = injective_norm(&phi_t, &float)?;
            if r.value > 1.0 + PRICING_TOL {
                new_atom = Some(r.witness.functionals.clone());
            }
            confirmed = Some(r);
        }
        if let Some(r) = &confirmed {
            if let Some(eps_up) = r.upper {
                lower = lower.max(dot(&phi, z.values()) / eps_up.max(1e-300));
            }
        }
        let mut weights = Vec::new();
        let mut used = Vec::new();
        for (j, a) in atoms.iter().enumerate() {
            let w = x[2 * j] - x[2 * j + 1];
            if w.abs() > 1e-15 {
                weights.push(w);
                used.push(a.clone());
            }
        }
        let mut decomposition = NuclearDecomposition { weights, atoms: used, residual: 0.0 };
        decomposition.residual = residual(&decomposition, z.values());

        let finished = match (&new_atom, &confirmed) {
            (None, Some(_)) => true,
            (Some(w), _) => {
                // A repeated atom means the LP is stalling on round-off.
                match unit_atom(factors, w.clone()) {
                    Some(a) => {
                        let f = outer(&a, 1.0);
                        if is_duplicate(&flat, &f) {
                            true
                        } else {
                            atoms.push(a);
                            flat.push(f);
                            false
                        }
                    }
                    None => true,
                }
            }
            (None, None) => unreachable!("pricing always runs"),
        };
        if finished || (lenient && it == s.caps.colgen_iters) {
            let certified = confirmed.as_ref().is_some_and(|r| r.certified)
                && new_atom.is_none()
                && upper - lower <= GAP_TOL * upper.max(1.0);
            return Ok(ProjectiveResult {
                value: upper,
                exact: None,
                lower: if confirmed.is_some() { lower } else { 0.0 },
                upper,
                decomposition,
                certificate: phi,
                certificate_exact: None,
                certified,
                method: Method::ColumnGeneration,
                iterations: it,
            });
        }
    }
    Err(Error::NoConvergence { iterations: s.caps.colgen_iters, lower, upper })
}
