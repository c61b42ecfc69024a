use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::{rat_from_f64, to_f64_vec, Rat, Scalar};
use crate::settings::Caps;
use crate::spaces::{NormedSpace, NumSpec};

/// Dense order-`k` tensor over `X_1 ⊗ … ⊗ X_k`, row-major.
#[derive(Debug, Clone)]
pub struct Tensor {
    factors: Vec<NormedSpace>,
    shape: Vec<usize>,
    // Filled lazily for tensors built from floats.
    exact: OnceLock<Vec<Rat>>,
    values: Vec<f64>,
}

impl PartialEq for Tensor {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors && self.shape == other.shape && self.exact() == other.exact()
    }
}

impl Tensor {
    pub fn new(factors: Vec<NormedSpace>, coeffs: Vec<Rat>) -> Result<Self> {
        Self::with_caps(factors, coeffs, Caps::global())
    }

    pub fn with_caps(factors: Vec<NormedSpace>, coeffs: Vec<Rat>, caps: &Caps) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidInput("a tensor needs at least one factor".into()));
        }
        let shape: Vec<usize> = factors.iter().map(NormedSpace::dim).collect();
        let size = checked_size(&shape, caps)?;
        if coeffs.len() != size {
            return Err(Error::DimensionMismatch { expected: size, got: coeffs.len() });
        }
        let values = to_f64_vec(&coeffs);
        Ok(Tensor { factors, shape, exact: OnceLock::from(coeffs), values })
    }

    /// Coefficients are converted through their shortest decimal expansion.
    pub fn from_f64(factors: Vec<NormedSpace>, coeffs: &[f64]) -> Result<Self> {
        if let Some(v) = coeffs.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite coefficient {v}")));
        }
        let shape: Vec<usize> = factors.iter().map(NormedSpace::dim).collect();
        let size = checked_size(&shape, Caps::global())?;
        if coeffs.len() != size {
            return Err(Error::DimensionMismatch { expected: size, got: coeffs.len() });
        }
        Ok(Tensor { factors, shape, exact: OnceLock::new(), values: coeffs.to_vec() })
    }

    /// `x_1 ⊗ … ⊗ x_k`.
    pub fn rank_one(factors: Vec<NormedSpace>, vectors: &[Vec<Rat>]) -> Result<Self> {
        if vectors.len() != factors.len() {
            return Err(Error::DimensionMismatch { expected: factors.len(), got: vectors.len() });
        }
        for (f, v) in factors.iter().zip(vectors) {
            if f.dim() != v.len() {
                return Err(Error::DimensionMismatch { expected: f.dim(), got: v.len() });
            }
        }
        let coeffs = outer(vectors, Rat::from_integer(1.into()));
        Tensor::new(factors, coeffs)
    }

    pub fn order(&self) -> usize {
        self.factors.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn factors(&self) -> &[NormedSpace] {
        &self.factors
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn exact(&self) -> &[Rat] {
        self.exact.get_or_init(|| {
            self.values.iter().map(|&v| rat_from_f64(v).expect("finite coefficients")).collect()
        })
    }

    /// Same coefficients over the dual factor spaces.
    pub fn over_duals(&self) -> Tensor {
        Tensor {
            factors: self.factors.iter().map(NormedSpace::dual).collect(),
            shape: self.shape.clone(),
            exact: self.exact.clone(),
            values: self.values.clone(),
        }
    }

    pub fn with_factors(&self, factors: Vec<NormedSpace>) -> Result<Tensor> {
        let shape: Vec<usize> = factors.iter().map(NormedSpace::dim).collect();
        if shape != self.shape {
            return Err(Error::DimensionMismatch { expected: self.len(), got: shape.iter().product() });
        }
        Ok(Tensor { factors, shape, exact: self.exact.clone(), values: self.values.clone() })
    }

    /// Euclidean norm of the coefficient array.
    pub fn hs_norm(&self) -> f64 {
        crate::linalg::norm2(&self.values)
    }

    /// Full pairing `(λ_1 ⊗ … ⊗ λ_k)(z)`.
    pub fn pair(&self, funcs: &[Vec<f64>]) -> f64 {
        let c = contract_all_but(&self.values, &self.shape, funcs, None);
        c[0]
    }
}

pub(crate) fn checked_size(shape: &[usize], caps: &Caps) -> Result<usize> {
    let mut size: usize = 1;
    for &d in shape {
        size = size.checked_mul(d).ok_or(Error::SizeCapExceeded { size: usize::MAX, cap: caps.tensor_entries })?;
        if size > caps.tensor_entries {
            return Err(Error::SizeCapExceeded { size, cap: caps.tensor_entries });
        }
    }
    Ok(size)
}

/// Row-major outer product of the given vectors.
pub fn outer<F: Scalar>(vectors: &[Vec<F>], one: F) -> Vec<F> {
    let mut out = vec![one];
    for v in vectors {
        out = out
            .iter()
            .flat_map(|a| v.iter().map(move |b| a.clone() * b.clone()))
            .collect();
    }
    out
}

/// Contract every slot except `free` with the given functionals. With
/// `free = None` the result has length one.
pub fn contract_all_but<F: Scalar>(coeffs: &[F], shape: &[usize], funcs: &[Vec<F>], free: Option<usize>) -> Vec<F> {
    // Contract from the last slot backwards so the remaining array stays
    // row-major in the leading slots.
    let mut data: Vec<F> = coeffs.to_vec();
    let mut dims: Vec<usize> = shape.to_vec();
    for slot in (0..shape.len()).rev() {
        if Some(slot) == free {
            continue;
        }
        let d = dims[slot];
        let inner: usize = dims[slot + 1..].iter().product();
        let outer_len: usize = dims[..slot].iter().product();
        let f = &funcs[slot];
        let mut next = vec![F::zero(); outer_len * inner];
        for o in 0..outer_len {
            for i in 0..d {
                if f[i].is_zero() {
                    continue;
                }
                let base = (o * d + i) * inner;
                for r in 0..inner {
                    let idx = o * inner + r;
                    next[idx] = next[idx].clone() + f[i].clone() * data[base + r].clone();
                }
            }
        }
        data = next;
        dims[slot] = 1;
    }
    data
}

/// Move axis `axis` to the last position.
pub fn axis_to_back<T: Clone>(coeffs: &[T], shape: &[usize], axis: usize) -> (Vec<T>, Vec<usize>) {
    let k = shape.len();
    if axis + 1 == k {
        return (coeffs.to_vec(), shape.to_vec());
    }
    let mut new_shape: Vec<usize> = shape.iter().enumerate().filter(|(i, _)| *i != axis).map(|(_, d)| *d).collect();
    new_shape.push(shape[axis]);
    let mut strides = vec![1usize; k];
    for i in (0..k - 1).rev() {
        strides[i] = strides[i + 1] * shape[i + 1];
    }
    let order: Vec<usize> = (0..k).filter(|&i| i != axis).chain(std::iter::once(axis)).collect();
    let total = coeffs.len();
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; k];
    for _ in 0..total {
        let src: usize = order.iter().zip(&idx).map(|(&ax, &i)| i * strides[ax]).sum();
        out.push(coeffs[src].clone());
        for pos in (0..k).rev() {
            idx[pos] += 1;
            if idx[pos] < new_shape[pos] {
                break;
            }
            idx[pos] = 0;
        }
    }
    (out, new_shape)
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorSpec {
    pub factors: Vec<NormedSpace>,
    pub coeffs: Value,
}

fn flatten(value: &Value, depth: usize, shape: &[usize], out: &mut Vec<Rat>) -> Result<()> {
    if depth == shape.len() {
        let num: NumSpec = serde_json::from_value(value.clone())
            .map_err(|_| Error::InvalidInput(format!("expected a number, got {value}")))?;
        out.push(num.to_rat()?);
        return Ok(());
    }
    let arr = value
        .as_array()
        .ok_or_else(|| Error::InvalidInput(format!("expected an array at depth {depth}")))?;
    if arr.len() != shape[depth] {
        return Err(Error::DimensionMismatch { expected: shape[depth], got: arr.len() });
    }
    for v in arr {
        flatten(v, depth + 1, shape, out)?;
    }
    Ok(())
}

fn nest(coeffs: &[Rat], shape: &[usize]) -> Value {
    if shape.is_empty() {
        return serde_json::to_value(NumSpec::from_rat(&coeffs[0])).expect("number");
    }
    let step = coeffs.len() / shape[0].max(1);
    Value::Array(
        (0..shape[0])
            .map(|i| nest(&coeffs[i * step..(i + 1) * step], &shape[1..]))
            .collect(),
    )
}

impl TryFrom<TensorSpec> for Tensor {
    type Error = Error;

    fn try_from(spec: TensorSpec) -> Result<Tensor> {
        let shape: Vec<usize> = spec.factors.iter().map(NormedSpace::dim).collect();
        checked_size(&shape, Caps::global())?;
        let mut coeffs = Vec::new();
        flatten(&spec.coeffs, 0, &shape, &mut coeffs)?;
        Tensor::new(spec.factors, coeffs)
    }
}

impl From<&Tensor> for TensorSpec {
    fn from(t: &Tensor) -> TensorSpec {
        TensorSpec { factors: t.factors.clone(), coeffs: nest(t.exact(), &t.shape) }
    }
}
