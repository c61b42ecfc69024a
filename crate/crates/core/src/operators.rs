//! Linear maps between normed spaces, with operator and nuclear norms
//! computed through the identification `L(X, Y) = X* ⊗ Y`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::kron_power;
use crate::scalar::{mat_mul, rat_from_f64, to_f64_vec, transpose, Rat};
use crate::settings::Settings;
use crate::spaces::{rat_rows, NormedSpace, NumSpec};
use crate::tensor_norms::{injective_norm, projective_norm, InjectiveResult, ProjectiveResult, Tensor};

/// `T: X -> Y` stored as an `m x n` matrix (`m = dim Y`, `n = dim X`).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    matrix: Vec<Vec<Rat>>,
    domain: NormedSpace,
    codomain: NormedSpace,
}

impl LinearOperator {
    pub fn new(matrix: Vec<Vec<Rat>>, domain: NormedSpace, codomain: NormedSpace) -> Result<Self> {
        if matrix.len() != codomain.dim() {
            return Err(Error::DimensionMismatch { expected: codomain.dim(), got: matrix.len() });
        }
        for row in &matrix {
            if row.len() != domain.dim() {
                return Err(Error::DimensionMismatch { expected: domain.dim(), got: row.len() });
            }
        }
        Ok(LinearOperator { matrix, domain, codomain })
    }

    pub fn from_f64(matrix: &[Vec<f64>], domain: NormedSpace, codomain: NormedSpace) -> Result<Self> {
        let m = matrix
            .iter()
            .map(|r| r.iter().map(|&v| rat_from_f64(v)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        LinearOperator::new(m, domain, codomain)
    }

    pub fn identity(x: NormedSpace) -> Self {
        let n = x.dim();
        let m = (0..n)
            .map(|i| (0..n).map(|j| Rat::from_integer(((i == j) as i64).into())).collect())
            .collect();
        LinearOperator { matrix: m, domain: x.clone(), codomain: x }
    }

    pub fn matrix(&self) -> &[Vec<Rat>] {
        &self.matrix
    }

    pub fn matrix_f64(&self) -> Vec<Vec<f64>> {
        self.matrix.iter().map(|r| to_f64_vec(r)).collect()
    }

    pub fn domain(&self) -> &NormedSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &NormedSpace {
        &self.codomain
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.domain.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|v| *v == Rat::default())
    }

    /// `T*: Y* -> X*`.
    pub fn adjoint(&self) -> LinearOperator {
        LinearOperator { matrix: transpose(&self.matrix), domain: self.codomain.dual(), codomain: self.domain.dual() }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearOperator) -> Result<LinearOperator> {
        if other.rows() != self.cols() {
            return Err(Error::DimensionMismatch { expected: self.cols(), got: other.rows() });
        }
        Ok(LinearOperator {
            matrix: mat_mul(&self.matrix, &other.matrix),
            domain: other.domain.clone(),
            codomain: self.codomain.clone(),
        })
    }

    pub fn add(&self, other: &LinearOperator) -> Result<LinearOperator> {
        if other.rows() != self.rows() || other.cols() != self.cols() {
            return Err(Error::DimensionMismatch { expected: self.rows() * self.cols(), got: other.rows() * other.cols() });
        }
        let m = self
            .matrix
            .iter()
            .zip(&other.matrix)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Ok(LinearOperator { matrix: m, domain: self.domain.clone(), codomain: self.codomain.clone() })
    }

    pub fn scale(&self, c: &Rat) -> LinearOperator {
        let m = self.matrix.iter().map(|r| r.iter().map(|v| v * c).collect()).collect();
        LinearOperator { matrix: m, domain: self.domain.clone(), codomain: self.codomain.clone() }
    }

    /// Same matrix between other spaces of the same dimensions.
    pub fn between(&self, domain: NormedSpace, codomain: NormedSpace) -> Result<LinearOperator> {
        LinearOperator::new(self.matrix.clone(), domain, codomain)
    }

    /// Matrix of `T^{⊗k}` (row-major multi-indices).
    pub fn kron_power(&self, k: usize) -> Vec<Vec<Rat>> {
        kron_power(&self.matrix, k, Rat::from_integer(1.into()))
    }

    /// `T` as an element of `X* ⊗ Y`: `z[j, i] = T[i][j]`.
    pub fn as_tensor(&self) -> Result<Tensor> {
        let coeffs: Vec<Rat> = transpose(&self.matrix).into_iter().flatten().collect();
        Tensor::new(vec![self.domain.dual(), self.codomain.clone()], coeffs)
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.matrix_f64().iter().map(|r| crate::linalg::dot(r, x)).collect()
    }
}

/// `‖T: X -> Y‖`. The witness functionals are a unit vector of `X` and a
/// norming functional in `Y*`.
pub fn operator_norm(t: &LinearOperator, s: &Settings) -> Result<InjectiveResult> {
    injective_norm(&t.as_tensor()?, s)
}

/// Nuclear norm with a trace-duality witness: `Q: Y -> X` with
/// `‖Q‖ <= 1` and `Tr(QT) = ‖T‖_N`, stored as `Q[j][i]` (`n x m`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NuclearReport {
    #[serde(flatten)]
    pub result: ProjectiveResult,
    pub witness: Vec<Vec<f64>>,
}

pub fn nuclear_norm(t: &LinearOperator, s: &Settings) -> Result<NuclearReport> {
    let result = projective_norm(&t.as_tensor()?, s)?;
    let (n, m) = (t.cols(), t.rows());
    let witness = (0..n).map(|j| (0..m).map(|i| result.certificate[j * m + i]).collect()).collect();
    Ok(NuclearReport { result, witness })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpec {
    pub matrix: Vec<Vec<NumSpec>>,
    pub domain: NormedSpace,
    pub codomain: NormedSpace,
}

impl TryFrom<OperatorSpec> for LinearOperator {
    type Error = Error;

    fn try_from(spec: OperatorSpec) -> Result<LinearOperator> {
        LinearOperator::new(rat_rows(&spec.matrix)?, spec.domain, spec.codomain)
    }
}

impl From<&LinearOperator> for OperatorSpec {
    fn from(t: &LinearOperator) -> OperatorSpec {
        OperatorSpec {
            matrix: t.matrix.iter().map(|r| r.iter().map(NumSpec::from_rat).collect()).collect(),
            domain: t.domain.clone(),
            codomain: t.codomain.clone(),
        }
    }
}

impl Serialize for LinearOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OperatorSpec::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinearOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let spec = OperatorSpec::deserialize(d)?;
        LinearOperator::try_from(spec).map_err(serde::de::Error::custom)
    }
}
