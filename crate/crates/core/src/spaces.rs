//! Finite-dimensional real normed spaces: norms, duals and unit-ball
//! extreme structure.

use std::fmt;
use std::sync::{Arc, OnceLock};

use nalgebra::DMatrix;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::convex_kernel::{HPolytope, VPolytope};
use crate::error::{Error, Result};
use crate::linalg::{from_dmatrix, singular_values, to_dmatrix};
use crate::scalar::{dot, format_rat, invert, parse_rat, rat_from_f64, rat_int, to_f64_vec, Rat, Scalar};
use crate::settings::Caps;

#[derive(Debug, Clone, PartialEq)]
pub enum SpaceKind {
    /// `ℓ_p^n`; `p = f64::INFINITY` for the max norm.
    Lp { n: usize, p: f64 },
    PolyV(VPolytope),
    PolyH(HPolytope),
    /// Ball `{x : xᵀMx <= 1}`.
    Ellipsoid { m: DMatrix<f64>, m_inv: DMatrix<f64> },
    /// Schatten `p`-norm on `n×n` matrices, flattened row-major.
    Schatten { n: usize, p: f64 },
}

type PointSet = Result<Vec<Vec<Rat>>>;

#[derive(Default)]
struct Cache {
    ext: OnceLock<PointSet>,
    dual_ext: OnceLock<PointSet>,
    ext_f: OnceLock<Vec<Vec<f64>>>,
    dual_ext_f: OnceLock<Vec<Vec<f64>>>,
}

#[derive(Clone)]
pub struct NormedSpace {
    kind: SpaceKind,
    label: String,
    cache: Arc<Cache>,
}

impl fmt::Debug for NormedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NormedSpace")
            .field("label", &self.label)
            .field("kind", &self.kind)
            .finish()
    }
}

impl PartialEq for NormedSpace {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

fn format_p(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        format!("{p}")
    }
}

fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidInput(format!("p must lie in [1, inf], got {p}")));
    }
    Ok(())
}

/// `ℓ_p` norm of a float vector, scaled to avoid overflow.
pub fn lp_norm(x: &[f64], p: f64) -> f64 {
    let m = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if m == 0.0 || p.is_infinite() {
        return m;
    }
    if p == 1.0 {
        return x.iter().map(|v| v.abs()).sum();
    }
    if p == 2.0 {
        return m * x.iter().map(|v| (v / m) * (v / m)).sum::<f64>().sqrt();
    }
    m * x.iter().map(|v| (v.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// A functional of `ℓ_q` norm one attaining `‖x‖_p`.
fn lp_norming(x: &[f64], p: f64) -> Vec<f64> {
    let norm = lp_norm(x, p);
    if norm == 0.0 {
        return vec![0.0; x.len()];
    }
    if p.is_infinite() {
        let i = x
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()).then(b.0.cmp(&a.0)))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let mut out = vec![0.0; x.len()];
        out[i] = x[i].signum();
        return out;
    }
    if p == 1.0 {
        return x.iter().map(|v| if *v == 0.0 { 0.0 } else { v.signum() }).collect();
    }
    x.iter()
        .map(|v| v.signum() * (v.abs() / norm).powf(p - 1.0))
        .collect()
}

fn sign_vectors(n: usize) -> Vec<Vec<Rat>> {
    // First coordinate fixed to +1 so each ± pair appears once.
    let count = 1usize << (n - 1);
    let mut out: Vec<Vec<Rat>> = (0..count)
        .map(|mask| {
            (0..n)
                .map(|i| {
                    if i > 0 && mask >> (n - 1 - i) & 1 == 1 {
                        rat_int(-1)
                    } else {
                        rat_int(1)
                    }
                })
                .collect()
        })
        .collect();
    out.sort_by(|a, b| crate::scalar::lex_cmp(a, b));
    out
}

fn unit_vectors(n: usize) -> Vec<Vec<Rat>> {
    (0..n)
        .rev()
        .map(|i| (0..n).map(|j| rat_int((i == j) as i64)).collect())
        .collect()
}

impl NormedSpace {
    fn from_kind(kind: SpaceKind, label: String) -> Self {
        NormedSpace { kind, label, cache: Arc::new(Cache::default()) }
    }

    pub fn lp(n: usize, p: f64) -> Result<Self> {
        check_p(p)?;
        if n == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        Ok(Self::from_kind(SpaceKind::Lp { n, p }, format!("l_{}^{}", format_p(p), n)))
    }

    pub fn l1(n: usize) -> Self {
        Self::lp(n, 1.0).expect("valid")
    }

    pub fn l2(n: usize) -> Self {
        Self::lp(n, 2.0).expect("valid")
    }

    pub fn linf(n: usize) -> Self {
        Self::lp(n, f64::INFINITY).expect("valid")
    }

    pub fn poly_v(dim: usize, vertices: Vec<Vec<Rat>>) -> Result<Self> {
        let p = VPolytope::new(dim, vertices)?;
        Ok(Self::from_kind(SpaceKind::PolyV(p), format!("poly_v^{dim}")))
    }

    pub fn poly_h(dim: usize, facets: Vec<Vec<Rat>>) -> Result<Self> {
        let p = HPolytope::new(dim, facets)?;
        Ok(Self::from_kind(SpaceKind::PolyH(p), format!("poly_h^{dim}")))
    }

    pub fn ellipsoid(m: Vec<Vec<f64>>) -> Result<Self> {
        let n = m.len();
        if n == 0 || m.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("ellipsoid matrix must be square and nonempty".into()));
        }
        let mat = to_dmatrix(&m);
        if (&mat - mat.transpose()).amax() > 1e-12 * mat.amax().max(1.0) {
            return Err(Error::InvalidInput("ellipsoid matrix must be symmetric".into()));
        }
        let mat = crate::linalg::symmetrize(&mat);
        let chol = mat
            .clone()
            .cholesky()
            .ok_or_else(|| Error::InvalidInput("ellipsoid matrix must be positive definite".into()))?;
        let m_inv = crate::linalg::symmetrize(&chol.inverse());
        Ok(Self::from_kind(SpaceKind::Ellipsoid { m: mat, m_inv }, format!("ellipsoid^{n}")))
    }

    pub fn schatten(n: usize, p: f64) -> Result<Self> {
        check_p(p)?;
        if n == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        Ok(Self::from_kind(SpaceKind::Schatten { n, p }, format!("S_{}^{}", format_p(p), n)))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            SpaceKind::Lp { n, .. } => *n,
            SpaceKind::PolyV(p) => p.dim(),
            SpaceKind::PolyH(p) => p.dim(),
            SpaceKind::Ellipsoid { m, .. } => m.nrows(),
            SpaceKind::Schatten { n, .. } => n * n,
        }
    }

    pub fn lp_exponent(&self) -> Option<f64> {
        match &self.kind {
            SpaceKind::Lp { p, .. } => Some(*p),
            _ => None,
        }
    }

    /// Unit ball is a polytope (extreme points can be listed exactly).
    pub fn is_polyhedral(&self) -> bool {
        match &self.kind {
            SpaceKind::Lp { n, p } => *n == 1 || *p == 1.0 || p.is_infinite(),
            SpaceKind::PolyV(_) | SpaceKind::PolyH(_) => true,
            SpaceKind::Ellipsoid { m, .. } => m.nrows() == 1,
            SpaceKind::Schatten { n, .. } => *n == 1,
        }
    }

    /// Norm comes from an inner product.
    pub fn is_euclidean(&self) -> bool {
        match &self.kind {
            SpaceKind::Lp { n, p } => *p == 2.0 || *n == 1,
            SpaceKind::Ellipsoid { .. } => true,
            SpaceKind::Schatten { n, p } => *p == 2.0 || *n == 1,
            SpaceKind::PolyV(p) => p.dim() == 1,
            SpaceKind::PolyH(p) => p.dim() == 1,
        }
    }

    /// Gram matrix `M` with `‖x‖² = xᵀMx`, for Euclidean spaces.
    pub fn gram(&self) -> Option<DMatrix<f64>> {
        if !self.is_euclidean() {
            return None;
        }
        match &self.kind {
            SpaceKind::Ellipsoid { m, .. } => Some(m.clone()),
            _ if self.dim() == 1 => {
                let s = self.norm(&[1.0]).ok()?;
                Some(DMatrix::from_element(1, 1, s * s))
            }
            _ => Some(DMatrix::identity(self.dim(), self.dim())),
        }
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: len });
        }
        Ok(())
    }

    fn not_polyhedral(&self) -> Error {
        Error::NotPolyhedral(self.label.clone())
    }

    fn compute_ext(&self, caps: &Caps) -> PointSet {
        match &self.kind {
            SpaceKind::Lp { n, p } if *n == 1 => {
                let _ = p;
                Ok(vec![vec![rat_int(1)]])
            }
            SpaceKind::Lp { n, p } if p.is_infinite() => {
                if *n > caps.vertex_dim {
                    return Err(Error::DimensionCapExceeded { dim: *n, cap: caps.vertex_dim });
                }
                Ok(sign_vectors(*n))
            }
            SpaceKind::Lp { n, p } if *p == 1.0 => Ok(unit_vectors(*n)),
            SpaceKind::PolyV(v) => Ok(v.irredundant(caps)?.vertices().to_vec()),
            SpaceKind::PolyH(h) => Ok(crate::convex_kernel::enumerate_vertices(h, caps)?.vertices().to_vec()),
            SpaceKind::Ellipsoid { m, .. } if m.nrows() == 1 => {
                Ok(vec![vec![rat_from_f64(1.0 / m[(0, 0)].sqrt())?]])
            }
            _ => Err(self.not_polyhedral()),
        }
    }

    fn compute_dual_ext(&self, caps: &Caps) -> PointSet {
        match &self.kind {
            SpaceKind::Lp { n, p } if *n == 1 => {
                let _ = p;
                Ok(vec![vec![rat_int(1)]])
            }
            SpaceKind::Lp { n, p } if p.is_infinite() => Ok(unit_vectors(*n)),
            SpaceKind::Lp { n, p } if *p == 1.0 => {
                if *n > caps.vertex_dim {
                    return Err(Error::DimensionCapExceeded { dim: *n, cap: caps.vertex_dim });
                }
                Ok(sign_vectors(*n))
            }
            SpaceKind::PolyV(v) => Ok(crate::convex_kernel::enumerate_facets(v, caps)?.facets().to_vec()),
            SpaceKind::PolyH(h) => Ok(h.irredundant(caps)?.facets().to_vec()),
            SpaceKind::Ellipsoid { m, .. } if m.nrows() == 1 => Ok(vec![vec![rat_from_f64(m[(0, 0)].sqrt())?]]),
            _ => Err(self.not_polyhedral()),
        }
    }

    /// Extreme points of `B_X`, one per ± pair, canonical sign, sorted.
    pub fn extreme_points(&self) -> Result<&[Vec<Rat>]> {
        match self.cache.ext.get_or_init(|| self.compute_ext(Caps::global())) {
            Ok(v) => Ok(v),
            Err(e) => Err(e.clone()),
        }
    }

    /// Extreme points of `B_{X*}` (normals of the facets of `B_X`).
    pub fn dual_extreme_points(&self) -> Result<&[Vec<Rat>]> {
        match self.cache.dual_ext.get_or_init(|| self.compute_dual_ext(Caps::global())) {
            Ok(v) => Ok(v),
            Err(e) => Err(e.clone()),
        }
    }

    pub fn extreme_points_f64(&self) -> Result<&[Vec<f64>]> {
        let ext = self.extreme_points()?;
        Ok(self.cache.ext_f.get_or_init(|| ext.iter().map(|v| to_f64_vec(v)).collect()))
    }

    pub fn dual_extreme_points_f64(&self) -> Result<&[Vec<f64>]> {
        let ext = self.dual_extreme_points()?;
        Ok(self.cache.dual_ext_f.get_or_init(|| ext.iter().map(|v| to_f64_vec(v)).collect()))
    }

    /// Extreme points as a V-polytope.
    pub fn extreme_polytope(&self) -> Result<VPolytope> {
        VPolytope::new(self.dim(), self.extreme_points()?.to_vec())
    }

    /// `A` with `B_X = A·[-1,1]^n`, when the ball is a parallelotope.
    pub fn parallelotope_map(&self) -> Option<Vec<Vec<Rat>>> {
        let facets = self.dual_extreme_points().ok()?;
        if facets.len() != self.dim() {
            return None;
        }
        invert(facets)
    }

    pub fn norm(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x.len())?;
        Ok(match &self.kind {
            SpaceKind::Lp { p, .. } => lp_norm(x, *p),
            SpaceKind::PolyV(_) | SpaceKind::PolyH(_) => self
                .dual_extreme_points_f64()?
                .iter()
                .map(|f| dot(f, x).abs())
                .fold(0.0, f64::max),
            SpaceKind::Ellipsoid { m, .. } => quad_form(m, x).sqrt(),
            SpaceKind::Schatten { n, p } => lp_norm(&singular_values(&DMatrix::from_row_slice(*n, *n, x)), *p),
        })
    }

    /// Exact gauge for polyhedral spaces.
    pub fn norm_exact(&self, x: &[Rat]) -> Result<Rat> {
        self.check_dim(x.len())?;
        max_abs_pairing(self.dual_extreme_points()?, x)
    }

    pub fn dual_norm(&self, l: &[f64]) -> Result<f64> {
        self.check_dim(l.len())?;
        Ok(match &self.kind {
            SpaceKind::Lp { p, .. } => lp_norm(l, conjugate(*p)),
            SpaceKind::PolyV(_) | SpaceKind::PolyH(_) => self
                .extreme_points_f64()?
                .iter()
                .map(|v| dot(v, l).abs())
                .fold(0.0, f64::max),
            SpaceKind::Ellipsoid { m_inv, .. } => quad_form(m_inv, l).sqrt(),
            SpaceKind::Schatten { n, p } => {
                lp_norm(&singular_values(&DMatrix::from_row_slice(*n, *n, l)), conjugate(*p))
            }
        })
    }

    pub fn dual_norm_exact(&self, l: &[Rat]) -> Result<Rat> {
        self.check_dim(l.len())?;
        max_abs_pairing(self.extreme_points()?, l)
    }

    /// `λ` with `‖λ‖_* <= 1` and `λ(x) = ‖x‖`.
    pub fn norming_functional(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x.len())?;
        Ok(match &self.kind {
            SpaceKind::Lp { p, .. } => lp_norming(x, *p),
            SpaceKind::PolyV(_) | SpaceKind::PolyH(_) => best_pairing(self.dual_extreme_points_f64()?, x),
            SpaceKind::Ellipsoid { m, .. } => ellipsoid_norming(m, x),
            SpaceKind::Schatten { n, p } => schatten_norming(*n, *p, x),
        })
    }

    /// `x ∈ B_X` with `λ(x) = ‖λ‖_*`.
    pub fn dual_norming(&self, l: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(l.len())?;
        Ok(match &self.kind {
            SpaceKind::Lp { p, .. } => lp_norming(l, conjugate(*p)),
            SpaceKind::PolyV(_) | SpaceKind::PolyH(_) => best_pairing(self.extreme_points_f64()?, l),
            SpaceKind::Ellipsoid { m_inv, .. } => ellipsoid_norming(m_inv, l),
            SpaceKind::Schatten { n, p } => schatten_norming(*n, conjugate(*p), l),
        })
    }

    /// The dual space; `dual(dual(X))` has the same ball as `X`.
    pub fn dual(&self) -> NormedSpace {
        let label = match self.label.strip_suffix('*') {
            Some(base) => base.to_string(),
            None => format!("{}*", self.label),
        };
        let kind = match &self.kind {
            SpaceKind::Lp { n, p } => SpaceKind::Lp { n: *n, p: conjugate(*p) },
            SpaceKind::PolyV(v) => SpaceKind::PolyH(v.polar()),
            SpaceKind::PolyH(h) => SpaceKind::PolyV(h.polar()),
            SpaceKind::Ellipsoid { m, m_inv } => SpaceKind::Ellipsoid { m: m_inv.clone(), m_inv: m.clone() },
            SpaceKind::Schatten { n, p } => SpaceKind::Schatten { n: *n, p: conjugate(*p) },
        };
        let cache = Cache::default();
        if let Some(v) = self.cache.ext.get() {
            let _ = cache.dual_ext.set(v.clone());
        }
        if let Some(v) = self.cache.dual_ext.get() {
            let _ = cache.ext.set(v.clone());
        }
        NormedSpace { kind, label, cache: Arc::new(cache) }
    }
}

fn quad_form(m: &DMatrix<f64>, x: &[f64]) -> f64 {
    let n = x.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += x[i] * m[(i, j)] * x[j];
        }
    }
    s.max(0.0)
}

fn ellipsoid_norming(m: &DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    let norm = quad_form(m, x).sqrt();
    if norm == 0.0 {
        return vec![0.0; x.len()];
    }
    (0..x.len())
        .map(|i| (0..x.len()).map(|j| m[(i, j)] * x[j]).sum::<f64>() / norm)
        .collect()
}

fn schatten_norming(n: usize, p: f64, x: &[f64]) -> Vec<f64> {
    let svd = DMatrix::from_row_slice(n, n, x).svd(true, true);
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    let w = lp_norming(&sigma, p);
    let (Some(u), Some(vt)) = (svd.u, svd.v_t) else {
        return vec![0.0; n * n];
    };
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(w));
    let l = u * d * vt;
    from_dmatrix(&l).into_iter().flatten().collect()
}

/// `±v` maximizing `⟨v, x⟩` over the list (first best wins, so ties are
/// broken deterministically).
fn best_pairing(points: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    let mut best = f64::NEG_INFINITY;
    let mut out = vec![0.0; x.len()];
    for v in points {
        let s = dot(v, x);
        if s.abs() > best {
            best = s.abs();
            out = if s < 0.0 { v.iter().map(|a| -a).collect() } else { v.clone() };
        }
    }
    out
}

fn max_abs_pairing(points: &[Vec<Rat>], x: &[Rat]) -> Result<Rat> {
    Ok(points
        .iter()
        .map(|v| dot(v, x).abs())
        .fold(rat_int(0), |m, v| if v > m { v } else { m }))
}

// ---------------------------------------------------------------------------
// JSON encoding

/// A number given either as a JSON number or as a `"num/den"` string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumSpec {
    Num(serde_json::Number),
    Str(String),
}

impl NumSpec {
    pub fn to_rat(&self) -> Result<Rat> {
        match self {
            NumSpec::Num(n) => parse_rat(&n.to_string()),
            NumSpec::Str(s) => parse_rat(s),
        }
    }

    pub fn from_rat(r: &Rat) -> NumSpec {
        if r.is_integer() {
            if let Ok(v) = r.numer().to_string().parse::<i64>() {
                return NumSpec::Num(v.into());
            }
        }
        NumSpec::Str(format_rat(r))
    }

    pub fn from_f64(v: f64) -> NumSpec {
        match serde_json::Number::from_f64(v) {
            Some(n) => NumSpec::Num(n),
            None => NumSpec::Str(format!("{v}")),
        }
    }
}

pub fn rat_rows(rows: &[Vec<NumSpec>]) -> Result<Vec<Vec<Rat>>> {
    rows.iter().map(|r| r.iter().map(NumSpec::to_rat).collect()).collect()
}

/// `p` as a number or the string `"inf"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PSpec {
    Num(f64),
    Str(String),
}

impl PSpec {
    fn value(&self) -> Result<f64> {
        match self {
            PSpec::Num(v) => Ok(*v),
            PSpec::Str(s) => match s.trim().to_ascii_lowercase().as_str() {
                "inf" | "infinity" | "∞" => Ok(f64::INFINITY),
                other => parse_rat(other).map(|r| r.to_f64()),
            },
        }
    }

    fn from_value(p: f64) -> PSpec {
        if p.is_infinite() {
            PSpec::Str("inf".into())
        } else {
            PSpec::Num(p)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceSpec {
    Lp {
        n: usize,
        p: PSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    PolyV {
        vertices: Vec<Vec<NumSpec>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    PolyH {
        facets: Vec<Vec<NumSpec>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Ellipsoid {
        #[serde(rename = "M")]
        m: Vec<Vec<NumSpec>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Schatten {
        n: usize,
        p: PSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

fn row_dim(rows: &[Vec<NumSpec>]) -> Result<usize> {
    rows.first()
        .map(Vec::len)
        .ok_or_else(|| Error::InvalidInput("empty point list".into()))
}

impl TryFrom<SpaceSpec> for NormedSpace {
    type Error = Error;

    fn try_from(spec: SpaceSpec) -> Result<NormedSpace> {
        let (space, label) = match spec {
            SpaceSpec::Lp { n, p, label } => (NormedSpace::lp(n, p.value()?)?, label),
            SpaceSpec::PolyV { vertices, label } => {
                (NormedSpace::poly_v(row_dim(&vertices)?, rat_rows(&vertices)?)?, label)
            }
            SpaceSpec::PolyH { facets, label } => (NormedSpace::poly_h(row_dim(&facets)?, rat_rows(&facets)?)?, label),
            SpaceSpec::Ellipsoid { m, label } => {
                let m: Vec<Vec<f64>> = rat_rows(&m)?
                    .iter()
                    .map(|r| r.iter().map(Scalar::to_f64).collect())
                    .collect();
                (NormedSpace::ellipsoid(m)?, label)
            }
            SpaceSpec::Schatten { n, p, label } => (NormedSpace::schatten(n, p.value()?)?, label),
        };
        Ok(match label {
            Some(l) => space.with_label(l),
            None => space,
        })
    }
}

impl From<&NormedSpace> for SpaceSpec {
    fn from(x: &NormedSpace) -> SpaceSpec {
        let label = Some(x.label.clone());
        let rows = |r: &[Vec<Rat>]| -> Vec<Vec<NumSpec>> {
            r.iter().map(|v| v.iter().map(NumSpec::from_rat).collect()).collect()
        };
        match &x.kind {
            SpaceKind::Lp { n, p } => SpaceSpec::Lp { n: *n, p: PSpec::from_value(*p), label },
            SpaceKind::PolyV(v) => SpaceSpec::PolyV { vertices: rows(v.vertices()), label },
            SpaceKind::PolyH(h) => SpaceSpec::PolyH { facets: rows(h.facets()), label },
            SpaceKind::Ellipsoid { m, .. } => SpaceSpec::Ellipsoid {
                m: from_dmatrix(m)
                    .iter()
                    .map(|r| r.iter().map(|v| NumSpec::from_f64(*v)).collect())
                    .collect(),
                label,
            },
            SpaceKind::Schatten { n, p } => SpaceSpec::Schatten { n: *n, p: PSpec::from_value(*p), label },
        }
    }
}

impl Serialize for NormedSpace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpaceSpec::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for NormedSpace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let spec = SpaceSpec::deserialize(d)?;
        NormedSpace::try_from(spec).map_err(serde::de::Error::custom)
    }
}
