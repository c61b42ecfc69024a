//! Certified enclosures with provenance.

use std::fmt;

use serde::Serialize;

use crate::scalar::{format_rat, Rat, Scalar};

/// `radicand^(1/index)`, used to report values such as `√2` or `(5/2)^(1/3)`
/// exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactRoot {
    pub radicand: Rat,
    pub index: u32,
}

impl ExactRoot {
    pub fn new(radicand: Rat, index: u32) -> Self {
        ExactRoot { radicand, index: index.max(1) }
    }

    pub fn value(&self) -> f64 {
        let r = self.radicand.to_f64();
        match self.index {
            1 => r,
            2 => r.sqrt(),
            k => r.powf(1.0 / k as f64),
        }
    }
}

impl fmt::Display for ExactRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = format_rat(&self.radicand);
        match self.index {
            1 => write!(f, "{r}"),
            2 => write!(f, "sqrt({r})"),
            k => write!(f, "({r})^(1/{k})"),
        }
    }
}

impl Serialize for ExactRoot {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Where a bound came from.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundSource {
    /// `τ_k` computed exactly.
    TauExact(usize),
    /// `τ_k` attained by a heuristic witness (still a valid lower bound).
    TauHeuristic(usize),
    /// `ρ_k` lower bound from an explicit tensor.
    RhoWitness(usize),
    Nuclear,
    /// Nuclear norm divided by a Banach–Mazur distance bound.
    NuclearOverDistance,
    /// Factorization through a Euclidean space; the string names the split.
    Factorization(String),
    ClosedForm(String),
    /// One side Euclidean, so the radius equals the nuclear norm.
    EuclideanCollapse,
    /// Ratio of the John and Loewner ellipsoids.
    EllipsoidRatio,
    VolumeRatio,
    Containment,
    /// Universal estimates such as `√n <= ρ_∞ <= n`.
    General(String),
}

impl fmt::Display for BoundSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundSource::TauExact(k) => write!(f, "tau_{k} exact"),
            BoundSource::TauHeuristic(k) => write!(f, "tau_{k} heuristic"),
            BoundSource::RhoWitness(k) => write!(f, "rho_{k} witness"),
            BoundSource::Nuclear => write!(f, "nuclear norm"),
            BoundSource::NuclearOverDistance => write!(f, "nuclear / distance"),
            BoundSource::Factorization(s) => write!(f, "factorization {s}"),
            BoundSource::ClosedForm(s) => write!(f, "closed form {s}"),
            BoundSource::EuclideanCollapse => write!(f, "euclidean side"),
            BoundSource::EllipsoidRatio => write!(f, "ellipsoid ratio"),
            BoundSource::VolumeRatio => write!(f, "volume ratio"),
            BoundSource::Containment => write!(f, "containment"),
            BoundSource::General(s) => write!(f, "{s}"),
        }
    }
}

impl Serialize for BoundSource {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bound {
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactRoot>,
    pub source: BoundSource,
    /// The bound is rigorous (exact arithmetic or a verified certificate).
    pub certified: bool,
}

impl Bound {
    pub fn new(value: f64, source: BoundSource, certified: bool) -> Self {
        Bound { value, exact: None, source, certified }
    }

    pub fn exact(root: ExactRoot, source: BoundSource) -> Self {
        Bound { value: root.value(), exact: Some(root), source, certified: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundInterval {
    pub lower: Bound,
    pub upper: Bound,
    /// Both sides are rigorous.
    pub certified: bool,
}

impl BoundInterval {
    pub fn new(lower: Bound, upper: Bound) -> Self {
        let certified = lower.certified && upper.certified;
        BoundInterval { lower, upper, certified }
    }

    pub fn point(b: Bound) -> Self {
        BoundInterval::new(b.clone(), b)
    }

    pub fn width(&self) -> f64 {
        self.upper.value - self.lower.value
    }

    pub fn is_collapsed(&self, tol: f64) -> bool {
        self.width().abs() <= tol * self.upper.value.abs().max(1.0)
    }
}

/// Largest of the candidate lower bounds (first wins on ties).
pub fn best_lower(candidates: Vec<Bound>) -> Option<Bound> {
    candidates
        .into_iter()
        .fold(None, |best: Option<Bound>, b| match best {
            Some(cur) if cur.value >= b.value => Some(cur),
            _ => Some(b),
        })
}

/// Smallest of the candidate upper bounds (first wins on ties).
pub fn best_upper(candidates: Vec<Bound>) -> Option<Bound> {
    candidates
        .into_iter()
        .fold(None, |best: Option<Bound>, b| match best {
            Some(cur) if cur.value <= b.value => Some(cur),
            _ => Some(b),
        })
}
