//! Run-time knobs: arithmetic mode, tolerances, seeds and size caps.

use std::sync::OnceLock;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arithmetic {
    /// Exact rationals on polyhedral paths.
    Exact,
    /// `f64` with tolerance 1e-9.
    Float,
}

/// Size limits checked before any allocation that grows with `n^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Caps {
    /// Largest dimension handed to vertex enumeration.
    pub vertex_dim: usize,
    /// Largest facet (or vertex) list accepted by the polytope kernel.
    pub facets: usize,
    /// Largest number of tensor coefficients.
    pub tensor_entries: usize,
    /// Exhaustive sign enumeration is used up to `2^sign_log2` vectors.
    pub sign_log2: u32,
    /// Largest number of extreme-point tuples scanned by exact paths.
    pub enumeration: usize,
    /// Largest intermediate ray count in double description.
    pub dd_rays: usize,
    /// Column-generation iteration cap.
    pub colgen_iters: usize,
    /// Largest `n^k` for the alternating τ_k ascent when a ball is smooth
    /// (every sweep solves two column-generation problems).
    pub smooth_entries: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            vertex_dim: 16,
            facets: 4096,
            tensor_entries: 4096,
            sign_log2: 20,
            enumeration: 1 << 22,
            dd_rays: 200_000,
            colgen_iters: 500,
            smooth_entries: 9,
        }
    }
}

impl Caps {
    /// Parse `key=value` pairs separated by commas, e.g.
    /// `vertex_dim=12,facets=8192`. Unknown keys are rejected.
    pub fn parse(spec: &str) -> Result<Caps> {
        let mut caps = Caps::default();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("cap `{item}` is not key=value")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("cap `{item}` has a non-integer value")))?;
            match key.trim() {
                "vertex_dim" => caps.vertex_dim = value,
                "facets" => caps.facets = value,
                "tensor_entries" => caps.tensor_entries = value,
                "sign_log2" => caps.sign_log2 = value.min(40) as u32,
                "enumeration" => caps.enumeration = value,
                "dd_rays" => caps.dd_rays = value,
                "colgen_iters" => caps.colgen_iters = value,
                "smooth_entries" => caps.smooth_entries = value,
                other => return Err(Error::InvalidInput(format!("unknown cap `{other}`"))),
            }
        }
        Ok(caps)
    }

    /// Defaults overridden by the `TRL_CAPS` environment variable.
    pub fn from_env() -> Result<Caps> {
        match std::env::var("TRL_CAPS") {
            Ok(spec) => Caps::parse(&spec),
            Err(_) => Ok(Caps::default()),
        }
    }

    /// Process-wide caps, read from the environment once. Invalid values
    /// fall back to the defaults; the CLI validates `TRL_CAPS` up front.
    pub fn global() -> &'static Caps {
        static CAPS: OnceLock<Caps> = OnceLock::new();
        CAPS.get_or_init(|| Caps::from_env().unwrap_or_default())
    }
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub arithmetic: Arithmetic,
    /// Tolerance for float comparisons in certified paths.
    pub tol: f64,
    pub seed: u64,
    /// Multistart budget for heuristic optimizers.
    pub starts: usize,
    /// Sweep cap for alternating ascent.
    pub max_sweeps: usize,
    pub caps: Caps,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            arithmetic: Arithmetic::Exact,
            tol: 1e-9,
            seed: 0,
            starts: 64,
            max_sweeps: 200,
            caps: Caps::global().clone(),
        }
    }
}

impl Settings {
    pub fn float() -> Self {
        Settings {
            arithmetic: Arithmetic::Float,
            ..Settings::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_starts(mut self, starts: usize) -> Self {
        self.starts = starts.max(1);
        self
    }

    pub fn exact(&self) -> bool {
        self.arithmetic == Arithmetic::Exact
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_cap_overrides() {
        let caps = Caps::parse("vertex_dim=8, facets=10").unwrap();
        assert_eq!(caps.vertex_dim, 8);
        assert_eq!(caps.facets, 10);
        assert_eq!(caps.tensor_entries, 4096);
        assert_eq!(Caps::parse("smooth_entries=16").unwrap().smooth_entries, 16);
        assert!(Caps::parse("bogus=1").is_err());
        assert!(Caps::parse("facets=x").is_err());
    }
}
