use num_traits::Signed;

use super::dd::symmetric_vertices;
use super::simplex::{maximize, LpOutcome};
use crate::error::{Error, Result};
use crate::scalar::{canonical_pairs, dot, from_rat_vec, rank, Rat, Scalar};
use crate::settings::Caps;

/// `{x : |a_i·x| <= 1 for all i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HPolytope {
    dim: usize,
    facets: Vec<Vec<Rat>>,
}

/// `conv{±v_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<Vec<Rat>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult<F> {
    pub value: F,
    pub maximizer: Vec<F>,
    pub status: LpStatus,
}

fn check_rows(dim: usize, rows: &[Vec<Rat>]) -> Result<()> {
    match rows.iter().find(|r| r.len() != dim) {
        Some(r) => Err(Error::DimensionMismatch { expected: dim, got: r.len() }),
        None => Ok(()),
    }
}

impl HPolytope {
    /// Canonicalizes signs, drops zero and duplicate rows, and checks that the
    /// normals span the space (otherwise the body is unbounded).
    pub fn new(dim: usize, facets: Vec<Vec<Rat>>) -> Result<Self> {
        check_rows(dim, &facets)?;
        let facets = canonical_pairs(facets);
        let r = rank(&facets, dim);
        if r < dim {
            return Err(Error::UnboundedBody { rank: r, dim });
        }
        Ok(HPolytope { dim, facets })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Vec<Rat>] {
        &self.facets
    }

    /// Gauge `max_i |a_i·x|`.
    pub fn gauge<F: Scalar>(&self, x: &[F]) -> F {
        self.facets
            .iter()
            .map(|a| dot(&from_rat_vec::<F>(a), x).abs())
            .fold(F::zero(), |m, v| if v > m { v } else { m })
    }

    /// Drops facets that do not support a `(dim-1)`-face.
    pub fn irredundant(&self, caps: &Caps) -> Result<HPolytope> {
        let vertices = symmetric_vertices(&self.facets, self.dim, caps)?;
        let facets = supporting(&self.facets, &vertices, self.dim);
        Ok(HPolytope { dim: self.dim, facets })
    }

    /// Polar body: the facet normals become the vertices.
    pub fn polar(&self) -> VPolytope {
        VPolytope { dim: self.dim, vertices: self.facets.clone() }
    }
}

impl VPolytope {
    pub fn new(dim: usize, vertices: Vec<Vec<Rat>>) -> Result<Self> {
        check_rows(dim, &vertices)?;
        let vertices = canonical_pairs(vertices);
        let r = rank(&vertices, dim);
        if r < dim {
            return Err(Error::NotFullDimensional { rank: r, dim });
        }
        Ok(VPolytope { dim, vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.vertices
    }

    /// Support function `max_j |c·v_j|`.
    pub fn support<F: Scalar>(&self, c: &[F]) -> F {
        self.vertices
            .iter()
            .map(|v| dot(&from_rat_vec::<F>(v), c).abs())
            .fold(F::zero(), |m, v| if v > m { v } else { m })
    }

    /// Drops points lying in the symmetric hull of the others.
    pub fn irredundant(&self, caps: &Caps) -> Result<VPolytope> {
        let facets = symmetric_vertices(&self.vertices, self.dim, caps)?;
        let vertices = supporting(&self.vertices, &facets, self.dim);
        Ok(VPolytope { dim: self.dim, vertices })
    }

    pub fn polar(&self) -> HPolytope {
        HPolytope { dim: self.dim, facets: self.vertices.clone() }
    }
}

/// Keep the rows `a` of `candidates` whose tight set `{w in witnesses : |a·w| = 1}`
/// has full rank.
fn supporting(candidates: &[Vec<Rat>], witnesses: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    candidates
        .iter()
        .filter(|a| {
            let tight: Vec<Vec<Rat>> = witnesses
                .iter()
                .filter(|w| {
                    let v = dot(a.as_slice(), w.as_slice());
                    v.abs() == Rat::from_integer(1.into())
                })
                .cloned()
                .collect();
            rank(&tight, dim) == dim
        })
        .cloned()
        .collect()
}

/// Vertices of an H-polytope by double description.
pub fn enumerate_vertices(p: &HPolytope, caps: &Caps) -> Result<VPolytope> {
    let vertices = symmetric_vertices(&p.facets, p.dim, caps)?;
    Ok(VPolytope { dim: p.dim, vertices })
}

/// Facets of a V-polytope (vertices of its polar).
pub fn enumerate_facets(p: &VPolytope, caps: &Caps) -> Result<HPolytope> {
    let facets = symmetric_vertices(&p.vertices, p.dim, caps)?;
    Ok(HPolytope { dim: p.dim, facets })
}

/// `max ⟨c, x⟩` over a V-polytope, by scanning `±v_j`.
pub fn lp_max_v<F: Scalar>(c: &[F], p: &VPolytope) -> Result<LpResult<F>> {
    if c.len() != p.dim {
        return Err(Error::DimensionMismatch { expected: p.dim, got: c.len() });
    }
    let mut best: Option<(F, Vec<F>)> = None;
    for v in &p.vertices {
        let v: Vec<F> = from_rat_vec(v);
        let s = dot(&v, c);
        let (val, point) = if s.is_negative() {
            (-s, v.iter().map(|x| -x.clone()).collect())
        } else {
            (s, v)
        };
        if best.as_ref().is_none_or(|(b, _)| val > *b) {
            best = Some((val, point));
        }
    }
    let (value, maximizer) = best.ok_or(Error::InfeasibleBody)?;
    Ok(LpResult { value, maximizer, status: LpStatus::Optimal })
}

/// `max ⟨c, x⟩` over an H-polytope, by simplex.
pub fn lp_max_h<F: Scalar>(c: &[F], p: &HPolytope) -> Result<LpResult<F>> {
    if c.len() != p.dim {
        return Err(Error::DimensionMismatch { expected: p.dim, got: c.len() });
    }
    let mut rows = Vec::with_capacity(2 * p.facets.len());
    for a in &p.facets {
        let a: Vec<F> = from_rat_vec(a);
        rows.push(a.iter().map(|v| -v.clone()).collect());
        rows.push(a);
    }
    let b = vec![F::one(); rows.len()];
    match maximize(&rows, &b, c) {
        LpOutcome::Optimal { value, x, .. } => Ok(LpResult { value, maximizer: x, status: LpStatus::Optimal }),
        LpOutcome::Unbounded => Ok(LpResult {
            value: F::zero(),
            maximizer: vec![F::zero(); p.dim],
            status: LpStatus::Unbounded,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter().map(|r| r.iter().map(|&v| rat_int(v)).collect()).collect()
    }

    #[test]
    fn square_lp() {
        let sq = HPolytope::new(2, ints(&[&[1, 0], &[0, 1]])).unwrap();
        let res = lp_max_h(&[rat_int(1), rat_int(1)], &sq).unwrap();
        assert_eq!(res.value, rat_int(2));
        assert_eq!(res.maximizer, vec![rat_int(1), rat_int(1)]);
    }

    #[test]
    fn cross_polytope_lp() {
        let l1 = VPolytope::new(2, ints(&[&[1, 0], &[0, 1]])).unwrap();
        let res = lp_max_v(&[rat_int(3), rat_int(-4)], &l1).unwrap();
        assert_eq!(res.value, rat_int(4));
        assert_eq!(res.maximizer, vec![rat_int(0), rat_int(-1)]);
    }

    #[test]
    fn redundancy_pruning() {
        let v = VPolytope::new(2, ints(&[&[1, 0], &[0, 1], &[1, 1], &[0, 0]])).unwrap();
        // Hexagon: all three points are extreme.
        assert_eq!(v.irredundant(&Caps::default()).unwrap().vertices().len(), 3);
        let v = VPolytope::new(2, ints(&[&[2, 0], &[0, 2], &[1, 1]])).unwrap();
        let pruned = v.irredundant(&Caps::default()).unwrap();
        assert_eq!(pruned.vertices(), ints(&[&[0, 2], &[2, 0]]).as_slice());
        let h = HPolytope::new(2, ints(&[&[1, 0], &[0, 1], &[1, 1]])).unwrap();
        assert_eq!(h.irredundant(&Caps::default()).unwrap().facets().len(), 3);
        let h = HPolytope::new(2, ints(&[&[2, 0], &[0, 2], &[1, 1]])).unwrap();
        assert_eq!(h.irredundant(&Caps::default()).unwrap().facets(), ints(&[&[0, 2], &[2, 0]]).as_slice());
    }

    #[test]
    fn validation() {
        assert!(matches!(HPolytope::new(2, ints(&[&[1, 1]])), Err(Error::UnboundedBody { .. })));
        assert!(matches!(VPolytope::new(2, ints(&[&[1, 1]])), Err(Error::NotFullDimensional { .. })));
        assert!(matches!(HPolytope::new(2, ints(&[&[1, 1, 0]])), Err(Error::DimensionMismatch { .. })));
    }
}
