//! Double description method for origin-symmetric polytopes
//! `{x : |a_i·x| <= 1}`.
//!
//! The body is homogenized to the pointed cone `{(t, x) : t ± a_i·x >= 0}`;
//! its extreme rays with `t > 0` are the vertices. Adjacency uses the
//! combinatorial test on zero sets.

use crate::error::{Error, Result};
use crate::scalar::{canonical_pairs, invert, rank, Scalar};
use crate::settings::Caps;

#[derive(Clone)]
struct Ray<F> {
    coords: Vec<F>,
    zeros: Vec<u64>,
}

fn bit_set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn bits_and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn bits_count(a: &[u64]) -> usize {
    a.iter().map(|x| x.count_ones() as usize).sum()
}

fn bits_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Vertices (one per ± pair, canonical sign, lexicographically sorted) of
/// the symmetric polytope with the given facet normals.
pub fn symmetric_vertices<F: Scalar>(facets: &[Vec<F>], dim: usize, caps: &Caps) -> Result<Vec<Vec<F>>> {
    if dim > caps.vertex_dim {
        return Err(Error::DimensionCapExceeded { dim, cap: caps.vertex_dim });
    }
    if facets.len() > caps.facets {
        return Err(Error::FacetCapExceeded { count: facets.len(), cap: caps.facets });
    }
    let r = rank(facets, dim);
    if r < dim {
        return Err(Error::UnboundedBody { rank: r, dim });
    }
    if dim == 0 {
        return Ok(Vec::new());
    }

    // Constraint rows g with g·(t, x) >= 0.
    let rows: Vec<Vec<F>> = facets
        .iter()
        .flat_map(|a| {
            let plus: Vec<F> = std::iter::once(F::one()).chain(a.iter().map(|v| -v.clone())).collect();
            let minus: Vec<F> = std::iter::once(F::one()).chain(a.iter().cloned()).collect();
            [plus, minus]
        })
        .collect();
    let d = dim + 1;
    let words = rows.len().div_ceil(64);

    // Greedy choice of d independent rows for the initial simplicial cone.
    let mut chosen: Vec<usize> = Vec::with_capacity(d);
    let mut basis_rows: Vec<Vec<F>> = Vec::with_capacity(d);
    for (i, row) in rows.iter().enumerate() {
        basis_rows.push(row.clone());
        if rank(&basis_rows, d) == basis_rows.len() {
            chosen.push(i);
            if chosen.len() == d {
                break;
            }
        } else {
            basis_rows.pop();
        }
    }
    let inv = invert(&basis_rows).ok_or(Error::UnboundedBody { rank: r, dim })?;
    let mut rays: Vec<Ray<F>> = (0..d)
        .map(|j| {
            let mut coords: Vec<F> = (0..d).map(|i| inv[i][j].clone()).collect();
            F::normalize_ray(&mut coords);
            let mut zeros = vec![0u64; words];
            for (k, &ci) in chosen.iter().enumerate() {
                if k != j {
                    bit_set(&mut zeros, ci);
                }
            }
            Ray { coords, zeros }
        })
        .collect();

    for (gi, g) in rows.iter().enumerate() {
        if chosen.contains(&gi) {
            continue;
        }
        let values: Vec<F> = rays
            .iter()
            .map(|ray| crate::scalar::dot(g, &ray.coords))
            .collect();
        let signs: Vec<i8> = values.iter().map(Scalar::sign).collect();
        if signs.iter().all(|&s| s >= 0) {
            for (ray, &s) in rays.iter_mut().zip(&signs) {
                if s == 0 {
                    bit_set(&mut ray.zeros, gi);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| signs[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| signs[i] < 0).collect();
        let mut fresh: Vec<Ray<F>> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = bits_and(&rays[p].zeros, &rays[q].zeros);
                if bits_count(&common) + 2 < d {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(o, ray)| o == p || o == q || !bits_subset(&common, &ray.zeros));
                if !adjacent {
                    continue;
                }
                let vp = values[p].clone();
                let vq = -values[q].clone();
                let mut coords: Vec<F> = rays[q]
                    .coords
                    .iter()
                    .zip(&rays[p].coords)
                    .map(|(xq, xp)| vp.clone() * xq.clone() + vq.clone() * xp.clone())
                    .collect();
                F::normalize_ray(&mut coords);
                let mut zeros = common;
                bit_set(&mut zeros, gi);
                fresh.push(Ray { coords, zeros });
            }
        }
        let mut next: Vec<Ray<F>> = Vec::with_capacity(pos.len() + fresh.len());
        for (i, mut ray) in rays.into_iter().enumerate() {
            match signs[i] {
                1 => next.push(ray),
                0 => {
                    bit_set(&mut ray.zeros, gi);
                    next.push(ray);
                }
                _ => {}
            }
        }
        next.extend(fresh);
        if next.len() > caps.dd_rays {
            return Err(Error::SizeCapExceeded { size: next.len(), cap: caps.dd_rays });
        }
        rays = next;
    }

    let mut vertices = Vec::with_capacity(rays.len());
    for ray in rays {
        let t = ray.coords[0].clone();
        if !t.is_positive() || t.is_negligible() {
            return Err(Error::UnboundedBody { rank: r, dim });
        }
        vertices.push(ray.coords[1..].iter().map(|v| v.clone() / t.clone()).collect());
    }
    Ok(canonical_pairs(vertices))
}
