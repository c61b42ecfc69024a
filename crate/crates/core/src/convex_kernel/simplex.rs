//! Dense tableau simplex with Bland's rule, generic over the scalar field.
//!
//! Solves `max c·x  s.t.  A x <= b` with `b >= 0` and `x` free, so the
//! origin is always feasible and the slack basis is a valid start.

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<F> {
    Optimal {
        value: F,
        x: Vec<F>,
        /// One nonnegative multiplier per row with `Aᵀy = c` and `b·y = value`.
        duals: Vec<F>,
    },
    Unbounded,
}

/// Maximize `c·x` subject to `a x <= b`. Every `b[i]` must be nonnegative.
pub fn maximize<F: Scalar>(a: &[Vec<F>], b: &[F], c: &[F]) -> LpOutcome<F> {
    let m = a.len();
    let n = c.len();
    debug_assert!(b.iter().all(|v| !v.is_negative() || v.is_negligible()));
    // Columns: x+ (n), x- (n), slacks (m), rhs.
    let width = 2 * n + m + 1;
    let rhs = width - 1;
    let mut t: Vec<Vec<F>> = (0..m)
        .map(|i| {
            let mut row = vec![F::zero(); width];
            for j in 0..n {
                row[j] = a[i][j].clone();
                row[n + j] = -a[i][j].clone();
            }
            row[2 * n + i] = F::one();
            row[rhs] = b[i].clone();
            row
        })
        .collect();
    // Reduced-cost row r_j = c_j - c_B B^-1 A_j, and objective value.
    let mut r: Vec<F> = vec![F::zero(); width];
    for j in 0..n {
        r[j] = c[j].clone();
        r[n + j] = -c[j].clone();
    }
    let mut basis: Vec<usize> = (0..m).map(|i| 2 * n + i).collect();

    while let Some(enter) = (0..rhs).find(|&j| r[j].is_positive() && !r[j].is_negligible()) {
        let mut leave: Option<(usize, F)> = None;
        for i in 0..m {
            let coef = &t[i][enter];
            if coef.is_positive() && !coef.is_negligible() {
                let ratio = t[i][rhs].clone() / coef.clone();
                let better = match &leave {
                    None => true,
                    Some((li, best)) => match ratio.cmp_tol(best) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Equal => basis[i] < basis[*li],
                        std::cmp::Ordering::Greater => false,
                    },
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            return LpOutcome::Unbounded;
        };
        pivot(&mut t, &mut r, pr, enter);
        basis[pr] = enter;
    }

    let mut primal = vec![F::zero(); 2 * n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < 2 * n {
            primal[bv] = t[i][rhs].clone();
        }
    }
    let x: Vec<F> = (0..n)
        .map(|j| primal[j].clone() - primal[n + j].clone())
        .collect();
    let duals: Vec<F> = (0..m).map(|i| -r[2 * n + i].clone()).collect();
    let value = -r[rhs].clone();
    LpOutcome::Optimal { value, x, duals }
}

/// Outcome of [`minimize_equality`].
#[derive(Debug, Clone, PartialEq)]
pub enum EqOutcome<F> {
    Optimal {
        value: F,
        x: Vec<F>,
        /// Row multipliers `y` with `Aᵀy <= c` and `b·y = value`.
        duals: Vec<F>,
    },
    Infeasible,
    Unbounded,
}

/// Minimize `c·x` subject to `A x = b`, `x >= 0` (two-phase, Bland's rule).
/// `a` is given row by row.
pub fn minimize_equality<F: Scalar>(a: &[Vec<F>], b: &[F], c: &[F]) -> EqOutcome<F> {
    let rows = a.len();
    let m = c.len();
    let width = m + rows + 1;
    let rhs = width - 1;
    let signs: Vec<bool> = b.iter().map(|v| v.is_negative()).collect();
    let mut t: Vec<Vec<F>> = (0..rows)
        .map(|i| {
            let flip = |v: &F| if signs[i] { -v.clone() } else { v.clone() };
            let mut row: Vec<F> = a[i].iter().map(flip).collect();
            row.extend((0..rows).map(|j| if i == j { F::one() } else { F::zero() }));
            row.push(flip(&b[i]));
            row
        })
        .collect();
    let mut basis: Vec<usize> = (m..m + rows).collect();

    // Phase 1: minimize the sum of artificials.
    let mut r: Vec<F> = vec![F::zero(); width];
    for row in &t {
        for j in (0..m).chain(std::iter::once(rhs)) {
            r[j] = r[j].clone() - row[j].clone();
        }
    }
    if !run_min(&mut t, &mut r, &mut basis, m) {
        return EqOutcome::Unbounded;
    }
    if !(-r[rhs].clone()).is_negligible() {
        return EqOutcome::Infeasible;
    }
    // Drive zero-level artificials out of the basis where possible.
    for i in 0..rows {
        if basis[i] >= m {
            if let Some(j) = (0..m).find(|&j| !t[i][j].is_negligible()) {
                pivot(&mut t, &mut r, i, j);
                basis[i] = j;
            }
        }
    }

    // Phase 2.
    let mut r: Vec<F> = vec![F::zero(); width];
    r[..m].clone_from_slice(&c[..m]);
    for (i, &bv) in basis.iter().enumerate() {
        let cb = if bv < m { c[bv].clone() } else { F::zero() };
        if cb.is_zero() {
            continue;
        }
        for j in 0..width {
            r[j] = r[j].clone() - cb.clone() * t[i][j].clone();
        }
    }
    if !run_min(&mut t, &mut r, &mut basis, m) {
        return EqOutcome::Unbounded;
    }
    let mut x = vec![F::zero(); m];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < m {
            x[bv] = t[i][rhs].clone();
        }
    }
    let duals: Vec<F> = (0..rows)
        .map(|i| {
            let y = -r[m + i].clone();
            if signs[i] {
                -y
            } else {
                y
            }
        })
        .collect();
    EqOutcome::Optimal { value: -r[rhs].clone(), x, duals }
}

/// Minimization loop over the first `allowed` columns. Returns false when
/// the objective is unbounded below.
fn run_min<F: Scalar>(t: &mut [Vec<F>], r: &mut [F], basis: &mut [usize], allowed: usize) -> bool {
    let rhs = r.len() - 1;
    loop {
        let Some(enter) = (0..allowed).find(|&j| r[j].is_negative() && !r[j].is_negligible()) else {
            return true;
        };
        let mut leave: Option<(usize, F)> = None;
        for (i, row) in t.iter().enumerate() {
            let coef = &row[enter];
            if coef.is_positive() && !coef.is_negligible() {
                let ratio = row[rhs].clone() / coef.clone();
                let better = match &leave {
                    None => true,
                    Some((li, best)) => match ratio.cmp_tol(best) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Equal => basis[i] < basis[*li],
                        std::cmp::Ordering::Greater => false,
                    },
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            return false;
        };
        pivot(t, r, pr, enter);
        basis[pr] = enter;
    }
}

fn pivot<F: Scalar>(t: &mut [Vec<F>], r: &mut [F], pr: usize, pc: usize) {
    let p = t[pr][pc].clone();
    for v in t[pr].iter_mut() {
        *v = v.clone() / p.clone();
    }
    let prow = t[pr].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == pr || row[pc].is_zero() {
            continue;
        }
        let f = row[pc].clone();
        for (v, pv) in row.iter_mut().zip(&prow) {
            if !pv.is_zero() {
                *v = v.clone() - f.clone() * pv.clone();
            }
        }
    }
    if !r[pc].is_zero() {
        let f = r[pc].clone();
        for (v, pv) in r.iter_mut().zip(&prow) {
            if !pv.is_zero() {
                *v = v.clone() - f.clone() * pv.clone();
            }
        }
    }
}
