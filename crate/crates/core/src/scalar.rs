//! Field abstraction shared by the polyhedral kernel: exact rationals and
//! tolerance-aware `f64`.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// Sign tolerance used by the floating-point instantiation.
pub const FLOAT_EPS: f64 = 1e-9;

pub trait Scalar: Clone + Debug + PartialOrd + Signed + Send + Sync + 'static {
    fn from_rat(r: &Rat) -> Self;
    fn to_f64(&self) -> f64;
    /// Exact zero for rationals, `|x| <= FLOAT_EPS` for floats.
    fn is_negligible(&self) -> bool;
    /// Rescale a ray in place, keeping its direction. Rationals become a
    /// primitive integer vector, floats get unit max-norm.
    fn normalize_ray(v: &mut [Self]);
    const EXACT: bool;

    fn from_i64(v: i64) -> Self {
        Self::from_rat(&Rat::from_integer(BigInt::from(v)))
    }

    fn sign(&self) -> i8 {
        if self.is_negligible() {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Tolerance-aware comparison.
    fn cmp_tol(&self, other: &Self) -> Ordering {
        match (self.clone() - other.clone()).sign() {
            0 => Ordering::Equal,
            1 => Ordering::Greater,
            _ => Ordering::Less,
        }
    }
}

impl Scalar for Rat {
    const EXACT: bool = true;

    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        rat_to_f64(self)
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn normalize_ray(v: &mut [Self]) {
        let mut lcm = BigInt::one();
        for x in v.iter() {
            lcm = lcm.lcm(x.denom());
        }
        let mut gcd = BigInt::zero();
        for x in v.iter() {
            let num = x.numer() * (&lcm / x.denom());
            gcd = gcd.gcd(&num);
        }
        if gcd.is_zero() {
            return;
        }
        for x in v.iter_mut() {
            let num = x.numer() * (&lcm / x.denom());
            *x = Rat::from_integer(num / &gcd);
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rat(r: &Rat) -> Self {
        rat_to_f64(r)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible(&self) -> bool {
        self.abs() <= FLOAT_EPS
    }

    fn normalize_ray(v: &mut [Self]) {
        let m = v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        if m > 0.0 {
            for x in v.iter_mut() {
                *x /= m;
            }
        }
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(r) {
        if v.is_finite() {
            return v;
        }
    }
    // Huge numerators/denominators: shift both down to a representable range.
    let n = r.numer().bits() as i64;
    let d = r.denom().bits() as i64;
    let shift_n = (n - 60).max(0) as usize;
    let shift_d = (d - 60).max(0) as usize;
    let nn = ToPrimitive::to_f64(&(r.numer() >> shift_n)).unwrap_or(0.0);
    let dd = ToPrimitive::to_f64(&(r.denom() >> shift_d)).unwrap_or(1.0);
    nn / dd * 2f64.powi((shift_n as i64 - shift_d as i64) as i32)
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Parse `"3"`, `"-7/24"`, `"0.125"` or `"1e-3"` into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let negative = mantissa.starts_with('-');
    let mantissa = mantissa.trim_start_matches(['-', '+']);
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let mut value = Rat::from_integer(digits.parse::<BigInt>().map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i32;
    let ten = Rat::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if negative { -value } else { value })
}

/// Exact rational with the same shortest decimal expansion as `x`
/// (so `0.1` becomes `1/10`, not the nearest dyadic).
pub fn rat_from_f64(x: f64) -> Result<Rat> {
    if !x.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite number {x}")));
    }
    parse_rat(&format!("{x}"))
}

/// Best rational approximation with denominator at most `max_den`
/// (continued fractions).
pub fn rat_approx(x: f64, max_den: i64) -> Rat {
    if !x.is_finite() {
        return Rat::zero();
    }
    let negative = x < 0.0;
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    for _ in 0..64 {
        let a = v.floor();
        if a > 1e15 {
            break;
        }
        let a = a as i128;
        let p2 = a * p1 + p0;
        let q2 = a * q1 + q0;
        if q2 > max_den as i128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = v - a as f64;
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return Rat::zero();
    }
    let r = Rat::new(BigInt::from(p1), BigInt::from(q1));
    if negative {
        -r
    } else {
        r
    }
}

/// `"n"` for integers, `"n/d"` otherwise.
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn to_f64_vec<F: Scalar>(v: &[F]) -> Vec<f64> {
    v.iter().map(Scalar::to_f64).collect()
}

pub fn from_rat_vec<F: Scalar>(v: &[Rat]) -> Vec<F> {
    v.iter().map(F::from_rat).collect()
}

/// Rank of a row set via Gaussian elimination.
pub fn rank<F: Scalar>(rows: &[Vec<F>], dim: usize) -> usize {
    let mut m: Vec<Vec<F>> = rows.to_vec();
    let mut rank = 0;
    for col in 0..dim {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_negligible()) else {
            continue;
        };
        m.swap(rank, pivot);
        let p = m[rank][col].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_negligible() {
                let f = m[r][col].clone() / p.clone();
                for c in col..dim {
                    let delta = f.clone() * m[rank][c].clone();
                    m[r][c] = m[r][c].clone() - delta;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Inverse of a square matrix by Gauss-Jordan elimination; `None` if singular.
pub fn invert<F: Scalar>(a: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = a.len();
    let mut m: Vec<Vec<F>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        // Largest pivot for floats, first nonzero for rationals.
        let pivot = if F::EXACT {
            (col..n).find(|&r| !m[r][col].is_zero())?
        } else {
            let r = (col..n)
                .max_by(|&x, &y| m[x][col].abs().partial_cmp(&m[y][col].abs()).unwrap())?;
            if m[r][col].is_negligible() {
                return None;
            }
            r
        };
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for c in 0..2 * n {
            m[col][c] = m[col][c].clone() / p.clone();
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..2 * n {
                    let delta = f.clone() * m[col][c].clone();
                    m[r][c] = m[r][c].clone() - delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mat_mul<F: Scalar>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(F::zero(), |acc, k| acc + row[k].clone() * b[k][j].clone())
                })
                .collect()
        })
        .collect()
}

pub fn transpose<F: Clone>(a: &[Vec<F>]) -> Vec<Vec<F>> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_vec<F: Scalar>(a: &[Vec<F>], x: &[F]) -> Vec<F> {
    a.iter().map(|row| dot(row, x)).collect()
}

/// Lexicographic comparison, used for deterministic ordering of point sets.
pub fn lex_cmp<F: Scalar>(a: &[F], b: &[F]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Flip the sign so the first non-negligible coordinate is positive.
/// Returns false for the zero vector.
pub fn canonical_sign<F: Scalar>(v: &mut [F]) -> bool {
    match v.iter().find(|x| !x.is_negligible()) {
        None => false,
        Some(x) => {
            if x.is_negative() {
                for y in v.iter_mut() {
                    *y = -y.clone();
                }
            }
            true
        }
    }
}

/// Canonicalize, sort and deduplicate a set of `±` pairs.
pub fn canonical_pairs<F: Scalar>(points: Vec<Vec<F>>) -> Vec<Vec<F>> {
    let mut out: Vec<Vec<F>> = points
        .into_iter()
        .filter_map(|mut p| canonical_sign(&mut p).then_some(p))
        .collect();
    out.sort_by(|a, b| lex_cmp(a, b));
    out.dedup_by(|a, b| a.iter().zip(b.iter()).all(|(x, y)| x.cmp_tol(y) == Ordering::Equal));
    out
}
