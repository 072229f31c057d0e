//! Scalars and the small amount of exact linear algebra the hull and the
//! oracle need: determinants, ranks and gcd reduction of integer vectors.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision signed integer.
pub type BigIntScalar = BigInt;

/// Exact rational, always kept in lowest terms with a positive denominator.
pub type RationalScalar = BigRational;

/// A finite 64-bit float.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct FloatScalar(f64);

impl FloatScalar {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() {
            Ok(FloatScalar(value))
        } else {
            Err(Error::NonFinite(value))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl fmt::Display for FloatScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Coordinate type of the convex hull: exact big integers or binary floats.
///
/// Integer inputs are converted with [`Scalar::from_bigint`]; the float
/// implementation keeps values integral as long as they stay below 2^53, so
/// the fraction-free routines below are exact there too.
pub trait Scalar: Num + Signed + Clone + PartialOrd + fmt::Debug + Send + Sync + 'static {
    /// Whether predicates over this type are exact.
    const EXACT: bool;

    fn from_bigint(v: &BigInt) -> Self;

    fn to_f64(&self) -> f64;

    /// Sign of `value`, treating magnitudes at or below `tol * scale` as zero
    /// for inexact types.
    fn sign_tol(value: &Self, scale: f64, tol: f64) -> Ordering;

    /// Weight in normalized form: gcd-reduced for exact types, unit 1-norm
    /// for floats.
    fn to_weight(normal: &[Self]) -> Result<Weight>;

    fn rank(rows: &[Vec<Self>], tol: f64) -> usize;

    /// The exact integer value, for exact types.
    fn as_bigint(&self) -> Option<BigInt>;
}

impl Scalar for BigInt {
    const EXACT: bool = true;

    fn from_bigint(v: &BigInt) -> Self {
        v.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn sign_tol(value: &Self, _scale: f64, _tol: f64) -> Ordering {
        value.cmp(&BigInt::zero())
    }

    fn to_weight(normal: &[Self]) -> Result<Weight> {
        Ok(Weight::Exact(gcd_reduce(normal)?))
    }

    fn rank(rows: &[Vec<Self>], _tol: f64) -> usize {
        rank_exact(rows)
    }

    fn as_bigint(&self) -> Option<BigInt> {
        Some(self.clone())
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_bigint(v: &BigInt) -> Self {
        ToPrimitive::to_f64(v).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sign_tol(value: &Self, scale: f64, tol: f64) -> Ordering {
        if value.abs() <= tol * scale {
            Ordering::Equal
        } else if *value > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    fn to_weight(normal: &[Self]) -> Result<Weight> {
        let norm: f64 = normal.iter().map(|c| c.abs()).sum();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::DegenerateNormal);
        }
        Ok(Weight::Float(normal.iter().map(|c| c / norm).collect()))
    }

    fn rank(rows: &[Vec<Self>], tol: f64) -> usize {
        rank_f64(rows, tol)
    }

    fn as_bigint(&self) -> Option<BigInt> {
        None
    }
}

/// Determinant of a square integer matrix, exact.
pub fn det(matrix: &[Vec<BigInt>]) -> Result<BigInt> {
    let n = matrix.len();
    if matrix.iter().any(|row| row.len() != n) {
        return Err(Error::NotSquare);
    }
    Ok(bareiss_det(matrix.to_vec()))
}

/// Fraction-free Gaussian elimination (Bareiss). Every intermediate entry is
/// a minor of the input, so divisions are exact over the integers.
pub fn bareiss_det<T: Scalar>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n {
        let pivot = (k..n)
            .filter(|&i| !m[i][k].is_zero())
            .max_by(|&a, &b| {
                m[a][k]
                    .abs()
                    .partial_cmp(&m[b][k].abs())
                    .unwrap_or(Ordering::Equal)
            });
        let Some(pivot) = pivot else {
            return T::zero();
        };
        if pivot != k {
            m.swap(pivot, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = v / prev.clone();
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Rank of an integer matrix by fraction-free elimination.
pub fn rank_exact(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pivot) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(pivot, r);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let v = &m[i][j] * &m[r][c] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Rank of a float matrix by partial-pivot elimination. Rows are first
/// scaled to unit max-norm; entries at or below `tol` then count as zero.
pub fn rank_f64(rows: &[Vec<f64>], tol: f64) -> usize {
    let mut m: Vec<Vec<f64>> = rows
        .iter()
        .filter_map(|row| {
            let s = row.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
            (s > 0.0).then(|| row.iter().map(|v| v / s).collect())
        })
        .collect();
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let eps = tol;
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let (pivot, best) = (r..nrows)
            .map(|i| (i, m[i][c].abs()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= eps {
            continue;
        }
        m.swap(pivot, r);
        let (top, below) = m.split_at_mut(r + 1);
        let prow = &top[r];
        for row in below {
            let f = row[c] / prow[c];
            for (x, p) in row[c..].iter_mut().zip(&prow[c..]) {
                *x -= f * p;
            }
        }
        r += 1;
    }
    r
}

/// Divide an integer vector by the gcd of its absolute values.
pub fn gcd_reduce(v: &[BigInt]) -> Result<Vec<BigInt>> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return Err(Error::DegenerateNormal);
    }
    if g.is_one() {
        return Ok(v.to_vec());
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

/// Scalarization direction λ for the weighted-sum problem min λᵀz.
#[derive(Clone, Debug, PartialEq)]
pub enum Weight {
    /// Integer weight with component gcd 1.
    Exact(Vec<BigInt>),
    /// Float weight, normally with unit 1-norm.
    Float(Vec<f64>),
}

impl Weight {
    pub fn from_i64(v: &[i64]) -> Result<Self> {
        let big: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        Ok(Weight::Exact(gcd_reduce(&big)?))
    }

    pub fn len(&self) -> usize {
        match self {
            Weight::Exact(v) => v.len(),
            Weight::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Weight::Exact(_))
    }

    /// All components strictly positive (floats must exceed `eps`).
    pub fn is_strictly_positive(&self, eps: f64) -> bool {
        match self {
            Weight::Exact(v) => v.iter().all(|c| c.is_positive()),
            Weight::Float(v) => v.iter().all(|&c| c > eps),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Weight::Exact(v) => v.iter().map(Scalar::to_f64).collect(),
            Weight::Float(v) => v.clone(),
        }
    }

    pub fn dot_exact(&self, y: &[BigInt]) -> Option<BigInt> {
        match self {
            Weight::Exact(v) => Some(v.iter().zip(y).map(|(a, b)| a * b).sum()),
            Weight::Float(_) => None,
        }
    }

    pub fn dot_f64(&self, y: &[BigInt]) -> f64 {
        self.to_f64()
            .iter()
            .zip(y)
            .map(|(a, b)| a * Scalar::to_f64(b))
            .sum()
    }

    /// Compare λᵀy against λᵀreference. Float weights treat values within
    /// `rel_tol * max(1, |λᵀreference|)` as equal.
    pub fn compare(&self, y: &[BigInt], reference: &[BigInt], rel_tol: f64) -> Ordering {
        match self {
            Weight::Exact(_) => {
                let a = self.dot_exact(y).expect("exact weight");
                let b = self.dot_exact(reference).expect("exact weight");
                a.cmp(&b)
            }
            Weight::Float(_) => {
                let a = self.dot_f64(y);
                let b = self.dot_f64(reference);
                f64::sign_tol(&(a - b), b.abs().max(1.0), rel_tol)
            }
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = match self {
            Weight::Exact(v) => v.iter().map(|c| c.to_string()).collect(),
            Weight::Float(v) => v.iter().map(|c| format!("{c:.6e}")).collect(),
        };
        write!(f, "({})", parts.join(", "))
    }
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn big_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
