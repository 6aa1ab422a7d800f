//! Dense matrices over an abstract scalar, plus the upper unitriangular
//! subgroup used everywhere else in the crate.
//!
//! Two scalar tiers are supported through the same code paths: exact
//! rationals ([`BigRational`]) for identity checks and `Complex64` for
//! transported data. Rank decisions are exact over rationals and use a
//! fixed residual threshold over floats.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Residual threshold for rank decisions over floating scalars.
pub const NUMERIC_RANK_TOL: f64 = 1e-10;

/// Ring operations shared by every scalar the crate computes with.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
}

/// Scalars with division and a notion of approximate magnitude.
///
/// `is_negligible` is what makes rank tests two-tier: exact scalars report
/// negligible only for exact zero, floats compare against
/// [`NUMERIC_RANK_TOL`].
pub trait FieldScalar: Scalar {
    fn div(self, rhs: &Self) -> Self;
    fn magnitude(&self) -> f64;
    fn is_negligible(&self) -> bool;
}

impl Scalar for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl FieldScalar for BigRational {
    fn div(self, rhs: &Self) -> Self {
        self / rhs
    }
    fn magnitude(&self) -> f64 {
        crate::matrix::rational_to_f64(self).abs()
    }
    fn is_negligible(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

impl FieldScalar for Complex64 {
    fn div(self, rhs: &Self) -> Self {
        self / rhs
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_negligible(&self) -> bool {
        self.norm() < NUMERIC_RANK_TOL
    }
}

/// Convert a big rational to `f64`, good enough for pivot selection and
/// reporting (exact arithmetic never routes through this).
pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::INFINITY)
}

/// Square dense matrix, row major.
#[derive(Clone, PartialEq)]
pub struct Mat<T> {
    dim: usize,
    a: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat[{0}x{0}]", self.dim)?;
        for r in 0..self.dim {
            writeln!(f, "  {:?}", &self.a[r * self.dim..(r + 1) * self.dim])?;
        }
        Ok(())
    }
}

impl<T: Scalar> Mat<T> {
    pub fn zero(dim: usize) -> Self {
        Mat {
            dim,
            a: vec![T::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zero(dim);
        for r in 0..dim {
            for c in 0..dim {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    pub fn map<U: Scalar>(&self, mut f: impl FnMut(&T) -> U) -> Mat<U> {
        Mat {
            dim: self.dim,
            a: self.a.iter().map(|x| f(x)).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        Mat {
            dim: self.dim,
            a: self
                .a
                .iter()
                .zip(&rhs.a)
                .map(|(x, y)| x.clone() + y.clone())
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        Mat {
            dim: self.dim,
            a: self
                .a
                .iter()
                .zip(&rhs.a)
                .map(|(x, y)| x.clone() - y.clone())
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Mat {
            dim: self.dim,
            a: self.a.iter().map(|x| -x.clone()).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        Mat {
            dim: self.dim,
            a: self.a.iter().map(|x| x.clone() * s.clone()).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = Self::zero(n);
        for r in 0..n {
            for k in 0..n {
                let x = self[(r, k)].clone();
                if x.is_zero() {
                    continue;
                }
                for c in 0..n {
                    out[(r, c)] = out[(r, c)].clone() + x.clone() * rhs[(k, c)].clone();
                }
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::identity(self.dim);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.matmul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base);
            }
        }
        acc
    }

    /// Lie bracket `[A, B] = AB - BA`.
    pub fn bracket(&self, rhs: &Self) -> Self {
        self.matmul(rhs).sub(&rhs.matmul(self))
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
    }

    pub fn is_strictly_upper(&self) -> bool {
        for r in 0..self.dim {
            for c in 0..=r {
                if !self[(r, c)].is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn col(&self, c: usize) -> Vec<T> {
        (0..self.dim).map(|r| self[(r, c)].clone()).collect()
    }

    /// Apply the matrix to a column vector.
    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|r| {
                let mut s = T::zero();
                for c in 0..self.dim {
                    s = s + self[(r, c)].clone() * v[c].clone();
                }
                s
            })
            .collect()
    }
}

impl Mat<Complex64> {
    /// Largest entry magnitude of `self - rhs`.
    pub fn max_entry_distance(&self, rhs: &Self) -> f64 {
        assert_eq!(self.dim, rhs.dim);
        self.a
            .iter()
            .zip(&rhs.a)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.a[r * self.dim + c]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.a[r * self.dim + c]
    }
}

/// Upper unitriangular matrix of size `(level + 1) x (level + 1)`.
///
/// Unit diagonal and zero below-diagonal entries are structural: they are
/// enforced at construction and every group operation stays inside the
/// subgroup, so no numerical noise can appear there.
#[derive(Clone, PartialEq, Debug)]
pub struct UnipotentMatrix<T> {
    level: usize,
    mat: Mat<T>,
}

impl<T: Scalar> UnipotentMatrix<T> {
    pub fn identity(level: usize) -> Self {
        UnipotentMatrix {
            level,
            mat: Mat::identity(level + 1),
        }
    }

    /// Wrap a dense matrix, rejecting anything not unitriangular.
    pub fn from_mat(level: usize, mat: Mat<T>) -> Result<Self> {
        if mat.dim() != level + 1 {
            return Err(Error::argument(format!(
                "matrix dimension {} does not match level {}",
                mat.dim(),
                level
            )));
        }
        for r in 0..mat.dim() {
            if mat[(r, r)] != T::one() {
                return Err(Error::argument("diagonal entry is not 1"));
            }
            for c in 0..r {
                if !mat[(r, c)].is_zero() {
                    return Err(Error::argument("nonzero entry below the diagonal"));
                }
            }
        }
        Ok(UnipotentMatrix { level, mat })
    }

    /// Build from the strict upper entries `f(row, col)` (0-indexed, row < col).
    pub fn from_upper(level: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let dim = level + 1;
        let mat = Mat::from_fn(dim, |r, c| {
            if r == c {
                T::one()
            } else if r < c {
                f(r, c)
            } else {
                T::zero()
            }
        });
        UnipotentMatrix { level, mat }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.level + 1
    }

    pub fn entry(&self, r: usize, c: usize) -> &T {
        &self.mat[(r, c)]
    }

    pub fn as_mat(&self) -> &Mat<T> {
        &self.mat
    }

    pub fn into_mat(self) -> Mat<T> {
        self.mat
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.level, rhs.level);
        let n = self.dim();
        // Multiply only the upper triangle; the rest is structural.
        let mut out = Mat::identity(n);
        for r in 0..n {
            for c in (r + 1)..n {
                let mut s = T::zero();
                for k in r..=c {
                    s = s + self.mat[(r, k)].clone() * rhs.mat[(k, c)].clone();
                }
                out[(r, c)] = s;
            }
        }
        UnipotentMatrix {
            level: self.level,
            mat: out,
        }
    }

    /// Exact inverse via the terminating Neumann series of the nilpotent part.
    pub fn inverse(&self) -> Self {
        let n = self.dim();
        let mut nil = self.mat.clone();
        for i in 0..n {
            nil[(i, i)] = T::zero();
        }
        let mut acc = Mat::identity(n);
        let mut term = Mat::identity(n);
        for _ in 1..n {
            term = term.matmul(&nil);
            if term.is_zero_matrix() {
                break;
            }
            acc = acc.add(&term.neg());
            term = term.neg();
        }
        UnipotentMatrix {
            level: self.level,
            mat: acc,
        }
    }

    /// Group commutator `self * rhs * self^-1 * rhs^-1`.
    pub fn group_commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).mul(&self.inverse()).mul(&rhs.inverse())
    }

    pub fn pow_i(&self, e: i32) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity(self.level);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn map<U: Scalar>(&self, f: impl FnMut(&T) -> U) -> UnipotentMatrix<U> {
        UnipotentMatrix {
            level: self.level,
            mat: self.mat.map(f),
        }
    }
}

impl UnipotentMatrix<Complex64> {
    pub fn max_entry_distance(&self, rhs: &Self) -> f64 {
        self.mat.max_entry_distance(&rhs.mat)
    }
}

/// Exponential of a strictly upper triangular matrix: the series terminates
/// after `dim` terms, so the result is exact over exact scalars.
pub fn nilpotent_exp<T: FieldScalar>(m: &Mat<T>) -> Result<UnipotentMatrix<T>> {
    if !m.is_strictly_upper() {
        return Err(Error::argument(
            "matrix exponential requires a strictly upper triangular input",
        ));
    }
    let n = m.dim();
    let mut acc = Mat::identity(n);
    let mut term = Mat::identity(n);
    for k in 1..n {
        term = term.matmul(m);
        if term.is_zero_matrix() {
            break;
        }
        term = term.map(|x| x.clone().div(&T::from_i64(k as i64)));
        acc = acc.add(&term);
    }
    UnipotentMatrix::from_mat(n - 1, acc)
}

/// Decide whether `target` lies in the column span of `basis` (vectors of
/// equal length). Exact over rationals, thresholded over floats.
pub fn in_span<T: FieldScalar>(basis: &[Vec<T>], target: &[T]) -> bool {
    let rows = target.len();
    let cols = basis.len();
    // Gaussian elimination on the augmented system [basis | target].
    let mut m: Vec<Vec<T>> = (0..rows)
        .map(|r| {
            let mut row: Vec<T> = basis.iter().map(|b| b[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..cols {
        // Largest-magnitude pivot keeps the float tier stable; over rationals
        // any nonzero pivot is fine (magnitude may underflow for tiny exact
        // values, so fall back to an exactness scan).
        let mut best = pivot_row;
        let mut best_mag = 0.0;
        for r in pivot_row..rows {
            let mag = m[r][col].magnitude();
            if mag > best_mag {
                best_mag = mag;
                best = r;
            }
        }
        if best_mag == 0.0 {
            match (pivot_row..rows).find(|&r| !m[r][col].is_negligible()) {
                Some(r) => best = r,
                None => continue,
            }
        } else if m[best][col].is_negligible() {
            continue;
        }
        m.swap(pivot_row, best);
        let pivot = m[pivot_row][col].clone();
        for r in (pivot_row + 1)..rows {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone().div(&pivot);
            for c in col..=cols {
                let upd = m[pivot_row][c].clone() * factor.clone();
                m[r][c] = m[r][c].clone() - upd;
            }
        }
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }
    // Inconsistent iff some fully eliminated row still has a residual target.
    for r in pivot_row..rows {
        if !m[r][cols].is_negligible() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn unipotent_mul_and_inverse_are_exact() {
        let u = UnipotentMatrix::from_upper(3, |r, c| rat((r + c) as i64, 1 + c as i64));
        let inv = u.inverse();
        assert_eq!(u.mul(&inv), UnipotentMatrix::identity(3));
        assert_eq!(inv.mul(&u), UnipotentMatrix::identity(3));
    }

    #[test]
    fn from_mat_rejects_bad_shapes() {
        let mut m = Mat::<BigRational>::identity(3);
        m[(2, 0)] = rat(1, 1);
        assert!(UnipotentMatrix::from_mat(2, m).is_err());
        let mut d = Mat::<BigRational>::identity(3);
        d[(1, 1)] = rat(2, 1);
        assert!(UnipotentMatrix::from_mat(2, d).is_err());
    }

    #[test]
    fn nilpotent_exp_terminates_exactly() {
        // exp of the full shift on 4 points: entries 1, 1/2, 1/6 on bands.
        let mut m = Mat::<BigRational>::zero(4);
        for i in 0..3 {
            m[(i, i + 1)] = rat(1, 1);
        }
        let e = nilpotent_exp(&m).unwrap();
        assert_eq!(*e.entry(0, 1), rat(1, 1));
        assert_eq!(*e.entry(0, 2), rat(1, 2));
        assert_eq!(*e.entry(0, 3), rat(1, 6));
        assert_eq!(*e.entry(1, 3), rat(1, 2));
    }

    #[test]
    fn nilpotent_exp_rejects_non_upper() {
        let m = Mat::<BigRational>::identity(3);
        assert!(nilpotent_exp(&m).is_err());
    }

    #[test]
    fn span_membership_exact() {
        let b1 = vec![rat(1, 1), rat(0, 1), rat(2, 1)];
        let b2 = vec![rat(0, 1), rat(1, 1), rat(3, 1)];
        let inside = vec![rat(2, 1), rat(5, 1), rat(19, 1)];
        let outside = vec![rat(2, 1), rat(5, 1), rat(18, 1)];
        assert!(in_span(&[b1.clone(), b2.clone()], &inside));
        assert!(!in_span(&[b1, b2], &outside));
    }
}
