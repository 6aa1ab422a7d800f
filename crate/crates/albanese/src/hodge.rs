//! Exact linear algebra on the weight-graded space of level `n`: the
//! nilpotent generators, their exponentials, parametrized Hodge-type flags,
//! and the transversality conditions characterizing which flags a generator
//! moves one filtration step down.
//!
//! Basis convention: `e_1, ..., e_{n+1}` with `e_j` of weight `-2(n+1-j)`.
//! Code uses 0-indexed `(row, col)`; comments quote the 1-indexed entry
//! names `a_{j,k}` where a formula reads better that way.

use num_rational::BigRational;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{FieldScalar, Mat, Scalar, UnipotentMatrix};

/// Tags for the three distinguished nilpotent generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenTag {
    N0,
    N1,
    NInf,
}

impl GenTag {
    pub fn label(self) -> &'static str {
        match self {
            GenTag::N0 => "N0",
            GenTag::N1 => "N1",
            GenTag::NInf => "Ninf",
        }
    }
}

/// One of the generators as an exact integer matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct NilpotentGenerator {
    pub tag: GenTag,
    pub level: usize,
    pub mat: Mat<i64>,
}

impl NilpotentGenerator {
    pub fn to_scalar<T: Scalar>(&self) -> Mat<T> {
        self.mat.map(|v| T::from_i64(*v))
    }
}

/// `N0 e_j = e_{j-1}` for `2 <= j <= n`, zero on `e_1` and `e_{n+1}`.
pub fn n0_matrix(n: usize) -> Mat<i64> {
    let mut m = Mat::zero(n + 1);
    for j in 2..=n {
        m[(j - 2, j - 1)] = 1;
    }
    m
}

/// `N1 e_{n+1} = -e_n`, zero elsewhere.
pub fn n1_matrix(n: usize) -> Mat<i64> {
    let mut m = Mat::zero(n + 1);
    m[(n - 1, n)] = -1;
    m
}

pub fn build_generators(
    n: usize,
) -> Result<(NilpotentGenerator, NilpotentGenerator, NilpotentGenerator)> {
    if n == 0 {
        return Err(Error::argument("level must be at least 1"));
    }
    let n0 = n0_matrix(n);
    let n1 = n1_matrix(n);
    let ninf = n0.neg().add(&n1);
    Ok((
        NilpotentGenerator {
            tag: GenTag::N0,
            level: n,
            mat: n0,
        },
        NilpotentGenerator {
            tag: GenTag::N1,
            level: n,
            mat: n1,
        },
        NilpotentGenerator {
            tag: GenTag::NInf,
            level: n,
            mat: ninf,
        },
    ))
}

pub fn generator(tag: GenTag, n: usize) -> Result<NilpotentGenerator> {
    let (g0, g1, ginf) = build_generators(n)?;
    Ok(match tag {
        GenTag::N0 => g0,
        GenTag::N1 => g1,
        GenTag::NInf => ginf,
    })
}

/// The commuting family `nu_k = (ad N0)^(k-1) N1` for `k = 1..=n`.
///
/// Acting on the top basis vector, `nu_k e_{n+1} = -e_{n+1-k}`.
pub fn ad_tower(n: usize) -> Result<Vec<Mat<i64>>> {
    if n == 0 {
        return Err(Error::argument("level must be at least 1"));
    }
    let n0 = n0_matrix(n);
    let mut out = Vec::with_capacity(n);
    let mut cur = n1_matrix(n);
    for _ in 0..n {
        out.push(cur.clone());
        cur = n0.bracket(&cur);
    }
    Ok(out)
}

/// Exact check of `(-N0 + N1)^j = (-N0)^j + (-ad N0)^(j-1) N1` for all
/// `1 <= j <= n+1`.
pub fn power_identity_check(n: usize) -> Result<bool> {
    if n == 0 {
        return Err(Error::argument("level must be at least 1"));
    }
    let n0 = n0_matrix(n);
    let n1 = n1_matrix(n);
    let ninf = n0.neg().add(&n1);
    let mut ad_term = n1.clone(); // (-ad N0)^(j-1) N1 at j = 1
    let neg_n0 = n0.neg();
    for j in 1..=(n + 1) {
        let lhs = ninf.pow(j as u32);
        let rhs = neg_n0.pow(j as u32).add(&ad_term);
        if lhs != rhs {
            return Ok(false);
        }
        ad_term = neg_n0.bracket(&ad_term);
    }
    Ok(true)
}

/// Parameters `(alpha, beta, lambda_2, ..., lambda_n)` of the flag family.
#[derive(Clone, Debug, PartialEq)]
pub struct FiltrationParams<T> {
    pub alpha: T,
    pub beta: T,
    /// `lambda[k-2]` holds `lambda_k` for `k = 2..=n`.
    pub lambda: Vec<T>,
}

impl<T: Scalar> FiltrationParams<T> {
    pub fn new(level: usize, alpha: T, beta: T, lambda: Vec<T>) -> Result<Self> {
        if level == 0 {
            return Err(Error::argument("level must be at least 1"));
        }
        if lambda.len() + 1 != level {
            return Err(Error::argument(format!(
                "expected {} lambda parameters for level {}, got {}",
                level - 1,
                level,
                lambda.len()
            )));
        }
        Ok(FiltrationParams {
            alpha,
            beta,
            lambda,
        })
    }

    pub fn level(&self) -> usize {
        self.lambda.len() + 1
    }

    pub fn zero(level: usize) -> Self {
        FiltrationParams {
            alpha: T::zero(),
            beta: T::zero(),
            lambda: vec![T::zero(); level - 1],
        }
    }
}

/// Matrix whose columns realize the flag: column `k` (1-indexed, `2<=k<=n`)
/// is `e_k + alpha e_{k-1} + ... + alpha^(k-1)/(k-1)! e_1` and the last
/// column is `e_{n+1} + beta e_n + lambda_2 e_{n-1} + ... + lambda_n e_1`.
pub fn filtration_matrix<T: FieldScalar>(p: &FiltrationParams<T>) -> UnipotentMatrix<T> {
    let n = p.level();
    // alpha^m / m! for m = 0..n
    let mut apow = Vec::with_capacity(n + 1);
    apow.push(T::one());
    for m in 1..=n {
        let prev = apow[m - 1].clone();
        apow.push((prev * p.alpha.clone()).div(&T::from_i64(m as i64)));
    }
    UnipotentMatrix::from_upper(n, |r, c| {
        if c < n {
            apow[c - r].clone()
        } else if r == n - 1 {
            p.beta.clone()
        } else {
            // row r carries lambda_{n-r}
            p.lambda[n - r - 2].clone()
        }
    })
}

/// Read `(alpha, beta, lambda)` off a matrix of the parametrized shape.
/// Entries outside the parametrized positions are ignored.
pub fn params_from_matrix<T: FieldScalar>(f: &UnipotentMatrix<T>) -> FiltrationParams<T> {
    let n = f.level();
    let alpha = if n >= 2 {
        f.entry(0, 1).clone()
    } else {
        T::zero()
    };
    let beta = f.entry(n - 1, n).clone();
    let lambda = (2..=n).map(|k| f.entry(n - k, n).clone()).collect();
    FiltrationParams {
        alpha,
        beta,
        lambda,
    }
}

/// Griffiths transversality by rank tests: for every filtration step `p`,
/// `N . F^p` must lie inside `F^(p-1)`. `F^(-k)` is the span of the last
/// `k+1` columns of the flag matrix.
pub fn griffiths_check<T: FieldScalar>(nil: &Mat<T>, flag: &UnipotentMatrix<T>) -> bool {
    let n = flag.level();
    let dim = n + 1;
    assert_eq!(nil.dim(), dim);
    for k in 0..n {
        // Basis of F^{-(k+1)}: last k+2 columns.
        let target: Vec<Vec<T>> = ((dim - k - 2)..dim).map(|c| flag.as_mat().col(c)).collect();
        // Image of each F^{-k} basis vector.
        for c in (dim - k - 1)..dim {
            let v = nil.apply(&flag.as_mat().col(c));
            if !crate::matrix::in_span(&target, &v) {
                return false;
            }
        }
    }
    true
}

/// Closed-form transversality conditions on a general unitriangular matrix.
///
/// * `N0`: `a_{k,n+1} = 0` for `2<=k<=n` and `a_{1,k} = a_{l-k+1,l}` for
///   `2<=k<l<=n`;
/// * `N1`: `a_{k,n} = 0` for `1<=k<=n-1`;
/// * `NInf`: `a_{1,k} = a_{l-k+1,l}` for `2<=k<l<=n+1`.
pub fn transversality_conditions<T: FieldScalar>(tag: GenTag, a: &UnipotentMatrix<T>) -> bool {
    let n = a.level();
    let eq = |x: &T, y: &T| (x.clone() - y.clone()).is_negligible();
    let zero = T::zero();
    match tag {
        GenTag::N0 => {
            for k in 2..=n {
                if !eq(a.entry(k - 1, n), &zero) {
                    return false;
                }
            }
            coherence_family(a, n)
        }
        GenTag::N1 => {
            for k in 1..n {
                if !eq(a.entry(k - 1, n - 1), &zero) {
                    return false;
                }
            }
            true
        }
        GenTag::NInf => coherence_family(a, n + 1),
    }
}

/// `a_{1,k} = a_{l-k+1,l}` for `2 <= k < l <= last_col` (1-indexed).
fn coherence_family<T: FieldScalar>(a: &UnipotentMatrix<T>, last_col: usize) -> bool {
    for k in 2..last_col {
        for l in (k + 1)..=last_col {
            let lhs = a.entry(0, k - 1);
            let rhs = a.entry(l - k, l - 1);
            if !(lhs.clone() - rhs.clone()).is_negligible() {
                return false;
            }
        }
    }
    true
}

/// Weight bookkeeping for the level-`n` graded space: each `e_j` sits in
/// weight `-2(n+1-j)` and every even graded piece in `[-2n, 0]` has rank 1
/// with the self-pairing normalized to 1.
#[derive(Clone, Debug)]
pub struct GradedSpace {
    pub level: usize,
}

impl GradedSpace {
    pub fn new(level: usize) -> Result<Self> {
        if level == 0 {
            return Err(Error::argument("level must be at least 1"));
        }
        Ok(GradedSpace { level })
    }

    pub fn dimension(&self) -> usize {
        self.level + 1
    }

    /// Weight of basis vector `e_j`, 1-indexed.
    pub fn weight_of_basis(&self, j: usize) -> i64 {
        -2 * (self.level as i64 + 1 - j as i64)
    }

    pub fn graded_rank(&self, w: i64) -> usize {
        if w % 2 == 0 && (-2 * self.level as i64..=0).contains(&w) {
            1
        } else {
            0
        }
    }

    /// The pairing on each rank-1 graded piece is the constant 1; recorded
    /// as metadata, no pairing arithmetic happens anywhere.
    pub fn pairing_flag(&self, w: i64) -> Option<i64> {
        (self.graded_rank(w) == 1).then_some(1)
    }
}

/// Uniform small rational with numerator in `[-bound, bound]` and
/// denominator in `[1, bound]`.
pub fn random_rational(rng: &mut impl Rng, bound: i64) -> BigRational {
    let num = rng.gen_range(-bound..=bound);
    let den = rng.gen_range(1..=bound);
    BigRational::new(num.into(), den.into())
}

/// Sample a unitriangular rational matrix that satisfies (or, when
/// `satisfy` is false, violates in exactly one slot) the closed-form
/// conditions for `tag`. Free entries are random small rationals.
pub fn sample_matrix_for_tag(
    rng: &mut impl Rng,
    tag: GenTag,
    n: usize,
    satisfy: bool,
) -> UnipotentMatrix<BigRational> {
    let mut a = UnipotentMatrix::from_upper(n, |_, _| random_rational(rng, 9));
    let mut constrained: Vec<(usize, usize)> = Vec::new();
    match tag {
        GenTag::N0 => {
            for k in 2..=n {
                set_entry(&mut a, k - 1, n, BigRational::from_integer(0.into()));
                constrained.push((k - 1, n));
            }
            constrained.extend(impose_coherence(&mut a, n));
        }
        GenTag::N1 => {
            for k in 1..n {
                set_entry(&mut a, k - 1, n - 1, BigRational::from_integer(0.into()));
                constrained.push((k - 1, n - 1));
            }
        }
        GenTag::NInf => {
            constrained.extend(impose_coherence(&mut a, n + 1));
        }
    }
    // The condition sets are nonvacuous for every tag once n >= 2; at n = 1
    // a violation cannot be constructed and the satisfying matrix is returned.
    if !satisfy && !constrained.is_empty() {
        let (r, c) = constrained[rng.gen_range(0..constrained.len())];
        let bump = BigRational::new(rng.gen_range(1..=5i64).into(), 1.into());
        let cur = a.entry(r, c).clone();
        set_entry(&mut a, r, c, cur + bump);
    }
    a
}

fn impose_coherence(
    a: &mut UnipotentMatrix<BigRational>,
    last_col: usize,
) -> Vec<(usize, usize)> {
    let mut touched = Vec::new();
    for k in 2..last_col {
        for l in (k + 1)..=last_col {
            let v = a.entry(0, k - 1).clone();
            set_entry(a, l - k, l - 1, v);
            touched.push((l - k, l - 1));
        }
    }
    touched
}

fn set_entry(a: &mut UnipotentMatrix<BigRational>, r: usize, c: usize, v: BigRational) {
    let n = a.level();
    let cur = a.clone();
    *a = UnipotentMatrix::from_upper(n, |rr, cc| {
        if (rr, cc) == (r, c) {
            v.clone()
        } else {
            cur.entry(rr, cc).clone()
        }
    });
}
