//! The maxmin-ω selection and the `MinMaxValue` primitive.

use itertools::Itertools;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::TropicalMatrix;
use crate::scalar::ExtScalar;

/// `ω = p/n`: select the `p`-th smallest of `n` terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Threshold {
    p: usize,
    n: usize,
}

impl Threshold {
    pub fn new(p: usize, n: usize) -> Result<Self> {
        if p == 0 || p > n {
            return Err(Error::InvalidThreshold { p, n });
        }
        Ok(Threshold { p, n })
    }

    pub fn p(self) -> usize {
        self.p
    }

    pub fn n(self) -> usize {
        self.n
    }

    /// The co-rank `n + 1 - p`.
    pub fn q(self) -> usize {
        self.n + 1 - self.p
    }

    /// `p = 1`: the min-plus case.
    pub fn is_min_plus(self) -> bool {
        self.p == 1
    }

    /// `p = n`: the max-plus case.
    pub fn is_max_plus(self) -> bool {
        self.p == self.n
    }

    fn check(self, len: usize) -> Result<()> {
        if len == self.n {
            Ok(())
        } else {
            Err(Error::SizeMismatch {
                expected: self.n,
                found: len,
            })
        }
    }
}

/// The `p`-th smallest element of `s`, counting multiplicity.
pub fn omega_select(s: &[ExtScalar], t: Threshold) -> Result<ExtScalar> {
    t.check(s.len())?;
    Ok(select_rank(s.iter().collect(), t.p).clone())
}

/// `k`-th smallest (1-based) of a non-empty working vector.
fn select_rank(mut v: Vec<&ExtScalar>, k: usize) -> &ExtScalar {
    let (_, kth, _) = v.select_nth_unstable(k - 1);
    kth
}

/// Conjunctive form: `min` over `p`-subsets of the subset maximum.
pub fn omega_select_cnf(s: &[ExtScalar], t: Threshold) -> Result<ExtScalar> {
    t.check(s.len())?;
    Ok(s.iter()
        .combinations(t.p)
        .map(|c| c.into_iter().max().expect("p >= 1"))
        .min()
        .expect("at least one subset")
        .clone())
}

/// Disjunctive form: `max` over `(n+1-p)`-subsets of the subset minimum.
pub fn omega_select_dnf(s: &[ExtScalar], t: Threshold) -> Result<ExtScalar> {
    t.check(s.len())?;
    Ok(s.iter()
        .combinations(t.q())
        .map(|c| c.into_iter().min().expect("q >= 1"))
        .max()
        .expect("at least one subset")
        .clone())
}

/// `(A ⊗_ω x)_i`: the `p`-th smallest of `A(i,j) + x_j` over `j`.
pub fn omega_matvec(a: &TropicalMatrix, x: &[ExtScalar], t: Threshold) -> Result<Vec<ExtScalar>> {
    t.check(a.n())?;
    t.check(x.len())?;
    (0..a.n())
        .map(|i| {
            let terms = a
                .row(i)
                .iter()
                .zip(x)
                .map(|(aij, xj)| aij.trop_mul(xj))
                .collect::<Result<Vec<_>>>()?;
            Ok(select_rank(terms.iter().collect(), t.p).clone())
        })
        .collect()
}

/// The combined matrix `F(i,j) = a_i - b_j + D(i,j)` whose `MinMaxValue`
/// bounds `a ⊗_ω x - b ⊗_ω x` from below on the zone of `D`.
pub fn combined_matrix(d: &TropicalMatrix, a: &[BigRational], b: &[BigRational]) -> TropicalMatrix {
    TropicalMatrix::from_fn(d.n(), |i, j| d.get(i, j).add_rational(&(&a[i] - &b[j])))
}

/// `MinMaxValue(F | p, n+1-p)`: the smallest, over `p × (n+1-p)`
/// submatrices, of the submatrix maximum.
///
/// For a fixed row set the best column set of size `q` is the `q` columns
/// with the smallest column maxima, so each row set costs one rank
/// selection instead of an enumeration of column sets.
pub fn min_max_block(f: &TropicalMatrix, t: Threshold) -> Result<ExtScalar> {
    t.check(f.n())?;
    let n = f.n();
    let mut best: Option<ExtScalar> = None;
    let mut scores: Vec<&ExtScalar> = Vec::with_capacity(n);
    for rows in (0..n).combinations(t.p) {
        scores.clear();
        for j in 0..n {
            let col_max = rows
                .iter()
                .map(|&i| f.get(i, j))
                .max()
                .expect("p >= 1");
            scores.push(col_max);
        }
        let (_, qth, _) = scores.select_nth_unstable(t.q() - 1);
        if best.as_ref().is_none_or(|b| *qth < b) {
            best = Some((*qth).clone());
        }
    }
    Ok(best.expect("at least one row subset"))
}

/// Literal double enumeration over row and column subsets. Test oracle for
/// [`min_max_block`].
pub fn min_max_block_naive(f: &TropicalMatrix, t: Threshold) -> Result<ExtScalar> {
    t.check(f.n())?;
    let n = f.n();
    let col_sets: Vec<Vec<usize>> = (0..n).combinations(t.q()).collect();
    let mut best: Option<ExtScalar> = None;
    for rows in (0..n).combinations(t.p) {
        for cols in &col_sets {
            let m = rows
                .iter()
                .cartesian_product(cols)
                .map(|(&i, &j)| f.get(i, j))
                .max()
                .expect("non-empty block");
            if best.as_ref().is_none_or(|b| m < b) {
                best = Some(m.clone());
            }
        }
    }
    Ok(best.expect("at least one block"))
}

/// `MinMaxValue(D, a, b | p, n+1-p)`.
pub fn min_max_value(
    d: &TropicalMatrix,
    a: &[BigRational],
    b: &[BigRational],
    t: Threshold,
) -> Result<ExtScalar> {
    check_rows(d, a, b)?;
    min_max_block(&combined_matrix(d, a, b), t)
}

pub fn min_max_value_naive(
    d: &TropicalMatrix,
    a: &[BigRational],
    b: &[BigRational],
    t: Threshold,
) -> Result<ExtScalar> {
    check_rows(d, a, b)?;
    min_max_block_naive(&combined_matrix(d, a, b), t)
}

fn check_rows(d: &TropicalMatrix, a: &[BigRational], b: &[BigRational]) -> Result<()> {
    for len in [a.len(), b.len()] {
        if len != d.n() {
            return Err(Error::DimensionMismatch {
                expected: d.n(),
                found: len,
            });
        }
    }
    Ok(())
}

/// Finite row `i` of an all-finite matrix as rationals.
pub fn finite_row(a: &TropicalMatrix, i: usize) -> Vec<BigRational> {
    (0..a.n()).map(|j| a.finite(i, j).clone()).collect()
}
