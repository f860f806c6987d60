//! Dense square matrices over the extended rationals.

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{ExtScalar, Semiring};

/// A dense `n × n` matrix of [`ExtScalar`], stored row-major.
///
/// The semiring is not part of the type; each product names the semiring it
/// is taken in. This lets one value serve as a DBM, a strongly active matrix
/// (whose `+∞` means "absent") or a plain problem matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TropicalMatrix {
    n: usize,
    entries: Vec<ExtScalar>,
}

impl TropicalMatrix {
    pub fn from_rows(rows: Vec<Vec<ExtScalar>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::NotSquare);
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(TropicalMatrix { n, entries })
    }

    /// Builds a matrix from integer rows. Panics if the rows are not square,
    /// which makes it convenient for literals in tests and examples.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&v| ExtScalar::int(v)).collect())
            .collect();
        Self::from_rows(rows).expect("square integer matrix")
    }

    pub fn filled(n: usize, value: ExtScalar) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        TropicalMatrix {
            n,
            entries: vec![value; n * n],
        }
    }

    /// The max-plus identity: `0` on the diagonal, `-∞` elsewhere.
    pub fn identity(n: usize) -> Self {
        Self::identity_in(n, Semiring::MaxPlus)
    }

    pub fn identity_in(n: usize, semiring: Semiring) -> Self {
        let mut m = Self::filled(n, semiring.zero());
        for i in 0..n {
            m.set(i, i, ExtScalar::zero());
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> ExtScalar) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        TropicalMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &ExtScalar {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: ExtScalar) {
        self.entries[i * self.n + j] = value;
    }

    pub fn row(&self, i: usize) -> &[ExtScalar] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<ExtScalar> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn rows(&self) -> Vec<Vec<ExtScalar>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[ExtScalar] {
        &self.entries
    }

    pub fn diagonal(&self) -> Vec<ExtScalar> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    /// Entrywise negation; swaps the infinities.
    pub fn negated(&self) -> Self {
        TropicalMatrix {
            n: self.n,
            entries: self.entries.iter().map(|v| -v).collect(),
        }
    }

    pub fn is_all_finite(&self) -> bool {
        self.entries.iter().all(ExtScalar::is_finite)
    }

    /// First non-finite entry in row-major order, as an error.
    pub fn require_finite(&self) -> Result<()> {
        match self.entries.iter().position(|v| !v.is_finite()) {
            None => Ok(()),
            Some(k) => Err(Error::NonFinite {
                row: k / self.n,
                col: k % self.n,
            }),
        }
    }

    /// Finite entry at `(i, j)`. Panics on an infinity; callers use it only
    /// on matrices already checked with [`Self::require_finite`].
    pub fn finite(&self, i: usize, j: usize) -> &BigRational {
        self.get(i, j)
            .as_rational()
            .expect("finite matrix entry")
    }

    /// Adds `c` to every finite entry.
    pub fn shifted(&self, c: &BigRational) -> Self {
        TropicalMatrix {
            n: self.n,
            entries: self.entries.iter().map(|v| v.add_rational(c)).collect(),
        }
    }

    /// Entrywise tropical sum `self ⊕ other`.
    pub fn oplus(&self, other: &Self, semiring: Semiring) -> Result<Self> {
        self.check_dim(other.n)?;
        Ok(TropicalMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.trop_add(b, semiring))
                .collect(),
        })
    }

    /// Entrywise `self ≤ other` in the extended order.
    pub fn le(&self, other: &Self) -> bool {
        self.n == other.n && self.entries.iter().zip(&other.entries).all(|(a, b)| a <= b)
    }

    /// Tropical product `self ⊗ other` in `semiring`.
    ///
    /// Entries of the left factor holding the *other* semiring's zero are
    /// read as this semiring's zero: a `+∞` in a strongly active matrix means
    /// "no arc", so in max-plus it behaves as `-∞`.
    pub fn mat_mul(&self, other: &Self, semiring: Semiring) -> Result<Self> {
        self.check_dim(other.n)?;
        let n = self.n;
        let zero = semiring.zero();
        let foreign = semiring.dual().zero();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = zero.clone();
                for k in 0..n {
                    let a = self.get(i, k);
                    if *a == foreign || *a == zero {
                        continue;
                    }
                    let prod = a.trop_mul(other.get(k, j))?;
                    acc = acc.trop_add(&prod, semiring);
                }
                out.push(acc);
            }
        }
        Ok(TropicalMatrix { n, entries: out })
    }

    /// Tropical matrix-vector product, with the same reading of the left
    /// factor's foreign infinities as [`Self::mat_mul`].
    pub fn mat_vec(&self, x: &[ExtScalar], semiring: Semiring) -> Result<Vec<ExtScalar>> {
        self.check_dim(x.len())?;
        let zero = semiring.zero();
        let foreign = semiring.dual().zero();
        (0..self.n)
            .map(|i| {
                let mut acc = zero.clone();
                for (a, xj) in self.row(i).iter().zip(x) {
                    if *a == foreign || *a == zero {
                        continue;
                    }
                    acc = acc.trop_add(&a.trop_mul(xj)?, semiring);
                }
                Ok(acc)
            })
            .collect()
    }

    /// `self^k` in `semiring`; `k = 0` gives the semiring identity.
    pub fn power(&self, k: u32, semiring: Semiring) -> Result<Self> {
        let mut acc = Self::identity_in(self.n, semiring);
        for _ in 0..k {
            acc = acc.mat_mul(self, semiring)?;
        }
        Ok(acc)
    }

    /// Max-plus transitive closure `A ⊕ A² ⊕ … ⊕ Aⁿ` by Floyd–Warshall
    /// relaxation. Diagonal entries come out positive exactly when a
    /// positive-weight cycle passes through that node. Entries equal to
    /// `+∞` are read as absent arcs.
    pub fn kleene_plus(&self) -> Self {
        let n = self.n;
        let mut s: Vec<ExtScalar> = self
            .entries
            .iter()
            .map(|v| if v.is_pos_inf() { ExtScalar::NegInf } else { v.clone() })
            .collect();
        for k in 0..n {
            for i in 0..n {
                let sik = match &s[i * n + k] {
                    ExtScalar::Finite(r) => r.clone(),
                    _ => continue,
                };
                for j in 0..n {
                    if let ExtScalar::Finite(skj) = &s[k * n + j] {
                        let cand = &sik + skj;
                        let cur = &mut s[i * n + j];
                        let better = match cur {
                            ExtScalar::Finite(c) => cand > *c,
                            _ => true,
                        };
                        if better {
                            *cur = ExtScalar::Finite(cand);
                        }
                    }
                }
            }
        }
        TropicalMatrix { n, entries: s }
    }

    /// Max-plus Kleene star `⊕_{k=0}^{n-1} Dᵏ` of a zero-diagonal matrix.
    ///
    /// A positive diagonal entry in the result is not an error; it is how
    /// an inconsistent (empty) zone shows up.
    pub fn kleene_star(&self) -> Result<Self> {
        if let Some(i) = (0..self.n).find(|&i| *self.get(i, i) != ExtScalar::zero()) {
            return Err(Error::NonZeroDiagonal { index: i });
        }
        // The diagonal is already 0, so the closure includes the identity.
        Ok(self.kleene_plus())
    }

    pub fn has_positive_diagonal(&self) -> bool {
        (0..self.n).any(|i| *self.get(i, i) > ExtScalar::zero())
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if self.n == found {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n,
                found,
            })
        }
    }
}

impl fmt::Display for TropicalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(|v| v.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.n {
            let line: Vec<String> = cells[i * self.n..(i + 1) * self.n]
                .iter()
                .map(|c| format!("{c:>width$}"))
                .collect();
            writeln!(f, "[{}]", line.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    n: usize,
    entries: Vec<Vec<ExtScalar>>,
}

impl Serialize for TropicalMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            n: self.n,
            entries: self.rows(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TropicalMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        if repr.entries.len() != repr.n {
            return Err(serde::de::Error::custom(format!(
                "declared n={} but found {} rows",
                repr.n,
                repr.entries.len()
            )));
        }
        TropicalMatrix::from_rows(repr.entries).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn neg() -> ExtScalar {
        ExtScalar::NegInf
    }

    #[test]
    fn identity_is_neutral() {
        let a = TropicalMatrix::from_ints(&[[4, 7, 2], [5, 2, 5], [6, 3, 1]]);
        let id = TropicalMatrix::identity(3);
        assert_eq!(id.mat_mul(&a, Semiring::MaxPlus).unwrap(), a);
        assert_eq!(a.mat_mul(&id, Semiring::MaxPlus).unwrap(), a);
        let id_min = TropicalMatrix::identity_in(3, Semiring::MinPlus);
        assert_eq!(id_min.mat_mul(&a, Semiring::MinPlus).unwrap(), a);
    }

    #[test]
    fn square_plus_matches_kleene_star_on_zone_example() {
        let d = TropicalMatrix::from_ints(&[[0, -2, 2], [-4, 0, 0], [-3, -1, 0]]);
        let d2 = d.mat_mul(&d, Semiring::MaxPlus).unwrap();
        let expected = TropicalMatrix::from_ints(&[[0, 1, 2], [-3, 0, 0], [-3, -1, 0]]);
        assert_eq!(d.oplus(&d2, Semiring::MaxPlus).unwrap(), expected);
        let star = d.kleene_star().unwrap();
        assert_eq!(star, expected);
        assert_eq!(star.kleene_star().unwrap(), star);
    }

    #[test]
    fn positive_cycle_shows_on_diagonal() {
        let d = TropicalMatrix::from_ints(&[[0, 1], [0, 0]]);
        let star = d.kleene_star().unwrap();
        assert_eq!(*star.get(0, 0), ExtScalar::int(1));
        assert!(star.has_positive_diagonal());
    }

    #[test]
    fn star_rejects_nonzero_diagonal() {
        let d = TropicalMatrix::from_ints(&[[0, 1], [0, 2]]);
        assert_eq!(d.kleene_star(), Err(Error::NonZeroDiagonal { index: 1 }));
    }

    #[test]
    fn star_with_unbounded_entries() {
        let mut d = TropicalMatrix::identity(3);
        d.set(0, 1, ExtScalar::int(2));
        d.set(1, 2, ExtScalar::int(3));
        let s = d.kleene_star().unwrap();
        assert_eq!(*s.get(0, 2), ExtScalar::int(5));
        assert_eq!(*s.get(2, 0), neg());
    }

    #[test]
    fn foreign_infinity_on_the_left_is_absent() {
        let mut t = TropicalMatrix::filled(2, ExtScalar::PosInf);
        t.set(0, 1, ExtScalar::int(3));
        t.set(1, 0, ExtScalar::int(5));
        let x = vec![ExtScalar::int(1), ExtScalar::int(2)];
        let max = t.mat_vec(&x, Semiring::MaxPlus).unwrap();
        let min = t.mat_vec(&x, Semiring::MinPlus).unwrap();
        assert_eq!(max, vec![ExtScalar::int(5), ExtScalar::int(6)]);
        assert_eq!(max, min);
    }

    #[test]
    fn dimension_checks() {
        let a = TropicalMatrix::identity(2);
        let b = TropicalMatrix::identity(3);
        assert!(matches!(
            a.mat_mul(&b, Semiring::MaxPlus),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(TropicalMatrix::from_rows(vec![vec![ExtScalar::zero()], vec![]]).is_err());
        assert_eq!(TropicalMatrix::from_rows(vec![]), Err(Error::NotSquare));
    }

    #[test]
    fn power_zero_is_identity() {
        let a = TropicalMatrix::from_ints(&[[1, 2], [3, 4]]);
        assert_eq!(
            a.power(0, Semiring::MaxPlus).unwrap(),
            TropicalMatrix::identity(2)
        );
        assert_eq!(
            a.power(2, Semiring::MaxPlus).unwrap(),
            TropicalMatrix::from_ints(&[[5, 6], [7, 8]])
        );
    }
}
