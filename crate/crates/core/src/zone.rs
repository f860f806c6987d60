//! Closed zones `{x : x_i - x_j >= D(i,j)}` and their difference-bound
//! matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cycle::{cycle_mean, CycleMode};
use crate::error::{Error, Result};
use crate::matrix::TropicalMatrix;
use crate::scalar::{ExtScalar, Semiring};

/// A difference-bound matrix with zero diagonal and entries in `ℚ ∪ {-∞}`.
///
/// Only weak inequalities are represented. `canonical` is set only on the
/// output of [`Dbm::canonicalize`] (or on matrices verified to be their own
/// Kleene star), in which case every bound is tight.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Dbm {
    #[serde(flatten)]
    matrix: TropicalMatrix,
    canonical: bool,
}

impl Dbm {
    pub fn new(matrix: TropicalMatrix) -> Result<Self> {
        let n = matrix.n();
        for i in 0..n {
            if *matrix.get(i, i) != ExtScalar::zero() {
                return Err(Error::NonZeroDiagonal { index: i });
            }
        }
        if let Some(k) = matrix.entries().iter().position(ExtScalar::is_pos_inf) {
            return Err(Error::NonFinite {
                row: k / n,
                col: k % n,
            });
        }
        Ok(Dbm {
            matrix,
            canonical: false,
        })
    }

    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Dbm::new(TropicalMatrix::from_ints(rows))
    }

    /// The whole space `ℝⁿ`, represented by the max-plus identity.
    pub fn full(n: usize) -> Self {
        Dbm {
            matrix: TropicalMatrix::identity(n),
            canonical: true,
        }
    }

    /// The line `{x + c·1}` through a finite point: `D(i,j) = x_i - x_j`.
    pub fn of_point(x: &[ExtScalar]) -> Result<Self> {
        if let Some(k) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: k, col: 0 });
        }
        let m = TropicalMatrix::from_fn(x.len(), |i, j| {
            x[i].trop_mul(&-&x[j]).expect("finite")
        });
        Ok(Dbm {
            matrix: m,
            canonical: true,
        })
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn matrix(&self) -> &TropicalMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> TropicalMatrix {
        self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> &ExtScalar {
        self.matrix.get(i, j)
    }

    pub fn column(&self, k: usize) -> Vec<ExtScalar> {
        self.matrix.column(k)
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// Raises bound `(i, j)` to at least `bound`. Clears the canonical flag
    /// when the matrix changes.
    pub fn tighten(&mut self, i: usize, j: usize, bound: ExtScalar) {
        if bound > *self.matrix.get(i, j) {
            self.matrix.set(i, j, bound);
            self.canonical = false;
        }
    }

    /// The canonical (Kleene star) form, or `None` when the zone is empty.
    pub fn canonicalize(&self) -> Option<Dbm> {
        if self.canonical {
            return Some(self.clone());
        }
        let star = self.matrix.kleene_star().expect("DBM has zero diagonal");
        if star.has_positive_diagonal() {
            None
        } else {
            Some(Dbm {
                matrix: star,
                canonical: true,
            })
        }
    }

    pub fn is_empty(&self) -> bool {
        self.canonicalize().is_none()
    }

    /// Strongly definite: maximum cycle mean exactly `0`. Equivalent to
    /// non-emptiness for a zero-diagonal matrix.
    pub fn is_strongly_definite(&self) -> bool {
        cycle_mean(&self.matrix, CycleMode::Max).value == ExtScalar::zero()
    }

    /// Intersection: entrywise max of the bounds. Not canonicalized.
    pub fn meet(&self, other: &Dbm) -> Result<Dbm> {
        let m = self.matrix.oplus(&other.matrix, Semiring::MaxPlus)?;
        let canonical = (self.canonical && m == self.matrix) || (other.canonical && m == other.matrix);
        Ok(Dbm {
            matrix: m,
            canonical,
        })
    }

    /// `x_i - x_j >= D(i,j)` for all `i, j`.
    pub fn contains(&self, x: &[ExtScalar]) -> Result<bool> {
        let n = self.n();
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x.len(),
            });
        }
        if let Some(k) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: k, col: 0 });
        }
        for i in 0..n {
            for j in 0..n {
                let diff = x[i].trop_mul(&-&x[j]).expect("finite");
                if diff < *self.matrix.get(i, j) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Deterministic points of the zone, built as max-plus or min-plus
    /// combinations of columns of the canonical DBM with random finite
    /// coefficients.
    ///
    /// Columns of a canonical DBM may hold `-∞`; those columns are skipped
    /// (a zone with no finite column yields an empty list, since then no
    /// point can be built this way without an LP).
    pub fn sample(&self, count: usize, seed: u64) -> Result<Vec<Vec<ExtScalar>>> {
        let canon = self.canonicalize().ok_or(Error::EmptyZone)?;
        if count == 0 {
            return Ok(Vec::new());
        }
        let n = canon.n();
        let finite_cols: Vec<Vec<ExtScalar>> = (0..n)
            .map(|k| canon.column(k))
            .filter(|c| c.iter().all(ExtScalar::is_finite))
            .collect();
        if finite_cols.is_empty() {
            return Ok(Vec::new());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let terms = rng.gen_range(1..=finite_cols.len());
            let semiring = if rng.gen_bool(0.5) {
                Semiring::MaxPlus
            } else {
                Semiring::MinPlus
            };
            let mut acc: Option<Vec<ExtScalar>> = None;
            for _ in 0..terms {
                let col = &finite_cols[rng.gen_range(0..finite_cols.len())];
                let coef = BigRational::new(
                    BigInt::from(rng.gen_range(-40i64..=40)),
                    BigInt::from(rng.gen_range(1i64..=4)),
                );
                let scaled: Vec<ExtScalar> = col.iter().map(|v| v.add_rational(&coef)).collect();
                acc = Some(match acc {
                    None => scaled,
                    Some(prev) => prev
                        .iter()
                        .zip(&scaled)
                        .map(|(a, b)| a.trop_add(b, semiring))
                        .collect(),
                });
            }
            out.push(acc.expect("at least one term"));
        }
        Ok(out)
    }
}

#[derive(Deserialize)]
struct DbmRepr {
    #[serde(flatten)]
    matrix: TropicalMatrix,
    #[serde(default)]
    canonical: bool,
}

impl<'de> Deserialize<'de> for Dbm {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = DbmRepr::deserialize(deserializer)?;
        let mut dbm = Dbm::new(repr.matrix).map_err(serde::de::Error::custom)?;
        if repr.canonical {
            // Trust but verify: the flag must describe the matrix.
            let star = dbm.matrix.kleene_star().map_err(serde::de::Error::custom)?;
            if star != dbm.matrix {
                return Err(serde::de::Error::custom("DBM marked canonical is not closed"));
            }
            dbm.canonical = true;
        }
        Ok(dbm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<ExtScalar> {
        v.iter().map(|&x| ExtScalar::int(x)).collect()
    }

    #[test]
    fn canonicalize_example() {
        let d = Dbm::from_ints(&[[0, -2, 2], [-4, 0, 0], [-3, -1, 0]]).unwrap();
        let c = d.canonicalize().unwrap();
        assert!(c.is_canonical());
        assert_eq!(
            c.matrix(),
            &TropicalMatrix::from_ints(&[[0, 1, 2], [-3, 0, 0], [-3, -1, 0]])
        );
        assert_eq!(c.canonicalize().unwrap(), c);
    }

    #[test]
    fn full_space() {
        let f = Dbm::full(3);
        assert_eq!(f.canonicalize().unwrap(), f);
        assert!(f.contains(&ints(&[100, -7, 3])).unwrap());
        assert!(f.is_strongly_definite());
    }

    #[test]
    fn contradictory_constraints_are_empty() {
        // x1 - x2 >= 1 and x2 - x1 >= 0.
        let d = Dbm::from_ints(&[[0, 1], [0, 0]]).unwrap();
        assert!(d.canonicalize().is_none());
        assert!(!d.is_strongly_definite());
    }

    #[test]
    fn membership_example() {
        let d = Dbm::from_ints(&[[0, -2, 2], [-4, 0, 0], [-3, -1, 0]]).unwrap();
        // x1 - x3 = 0 violates x1 - x3 >= 2.
        assert!(!d.contains(&ints(&[0, 1, 0])).unwrap());
        assert!(d.contains(&ints(&[2, 1, 0])).unwrap());
        assert!(d.contains(&ints(&[12, 11, 10])).unwrap());
        assert!(d.contains(&ints(&[0, 1])).is_err());
    }

    #[test]
    fn meet_is_idempotent_and_full_is_neutral() {
        let d = Dbm::from_ints(&[[0, -2, 2], [-4, 0, 0], [-3, -1, 0]]).unwrap();
        assert_eq!(d.meet(&d).unwrap(), d);
        assert_eq!(d.meet(&Dbm::full(3)).unwrap().matrix(), d.matrix());
        assert!(d.meet(&Dbm::full(2)).is_err());
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(Dbm::from_ints(&[[1, 0], [0, 0]]).is_err());
        let mut m = TropicalMatrix::identity(2);
        m.set(0, 1, ExtScalar::PosInf);
        assert!(Dbm::new(m).is_err());
    }

    #[test]
    fn samples_are_members() {
        let d = Dbm::from_ints(&[[0, -2, 2], [-4, 0, 0], [-3, -1, 0]]).unwrap();
        assert!(d.sample(0, 1).unwrap().is_empty());
        let pts = d.sample(50, 7).unwrap();
        assert_eq!(pts.len(), 50);
        for x in &pts {
            assert!(d.contains(x).unwrap());
        }
        assert_eq!(d.sample(50, 7).unwrap(), pts);
    }

    #[test]
    fn sampling_an_empty_zone_fails() {
        let d = Dbm::from_ints(&[[0, 1], [0, 0]]).unwrap();
        assert_eq!(d.sample(3, 0), Err(Error::EmptyZone));
    }

    #[test]
    fn point_dbm() {
        let x = ints(&[0, 1, 4]);
        let d = Dbm::of_point(&x).unwrap();
        assert!(d.contains(&x).unwrap());
        assert!(d.contains(&ints(&[5, 6, 9])).unwrap());
        assert!(!d.contains(&ints(&[0, 1, 5])).unwrap());
        assert_eq!(d.matrix().kleene_star().unwrap(), *d.matrix());
    }

    #[test]
    fn json_round_trip() {
        let d = Dbm::full(2).meet(&Dbm::from_ints(&[[0, 3], [-5, 0]]).unwrap()).unwrap();
        let c = d.canonicalize().unwrap();
        let json = serde_json::to_string(&c).unwrap();
        let back: Dbm = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
        let json = serde_json::to_string(&Dbm::full(2)).unwrap();
        assert_eq!(json, r#"{"n":2,"entries":[[0,"-inf"],["-inf",0]],"canonical":true}"#);
    }
}
