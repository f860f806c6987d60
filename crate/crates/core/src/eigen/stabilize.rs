use crate::error::{Error, Result};
use crate::matrix::TropicalMatrix;
use crate::omega::{finite_row, min_max_value, Threshold};
use crate::scalar::{ExtScalar, Semiring};
use crate::zone::Dbm;

/// One image-approximation step: `D'(i,j) = MinMaxValue(D, A_i, A_j | p, n+1-p)`.
///
/// `a` must be all-finite. The result has zero diagonal whenever `d` does.
pub fn next_dbm(d: &Dbm, a: &TropicalMatrix, t: Threshold) -> Result<Dbm> {
    a.require_finite()?;
    let n = a.n();
    if d.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: d.n(),
        });
    }
    let rows: Vec<_> = (0..n).map(|i| finite_row(a, i)).collect();
    let mut out = TropicalMatrix::filled(n, ExtScalar::zero());
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.set(i, j, min_max_value(d.matrix(), &rows[i], &rows[j], t)?);
            }
        }
    }
    Dbm::new(out)
}

/// The sequence `D⁰ = Iₙ, D¹, …` up to its fixed point `D̄`.
#[derive(Debug, Clone)]
pub struct Stabilization {
    /// `D⁰ … Dᵏ` with `Dᵏ = D̄`; the repeated final iterate is not stored.
    pub sequence: Vec<Dbm>,
}

impl Stabilization {
    pub fn fixed_point(&self) -> &Dbm {
        self.sequence.last().expect("sequence starts at the identity")
    }

    /// Number of image steps until the repeat was observed.
    pub fn steps(&self) -> usize {
        self.sequence.len()
    }
}

/// Iterates [`next_dbm`] from the full space until two consecutive iterates
/// agree. The iterates are entrywise nondecreasing and, for rational `a`,
/// reach a fixed point; `max_iters` is a safety net.
pub fn stabilize(a: &TropicalMatrix, t: Threshold, max_iters: usize) -> Result<Stabilization> {
    let mut sequence = vec![Dbm::full(a.n())];
    for _ in 0..max_iters {
        let cur = sequence.last().expect("non-empty");
        let next = next_dbm(cur, a, t)?;
        if &next == cur {
            return Ok(Stabilization { sequence });
        }
        sequence.push(next);
    }
    Err(Error::IterationBudgetExceeded {
        iterations: max_iters,
    })
}

/// Over-approximates `zone(seed) ∩ E_p(A)`.
///
/// Starts from the canonical form of `seed` and repeatedly intersects the
/// current zone with its image approximation, closing after each step.
/// Returns `None` as soon as a closure has a positive diagonal entry (the
/// intersection is then provably empty).
pub fn stabilize_seeded(
    a: &TropicalMatrix,
    t: Threshold,
    seed: &Dbm,
    max_iters: usize,
) -> Result<Option<Dbm>> {
    let Some(mut cur) = seed.canonicalize() else {
        return Ok(None);
    };
    for _ in 0..max_iters {
        let image = next_dbm(&cur, a, t)?;
        let joined = cur.matrix().oplus(image.matrix(), Semiring::MaxPlus)?;
        let Some(next) = Dbm::new(joined)?.canonicalize() else {
            return Ok(None);
        };
        if next == cur {
            return Ok(Some(cur));
        }
        cur = next;
    }
    Err(Error::IterationBudgetExceeded {
        iterations: max_iters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> TropicalMatrix {
        TropicalMatrix::from_ints(&[[4, 7, 10, 2], [9, 10, 2, 0], [10, 9, 7, 2], [9, 10, 7, 1]])
    }

    #[test]
    fn first_step_from_identity() {
        let t = Threshold::new(2, 4).unwrap();
        let d1 = next_dbm(&Dbm::full(4), &example(), t).unwrap();
        let expected =
            TropicalMatrix::from_ints(&[[0, -5, -6, -5], [-8, 0, -5, -5], [-3, -1, 0, -1], [-3, 0, -1, 0]]);
        assert_eq!(d1.matrix(), &expected);
        for p in 1..=4 {
            let tp = Threshold::new(p, 4).unwrap();
            assert_eq!(next_dbm(&Dbm::full(4), &example(), tp).unwrap().matrix(), &expected);
        }
    }

    #[test]
    fn fixed_point_is_reproduced() {
        let t = Threshold::new(2, 4).unwrap();
        let s = stabilize(&example(), t, 100).unwrap();
        assert_eq!(s.steps(), 5);
        let bar = s.fixed_point();
        assert_eq!(next_dbm(bar, &example(), t).unwrap(), *bar);
    }

    #[test]
    fn budget_is_enforced() {
        let t = Threshold::new(2, 4).unwrap();
        assert_eq!(
            stabilize(&example(), t, 2).unwrap_err(),
            Error::IterationBudgetExceeded { iterations: 2 }
        );
    }

    #[test]
    fn seeding_with_the_fixed_point_keeps_it() {
        let t = Threshold::new(2, 4).unwrap();
        let s = stabilize(&example(), t, 100).unwrap();
        let canon = s.fixed_point().canonicalize().unwrap();
        let seeded = stabilize_seeded(&example(), t, &canon, 100).unwrap().unwrap();
        assert_eq!(seeded, canon);
    }

    #[test]
    fn empty_seed_is_reported() {
        let t = Threshold::new(2, 4).unwrap();
        let mut seed = Dbm::full(4);
        seed.tighten(0, 1, ExtScalar::int(1));
        seed.tighten(1, 0, ExtScalar::int(0));
        assert_eq!(stabilize_seeded(&example(), t, &seed, 100).unwrap(), None);
    }
}
