//! Maximum and minimum cycle means (Karp), with a witness cycle.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::matrix::TropicalMatrix;
use crate::scalar::ExtScalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CycleMode {
    Max,
    Min,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleMeanResult {
    /// The optimal mean, or `-∞` (max mode) / `+∞` (min mode) when the
    /// graph of finite entries has no cycle.
    pub value: ExtScalar,
    /// Nodes of a cycle achieving `value`, in traversal order. Empty when
    /// the graph is acyclic.
    pub witness: Vec<usize>,
}

/// Optimal cycle mean over the digraph whose arcs are the finite entries of
/// `a` (both infinities are treated as absent arcs).
pub fn cycle_mean(a: &TropicalMatrix, mode: CycleMode) -> CycleMeanResult {
    match mode {
        CycleMode::Max => max_cycle_mean(a),
        CycleMode::Min => {
            let r = max_cycle_mean(&a.negated());
            CycleMeanResult {
                value: match r.value {
                    ExtScalar::NegInf => ExtScalar::PosInf,
                    v => -v,
                },
                witness: r.witness,
            }
        }
    }
}

fn arc(a: &TropicalMatrix, i: usize, j: usize) -> Option<&BigRational> {
    a.get(i, j).as_rational()
}

fn max_cycle_mean(a: &TropicalMatrix) -> CycleMeanResult {
    let n = a.n();
    // walks[k][v]: heaviest k-arc walk ending at v from any start.
    let mut walks: Vec<Vec<Option<BigRational>>> = Vec::with_capacity(n + 1);
    walks.push(vec![Some(BigRational::from_integer(BigInt::from(0))); n]);
    for k in 1..=n {
        let prev = &walks[k - 1];
        let mut cur: Vec<Option<BigRational>> = vec![None; n];
        for u in 0..n {
            let Some(du) = &prev[u] else { continue };
            for (v, slot) in cur.iter_mut().enumerate() {
                if let Some(w) = arc(a, u, v) {
                    let cand = du + w;
                    if slot.as_ref().is_none_or(|c| cand > *c) {
                        *slot = Some(cand);
                    }
                }
            }
        }
        walks.push(cur);
    }

    let mut best: Option<BigRational> = None;
    for v in 0..n {
        let Some(dn) = &walks[n][v] else { continue };
        let worst = (0..n)
            .filter_map(|k| {
                walks[k][v]
                    .as_ref()
                    .map(|dk| (dn - dk) / BigRational::from_integer(BigInt::from(n - k)))
            })
            .min()
            .expect("walks[0] is finite everywhere");
        if best.as_ref().is_none_or(|b| worst > *b) {
            best = Some(worst);
        }
    }

    match best {
        None => CycleMeanResult {
            value: ExtScalar::NegInf,
            witness: Vec::new(),
        },
        Some(lambda) => {
            let witness = critical_cycle(a, &lambda);
            CycleMeanResult {
                value: ExtScalar::Finite(lambda),
                witness,
            }
        }
    }
}

/// A cycle of mean `lambda` in `a`, assuming `lambda` is the maximum cycle
/// mean. Works on the reduced matrix `a - lambda`, whose cycles all have
/// non-positive weight, and follows tight arcs back to a critical node.
fn critical_cycle(a: &TropicalMatrix, lambda: &BigRational) -> Vec<usize> {
    let n = a.n();
    let reduced = a.shifted(&-lambda);
    let closure = reduced.kleene_plus();
    let zero = ExtScalar::zero();
    let start = (0..n)
        .find(|&k| *closure.get(k, k) == zero)
        .expect("maximum cycle mean has a critical node");

    // Distance from j back to `start`, with the empty path at `start`.
    let back = |j: usize| -> Option<BigRational> {
        if j == start {
            Some(BigRational::from_integer(BigInt::from(0)))
        } else {
            closure.get(j, start).as_rational().cloned()
        }
    };

    let mut path = vec![start];
    let mut cur = start;
    loop {
        let target = back(cur).expect("node on a critical path reaches start");
        let tight = |j: usize| -> bool {
            match (reduced.get(cur, j).as_rational(), back(j)) {
                (Some(w), Some(b)) => w + b == target,
                _ => false,
            }
        };
        let next = if tight(start) {
            start
        } else {
            (0..n).find(|&j| tight(j)).expect("tight arc exists")
        };
        if next == start {
            return path;
        }
        if let Some(pos) = path.iter().position(|&v| v == next) {
            // A zero-weight cycle that avoids `start` is critical as well.
            return path.split_off(pos);
        }
        path.push(next);
        cur = next;
    }
}

/// Mean weight of the closed walk `cycle` in `a`, if all its arcs are finite.
pub fn mean_of(a: &TropicalMatrix, cycle: &[usize]) -> Option<BigRational> {
    if cycle.is_empty() {
        return None;
    }
    let mut total = BigRational::from_integer(BigInt::from(0));
    for (idx, &i) in cycle.iter().enumerate() {
        let j = cycle[(idx + 1) % cycle.len()];
        total += arc(a, i, j)?;
    }
    Some(total / BigRational::from_integer(BigInt::from(cycle.len())))
}
