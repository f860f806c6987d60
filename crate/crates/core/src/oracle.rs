//! Verification machinery that shares no code path with the zone solver:
//! exact power iteration, exhaustive cycle enumeration and report
//! cross-checks.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::cycle::mean_of;
use crate::eigen::{verify_eigenvector, SolveReport, Status};
use crate::error::{Error, Result};
use crate::matrix::TropicalMatrix;
use crate::omega::{omega_matvec, Threshold};
use crate::scalar::ExtScalar;

/// Orbit of `x(k+1) = A ⊗_ω x(k)` from `x(0) = 0`, normalized so that the
/// first component is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRecord {
    /// `x(k) - x_1(k)` for each recorded step.
    pub states: Vec<Vec<ExtScalar>>,
    /// The subtracted first components `x_1(k)`.
    pub shifts: Vec<BigRational>,
    /// `(k1, k2)` with `k1 < k2` and equal normalized states.
    pub period: Option<(usize, usize)>,
}

impl OrbitRecord {
    /// Cycle time `(x_1(k2) - x_1(k1)) / (k2 - k1)` of the detected period.
    pub fn cycle_time(&self) -> Option<BigRational> {
        let (k1, k2) = self.period?;
        Some((&self.shifts[k2] - &self.shifts[k1]) / BigRational::from_integer(BigInt::from(k2 - k1)))
    }
}

/// Runs the orbit until a normalized state repeats or `max_steps` steps pass.
pub fn orbit(a: &TropicalMatrix, t: Threshold, max_steps: usize) -> Result<OrbitRecord> {
    a.require_finite()?;
    let n = a.n();
    let mut x = vec![ExtScalar::zero(); n];
    let mut seen: HashMap<Vec<ExtScalar>, usize> = HashMap::new();
    let mut record = OrbitRecord {
        states: Vec::new(),
        shifts: Vec::new(),
        period: None,
    };
    for k in 0..=max_steps {
        let shift = x[0].as_rational().expect("finite orbit").clone();
        let neg = -&shift;
        let state: Vec<ExtScalar> = x.iter().map(|v| v.add_rational(&neg)).collect();
        record.shifts.push(shift);
        if let Some(&k1) = seen.get(&state) {
            record.states.push(state);
            record.period = Some((k1, k));
            return Ok(record);
        }
        seen.insert(state.clone(), k);
        record.states.push(state);
        if k < max_steps {
            x = omega_matvec(a, &x, t)?;
        }
    }
    Ok(record)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PowerLambda {
    Lambda(ExtScalar),
    /// No repeat within the step budget; inconclusive, never a wrong value.
    Timeout,
}

impl PowerLambda {
    pub fn value(&self) -> Option<&ExtScalar> {
        match self {
            PowerLambda::Lambda(v) => Some(v),
            PowerLambda::Timeout => None,
        }
    }
}

pub const DEFAULT_POWER_STEPS: usize = 100_000;

/// Eigenvalue estimate from the exact cycle time of the power iteration.
pub fn power_lambda(a: &TropicalMatrix, t: Threshold, max_steps: usize) -> Result<PowerLambda> {
    let rec = orbit(a, t, max_steps)?;
    Ok(match rec.cycle_time() {
        Some(c) => PowerLambda::Lambda(ExtScalar::Finite(c)),
        None => PowerLambda::Timeout,
    })
}

pub const MAX_ENUMERATION_DIM: usize = 10;

/// Every simple cycle over the finite entries of `a`, each listed once with
/// its smallest node first, together with its mean.
pub fn enumerate_cycles(a: &TropicalMatrix) -> Result<Vec<(Vec<usize>, BigRational)>> {
    let n = a.n();
    if n > MAX_ENUMERATION_DIM {
        return Err(Error::DimensionTooLarge {
            n,
            max: MAX_ENUMERATION_DIM,
        });
    }
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(n);
    let mut on_path = vec![false; n];
    for start in 0..n {
        path.push(start);
        on_path[start] = true;
        extend(a, start, &mut path, &mut on_path, &mut out);
        on_path[start] = false;
        path.pop();
    }
    Ok(out)
}

fn extend(
    a: &TropicalMatrix,
    start: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<(Vec<usize>, BigRational)>,
) {
    let last = *path.last().expect("non-empty path");
    if a.get(last, start).is_finite() {
        let mean = mean_of(a, path).expect("finite arcs");
        out.push((path.clone(), mean));
    }
    for next in start + 1..a.n() {
        if !on_path[next] && a.get(last, next).is_finite() {
            on_path[next] = true;
            path.push(next);
            extend(a, start, path, on_path, out);
            path.pop();
            on_path[next] = false;
        }
    }
}

/// Sorted, deduplicated simple-cycle means.
pub fn enumerate_cycle_means(a: &TropicalMatrix) -> Result<Vec<ExtScalar>> {
    let mut means: Vec<BigRational> = enumerate_cycles(a)?.into_iter().map(|(_, m)| m).collect();
    means.sort();
    means.dedup();
    Ok(means.into_iter().map(ExtScalar::Finite).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Discrepancy {
    /// The report's eigenvalue differs from the power-iteration value.
    LambdaMismatch { reported: ExtScalar, oracle: ExtScalar },
    /// A column the report lists as an eigenvector fails substitution.
    ColumnNotEigenvector { column: usize },
    /// The reported certificate vector fails substitution.
    EigenvectorRejected,
    /// The oracle value lies outside an interval the report claims.
    BoundViolation {
        round: usize,
        lower: ExtScalar,
        upper: ExtScalar,
        oracle: ExtScalar,
    },
    /// A solved report without a certificate.
    MissingCertificate,
}

/// Re-checks a report against the oracle. An empty list means clean.
///
/// Round 0 in a [`Discrepancy::BoundViolation`] refers to the bounds of the
/// stabilized zone.
pub fn cross_check(
    report: &SolveReport,
    a: &TropicalMatrix,
    t: Threshold,
    max_steps: usize,
) -> Result<Vec<Discrepancy>> {
    let mut found = Vec::new();
    let oracle = power_lambda(a, t, max_steps)?;

    if let (Some(reported), PowerLambda::Lambda(o)) = (&report.lambda, &oracle) {
        if reported != o {
            found.push(Discrepancy::LambdaMismatch {
                reported: reported.clone(),
                oracle: o.clone(),
            });
        }
    }

    if let Some(lambda) = &report.lambda {
        for &k in &report.eigenvector_columns {
            if !verify_eigenvector(a, t, lambda, &report.refined_dbm.column(k))? {
                found.push(Discrepancy::ColumnNotEigenvector { column: k });
            }
        }
        if let Some(x) = &report.eigenvector {
            if !verify_eigenvector(a, t, lambda, x)? {
                found.push(Discrepancy::EigenvectorRejected);
            }
        }
    }
    if report.status == Status::Solved && report.eigenvector.is_none() {
        found.push(Discrepancy::MissingCertificate);
    }

    if let PowerLambda::Lambda(o) = &oracle {
        let intervals = std::iter::once((0, &report.bounds.lower, &report.bounds.upper)).chain(
            report
                .iterations
                .iter()
                .map(|r| (r.round, &r.lower, &r.upper)),
        );
        for (round, lower, upper) in intervals {
            if o < lower || o > upper {
                found.push(Discrepancy::BoundViolation {
                    round,
                    lower: lower.clone(),
                    upper: upper.clone(),
                    oracle: o.clone(),
                });
            }
        }
    }
    Ok(found)
}
