//! The maxmin-ω eigensolver.
//!
//! The pipeline is:
//!
//! 1. [`stabilize`]: iterate the image approximation from `ℝⁿ` to the
//!    fixed point `D̄_p`, a zone containing every eigenvector.
//! 2. [`compute_bounds`]: the matrices `L, U, P, Q` and the interval
//!    `l <= λ_p <= u`.
//! 3. [`classify_entries`]: certified active entries (`T`) and the entries
//!    not yet ruled out (`Â`).
//! 4. [`refine`]: bisection on `[l, u]` driven by the certified entries.
//!
//! [`solve`] runs all four and certifies the answer by substitution.

mod active;
mod bounds;
mod refine;
mod stabilize;

pub use active::{classify_entries, classify_with, ActiveStructure};
pub use bounds::{compute_bounds, BoundMatrices};
pub use refine::{refine, Refinement};
pub use stabilize::{next_dbm, stabilize, stabilize_seeded, Stabilization};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::cycle::{cycle_mean, CycleMode};
use crate::error::Result;
use crate::matrix::TropicalMatrix;
use crate::omega::{omega_matvec, Threshold};
use crate::scalar::ExtScalar;
use crate::zone::Dbm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// `λ_p` found and certified by an eigenvector that passed substitution.
    Solved,
    /// Refinement stopped on a candidate `λ_p = m`, but no column of the
    /// refined DBM is an eigenvector for it.
    Conjectured,
    /// The round budget ran out with `l < u`.
    Unresolved,
    /// Both split zones came out empty, or the bounds crossed.
    Failed,
}

/// Which halves of the split survived a refinement round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// Both `λ_p >= m` and `λ_p <= m` remain possible.
    Both,
    /// Only `λ_p < m` remains.
    Below,
    /// Only `λ_p > m` remains.
    Above,
    /// Neither half survived.
    Neither,
}

/// One bisection round: the split point and the interval afterwards.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub round: usize,
    pub midpoint: ExtScalar,
    pub branch: Branch,
    pub lower: ExtScalar,
    pub upper: ExtScalar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveConfig {
    /// Bisection rounds before giving up with [`Status::Unresolved`].
    pub max_rounds: usize,
    /// Image-approximation steps allowed per stabilization.
    pub max_iters: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            max_rounds: 64,
            max_iters: 10_000,
        }
    }
}

/// Everything the solver computed for one `(A, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub n: usize,
    pub p: usize,
    pub status: Status,
    /// `λ_p` when solved or conjectured.
    pub lambda: Option<ExtScalar>,
    /// Fixed point `D̄_p` of the image approximation.
    pub stabilized_dbm: Dbm,
    pub stabilization_steps: usize,
    /// Bounds and classification computed from `D̄_p`.
    pub bounds: BoundMatrices,
    pub active: ActiveStructure,
    /// The zone after refinement (equal to `D̄_p` when no round ran).
    pub refined_dbm: Dbm,
    pub refined_bounds: BoundMatrices,
    pub refined_active: ActiveStructure,
    /// Columns of `refined_dbm` that are eigenvectors for `lambda`.
    pub eigenvector_columns: Vec<usize>,
    /// A certified eigenvector, when one is known.
    pub eigenvector: Option<Vec<ExtScalar>>,
    pub iterations: Vec<Round>,
}

impl SolveReport {
    pub fn threshold(&self) -> Threshold {
        Threshold::new(self.p, self.n).expect("report holds a valid threshold")
    }
}

/// Exact test of `A ⊗_ω x = λ + x`.
pub fn verify_eigenvector(
    a: &TropicalMatrix,
    t: Threshold,
    lambda: &ExtScalar,
    x: &[ExtScalar],
) -> Result<bool> {
    let Some(lambda) = lambda.as_rational() else {
        return Ok(false);
    };
    if x.iter().any(|v| !v.is_finite()) {
        return Ok(false);
    }
    let image = omega_matvec(a, x, t)?;
    Ok(image.iter().zip(x).all(|(y, xi)| *y == xi.add_rational(lambda)))
}

/// `(A ⊗_ω x)_i - λ - x_i` for every row.
pub fn residuals(
    a: &TropicalMatrix,
    t: Threshold,
    lambda: &BigRational,
    x: &[ExtScalar],
) -> Result<Vec<ExtScalar>> {
    let image = omega_matvec(a, x, t)?;
    image
        .iter()
        .zip(x)
        .map(|(y, xi)| y.trop_mul(&-xi.add_rational(lambda)))
        .collect()
}

pub(crate) fn verified_columns(
    a: &TropicalMatrix,
    t: Threshold,
    lambda: &ExtScalar,
    dbm: &Dbm,
) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for k in 0..dbm.n() {
        if verify_eigenvector(a, t, lambda, &dbm.column(k))? {
            out.push(k);
        }
    }
    Ok(out)
}

/// Classical eigenvector for `p = n` (max-plus) or `p = 1` (min-plus): a
/// column of the closure of `A - λ` at a node of a critical cycle.
pub fn classical_eigenpair(a: &TropicalMatrix, t: Threshold) -> Option<(ExtScalar, Vec<ExtScalar>)> {
    if t.is_max_plus() {
        max_plus_eigenpair(a)
    } else if t.is_min_plus() {
        let (lambda, x) = max_plus_eigenpair(&a.negated())?;
        Some((-lambda, x.into_iter().map(|v| -v).collect()))
    } else {
        None
    }
}

fn max_plus_eigenpair(a: &TropicalMatrix) -> Option<(ExtScalar, Vec<ExtScalar>)> {
    let cm = cycle_mean(a, CycleMode::Max);
    let lambda = cm.value.as_rational()?.clone();
    let node = *cm.witness.first()?;
    let closure = a.shifted(&-&lambda).kleene_plus();
    let x = closure.column(node);
    x.iter()
        .all(ExtScalar::is_finite)
        .then_some((ExtScalar::Finite(lambda), x))
}

/// Runs the full pipeline on an all-finite square `a` with threshold `p/n`.
pub fn solve(a: &TropicalMatrix, p: usize, config: &SolveConfig) -> Result<SolveReport> {
    let n = a.n();
    let t = Threshold::new(p, n)?;
    a.require_finite()?;

    let stabilization = stabilize(a, t, config.max_iters)?;
    let stabilized = stabilization.fixed_point().clone();
    let bounds = compute_bounds(a, &stabilized, t)?;
    let active = classify_entries(a, &bounds);

    let mut report = SolveReport {
        n,
        p,
        status: Status::Unresolved,
        lambda: None,
        stabilized_dbm: stabilized.clone(),
        stabilization_steps: stabilization.steps(),
        bounds: bounds.clone(),
        active: active.clone(),
        refined_dbm: stabilized.clone(),
        refined_bounds: bounds.clone(),
        refined_active: active.clone(),
        eigenvector_columns: Vec::new(),
        eigenvector: None,
        iterations: Vec::new(),
    };

    if t.is_max_plus() || t.is_min_plus() {
        if let Some((lambda, x)) = classical_eigenpair(a, t) {
            if verify_eigenvector(a, t, &lambda, &x)? {
                report.eigenvector_columns = verified_columns(a, t, &lambda, &stabilized)?;
                report.status = Status::Solved;
                report.lambda = Some(lambda);
                report.eigenvector = Some(x);
                return Ok(report);
            }
        }
        report.status = Status::Failed;
        return Ok(report);
    }

    let refined = refine(a, t, &stabilized, &active, &bounds, config.max_rounds, config.max_iters)?;
    report.status = refined.status;
    report.lambda = refined.lambda;
    report.eigenvector = refined
        .eigenvector_columns
        .first()
        .map(|&k| refined.refined_dbm.column(k));
    report.refined_dbm = refined.refined_dbm;
    report.refined_bounds = refined.bounds;
    report.refined_active = refined.active;
    report.eigenvector_columns = refined.eigenvector_columns;
    report.iterations = refined.rounds;
    Ok(report)
}
