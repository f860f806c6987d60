use num_rational::BigRational;

use crate::cycle::{cycle_mean, CycleMode};
use crate::error::Result;
use crate::matrix::TropicalMatrix;
use crate::omega::Threshold;
use crate::scalar::ExtScalar;
use crate::zone::Dbm;

use super::active::{classify_with, ActiveStructure};
use super::bounds::{compute_bounds, BoundMatrices};
use super::stabilize::stabilize_seeded;
use super::{verified_columns, Branch, Round, Status};

/// Outcome of the bisection refinement.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub status: Status,
    pub lambda: Option<ExtScalar>,
    pub refined_dbm: Dbm,
    pub bounds: BoundMatrices,
    pub active: ActiveStructure,
    pub rounds: Vec<Round>,
    pub eigenvector_columns: Vec<usize>,
}

/// Bisection refinement of a stabilized over-approximation.
///
/// Each round splits the eigenvalue interval `[l, u]` at `m = (l+u)/2`,
/// adds `A(i,j) + x_j >= m + x_i` (zone `B`) or `<=` (zone `C`) for every
/// certified active entry, and over-approximates each zone's intersection
/// with the eigenspace. An empty side decides which half holds `λ_p`; when
/// both survive the procedure stops with `λ_p = m` as a candidate. After
/// every one-sided round the bounds are tightened with the cycle means of
/// `Â`. If that pins `l = u`, one more round at `m = l` produces the final
/// zone, so the returned DBM always comes from a both-nonempty round.
///
/// The candidate is upgraded to [`Status::Solved`] only if a column of the
/// refined DBM passes exact substitution.
pub fn refine(
    a: &TropicalMatrix,
    t: Threshold,
    stabilized: &Dbm,
    active: &ActiveStructure,
    bounds: &BoundMatrices,
    max_rounds: usize,
    max_iters: usize,
) -> Result<Refinement> {
    let n = a.n();
    let mut dbm = stabilized.clone();
    let mut bounds = bounds.clone();
    let mut active = active.clone();
    let mut rounds = Vec::new();

    let fail = |dbm: Dbm, bounds, active, rounds, status| Refinement {
        status,
        lambda: None,
        refined_dbm: dbm,
        bounds,
        active,
        rounds,
        eigenvector_columns: Vec::new(),
    };

    let (mut lower, mut upper) = match (bounds.lower.as_rational(), bounds.upper.as_rational()) {
        (Some(l), Some(u)) if l <= u => (l.clone(), u.clone()),
        _ => return Ok(fail(dbm, bounds, active, rounds, Status::Failed)),
    };

    for round in 1..=max_rounds {
        let m = ExtScalar::midpoint(&lower, &upper);
        let m_ext = ExtScalar::Finite(m.clone());

        let mut above = dbm.clone();
        let mut below = dbm.clone();
        let t_mat = &active.strongly_active;
        for i in 0..n {
            for j in 0..n {
                if let Some(tij) = t_mat.get(i, j).as_rational() {
                    // A(i,j) + x_j >= m + x_i  <=>  x_j - x_i >= m - A(i,j)
                    above.tighten(j, i, ExtScalar::Finite(&m - tij));
                    // A(i,j) + x_j <= m + x_i  <=>  x_i - x_j >= A(i,j) - m
                    below.tighten(i, j, ExtScalar::Finite(tij - &m));
                }
            }
        }
        let above = stabilize_seeded(a, t, &above, max_iters)?;
        let below = stabilize_seeded(a, t, &below, max_iters)?;

        let pinned = lower == upper;
        let (branch, next) = match (above, below) {
            (Some(x), Some(y)) => (Branch::Both, x.meet(&y)?.canonicalize()),
            (None, Some(y)) => (Branch::Below, Some(y)),
            (Some(x), None) => (Branch::Above, Some(x)),
            (None, None) => (Branch::Neither, None),
        };
        let Some(next) = next else {
            rounds.push(Round {
                round,
                midpoint: m_ext.clone(),
                branch,
                lower: ExtScalar::Finite(lower),
                upper: ExtScalar::Finite(upper),
            });
            return Ok(fail(dbm, bounds, active, rounds, Status::Failed));
        };
        match branch {
            Branch::Below => upper = m.clone(),
            Branch::Above => lower = m.clone(),
            _ => {}
        }
        dbm = next;
        bounds = compute_bounds(a, &dbm, t)?;
        tighten(&mut lower, &mut upper, &bounds);
        active = classify_with(
            a,
            &bounds,
            &ExtScalar::Finite(lower.clone()),
            &ExtScalar::Finite(upper.clone()),
        );
        active.promote_rows();

        if branch == Branch::Both {
            rounds.push(Round {
                round,
                midpoint: m_ext.clone(),
                branch,
                lower: m_ext.clone(),
                upper: m_ext.clone(),
            });
            let columns = verified_columns(a, t, &m_ext, &dbm)?;
            let status = if columns.is_empty() {
                Status::Conjectured
            } else {
                Status::Solved
            };
            return Ok(Refinement {
                status,
                lambda: Some(m_ext),
                refined_dbm: dbm,
                bounds,
                active,
                rounds,
                eigenvector_columns: columns,
            });
        }

        let hat = &active.possibly_active;
        if let ExtScalar::Finite(c) = cycle_mean(hat, CycleMode::Min).value {
            lower = lower.max(c);
        }
        if let ExtScalar::Finite(c) = cycle_mean(hat, CycleMode::Max).value {
            upper = upper.min(c);
        }
        rounds.push(Round {
            round,
            midpoint: m_ext,
            branch,
            lower: ExtScalar::Finite(lower.clone()),
            upper: ExtScalar::Finite(upper.clone()),
        });
        // A one-sided split of an already pinned interval, or crossed bounds,
        // means the over-approximation lost the eigenspace.
        if pinned || lower > upper {
            return Ok(fail(dbm, bounds, active, rounds, Status::Failed));
        }
    }
    Ok(fail(dbm, bounds, active, rounds, Status::Unresolved))
}

fn tighten(lower: &mut BigRational, upper: &mut BigRational, bounds: &BoundMatrices) {
    if let Some(l) = bounds.lower.as_rational() {
        if l > lower {
            *lower = l.clone();
        }
    }
    if let Some(u) = bounds.upper.as_rational() {
        if u < upper {
            *upper = u.clone();
        }
    }
}
