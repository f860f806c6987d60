use serde::{Deserialize, Serialize};

use crate::graph::ArcSet;
use crate::matrix::TropicalMatrix;
use crate::scalar::ExtScalar;

use super::bounds::BoundMatrices;

/// Strongly active matrix `T` and possibly active matrix `Â`.
///
/// In both, `+∞` marks an absent entry: in `T` it means "not certified
/// active", in `Â` it means "certified inactive".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActiveStructure {
    pub strongly_active: TropicalMatrix,
    pub possibly_active: TropicalMatrix,
    pub act_graph: ArcSet,
    pub pos_graph: ArcSet,
}

impl ActiveStructure {
    fn from_matrices(strongly_active: TropicalMatrix, possibly_active: TropicalMatrix) -> Self {
        let act_graph = ArcSet::finite_entries(&strongly_active);
        let pos_graph = ArcSet::finite_entries(&possibly_active);
        ActiveStructure {
            strongly_active,
            possibly_active,
            act_graph,
            pos_graph,
        }
    }

    /// Every row of `T` holds a finite entry.
    pub fn all_rows_certified(&self) -> bool {
        let t = &self.strongly_active;
        (0..t.n()).all(|i| t.row(i).iter().any(ExtScalar::is_finite))
    }

    /// Row rule applied after each refinement round: a row of `T` with a
    /// certified entry replaces the same row of `Â`, and a row of `Â` with a
    /// single surviving entry is copied into `T`.
    pub fn promote_rows(&mut self) {
        let n = self.strongly_active.n();
        for i in 0..n {
            let t_row = self.strongly_active.row(i).to_vec();
            let a_row = self.possibly_active.row(i).to_vec();
            if t_row.iter().any(ExtScalar::is_finite) {
                for (j, v) in t_row.into_iter().enumerate() {
                    self.possibly_active.set(i, j, v);
                }
            } else if a_row.iter().filter(|v| v.is_finite()).count() == 1 {
                for (j, v) in a_row.into_iter().enumerate() {
                    self.strongly_active.set(i, j, v);
                }
            }
        }
        self.act_graph = ArcSet::finite_entries(&self.strongly_active);
        self.pos_graph = ArcSet::finite_entries(&self.possibly_active);
    }
}

/// Classifies the entries of `a` using the bound matrices and the scalar
/// bounds `bounds.lower`, `bounds.upper`.
pub fn classify_entries(a: &TropicalMatrix, bounds: &BoundMatrices) -> ActiveStructure {
    classify_with(a, bounds, &bounds.lower, &bounds.upper)
}

/// As [`classify_entries`], with externally supplied eigenvalue bounds
/// `lower <= λ_p <= upper` (e.g. bounds already tightened by refinement).
pub fn classify_with(
    a: &TropicalMatrix,
    bounds: &BoundMatrices,
    lower: &ExtScalar,
    upper: &ExtScalar,
) -> ActiveStructure {
    let n = a.n();
    let BoundMatrices {
        lower_matrix: l,
        upper_matrix: u,
        p_matrix: p,
        q_matrix: q,
        ..
    } = bounds;
    let t = TropicalMatrix::from_fn(n, |i, j| {
        let aij = a.get(i, j);
        if aij == l.get(i, j) && aij == u.get(i, j) {
            aij.clone()
        } else {
            ExtScalar::PosInf
        }
    });
    let hat = TropicalMatrix::from_fn(n, |i, j| {
        let aij = a.get(i, j);
        let inactive =
            aij < l.get(i, j) || aij > u.get(i, j) || p.get(i, j) > upper || q.get(i, j) < lower;
        if inactive {
            ExtScalar::PosInf
        } else {
            aij.clone()
        }
    });
    ActiveStructure::from_matrices(t, hat)
}
