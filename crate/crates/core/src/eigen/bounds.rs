use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matrix::TropicalMatrix;
use crate::omega::{omega_matvec, Threshold};
use crate::scalar::ExtScalar;
use crate::zone::Dbm;

/// Bound matrices derived from a zone over-approximating `E_p(A)`.
///
/// For every `x` in the zone, `L(i,j) <= (A ⊗_ω x)_i - x_j <= U(i,j)`.
/// If `(i,j)` is active for an eigenvector then `P(i,j) <= λ_p <= Q(i,j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundMatrices {
    /// `L = A ⊗_ω D̄`.
    pub lower_matrix: TropicalMatrix,
    /// `U = A ⊗_ω (-D̄)ᵀ`.
    pub upper_matrix: TropicalMatrix,
    /// `P = A + D̄ᵀ`.
    pub p_matrix: TropicalMatrix,
    /// `Q = A - D̄`.
    pub q_matrix: TropicalMatrix,
    /// `l = max_i L(i,i)`.
    pub lower: ExtScalar,
    /// `u = min_i U(i,i)`.
    pub upper: ExtScalar,
}

pub fn compute_bounds(a: &TropicalMatrix, d: &Dbm, t: Threshold) -> Result<BoundMatrices> {
    a.require_finite()?;
    let n = a.n();
    let dm = d.matrix();
    let neg = dm.negated();

    let mut lower_matrix = TropicalMatrix::filled(n, ExtScalar::zero());
    let mut upper_matrix = TropicalMatrix::filled(n, ExtScalar::zero());
    for j in 0..n {
        let lcol = omega_matvec(a, &dm.column(j), t)?;
        let ucol = omega_matvec(a, neg.row(j), t)?;
        for i in 0..n {
            lower_matrix.set(i, j, lcol[i].clone());
            upper_matrix.set(i, j, ucol[i].clone());
        }
    }
    let p_matrix = TropicalMatrix::from_fn(n, |i, j| {
        a.get(i, j).trop_mul(dm.get(j, i)).expect("finite A")
    });
    let q_matrix = TropicalMatrix::from_fn(n, |i, j| {
        a.get(i, j).trop_mul(neg.get(i, j)).expect("finite A")
    });
    let lower = lower_matrix.diagonal().into_iter().max().expect("n >= 1");
    let upper = upper_matrix.diagonal().into_iter().min().expect("n >= 1");
    Ok(BoundMatrices {
        lower_matrix,
        upper_matrix,
        p_matrix,
        q_matrix,
        lower,
        upper,
    })
}
