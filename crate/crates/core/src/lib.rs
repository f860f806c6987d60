//! Exact zone-based solver for the maxmin-ω eigenproblem
//! `A ⊗_ω x = λ + x`, where `(A ⊗_ω x)_i` is the `p`-th smallest of
//! `A(i,j) + x_j`.
//!
//! ```
//! use maxmin_eigen::{solve, SolveConfig, Status, TropicalMatrix, ExtScalar};
//!
//! let a = TropicalMatrix::from_ints(&[
//!     [14, 2, 18, 5],
//!     [5, 2, 3, 14],
//!     [1, 13, 12, 0],
//!     [19, 6, 14, 12],
//! ]);
//! let report = solve(&a, 2, &SolveConfig::default()).unwrap();
//! assert_eq!(report.status, Status::Solved);
//! assert_eq!(report.lambda, Some(ExtScalar::int(7)));
//! ```

pub mod bench;
pub mod cycle;
pub mod eigen;
pub mod error;
pub mod graph;
pub mod io;
pub mod matrix;
pub mod omega;
pub mod oracle;
pub mod scalar;
pub mod zone;

pub use cycle::{cycle_mean, CycleMeanResult, CycleMode};
pub use eigen::{
    classify_entries, compute_bounds, refine, residuals, solve, stabilize, verify_eigenvector,
    ActiveStructure, BoundMatrices, Branch, Round, SolveConfig, SolveReport, Stabilization, Status,
};
pub use error::{Error, Result};
pub use graph::{saturation_graph, ArcSet};
pub use matrix::TropicalMatrix;
pub use omega::{min_max_value, omega_matvec, omega_select, Threshold};
pub use scalar::{ExtScalar, Semiring};
pub use zone::Dbm;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/tropical.md")]
    mod tropical {}
    #[doc = include_str!("../../../book/src/maxmin.md")]
    mod maxmin {}
    #[doc = include_str!("../../../book/src/zones.md")]
    mod zones {}
    #[doc = include_str!("../../../book/src/stabilization.md")]
    mod stabilization {}
    #[doc = include_str!("../../../book/src/refinement.md")]
    mod refinement {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
