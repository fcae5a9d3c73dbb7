//! Dense complex linear algebra: LU and Cholesky factorizations, Householder
//! QR, a Hessenberg/QR eigenvalue solver and the generalized eigenproblem
//! with bi-orthonormal adjoint eigenvectors.

mod cholesky;
mod eigen;
mod lu;
mod matrix;
mod poly;
mod qr;
mod schur;

use thiserror::Error;

pub use cholesky::{backward_substitute_adjoint, cholesky, forward_substitute};
pub use eigen::{eig_general, eig_general_with, sort_descending_real, EigOptions, EigenData};
pub use lu::{solve, Lu};
pub use matrix::{dot, dot_conj, norm2, real_vector, DenseMatrix, C64};
pub use poly::{companion_roots, poly_eval};
pub use qr::householder_qr;
pub use schur::{eigenvalues, hessenberg};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("singular matrix: pivot {pivot} has magnitude {magnitude:e}")]
    Singular { pivot: usize, magnitude: f64 },
    #[error("matrix is not symmetric positive definite: {0}")]
    NotSpd(String),
    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("defective pencil: {0}")]
    DefectivePencil(String),
    #[error("polynomial has degree zero")]
    DegreeZero,
    #[error("constraint matrix is rank deficient (rank {rank} < {rows})")]
    RankDeficientConstraint { rank: usize, rows: usize },
}
