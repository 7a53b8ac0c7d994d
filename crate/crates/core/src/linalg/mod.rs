//! Vectors, matrices, subspaces and the elimination routines behind them.

mod echelon;
mod eigen;
mod mat;
mod subspace;
mod vector;

pub use echelon::{inverse, kernel_vectors, rank, rref, solve, Rref, SpanBuilder};
pub use eigen::{any_eigenvalue, schur_eigenvalues, spectrum, Spectrum};
pub use mat::{lincomb, Mat};
pub use subspace::{
    canonical_basis, gram_schmidt, kernel, orth_projection, orthonormalize, range, subspace_op, GramSchmidt,
    Subspace, SubspaceOp,
};
pub use vector::Vector;
