//! Dense complex matrix kernels.

mod eigen;
mod funcs;
mod matrix;
mod svd;

pub use eigen::{herm_eigen, herm_eigenvalues, symmetrize_checked, HermEigen, HERMITICITY_TOL};
pub use funcs::{
    abs_left, abs_right, apply_herm_fn, cartesian_decomp, herm_norm, m_min, operator_norm,
    PolarParts,
};
pub use matrix::ComplexMatrix;
pub use svd::{svd, SvdResult};

pub(crate) use eigen::{eigh, eigvalsh};
pub(crate) use matrix::vec_norm;
