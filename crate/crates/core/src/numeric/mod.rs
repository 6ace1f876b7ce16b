//! Numeric foundation: complex scalars, small dense matrices, a Hermitian
//! eigensolver, log-gamma, and unitarity diagnostics.
//!
//! Everything downstream (model evaluation, the brute-force propagator, the
//! transition-matrix algebra, the graph solver) is built on these kernels.

pub mod eig;
pub mod gamma;
pub mod mat;

pub use eig::{eig_herm, phase_fix_columns, EigDecomposition};
pub use gamma::{gamma_one_plus_ix_abs2, log_gamma};
pub use mat::{lu_solve, orthonormalize_columns, unitarity_defect, CMat, HermitianMatrix, UnitaryMatrix};
