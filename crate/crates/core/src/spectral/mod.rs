//! Symmetric band eigensolvers and spectrum reports.

pub mod band;
pub mod factor;
pub mod report;
pub mod solver;
pub mod tridiag;

pub use band::BandMatrix;
pub use report::{
    compare_oracle, convergence_study, eigen_spectrum, eigen_spectrum_with, ConvergenceTable, OracleComparison,
    OracleRow, SpectrumReport, ORDERING, ORTHONORMALITY_TOL, RESIDUAL_TOL,
};
pub use solver::{all_eigenvalues, residual, top_eigenpairs, Eigenpairs, Method, DIRECT_LIMIT};
