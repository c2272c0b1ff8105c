//! Eigendecomposition, clustering and shell classification of `H_n`.

pub mod adapt;
pub mod classify;
pub mod cluster;
pub mod convergence;
pub mod eigen;
pub mod report;

use thiserror::Error;

use crate::model::ModelError;

pub use adapt::{shell_adapt, span_projector};
pub use classify::{
    classify_eigenvector, max_within_shell_deviation, shell_profile, Classification, ClassifyTolerances,
    ShellProfile,
};
pub use cluster::{cluster_eigenvalues, Cluster};
pub use convergence::{convergence_report, ConvergenceOptions, ConvergenceTrace, LevelSummary, Trajectory, TrajectoryPoint};
pub use eigen::{eigensolve, eigensolve_matrix, fix_phase, Eigenpairs};
pub use report::{analyze, ClusterKind, SpectralConfig, SpectrumReport};

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("eigensolver did not converge within {max_iterations} iterations")]
    NoConvergence { max_iterations: usize },
    #[error("eigenpair {index} has residual {residual:e} above {limit:e}")]
    ResidualTooLarge { index: usize, residual: f64, limit: f64 },
    #[error("vectors do not span an eigenspace (eigenvalue spread {spread:e})")]
    NotAnEigenspace { spread: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}
