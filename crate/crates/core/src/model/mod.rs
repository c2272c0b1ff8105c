//! The finite model on `G_n = B_n / B_{-n}`: grid, Fourier transform,
//! projections and the compressed operators making up `H_n`.

pub mod fourier;
pub mod grid;
pub mod hamiltonian;
pub mod potential;
pub mod projection;

pub use fourier::{
    fourier_apply, fourier_matrix, inverse_fourier_apply, FourierKernel, GridFunction, DENSE_FOURIER_LIMIT,
};
pub use grid::{build_grid, build_grid_with_cap, Grid, Shell, DEFAULT_GRID_CAP};
pub use hamiltonian::{
    assemble_hamiltonian, assemble_hamiltonian_dense, HamiltonianModel, ModelParams, HERMITICITY_LIMIT,
};
pub use potential::{
    kinetic_diagonal, potential_diagonal, zero_cell_average, RadialPotential, ZeroCellConvention,
};
pub use projection::{embed_next_level, project_cutoff, project_smooth};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("grid too large: q^(2n) = {q}^{} exceeds the cap {cap}", 2 * .n)]
    GridTooLarge { q: u32, n: u32, cap: usize },
    #[error("grid of {len} points exceeds the dense limit {limit}")]
    TooLargeForDense { len: usize, limit: usize },
    #[error("Hermiticity defect {defect:e} exceeds {limit:e}")]
    HermiticityDefect { defect: f64, limit: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
