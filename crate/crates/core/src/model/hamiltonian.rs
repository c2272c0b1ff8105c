//! Assembly of `H_n = a · F_n^* diag(|ξ|^α) F_n + diag(v)`.

use std::io::{self, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::fourier::FourierKernel;
use super::grid::{build_grid_with_cap, Grid, DEFAULT_GRID_CAP};
use crate::field::Field;
use super::potential::{kinetic_diagonal, potential_diagonal, RadialPotential, ZeroCellConvention};
use super::ModelError;

/// Relative Hermiticity defect above which assembly fails.
pub const HERMITICITY_LIMIT: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct HamiltonianModel {
    pub grid: Grid,
    pub alpha: f64,
    pub kinetic_coeff: f64,
    pub potential: RadialPotential,
    pub convention: ZeroCellConvention,
    pub matrix: DMatrix<Complex64>,
    /// `max |H - H^*| / max |H|` before symmetrization.
    pub hermiticity_defect: f64,
    pub warnings: Vec<String>,
}

impl HamiltonianModel {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Debug dump: one row per line, `re im` pairs separated by spaces.
    pub fn write_matrix_text<W: Write>(&self, mut w: W) -> io::Result<()> {
        for i in 0..self.matrix.nrows() {
            let row: Vec<String> = (0..self.matrix.ncols())
                .map(|j| {
                    let z = self.matrix[(i, j)];
                    format!("{:e} {:e}", z.re, z.im)
                })
                .collect();
            writeln!(w, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Everything needed to assemble `H_n` at any level.
#[derive(Clone, Debug)]
pub struct ModelParams {
    pub field: Field,
    pub alpha: f64,
    pub kinetic_coeff: f64,
    pub potential: RadialPotential,
    pub convention: ZeroCellConvention,
    pub grid_cap: usize,
}

impl ModelParams {
    pub fn new(field: Field, alpha: f64, kinetic_coeff: f64, potential: RadialPotential) -> Self {
        Self {
            field,
            alpha,
            kinetic_coeff,
            potential,
            convention: ZeroCellConvention::default(),
            grid_cap: DEFAULT_GRID_CAP,
        }
    }

    pub fn with_convention(mut self, convention: ZeroCellConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn assemble(&self, n: u32) -> Result<HamiltonianModel, ModelError> {
        let grid = build_grid_with_cap(&self.field, n, self.grid_cap)?;
        assemble_hamiltonian(&grid, self.alpha, self.kinetic_coeff, &self.potential, self.convention)
    }
}

fn check_parameters(alpha: f64, a: f64, potential: &RadialPotential) -> Result<Vec<String>, ModelError> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(ModelError::InvalidParameter(format!("alpha = {alpha} must be > 0")));
    }
    if !(a.is_finite() && a >= 0.0) {
        return Err(ModelError::InvalidParameter(format!("kinetic coefficient a = {a} must be >= 0")));
    }
    potential.validate()
}

/// Kinetic part via the group structure: `(F^* D F)(x, z) = q^{-2n} Σ_ξ D(ξ) χ(ξ(x - z))`,
/// so each entry is a function `g(x - z)` tabulated once per group element.
pub fn assemble_hamiltonian(
    grid: &Grid,
    alpha: f64,
    a: f64,
    potential: &RadialPotential,
    convention: ZeroCellConvention,
) -> Result<HamiltonianModel, ModelError> {
    let warnings = check_parameters(alpha, a, potential)?;
    let len = grid.len();
    let kin = kinetic_diagonal(grid, alpha, convention);
    let pot = potential_diagonal(grid, potential, convention);

    let kernel = FourierKernel::new(grid);
    let scale = a * (grid.field().q() as f64).powi(-2 * grid.n() as i32);
    let g: Vec<Complex64> = if a == 0.0 {
        vec![Complex64::new(0.0, 0.0); len]
    } else {
        (0..len)
            .into_par_iter()
            .map(|w| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (xi, &d) in kin.iter().enumerate() {
                    acc += kernel.chi(xi, w) * d;
                }
                acc * scale
            })
            .collect()
    };

    let mut matrix = DMatrix::from_fn(len, len, |x, z| g[grid.sub_index(x, z)]);
    for (x, v) in pot.iter().enumerate() {
        matrix[(x, x)] += Complex64::new(*v, 0.0);
    }
    finish(grid, alpha, a, potential, convention, matrix, warnings)
}

/// Reference assembly through the dense Fourier matrix, `a F^* D F + V`.
pub fn assemble_hamiltonian_dense(
    grid: &Grid,
    alpha: f64,
    a: f64,
    potential: &RadialPotential,
    convention: ZeroCellConvention,
) -> Result<HamiltonianModel, ModelError> {
    let warnings = check_parameters(alpha, a, potential)?;
    let f = FourierKernel::new(grid).matrix()?;
    let kin = kinetic_diagonal(grid, alpha, convention);
    let pot = potential_diagonal(grid, potential, convention);
    let mut scaled = f.clone();
    for (mut row, d) in scaled.row_iter_mut().zip(&kin) {
        row *= Complex64::new(a * d, 0.0);
    }
    let mut matrix = f.adjoint() * scaled;
    for (x, v) in pot.iter().enumerate() {
        matrix[(x, x)] += Complex64::new(*v, 0.0);
    }
    finish(grid, alpha, a, potential, convention, matrix, warnings)
}

fn finish(
    grid: &Grid,
    alpha: f64,
    a: f64,
    potential: &RadialPotential,
    convention: ZeroCellConvention,
    mut matrix: DMatrix<Complex64>,
    warnings: Vec<String>,
) -> Result<HamiltonianModel, ModelError> {
    let len = matrix.nrows();
    let scale = matrix.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut defect: f64 = 0.0;
    for i in 0..len {
        for j in i..len {
            defect = defect.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
        }
    }
    let defect = if scale > 0.0 { defect / scale } else { 0.0 };
    if defect > HERMITICITY_LIMIT {
        return Err(ModelError::HermiticityDefect { defect, limit: HERMITICITY_LIMIT });
    }
    for i in 0..len {
        matrix[(i, i)] = Complex64::new(matrix[(i, i)].re, 0.0);
        for j in i + 1..len {
            let m = (matrix[(i, j)] + matrix[(j, i)].conj()) * 0.5;
            matrix[(i, j)] = m;
            matrix[(j, i)] = m.conj();
        }
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(HamiltonianModel {
        grid: grid.clone(),
        alpha,
        kinetic_coeff: a,
        potential: potential.clone(),
        convention,
        matrix,
        hermiticity_defect: defect,
        warnings,
    })
}
