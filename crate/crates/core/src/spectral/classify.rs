//! Radial / shell / mixed classification of grid functions.

use std::fmt;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::model::{Grid, Shell};

/// Norm² carried by each shell, in the grid's shell order.
pub type ShellProfile = Vec<(Shell, f64)>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Classification {
    Radial { max_deviation: f64 },
    Shell { shell: Shell, leakage: f64 },
    Mixed { profile: ShellProfile },
}

impl Classification {
    pub fn label(&self) -> String {
        match self {
            Classification::Radial { .. } => "radial".into(),
            Classification::Shell { shell, .. } => format!("shell({shell})"),
            Classification::Mixed { .. } => "mixed".into(),
        }
    }

    pub fn is_shell(&self) -> bool {
        matches!(self, Classification::Shell { .. })
    }

    pub fn is_radial(&self) -> bool {
        matches!(self, Classification::Radial { .. })
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassifyTolerances {
    pub radial_tol: f64,
    pub shell_tol: f64,
}

impl Default for ClassifyTolerances {
    fn default() -> Self {
        Self { radial_tol: 1e-8, shell_tol: 1e-10 }
    }
}

pub fn shell_profile(grid: &Grid, v: &DVector<Complex64>) -> ShellProfile {
    let shells = grid.shell_list();
    let mut mass = vec![0.0; shells.len()];
    for (i, z) in v.iter().enumerate() {
        let s = shells.binary_search(&grid.shell(i)).expect("grid shell");
        mass[s] += z.norm_sqr();
    }
    shells.into_iter().zip(mass).collect()
}

/// Largest deviation from the shell mean, over all shells.
pub fn max_within_shell_deviation(grid: &Grid, v: &DVector<Complex64>) -> f64 {
    let shells = grid.shell_list();
    let mut sums = vec![Complex64::new(0.0, 0.0); shells.len()];
    let mut counts = vec![0usize; shells.len()];
    let slot: Vec<usize> = (0..grid.len())
        .map(|i| shells.binary_search(&grid.shell(i)).expect("grid shell"))
        .collect();
    for (i, z) in v.iter().enumerate() {
        sums[slot[i]] += z;
        counts[slot[i]] += 1;
    }
    v.iter()
        .enumerate()
        .map(|(i, z)| (z - sums[slot[i]] / counts[slot[i]] as f64).norm())
        .fold(0.0, f64::max)
}

/// Shell if one shell carries at least `1 - shell_tol` of the norm², else
/// radial if constant on every shell to `radial_tol`, else mixed.
pub fn classify_eigenvector(grid: &Grid, v: &DVector<Complex64>, tol: ClassifyTolerances) -> Classification {
    let profile = shell_profile(grid, v);
    let total: f64 = profile.iter().map(|p| p.1).sum();
    if let Some(&(shell, m)) = profile.iter().max_by(|a, b| a.1.total_cmp(&b.1)) {
        if m >= total * (1.0 - tol.shell_tol) {
            return Classification::Shell { shell, leakage: total - m };
        }
    }
    let dev = max_within_shell_deviation(grid, v);
    if dev <= tol.radial_tol {
        return Classification::Radial { max_deviation: dev };
    }
    Classification::Mixed { profile }
}
