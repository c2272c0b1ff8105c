use nalgebra::DMatrix;
use num_complex::Complex64;

use super::adapt::shell_adapt;
use super::classify::{classify_eigenvector, shell_profile, Classification, ClassifyTolerances, ShellProfile};
use super::cluster::{cluster_eigenvalues, Cluster};
use super::eigen::{eigensolve, residual};
use super::SpectralError;
use crate::model::HamiltonianModel;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralConfig {
    pub cluster_tol: f64,
    pub radial_tol: f64,
    pub shell_tol: f64,
    pub residual_tol: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self { cluster_tol: 1e-6, radial_tol: 1e-8, shell_tol: 1e-10, residual_tol: 1e-9 }
    }
}

impl SpectralConfig {
    pub fn classify_tolerances(&self) -> ClassifyTolerances {
        ClassifyTolerances { radial_tol: self.radial_tol, shell_tol: self.shell_tol }
    }
}

/// What kind of eigenfunctions a cluster holds after shell adaptation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClusterKind {
    Radial,
    Shell,
    Mixed,
}

impl ClusterKind {
    pub fn label(self) -> &'static str {
        match self {
            ClusterKind::Radial => "radial",
            ClusterKind::Shell => "shell",
            ClusterKind::Mixed => "mixed",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<f64>,
    /// Shell-adapted, unit-norm, phase-fixed columns.
    pub eigenvectors: DMatrix<Complex64>,
    pub residuals: Vec<f64>,
    pub clusters: Vec<Cluster>,
    pub classifications: Vec<Classification>,
    pub profiles: Vec<ShellProfile>,
}

impl SpectrumReport {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Cluster id of every rank.
    pub fn cluster_ids(&self) -> Vec<usize> {
        let mut ids = vec![0; self.len()];
        for c in &self.clusters {
            for &m in &c.members {
                ids[m] = c.id;
            }
        }
        ids
    }

    pub fn cluster_kind(&self, cluster: &Cluster) -> ClusterKind {
        let cls = cluster.members.iter().map(|&i| &self.classifications[i]);
        if cls.clone().all(Classification::is_shell) {
            ClusterKind::Shell
        } else if cls.clone().all(Classification::is_radial) {
            ClusterKind::Radial
        } else {
            ClusterKind::Mixed
        }
    }

    /// Cluster whose representative is nearest `value`, if within `window`.
    pub fn find_cluster(&self, value: f64, window: f64) -> Option<&Cluster> {
        self.clusters
            .iter()
            .filter(|c| (c.representative - value).abs() <= window)
            .min_by(|a, b| (a.representative - value).abs().total_cmp(&(b.representative - value).abs()))
    }

    pub fn vector(&self, rank: usize) -> nalgebra::DVector<Complex64> {
        self.eigenvectors.column(rank).into_owned()
    }
}

/// Eigensolve → cluster → shell-adapt → classify.
pub fn analyze(model: &HamiltonianModel, cfg: &SpectralConfig) -> Result<SpectrumReport, SpectralError> {
    let pairs = eigensolve(model, cfg.residual_tol)?;
    let clusters = cluster_eigenvalues(&pairs.values, cfg.cluster_tol);
    let mut vectors = pairs.vectors;
    for c in clusters.iter().filter(|c| c.multiplicity() > 1) {
        let first = c.members[0];
        let m = c.multiplicity();
        let block = vectors.columns(first, m).into_owned();
        let adapted = shell_adapt(&model.grid, &block, &pairs.values[first..first + m], cfg.cluster_tol)?;
        vectors.columns_mut(first, m).copy_from(&adapted);
    }
    let residuals: Vec<f64> = (0..pairs.values.len())
        .map(|i| residual(&model.matrix, pairs.values[i], &vectors.column(i).into_owned()))
        .collect();
    let tol = cfg.classify_tolerances();
    let mut classifications = Vec::with_capacity(residuals.len());
    let mut profiles = Vec::with_capacity(residuals.len());
    for i in 0..residuals.len() {
        let v = vectors.column(i).into_owned();
        classifications.push(classify_eigenvector(&model.grid, &v, tol));
        profiles.push(shell_profile(&model.grid, &v));
    }
    Ok(SpectrumReport {
        eigenvalues: pairs.values,
        eigenvectors: vectors,
        residuals,
        clusters,
        classifications,
        profiles,
    })
}
