//! Tracking clusters of `σ(H_n)` across levels.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::report::{analyze, SpectralConfig, SpectrumReport};
use super::SpectralError;
use crate::model::{embed_next_level, Grid, ModelParams};

#[derive(Clone, Debug)]
pub struct ConvergenceOptions {
    pub spectral: SpectralConfig,
    /// Maximum distance between matched representatives.
    pub window: f64,
    /// Expected open interval for the lowest eigenvalue; a violation is a warning.
    pub ground_state_bound: Option<(f64, f64)>,
}

impl Default for ConvergenceOptions {
    fn default() -> Self {
        Self { spectral: SpectralConfig::default(), window: 0.5, ground_state_bound: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClusterSummary {
    pub id: usize,
    pub value: f64,
    pub multiplicity: usize,
    pub kind: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelSummary {
    pub level: u32,
    pub size: usize,
    pub ground_state: f64,
    pub clusters: Vec<ClusterSummary>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrajectoryPoint {
    pub level: u32,
    pub cluster_id: usize,
    pub value: f64,
    pub multiplicity: usize,
    /// Change in value from the previous point.
    pub drift: Option<f64>,
    /// Change in multiplicity from the previous point.
    pub multiplicity_change: Option<i64>,
    /// Largest distance of an embedded previous-level vector from this cluster's span.
    pub span_distance: Option<f64>,
    /// `‖e' − embed(e)‖` (after optimal global phase), only between singletons.
    pub alignment: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub id: usize,
    pub points: Vec<TrajectoryPoint>,
}

impl Trajectory {
    pub fn max_drift(&self) -> f64 {
        self.points.iter().filter_map(|p| p.drift).map(f64::abs).fold(0.0, f64::max)
    }

    pub fn point_at(&self, level: u32) -> Option<&TrajectoryPoint> {
        self.points.iter().find(|p| p.level == level)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceTrace {
    pub levels: Vec<LevelSummary>,
    pub trajectories: Vec<Trajectory>,
    pub warnings: Vec<String>,
}

impl ConvergenceTrace {
    /// Trajectory containing the cluster nearest `value` at `level`.
    pub fn trajectory_through(&self, level: u32, value: f64, window: f64) -> Option<&Trajectory> {
        self.trajectories
            .iter()
            .filter_map(|t| t.point_at(level).map(|p| (t, (p.value - value).abs())))
            .filter(|(_, d)| *d <= window)
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(t, _)| t)
    }
}

/// Greedy nearest-value matching: candidate pairs within `window` are taken
/// in order of increasing distance, each cluster used at most once.
fn match_clusters(prev: &[ClusterSummary], next: &[ClusterSummary], window: f64) -> Vec<Option<usize>> {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, a) in prev.iter().enumerate() {
        for (j, b) in next.iter().enumerate() {
            let d = (a.value - b.value).abs();
            if d <= window {
                pairs.push((d, i, j));
            }
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut forward = vec![None; prev.len()];
    let mut taken = vec![false; next.len()];
    for (_, i, j) in pairs {
        if forward[i].is_none() && !taken[j] {
            forward[i] = Some(j);
            taken[j] = true;
        }
    }
    forward
}

fn cluster_block(report: &SpectrumReport, id: usize) -> DMatrix<Complex64> {
    let c = &report.clusters[id];
    report.eigenvectors.columns(c.members[0], c.multiplicity()).into_owned()
}

fn alignment_metrics(
    coarse: (&Grid, &SpectrumReport, usize),
    fine: (&Grid, &SpectrumReport, usize),
) -> (f64, Option<f64>) {
    let a = cluster_block(coarse.1, coarse.2);
    let b = cluster_block(fine.1, fine.2);
    let embedded: Vec<DVector<Complex64>> = a
        .column_iter()
        .map(|c| embed_next_level(coarse.0, fine.0, &c.into_owned()))
        .collect();
    let span = embedded
        .iter()
        .map(|e| (e - &b * (b.adjoint() * e)).norm())
        .fold(0.0, f64::max);
    let align = if a.ncols() == 1 && b.ncols() == 1 {
        let e = &embedded[0];
        let v = b.column(0).into_owned();
        let overlap = e.dotc(&v);
        let rot = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { Complex64::new(1.0, 0.0) };
        Some((v - e * rot).norm())
    } else {
        None
    };
    (span, align)
}

fn summarize(level: u32, report: &SpectrumReport) -> LevelSummary {
    LevelSummary {
        level,
        size: report.len(),
        ground_state: report.eigenvalues.first().copied().unwrap_or(f64::NAN),
        clusters: report
            .clusters
            .iter()
            .map(|c| ClusterSummary {
                id: c.id,
                value: c.mean(&report.eigenvalues),
                multiplicity: c.multiplicity(),
                kind: report.cluster_kind(c).label(),
            })
            .collect(),
    }
}

pub fn convergence_report(
    params: &ModelParams,
    levels: &[u32],
    opts: &ConvergenceOptions,
) -> Result<ConvergenceTrace, SpectralError> {
    let mut levels = levels.to_vec();
    levels.sort_unstable();
    levels.dedup();

    let runs: Vec<(Grid, SpectrumReport)> = levels
        .par_iter()
        .map(|&n| {
            let model = params.assemble(n)?;
            let report = analyze(&model, &opts.spectral)?;
            Ok((model.grid, report))
        })
        .collect::<Result<_, SpectralError>>()?;

    let summaries: Vec<LevelSummary> = levels.iter().zip(&runs).map(|(&n, r)| summarize(n, &r.1)).collect();
    let mut warnings = Vec::new();
    if let Some((lo, hi)) = opts.ground_state_bound {
        for s in &summaries {
            if !(s.ground_state > lo && s.ground_state < hi) {
                let msg = format!(
                    "level {}: ground state {:.6} outside the expected interval ({lo}, {hi})",
                    s.level, s.ground_state
                );
                log::warn!("{msg}");
                warnings.push(msg);
            }
        }
    }

    let mut trajectories: Vec<Trajectory> = Vec::new();
    // open[j] = trajectory index ending at cluster j of the current level
    let mut open: Vec<usize> = Vec::new();
    for (li, s) in summaries.iter().enumerate() {
        let mut incoming: Vec<Option<usize>> = vec![None; s.clusters.len()];
        if li > 0 {
            let prev = &summaries[li - 1];
            let forward = match_clusters(&prev.clusters, &s.clusters, opts.window);
            for (i, j) in forward.iter().enumerate() {
                if let Some(j) = *j {
                    incoming[j] = Some(i);
                }
            }
        }
        let mut next_open = vec![0; s.clusters.len()];
        for (j, c) in s.clusters.iter().enumerate() {
            let mut point = TrajectoryPoint {
                level: s.level,
                cluster_id: c.id,
                value: c.value,
                multiplicity: c.multiplicity,
                drift: None,
                multiplicity_change: None,
                span_distance: None,
                alignment: None,
            };
            let t = match incoming[j] {
                Some(i) => {
                    let prev = &summaries[li - 1].clusters[i];
                    point.drift = Some(c.value - prev.value);
                    point.multiplicity_change = Some(c.multiplicity as i64 - prev.multiplicity as i64);
                    if s.level == summaries[li - 1].level + 1 {
                        let (span, align) = alignment_metrics(
                            (&runs[li - 1].0, &runs[li - 1].1, prev.id),
                            (&runs[li].0, &runs[li].1, c.id),
                        );
                        point.span_distance = Some(span);
                        point.alignment = align;
                    }
                    open[i]
                }
                None => {
                    trajectories.push(Trajectory { id: trajectories.len(), points: Vec::new() });
                    trajectories.len() - 1
                }
            };
            trajectories[t].points.push(point);
            next_open[j] = t;
        }
        open = next_open;
    }

    Ok(ConvergenceTrace { levels: summaries, trajectories, warnings })
}
