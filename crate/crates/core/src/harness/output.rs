//! CSV / JSON writers. Every table is a flat list of records; JSON mirrors
//! the CSV rows field for field.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::OutputFormat;
use crate::model::Grid;
use crate::spectral::{ConvergenceTrace, ShellProfile, SpectrumReport};

#[derive(Debug, Serialize)]
pub struct GridRecord {
    pub index: usize,
    pub digits: String,
    pub shell: String,
    pub abs_value: f64,
    pub mass: f64,
}

#[derive(Debug, Serialize)]
pub struct SpectrumRecord {
    pub rank: usize,
    pub eigenvalue: f64,
    pub cluster_id: usize,
    pub multiplicity: usize,
    pub classification: String,
    pub shell_profile: String,
}

#[derive(Debug, Serialize)]
pub struct ClusterRecord {
    pub cluster_id: usize,
    pub value: f64,
    pub multiplicity: usize,
    #[serde(rename = "type")]
    pub kind: String,
}

#[derive(Debug, Serialize)]
pub struct EigenvectorRecord {
    pub point_index: usize,
    pub digits: String,
    pub shell: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Serialize)]
pub struct LevelClusterRecord {
    pub level: u32,
    pub cluster_id: usize,
    pub value: f64,
    pub multiplicity: usize,
    #[serde(rename = "type")]
    pub kind: String,
}

#[derive(Debug, Serialize)]
pub struct TrajectoryRecord {
    pub trajectory_id: usize,
    pub level: u32,
    pub cluster_id: usize,
    pub value: f64,
    pub multiplicity: usize,
    pub drift: Option<f64>,
    pub multiplicity_change: Option<i64>,
    pub span_distance: Option<f64>,
    pub alignment: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct GroundStateRecord {
    pub level: u32,
    pub lambda0: f64,
    pub drift: Option<f64>,
}

pub fn digits_string(grid: &Grid, index: usize) -> String {
    grid.digits(index).iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

/// `shell:norm²` pairs separated by `;`.
pub fn profile_string(profile: &ShellProfile) -> String {
    profile.iter().map(|(s, m)| format!("{s}:{m:e}")).collect::<Vec<_>>().join(";")
}

pub fn grid_records(grid: &Grid) -> Vec<GridRecord> {
    (0..grid.len())
        .map(|i| GridRecord {
            index: i,
            digits: digits_string(grid, i),
            shell: grid.shell(i).to_string(),
            abs_value: grid.abs_value(i),
            mass: grid.mass(),
        })
        .collect()
}

pub fn spectrum_records(report: &SpectrumReport) -> Vec<SpectrumRecord> {
    let ids = report.cluster_ids();
    (0..report.len())
        .map(|r| SpectrumRecord {
            rank: r,
            eigenvalue: report.eigenvalues[r],
            cluster_id: ids[r],
            multiplicity: report.clusters[ids[r]].multiplicity(),
            classification: report.classifications[r].label(),
            shell_profile: profile_string(&report.profiles[r]),
        })
        .collect()
}

pub fn cluster_records(report: &SpectrumReport) -> Vec<ClusterRecord> {
    report
        .clusters
        .iter()
        .map(|c| ClusterRecord {
            cluster_id: c.id,
            value: c.mean(&report.eigenvalues),
            multiplicity: c.multiplicity(),
            kind: report.cluster_kind(c).label().into(),
        })
        .collect()
}

pub fn eigenvector_records(grid: &Grid, report: &SpectrumReport, rank: usize) -> Vec<EigenvectorRecord> {
    let v = report.eigenvectors.column(rank);
    (0..grid.len())
        .map(|i| EigenvectorRecord {
            point_index: i,
            digits: digits_string(grid, i),
            shell: grid.shell(i).to_string(),
            re: v[i].re,
            im: v[i].im,
        })
        .collect()
}

pub fn level_records(trace: &ConvergenceTrace) -> Vec<LevelClusterRecord> {
    trace
        .levels
        .iter()
        .flat_map(|l| {
            l.clusters.iter().map(move |c| LevelClusterRecord {
                level: l.level,
                cluster_id: c.id,
                value: c.value,
                multiplicity: c.multiplicity,
                kind: c.kind.into(),
            })
        })
        .collect()
}

pub fn trajectory_records(trace: &ConvergenceTrace) -> Vec<TrajectoryRecord> {
    trace
        .trajectories
        .iter()
        .flat_map(|t| {
            t.points.iter().map(move |p| TrajectoryRecord {
                trajectory_id: t.id,
                level: p.level,
                cluster_id: p.cluster_id,
                value: p.value,
                multiplicity: p.multiplicity,
                drift: p.drift,
                multiplicity_change: p.multiplicity_change,
                span_distance: p.span_distance,
                alignment: p.alignment,
            })
        })
        .collect()
}

pub fn ground_state_records(trace: &ConvergenceTrace) -> Vec<GroundStateRecord> {
    trace
        .levels
        .iter()
        .enumerate()
        .map(|(i, l)| GroundStateRecord {
            level: l.level,
            lambda0: l.ground_state,
            drift: (i > 0).then(|| l.ground_state - trace.levels[i - 1].ground_state),
        })
        .collect()
}

/// Writes `records` to `dir/stem.{csv,json}` and returns the path.
pub fn write_table<T: Serialize>(dir: &Path, stem: &str, format: OutputFormat, records: &[T]) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    match format {
        OutputFormat::Csv => {
            let path = dir.join(format!("{stem}.csv"));
            let mut w = csv::Writer::from_path(&path)?;
            for r in records {
                w.serialize(r)?;
            }
            w.flush()?;
            Ok(path)
        }
        OutputFormat::Json => {
            let path = dir.join(format!("{stem}.json"));
            let mut text = serde_json::to_string_pretty(records).map_err(io::Error::other)?;
            text.push('\n');
            fs::write(&path, text)?;
            Ok(path)
        }
    }
}
