use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufWriter};
use std::path::PathBuf;

use thiserror::Error;

use super::config::{ConfigError, RunConfig};
use super::output::{self, write_table};
use super::verify::{run_verify, VerifyOutcome};
use crate::model::HamiltonianModel;
use crate::spectral::{analyze, convergence_report, ConvergenceTrace, SpectralError, SpectrumReport};

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{failed} of {total} checks failed")]
    VerifyFailed { failed: usize, total: usize },
    #[error(transparent)]
    Numerical(#[from] SpectralError),
    #[error("writing output: {0}")]
    Io(#[from] io::Error),
}

impl CommandError {
    /// 1 configuration, 2 verification, 3 numerical (and I/O).
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Config(_) => 1,
            CommandError::VerifyFailed { .. } => 2,
            CommandError::Numerical(_) | CommandError::Io(_) => 3,
        }
    }
}

impl From<crate::model::ModelError> for CommandError {
    fn from(e: crate::model::ModelError) -> Self {
        CommandError::Numerical(e.into())
    }
}

pub struct SpectrumRun {
    pub model: HamiltonianModel,
    pub report: SpectrumReport,
    pub files: Vec<PathBuf>,
    pub summary: String,
}

fn header(cfg: &RunConfig, levels: &str) -> String {
    format!(
        "{} (q = {}), {levels}, alpha = {}, a = {}, zero cell {}\n",
        cfg.field.describe(),
        cfg.field.q(),
        cfg.alpha,
        cfg.kinetic_coeff,
        cfg.convention
    )
}

/// Cluster table: value to 4 decimals, multiplicity, eigenfunction type.
pub fn spectrum_summary(report: &SpectrumReport) -> String {
    let mut s = format!("{:>14}  {:>5}  {}\n", "value", "mult", "type");
    for c in &report.clusters {
        let _ = writeln!(
            s,
            "{:>14.4}  {:>5}  {}",
            c.mean(&report.eigenvalues),
            c.multiplicity(),
            report.cluster_kind(c).label()
        );
    }
    s
}

pub fn cmd_spectrum(cfg: &RunConfig, dump_matrix: bool) -> Result<SpectrumRun, CommandError> {
    let model = cfg.model_params().assemble(cfg.n)?;
    let report = analyze(&model, &cfg.spectral)?;
    let dir = &cfg.out_dir;
    let mut files = vec![
        write_table(dir, "grid", cfg.format, &output::grid_records(&model.grid))?,
        write_table(dir, "spectrum", cfg.format, &output::spectrum_records(&report))?,
        write_table(dir, "clusters", cfg.format, &output::cluster_records(&report))?,
    ];
    let vec_dir = dir.join("eigenvectors");
    for rank in cfg.eigenvector_ranks(report.len()) {
        let records = output::eigenvector_records(&model.grid, &report, rank);
        files.push(write_table(&vec_dir, &format!("vec_{rank}"), cfg.format, &records)?);
    }
    if dump_matrix {
        let path = dir.join("hamiltonian.txt");
        model.write_matrix_text(BufWriter::new(fs::File::create(&path)?))?;
        files.push(path);
    }
    let summary = header(cfg, &format!("n = {}, {} points", cfg.n, model.len())) + &spectrum_summary(&report);
    Ok(SpectrumRun { model, report, files, summary })
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<(VerifyOutcome, PathBuf), CommandError> {
    let outcome = run_verify(&cfg.model_params(), cfg.n, &cfg.verify)?;
    let path = write_table(&cfg.out_dir, "verify", cfg.format, &outcome.checks)?;
    Ok((outcome, path))
}

/// Formats the outcome one check per line.
pub fn verify_summary(outcome: &VerifyOutcome) -> String {
    let mut s = String::new();
    for c in &outcome.checks {
        let _ = writeln!(
            s,
            "{} {:<32} defect {:.3e} (threshold {:.0e})",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.defect,
            c.threshold
        );
    }
    s
}

pub fn cmd_converge(cfg: &RunConfig) -> Result<(ConvergenceTrace, Vec<PathBuf>, String), CommandError> {
    let trace = convergence_report(&cfg.model_params(), &cfg.levels, &cfg.convergence_options())?;
    let dir = &cfg.out_dir;
    let files = vec![
        write_table(dir, "levels", cfg.format, &output::level_records(&trace))?,
        write_table(dir, "trajectories", cfg.format, &output::trajectory_records(&trace))?,
        write_table(dir, "ground_state", cfg.format, &output::ground_state_records(&trace))?,
    ];
    let levels: Vec<String> = cfg.levels.iter().map(u32::to_string).collect();
    let mut s = header(cfg, &format!("levels {}", levels.join(",")));
    let _ = writeln!(s, "{:>6}  {:>14}  {:>12}", "level", "lambda0", "drift");
    for r in output::ground_state_records(&trace) {
        let drift = r.drift.map_or("-".to_string(), |d| format!("{d:.3e}"));
        let _ = writeln!(s, "{:>6}  {:>14.6}  {:>12}", r.level, r.lambda0, drift);
    }
    for w in &trace.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    Ok((trace, files, s))
}

/// Maps a failed verify outcome to its error.
pub fn require_pass(outcome: &VerifyOutcome) -> Result<(), CommandError> {
    let failed = outcome.failures().count();
    if failed == 0 {
        Ok(())
    } else {
        Err(CommandError::VerifyFailed { failed, total: outcome.checks.len() })
    }
}
