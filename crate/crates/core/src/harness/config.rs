//! Run configuration: a TOML document (conventionally `*.cfg`).
//!
//! ```toml
//! n = 2
//! alpha = 2.0
//! kinetic_coeff = 0.5
//!
//! [field]
//! family = "eisenstein"
//! p = 3
//! e = 2
//!
//! [potential]
//! kind = "monomial"
//! c = 0.5
//! s = 2.0
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::field::{make_field, Field, FieldSpec};
use crate::model::{ModelError, ModelParams, RadialPotential, ZeroCellConvention, DEFAULT_GRID_CAP};
use crate::spectral::{ConvergenceOptions, SpectralConfig};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl ConfigError {
    fn invalid(field: &str, message: impl Into<String>) -> Self {
        ConfigError::Validation { field: field.into(), message: message.into() }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown output format {other:?}")),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTolerances {
    cluster: Option<f64>,
    radial: Option<f64>,
    shell: Option<f64>,
    residual: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
    format: Option<OutputFormat>,
    eigenvectors: Option<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConverge {
    levels: Option<Vec<u32>>,
    window: Option<f64>,
    ground_state_bound: Option<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVerify {
    seed: Option<u64>,
    samples: Option<usize>,
    pairs: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    n: Option<u32>,
    alpha: Option<f64>,
    kinetic_coeff: Option<f64>,
    zero_cell_convention: Option<ZeroCellConvention>,
    grid_cap: Option<usize>,
    field: Option<FieldSpec>,
    potential: Option<RadialPotential>,
    tolerances: Option<RawTolerances>,
    output: Option<RawOutput>,
    converge: Option<RawConverge>,
    verify: Option<RawVerify>,
}

#[derive(Clone, Debug)]
pub struct VerifySettings {
    pub seed: u64,
    /// Random functions per `(m, k)` for the projection identities.
    pub samples: usize,
    /// Random pairs for character additivity.
    pub pairs: usize,
}

impl Default for VerifySettings {
    fn default() -> Self {
        Self { seed: 0x5eed, samples: 50, pairs: 200 }
    }
}

/// Ranks written as eigenvector files when the config does not list them.
pub const DEFAULT_EIGENVECTOR_COUNT: usize = 16;

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub field_spec: FieldSpec,
    pub field: Field,
    pub n: u32,
    pub alpha: f64,
    pub kinetic_coeff: f64,
    pub potential: RadialPotential,
    pub convention: ZeroCellConvention,
    pub grid_cap: usize,
    pub spectral: SpectralConfig,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
    /// `None` writes the lowest [`DEFAULT_EIGENVECTOR_COUNT`] ranks.
    pub eigenvector_ranks: Option<Vec<usize>>,
    pub levels: Vec<u32>,
    pub window: f64,
    pub ground_state_bound: Option<(f64, f64)>,
    pub verify: VerifySettings,
}

impl RunConfig {
    pub fn model_params(&self) -> ModelParams {
        ModelParams {
            field: self.field.clone(),
            alpha: self.alpha,
            kinetic_coeff: self.kinetic_coeff,
            potential: self.potential.clone(),
            convention: self.convention,
            grid_cap: self.grid_cap,
        }
    }

    pub fn convergence_options(&self) -> ConvergenceOptions {
        ConvergenceOptions { spectral: self.spectral, window: self.window, ground_state_bound: self.ground_state_bound }
    }

    /// Ranks to dump for a spectrum of `len` eigenpairs.
    pub fn eigenvector_ranks(&self, len: usize) -> Vec<usize> {
        match &self.eigenvector_ranks {
            Some(r) => r.iter().copied().filter(|&i| i < len).collect(),
            None => (0..len.min(DEFAULT_EIGENVECTOR_COUNT)).collect(),
        }
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_owned(), source })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_column(text, s.start));
        ConfigError::Parse { line, column, message: e.message().to_string() }
    })?;
    validate(raw)
}

fn tolerance(name: &str, value: Option<f64>, default: f64) -> Result<f64, ConfigError> {
    let v = value.unwrap_or(default);
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(ConfigError::invalid(name, format!("{v} is not in (0, 1)")))
    }
}

fn validate(raw: RawConfig) -> Result<RunConfig, ConfigError> {
    let field_spec = raw.field.ok_or_else(|| ConfigError::invalid("field", "missing"))?;
    let field = make_field(field_spec.clone()).map_err(|e| ConfigError::invalid("field", e.to_string()))?;
    let potential = raw.potential.ok_or_else(|| ConfigError::invalid("potential", "missing"))?;
    potential.validate().map_err(|e| ConfigError::invalid("potential", e.to_string()))?;

    let n = raw.n.ok_or_else(|| ConfigError::invalid("n", "missing"))?;
    if n == 0 {
        return Err(ConfigError::invalid("n", "must be at least 1"));
    }
    let alpha = raw.alpha.ok_or_else(|| ConfigError::invalid("alpha", "missing"))?;
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(ConfigError::invalid("alpha", format!("{alpha} must be > 0")));
    }
    let kinetic_coeff = raw.kinetic_coeff.unwrap_or(1.0);
    if !(kinetic_coeff.is_finite() && kinetic_coeff >= 0.0) {
        return Err(ConfigError::invalid("kinetic_coeff", format!("{kinetic_coeff} must be >= 0")));
    }

    let defaults = SpectralConfig::default();
    let spectral = match raw.tolerances {
        None => defaults,
        Some(t) => SpectralConfig {
            cluster_tol: tolerance("tolerances.cluster", t.cluster, defaults.cluster_tol)?,
            radial_tol: tolerance("tolerances.radial", t.radial, defaults.radial_tol)?,
            shell_tol: tolerance("tolerances.shell", t.shell, defaults.shell_tol)?,
            residual_tol: tolerance("tolerances.residual", t.residual, defaults.residual_tol)?,
        },
    };

    let grid_cap = raw.grid_cap.unwrap_or(DEFAULT_GRID_CAP);
    let converge = raw.converge.unwrap_or(RawConverge { levels: None, window: None, ground_state_bound: None });
    let mut levels = converge.levels.unwrap_or_else(|| vec![n]);
    levels.sort_unstable();
    levels.dedup();
    if levels.is_empty() || levels[0] == 0 {
        return Err(ConfigError::invalid("converge.levels", "levels must be non-empty and >= 1"));
    }
    let q = field.q();
    for &m in levels.iter().chain(std::iter::once(&n)) {
        let size = (q as u128).checked_pow(2 * m);
        if size.is_none_or(|s| s > grid_cap as u128) {
            return Err(ModelError::GridTooLarge { q, n: m, cap: grid_cap }.into());
        }
    }
    let window = converge.window.unwrap_or(0.5);
    if !(window.is_finite() && window > 0.0) {
        return Err(ConfigError::invalid("converge.window", format!("{window} must be > 0")));
    }
    let ground_state_bound = match converge.ground_state_bound {
        Some([lo, hi]) if lo < hi => Some((lo, hi)),
        Some(_) => return Err(ConfigError::invalid("converge.ground_state_bound", "lower bound must be below upper")),
        None => None,
    };

    let output = raw.output.unwrap_or(RawOutput { dir: None, format: None, eigenvectors: None });
    let verify = match raw.verify {
        None => VerifySettings::default(),
        Some(v) => {
            let d = VerifySettings::default();
            VerifySettings {
                seed: v.seed.unwrap_or(d.seed),
                samples: v.samples.unwrap_or(d.samples),
                pairs: v.pairs.unwrap_or(d.pairs),
            }
        }
    };

    Ok(RunConfig {
        field_spec,
        field,
        n,
        alpha,
        kinetic_coeff,
        potential,
        convention: raw.zero_cell_convention.unwrap_or_default(),
        grid_cap,
        spectral,
        out_dir: output.dir.unwrap_or_else(|| PathBuf::from("out")),
        format: output.format.unwrap_or_default(),
        eigenvector_ranks: output.eigenvectors,
        levels,
        window,
        ground_state_bound,
        verify,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const CANONICAL: &str = r#"
n = 2
alpha = 2.0
kinetic_coeff = 0.5

[field]
family = "eisenstein"
p = 3
e = 2

[potential]
kind = "monomial"
c = 0.5
s = 2.0
"#;

    #[test]
    fn canonical_defaults() {
        let c = parse_config(CANONICAL).unwrap();
        assert_eq!(c.field_spec, FieldSpec::eisenstein(3, 2));
        assert_eq!(c.potential, RadialPotential::harmonic(0.5));
        assert_eq!(c.convention, ZeroCellConvention::AverageOfPower);
        assert_eq!(c.spectral, SpectralConfig::default());
        assert_eq!(c.levels, vec![2]);
        assert_eq!(c.format, OutputFormat::Csv);
        assert_eq!(c.eigenvector_ranks(81).len(), DEFAULT_EIGENVECTOR_COUNT);
    }

    #[test]
    fn missing_potential_names_field() {
        let text = CANONICAL.split("[potential]").next().unwrap();
        match parse_config(text) {
            Err(ConfigError::Validation { field, .. }) => assert_eq!(field, "potential"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn oversized_grid() {
        let text = CANONICAL.replace("n = 2", "n = 8");
        assert!(matches!(parse_config(&text), Err(ConfigError::Model(ModelError::GridTooLarge { q: 3, n: 8, .. }))));
    }

    #[test]
    fn parse_error_has_line() {
        let text = CANONICAL.replace("alpha = 2.0", "alpha = = 2.0");
        match parse_config(&text) {
            Err(ConfigError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let text = CANONICAL.replace("kinetic_coeff", "kinetic_coef");
        assert!(matches!(parse_config(&text), Err(ConfigError::Parse { line: 4, .. })));
    }

    #[test]
    fn tolerances_checked() {
        let text = format!("{CANONICAL}\n[tolerances]\ncluster = 2.0\n");
        match parse_config(&text) {
            Err(ConfigError::Validation { field, .. }) => assert_eq!(field, "tolerances.cluster"),
            other => panic!("{other:?}"),
        }
        let text = format!("{CANONICAL}\n[tolerances]\nshell = 1e-12\n");
        assert_eq!(parse_config(&text).unwrap().spectral.shell_tol, 1e-12);
    }

    #[test]
    fn laurent_and_convention() {
        let text = CANONICAL
            .replace("family = \"eisenstein\"\np = 3\ne = 2", "family = \"laurent\"\np = 3\nf = 1")
            .replace("n = 2", "n = 2\nzero_cell_convention = \"power-of-avg\"");
        let c = parse_config(&text).unwrap();
        assert_eq!(c.field_spec, FieldSpec::laurent(3, 1));
        assert_eq!(c.convention, ZeroCellConvention::PowerOfAverage);
    }
}
