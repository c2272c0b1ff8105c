//! Radial potentials, zero-cell averages, and the position diagonals of `Q_n^α` and `V_n`.

use serde::{Deserialize, Serialize};

use super::grid::{Grid, Shell};
use super::ModelError;

/// `v(x) = w(|x|)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RadialPotential {
    /// `c · |x|^s`
    Monomial { c: f64, s: f64 },
    /// `w(q^k)` for consecutive shells `k`; `w0` is the value at 0 and on
    /// every radius below the table. Radii above the table reuse the last value.
    Table { w0: f64, values: Vec<(i32, f64)> },
}

/// How the zero cell of the kinetic and potential diagonals is filled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroCellConvention {
    /// `ave(|·|^α, n, 0)`, the same averaging used for `V_n`.
    #[default]
    #[serde(rename = "avg-of-power")]
    AverageOfPower,
    /// `ave(|·|, n, 0)^α`.
    #[serde(rename = "power-of-avg")]
    PowerOfAverage,
    /// Both diagonals sampled at the point 0: `|0|^α = 0` and `v(0)`.
    #[serde(rename = "point-value")]
    PointValue,
}

impl std::str::FromStr for ZeroCellConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "avg-of-power" => Ok(Self::AverageOfPower),
            "power-of-avg" => Ok(Self::PowerOfAverage),
            "point-value" => Ok(Self::PointValue),
            other => Err(format!("unknown zero-cell convention {other:?}")),
        }
    }
}

impl std::fmt::Display for ZeroCellConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::AverageOfPower => "avg-of-power",
            Self::PowerOfAverage => "power-of-avg",
            Self::PointValue => "point-value",
        })
    }
}

impl RadialPotential {
    pub fn harmonic(c: f64) -> Self {
        RadialPotential::Monomial { c, s: 2.0 }
    }

    /// Checks the standing assumptions and returns non-fatal warnings.
    pub fn validate(&self) -> Result<Vec<String>, ModelError> {
        match self {
            RadialPotential::Monomial { c, s } => {
                if !(c.is_finite() && *c >= 0.0) {
                    return Err(ModelError::InvalidParameter(format!("potential coefficient c = {c} must be >= 0")));
                }
                if !(s.is_finite() && *s > 0.0) {
                    return Err(ModelError::InvalidParameter(format!("potential exponent s = {s} must be > 0")));
                }
                Ok(if *c == 0.0 {
                    vec!["potential is identically zero; the model is not confining".into()]
                } else {
                    Vec::new()
                })
            }
            RadialPotential::Table { w0, values } => {
                if values.is_empty() {
                    return Err(ModelError::InvalidParameter("table potential has no entries".into()));
                }
                if values.windows(2).any(|w| w[1].0 != w[0].0 + 1) {
                    return Err(ModelError::InvalidParameter(
                        "table potential shells must be consecutive and increasing".into(),
                    ));
                }
                if std::iter::once(*w0).chain(values.iter().map(|v| v.1)).any(|v| !(v.is_finite() && v >= 0.0)) {
                    return Err(ModelError::InvalidParameter("table potential values must be finite and >= 0".into()));
                }
                let last = values.last().unwrap().1;
                let max = values.iter().map(|v| v.1).fold(*w0, f64::max);
                let mut warnings = Vec::new();
                if last >= max {
                    warnings.push(format!(
                        "table potential attains its maximum {max} at the largest radius and stays constant beyond it; not confining"
                    ));
                } else {
                    warnings.push(format!(
                        "table potential decreases toward its largest radius (last {last} < max {max}); not confining"
                    ));
                }
                Ok(warnings)
            }
        }
    }

    /// `w(q^k)`.
    pub fn at_shell(&self, q: u32, k: i32) -> f64 {
        match self {
            RadialPotential::Monomial { c, s } => c * (q as f64).powf(k as f64 * s),
            RadialPotential::Table { w0, values } => {
                let first = values[0].0;
                let last = values.last().unwrap().0;
                if k < first {
                    *w0
                } else if k > last {
                    values.last().unwrap().1
                } else {
                    values[(k - first) as usize].1
                }
            }
        }
    }

    pub fn at_zero(&self) -> f64 {
        match self {
            RadialPotential::Monomial { .. } => 0.0,
            RadialPotential::Table { w0, .. } => *w0,
        }
    }
}

/// `ave(v, n, 0)`: mean of `v` over the ball `|x| <= q^{-n}`.
///
/// The shell `|x| = q^{-j}` carries the fraction `q^n (q^{-j} - q^{-j-1})` of
/// the ball's mass.
pub fn zero_cell_average(q: u32, n: i32, potential: &RadialPotential) -> f64 {
    let qf = q as f64;
    match potential {
        RadialPotential::Monomial { c, s } => {
            c * qf.powf(-(n as f64) * s) * (1.0 - 1.0 / qf) / (1.0 - qf.powf(-(s + 1.0)))
        }
        RadialPotential::Table { w0, values } => {
            let first = values[0].0;
            let mut sum = 0.0;
            // Tabulated shells below the ball radius: j >= n with -j >= first.
            let mut j = n;
            while -j >= first {
                let mass = qf.powi(n - j) * (1.0 - 1.0 / qf);
                sum += potential.at_shell(q, -j) * mass;
                j += 1;
            }
            // Constant tail on |x| <= q^{-j}: total mass fraction q^{n-j}.
            sum + w0 * qf.powi(n - j)
        }
    }
}

/// Kinetic diagonal `|ξ|^α` on the grid, zero cell per `convention`.
pub fn kinetic_diagonal(grid: &Grid, alpha: f64, convention: ZeroCellConvention) -> Vec<f64> {
    let q = grid.field().q();
    let n = grid.n() as i32;
    let zero = match convention {
        ZeroCellConvention::AverageOfPower => {
            zero_cell_average(q, n, &RadialPotential::Monomial { c: 1.0, s: alpha })
        }
        ZeroCellConvention::PowerOfAverage => {
            zero_cell_average(q, n, &RadialPotential::Monomial { c: 1.0, s: 1.0 }).powf(alpha)
        }
        ZeroCellConvention::PointValue => 0.0,
    };
    position_diagonal(grid, |k| (q as f64).powf(k as f64 * alpha), zero)
}

/// Potential diagonal `v(x)`. The zero cell gets `ave(v, n, 0)`, or `v(0)`
/// under [`ZeroCellConvention::PointValue`].
pub fn potential_diagonal(grid: &Grid, potential: &RadialPotential, convention: ZeroCellConvention) -> Vec<f64> {
    let q = grid.field().q();
    let zero = match convention {
        ZeroCellConvention::PointValue => potential.at_zero(),
        _ => zero_cell_average(q, grid.n() as i32, potential),
    };
    position_diagonal(grid, |k| potential.at_shell(q, k), zero)
}

fn position_diagonal(grid: &Grid, shell_value: impl Fn(i32) -> f64, zero: f64) -> Vec<f64> {
    grid.shells()
        .iter()
        .map(|s| match *s {
            Shell::Zero => zero,
            Shell::Sphere(k) => shell_value(k),
        })
        .collect()
}
