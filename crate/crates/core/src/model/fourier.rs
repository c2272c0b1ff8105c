//! The finite Fourier transform `(F_n f)(x) = q^{-n} Σ_y f(y) χ(-xy)` on `X_n`.
//!
//! Kernel phases are exact: `χ(x_i x_j)` is tabulated as an integer numerator
//! over a common denominator `M = p^K`, using bilinearity of `(x, y) ↦ χ(xy)`
//! in the digits of `x` and `y`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::Grid;
use super::ModelError;
use crate::field::CharacterPhase;

pub type GridFunction = DVector<Complex64>;

/// Largest grid for which a dense Fourier matrix is materialized.
pub const DENSE_FOURIER_LIMIT: usize = 4096;

enum PhaseRule {
    /// `φ[k + 2n]` is the numerator of the phase of `β^k`, `k ∈ [-2n, 2n-2]`.
    Eisenstein { beta: Vec<u64> },
    /// Only the `t^{-1}` coefficient of the product matters.
    Laurent,
}

/// Exact kernel `χ(x_i x_j)` on a grid, plus the roots of unity it needs.
pub struct FourierKernel<'g> {
    grid: &'g Grid,
    modulus: u64,
    roots: Vec<Complex64>,
    rule: PhaseRule,
    scale: f64,
    corrupt: Option<(usize, usize)>,
}

impl<'g> FourierKernel<'g> {
    pub fn new(grid: &'g Grid) -> Self {
        let field = grid.field();
        let n = grid.n() as i32;
        let (modulus, rule) = match field.residue_field() {
            Some(_) => (field.p() as u64, PhaseRule::Laurent),
            None => {
                let lowest = -2 * n;
                let phases: Vec<CharacterPhase> =
                    (lowest..=2 * n - 2).map(|k| field.character_phase(&field.monomial(1, k))).collect();
                let modulus = phases.iter().map(|ph| ph.den()).max().unwrap_or(1);
                let modulus = u64::try_from(modulus).expect("phase denominator fits in u64");
                let beta = phases
                    .iter()
                    .map(|ph| (ph.num() * (modulus as u128 / ph.den())) as u64)
                    .collect();
                (modulus, PhaseRule::Eisenstein { beta })
            }
        };
        let roots = (0..modulus)
            .map(|r| CharacterPhase::new(r as u128, modulus as u128).to_complex())
            .collect();
        let scale = (field.q() as f64).powi(-n);
        Self { grid, modulus, roots, rule, scale, corrupt: None }
    }

    pub fn grid(&self) -> &Grid {
        self.grid
    }

    /// Common denominator of all kernel phases.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Test hook: perturbs the phase of a single kernel entry (and its mirror).
    #[doc(hidden)]
    pub fn corrupt_entry(&mut self, i: usize, j: usize) {
        self.corrupt = Some((i, j));
    }

    /// Numerator `r` with `χ(x_i x_j) = exp(2πi r / M)`.
    pub fn phase_numerator(&self, i: usize, j: usize) -> u64 {
        let a = self.grid.digits(i);
        let b = self.grid.digits(j);
        let w = a.len();
        let m = self.modulus;
        let mut acc = match &self.rule {
            PhaseRule::Eisenstein { beta } => {
                // Columns s, t are exponents -n+s, -n+t; the product lands on
                // exponent s+t-2n, stored at beta[s+t].
                let mut acc: u64 = 0;
                for (s, &da) in a.iter().enumerate() {
                    if da == 0 {
                        continue;
                    }
                    for (t, &db) in b.iter().enumerate() {
                        let ph = beta[s + t];
                        if db != 0 && ph != 0 {
                            acc = (acc + (da as u64 * db as u64 % m) * ph) % m;
                        }
                    }
                }
                acc
            }
            PhaseRule::Laurent => {
                let k = self.grid.field().residue_field().expect("laurent field");
                // exponents (-n+s) + (-n+t) = -1  <=>  t = 2n - 1 - s
                let mut c = 0u32;
                for s in 0..w {
                    let t = w - 1 - s;
                    c = k.add(c, k.mul(a[s], b[t]));
                }
                k.trace(c) as u64
            }
        };
        if let Some((ci, cj)) = self.corrupt {
            if (i, j) == (ci, cj) || (i, j) == (cj, ci) {
                acc = (acc + 1) % m;
            }
        }
        acc
    }

    pub fn phase(&self, i: usize, j: usize) -> CharacterPhase {
        CharacterPhase::new(self.phase_numerator(i, j) as u128, self.modulus as u128)
    }

    /// `χ(x_i x_j)`.
    pub fn chi(&self, i: usize, j: usize) -> Complex64 {
        self.roots[self.phase_numerator(i, j) as usize]
    }

    /// Entry `(i, j)` of `F_n`: `q^{-n} χ(-x_i x_j)`.
    pub fn forward_entry(&self, i: usize, j: usize) -> Complex64 {
        self.chi(i, j).conj() * self.scale
    }

    /// Applies `F_n` (or `F_n^{-1}` when `inverse`). Each output entry is a
    /// sequential sum over `j` in index order, so the parallel row split does
    /// not change any result.
    pub fn apply(&self, f: &GridFunction, inverse: bool) -> GridFunction {
        assert_eq!(f.len(), self.grid.len(), "grid function length mismatch");
        let out: Vec<Complex64> = (0..self.grid.len())
            .into_par_iter()
            .map(|i| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, fj) in f.iter().enumerate() {
                    let c = self.chi(i, j);
                    acc += if inverse { c * fj } else { c.conj() * fj };
                }
                acc * self.scale
            })
            .collect();
        DVector::from_vec(out)
    }

    pub fn matrix(&self) -> Result<DMatrix<Complex64>, ModelError> {
        let len = self.grid.len();
        if len > DENSE_FOURIER_LIMIT {
            return Err(ModelError::TooLargeForDense { len, limit: DENSE_FOURIER_LIMIT });
        }
        Ok(DMatrix::from_fn(len, len, |i, j| self.forward_entry(i, j)))
    }
}

pub fn fourier_apply(grid: &Grid, f: &GridFunction) -> GridFunction {
    FourierKernel::new(grid).apply(f, false)
}

pub fn inverse_fourier_apply(grid: &Grid, f: &GridFunction) -> GridFunction {
    FourierKernel::new(grid).apply(f, true)
}

/// Dense unitary matrix of `F_n` (rows indexed by the output point).
pub fn fourier_matrix(grid: &Grid) -> Result<DMatrix<Complex64>, ModelError> {
    FourierKernel::new(grid).matrix()
}
