//! Finite-level cutoff `C_k` and smoothing `S_k` projections, and the lift of
//! grid functions from one level to the next.

use num_complex::Complex64;

use super::fourier::GridFunction;
use super::grid::{Grid, Shell};

/// `C_k`: keeps values on `|x| <= q^k`, zeroes the rest.
pub fn project_cutoff(grid: &Grid, k: i32, f: &GridFunction) -> GridFunction {
    assert_eq!(f.len(), grid.len(), "grid function length mismatch");
    GridFunction::from_fn(grid.len(), |i, _| match grid.shell(i) {
        Shell::Sphere(s) if s > k => Complex64::new(0.0, 0.0),
        _ => f[i],
    })
}

/// `S_k`: replaces each value by its mean over the coset `x + β^k O`.
///
/// Cosets are contiguous index blocks because carries only move toward
/// higher exponents. Requires `-n <= k <= n`; `k = n` is the identity.
pub fn project_smooth(grid: &Grid, k: i32, f: &GridFunction) -> GridFunction {
    assert_eq!(f.len(), grid.len(), "grid function length mismatch");
    let block = grid.coset_block(k);
    let mut out = f.clone();
    for chunk in out.as_mut_slice().chunks_mut(block) {
        let mean = chunk.iter().sum::<Complex64>() / block as f64;
        chunk.iter_mut().for_each(|v| *v = mean);
    }
    out
}

/// Lifts a level-`n` function to level `n + 1`: constant on refined cells,
/// zero on the new outer shell, rescaled to unit Euclidean norm.
pub fn embed_next_level(coarse: &Grid, fine: &Grid, f: &GridFunction) -> GridFunction {
    assert_eq!(fine.n(), coarse.n() + 1, "embedding goes one level up");
    assert_eq!(f.len(), coarse.len());
    let mut out = GridFunction::zeros(fine.len());
    // Each coarse cell x + β^n O splits into the q fine points whose digit at
    // exponent n varies.
    let q = fine.field().q() as usize;
    for i in 0..coarse.len() {
        let base = coarse.refine_index(i);
        for t in 0..q {
            out[base + t] = f[i];
        }
    }
    let norm = out.norm();
    if norm > 0.0 {
        out /= Complex64::new(norm, 0.0);
    }
    out
}
