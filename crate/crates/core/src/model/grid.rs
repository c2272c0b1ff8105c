//! The finite grid `X_n`: canonical representatives of `G_n = B_n / B_{-n}`.

use std::collections::BTreeMap;
use std::fmt;

use crate::field::{Field, FieldElement};

use super::ModelError;

/// Default cap on `q^{2n}`.
pub const DEFAULT_GRID_CAP: usize = 1 << 20;

/// Sphere `|x| = q^k`, or the cell of zero (`|x| <= q^{-n}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Shell {
    Zero,
    Sphere(i32),
}

impl serde::Serialize for Shell {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Shell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shell::Zero => f.write_str("zero"),
            Shell::Sphere(k) => write!(f, "{k}"),
        }
    }
}

/// Points `Σ_{i=-n}^{n-1} a_i β^i` in lexicographic order of `(a_{-n}, …, a_{n-1})`.
///
/// Row `r` of the digit table holds `a_{-n+j}` at column `j`, so the index of a
/// point is its digit tuple read as a base-`q` number, most significant first.
#[derive(Clone, Debug)]
pub struct Grid {
    field: Field,
    n: u32,
    len: usize,
    digits: Vec<u32>,
    shells: Vec<Shell>,
}

pub fn build_grid(field: &Field, n: u32) -> Result<Grid, ModelError> {
    build_grid_with_cap(field, n, DEFAULT_GRID_CAP)
}

pub fn build_grid_with_cap(field: &Field, n: u32, cap: usize) -> Result<Grid, ModelError> {
    if n == 0 {
        return Err(ModelError::InvalidParameter("grid level n must be >= 1".into()));
    }
    let q = field.q() as u128;
    let size = q.checked_pow(2 * n).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(ModelError::GridTooLarge { q: field.q(), n, cap });
    }
    let len = size as usize;
    let width = 2 * n as usize;
    let mut digits = vec![0u32; len * width];
    let mut shells = Vec::with_capacity(len);
    for idx in 0..len {
        let row = &mut digits[idx * width..(idx + 1) * width];
        let mut c = idx;
        for slot in row.iter_mut().rev() {
            *slot = (c % q as usize) as u32;
            c /= q as usize;
        }
        let shell = match row.iter().position(|&d| d != 0) {
            None => Shell::Zero,
            // leading digit at exponent -n + j gives |x| = q^{n-j}
            Some(j) => Shell::Sphere(n as i32 - j as i32),
        };
        shells.push(shell);
    }
    Ok(Grid { field: field.clone(), n, len, digits, shells })
}

impl Grid {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Haar mass of one cell, `q^{-n}`.
    pub fn mass(&self) -> f64 {
        (self.field.q() as f64).powi(-(self.n as i32))
    }

    pub fn total_mass(&self) -> f64 {
        self.mass() * self.len as f64
    }

    fn width(&self) -> usize {
        2 * self.n as usize
    }

    /// Digits `a_{-n}, …, a_{n-1}` of point `idx`.
    pub fn digits(&self, idx: usize) -> &[u32] {
        let w = self.width();
        &self.digits[idx * w..(idx + 1) * w]
    }

    pub fn point(&self, idx: usize) -> FieldElement {
        self.field
            .element(-(self.n as i32), self.digits(idx))
            .expect("grid digits are in range")
    }

    pub fn shell(&self, idx: usize) -> Shell {
        self.shells[idx]
    }

    pub fn shells(&self) -> &[Shell] {
        &self.shells
    }

    pub fn abs_value(&self, idx: usize) -> f64 {
        match self.shells[idx] {
            Shell::Zero => 0.0,
            Shell::Sphere(k) => (self.field.q() as f64).powi(k),
        }
    }

    pub fn zero_index(&self) -> usize {
        0
    }

    /// Index of the class of `x` modulo `β^n O`, or `None` when `|x| > q^n`.
    pub fn index_of(&self, x: &FieldElement) -> Option<usize> {
        let n = self.n as i32;
        if let Some(v) = x.valuation() {
            if v < -n {
                return None;
            }
        }
        let q = self.field.q() as usize;
        Some((-n..n).fold(0usize, |acc, i| acc * q + x.digit(i) as usize))
    }

    fn index_from_digits(&self, digits: &[u32]) -> usize {
        let q = self.field.q() as usize;
        digits.iter().fold(0usize, |acc, &d| acc * q + d as usize)
    }

    /// Index of `x_i - x_j` in `G_n`, computed digit-wise with borrows.
    pub fn sub_index(&self, i: usize, j: usize) -> usize {
        let a = self.digits(i);
        let b = self.digits(j);
        let w = self.width();
        match self.field.residue_field() {
            Some(k) => {
                let mut acc = 0usize;
                let q = self.field.q() as usize;
                for t in 0..w {
                    acc = acc * q + k.sub(a[t], b[t]) as usize;
                }
                acc
            }
            None => {
                // Column t is exponent -n + t; borrows move toward higher
                // exponents, i.e. from column t to column t + e.
                let p = self.field.p() as i64;
                let e = self.field.e() as usize;
                let mut buf = [0i64; 64];
                let buf = &mut buf[..w];
                for t in 0..w {
                    buf[t] = a[t] as i64 - b[t] as i64;
                }
                for t in 0..w {
                    if buf[t] < 0 {
                        buf[t] += p;
                        if t + e < w {
                            buf[t + e] -= 1;
                        }
                    }
                }
                let q = self.field.q() as usize;
                buf.iter().fold(0usize, |acc, &d| acc * q + d as usize)
            }
        }
    }

    /// Index of `-x_i` in `G_n`.
    pub fn neg_index(&self, i: usize) -> usize {
        self.sub_index(self.zero_index(), i)
    }

    /// Sizes of all shells present, keyed by shell.
    pub fn shell_sizes(&self) -> BTreeMap<Shell, usize> {
        let mut out = BTreeMap::new();
        for &s in &self.shells {
            *out.entry(s).or_insert(0) += 1;
        }
        out
    }

    /// Shells in increasing order: `Zero, -(n-1), …, n`.
    pub fn shell_list(&self) -> Vec<Shell> {
        let n = self.n as i32;
        std::iter::once(Shell::Zero).chain((-(n - 1)..=n).map(Shell::Sphere)).collect()
    }

    /// Number of consecutive indices sharing the digits at exponents `< k`,
    /// i.e. the size of a coset `x + β^k O` inside the grid (`-n <= k <= n`).
    pub fn coset_block(&self, k: i32) -> usize {
        let n = self.n as i32;
        assert!((-n..=n).contains(&k), "coset level {k} outside -{n}..={n}");
        (self.field.q() as usize).pow((n - k) as u32)
    }

    /// Lifts `idx` at this level to the matching point at level `n + 1`
    /// (the representative with a zero digit at exponent `n`).
    pub fn refine_index(&self, idx: usize) -> usize {
        let mut d = Vec::with_capacity(self.width() + 2);
        d.push(0);
        d.extend_from_slice(self.digits(idx));
        d.push(0);
        self.index_from_digits(&d)
    }
}
