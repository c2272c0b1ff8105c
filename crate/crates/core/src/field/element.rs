//! Exact finite β-adic expansions and their ring operations.

use std::fmt;

use super::{Arith, Field, FieldError};

/// `Σ digits[k] · β^(lo + k)`, stored in canonical form: either empty (zero)
/// or with nonzero first and last digits.
///
/// Digits are integers `0..p` for Eisenstein fields and residue-field codes
/// `0..q` for Laurent fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FieldElement {
    lo: i32,
    digits: Vec<u32>,
}

impl FieldElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    /// Lowest stored exponent (0 for the zero element).
    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// Exponent just past the highest stored digit.
    pub fn hi(&self) -> i32 {
        self.lo + self.digits.len() as i32
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// Digit at exponent `i` (zero outside the stored range).
    pub fn digit(&self, i: i32) -> u32 {
        if i < self.lo || i >= self.hi() {
            0
        } else {
            self.digits[(i - self.lo) as usize]
        }
    }

    /// Nonzero `(exponent, digit)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, u32)> + '_ {
        self.digits
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(move |(k, &d)| (self.lo + k as i32, d))
    }

    /// `None` for zero, otherwise the exponent of the leading digit.
    pub fn valuation(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.lo)
    }

    fn canonical(lo: i32, mut digits: Vec<u32>) -> Self {
        while digits.last() == Some(&0) {
            digits.pop();
        }
        let lead = digits.iter().position(|&d| d != 0);
        match lead {
            None => Self::zero(),
            Some(k) => {
                digits.drain(..k);
                Self { lo: lo + k as i32, digits }
            }
        }
    }

    /// Drops every digit at exponent `>= prec`, i.e. reduces modulo `β^prec O`.
    pub fn truncate(&self, prec: i32) -> Self {
        if self.hi() <= prec {
            return self.clone();
        }
        if self.lo >= prec {
            return Self::zero();
        }
        Self::canonical(self.lo, self.digits[..(prec - self.lo) as usize].to_vec())
    }

    /// Multiplication by `β^k`.
    pub fn shift(&self, k: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self { lo: self.lo + k, digits: self.digits.clone() }
    }
}

impl fmt::Display for FieldElement {
    /// `exp:digit` pairs, e.g. `-2:1,0:2`; zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, d) in self.terms() {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{i}:{d}")?;
            first = false;
        }
        Ok(())
    }
}

/// Carry-normalizes a buffer of raw Eisenstein coefficients starting at
/// exponent `lo`, using `p·β^i = β^(i+e)`. With `prec = Some(n)` everything
/// at exponent `>= n` is discarded, which makes negative carries terminate.
fn eisenstein_normalize(p: u32, e: u32, lo: i32, mut buf: Vec<i64>, prec: Option<i32>) -> FieldElement {
    let p = p as i64;
    let e = e as usize;
    let mut i = 0usize;
    while i < buf.len() {
        if let Some(n) = prec {
            if lo + i as i32 >= n {
                buf.truncate(i);
                break;
            }
        }
        let c = buf[i];
        assert!(
            c >= 0 || prec.is_some(),
            "exact normalization of a negative expansion does not terminate"
        );
        if !(0..p).contains(&c) {
            let carry = c.div_euclid(p);
            buf[i] = c.rem_euclid(p);
            if buf.len() <= i + e {
                buf.resize(i + e + 1, 0);
            }
            buf[i + e] += carry;
        }
        i += 1;
    }
    FieldElement::canonical(lo, buf.into_iter().map(|c| c as u32).collect())
}

impl Field {
    pub fn zero(&self) -> FieldElement {
        FieldElement::zero()
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { lo: 0, digits: vec![1] }
    }

    /// `digit · β^exp`.
    pub fn monomial(&self, digit: u32, exp: i32) -> FieldElement {
        assert!(digit < self.q(), "digit {digit} out of range");
        FieldElement::canonical(exp, vec![digit])
    }

    pub fn uniformizer(&self) -> FieldElement {
        self.monomial(1, 1)
    }

    /// Builds `Σ digits[k] β^(lo+k)` after checking every digit is in range.
    pub fn element(&self, lo: i32, digits: &[u32]) -> Result<FieldElement, FieldError> {
        if let Some(&digit) = digits.iter().find(|&&d| d >= self.q()) {
            return Err(FieldError::DigitOutOfRange { digit, q: self.q() });
        }
        Ok(FieldElement::canonical(lo, digits.to_vec()))
    }

    /// The integer `n` as an element (`n >= 0`).
    pub fn integer(&self, n: u64) -> FieldElement {
        match self.arith() {
            Arith::Eisenstein => eisenstein_normalize(self.p(), self.e(), 0, vec![n as i64], None),
            Arith::Laurent(_) => {
                let c = (n % self.p() as u64) as u32;
                FieldElement::canonical(0, vec![c])
            }
        }
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        if x.is_zero() {
            return y.clone();
        }
        if y.is_zero() {
            return x.clone();
        }
        let lo = x.lo.min(y.lo);
        let hi = x.hi().max(y.hi());
        match self.arith() {
            Arith::Eisenstein => {
                let buf = (lo..hi).map(|i| x.digit(i) as i64 + y.digit(i) as i64).collect();
                eisenstein_normalize(self.p(), self.e(), lo, buf, None)
            }
            Arith::Laurent(k) => {
                let digits = (lo..hi).map(|i| k.add(x.digit(i), y.digit(i))).collect();
                FieldElement::canonical(lo, digits)
            }
        }
    }

    /// Representative of `-x` modulo `β^prec O`.
    ///
    /// In characteristic zero `-x` has an infinite expansion, so the result
    /// is only determined up to that precision.
    pub fn neg(&self, x: &FieldElement, prec: i32) -> FieldElement {
        if x.is_zero() {
            return FieldElement::zero();
        }
        match self.arith() {
            Arith::Eisenstein => {
                let buf = x.digits.iter().map(|&d| -(d as i64)).collect();
                eisenstein_normalize(self.p(), self.e(), x.lo, buf, Some(prec))
            }
            Arith::Laurent(k) => {
                let digits = x.digits.iter().map(|&d| k.neg(d)).collect();
                FieldElement::canonical(x.lo, digits).truncate(prec)
            }
        }
    }

    /// Representative of `x - y` modulo `β^prec O`.
    pub fn sub(&self, x: &FieldElement, y: &FieldElement, prec: i32) -> FieldElement {
        if y.is_zero() {
            return x.truncate(prec);
        }
        let lo = x.lo.min(y.lo);
        let hi = x.hi().max(y.hi());
        match self.arith() {
            Arith::Eisenstein => {
                let buf = (lo..hi).map(|i| x.digit(i) as i64 - y.digit(i) as i64).collect();
                eisenstein_normalize(self.p(), self.e(), lo, buf, Some(prec))
            }
            Arith::Laurent(k) => {
                let digits = (lo..hi).map(|i| k.sub(x.digit(i), y.digit(i))).collect();
                FieldElement::canonical(lo, digits).truncate(prec)
            }
        }
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        if x.is_zero() || y.is_zero() {
            return FieldElement::zero();
        }
        let lo = x.lo + y.lo;
        let len = x.digits.len() + y.digits.len() - 1;
        match self.arith() {
            Arith::Eisenstein => {
                let mut buf = vec![0i64; len];
                for (i, &a) in x.digits.iter().enumerate() {
                    for (j, &b) in y.digits.iter().enumerate() {
                        buf[i + j] += a as i64 * b as i64;
                    }
                }
                eisenstein_normalize(self.p(), self.e(), lo, buf, None)
            }
            Arith::Laurent(k) => {
                let mut buf = vec![0u32; len];
                for (i, &a) in x.digits.iter().enumerate() {
                    for (j, &b) in y.digits.iter().enumerate() {
                        buf[i + j] = k.add(buf[i + j], k.mul(a, b));
                    }
                }
                FieldElement::canonical(lo, buf)
            }
        }
    }

    /// `|x| = q^(-valuation)`, and `0` for zero.
    pub fn abs_value(&self, x: &FieldElement) -> f64 {
        match x.valuation() {
            None => 0.0,
            Some(v) => (self.q() as f64).powi(-v),
        }
    }

    pub fn valuation(&self, x: &FieldElement) -> Option<i32> {
        x.valuation()
    }

    /// Parses the `exp:digit,exp:digit` text form (`0` or empty for zero).
    pub fn parse_element(&self, text: &str) -> Result<FieldElement, FieldError> {
        let text = text.trim();
        if text.is_empty() || text == "0" {
            return Ok(FieldElement::zero());
        }
        let mut terms = Vec::new();
        for part in text.split(',') {
            let (exp, digit) = part
                .split_once(':')
                .ok_or_else(|| FieldError::Parse(format!("expected exp:digit, got {part:?}")))?;
            let exp: i32 = exp.trim().parse().map_err(|_| FieldError::Parse(format!("bad exponent {exp:?}")))?;
            let digit: u32 = digit.trim().parse().map_err(|_| FieldError::Parse(format!("bad digit {digit:?}")))?;
            if digit >= self.q() {
                return Err(FieldError::DigitOutOfRange { digit, q: self.q() });
            }
            terms.push((exp, digit));
        }
        terms.sort_unstable();
        if terms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(FieldError::Parse(format!("repeated exponent in {text:?}")));
        }
        let lo = terms[0].0;
        let hi = terms.last().unwrap().0;
        let mut digits = vec![0; (hi - lo + 1) as usize];
        for (exp, d) in terms {
            digits[(exp - lo) as usize] = d;
        }
        Ok(FieldElement::canonical(lo, digits))
    }
}
