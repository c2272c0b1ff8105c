//! Local fields supported by the finite models: `Q_p`, tamely ramified
//! Eisenstein extensions `Q_p[β]` with `β^e = p`, and Laurent series fields
//! `F_q((t))`.

mod character;
mod element;
mod residue;

pub use character::CharacterPhase;
pub use element::FieldElement;
pub use residue::{default_modulus, ResidueField};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NonPrimeP(u32),
    #[error("wild ramification: p = {p} divides e = {e}")]
    WildRamification { p: u32, e: u32 },
    #[error("reducible modulus: {0}")]
    ReducibleModulus(String),
    #[error("invalid extension degree: {0}")]
    InvalidDegree(String),
    #[error("field too large: {0}")]
    TooLarge(String),
    #[error("digit {digit} out of range for residue field of size {q}")]
    DigitOutOfRange { digit: u32, q: u32 },
    #[error("cannot parse field element: {0}")]
    Parse(String),
}

/// Which local field to build.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FieldSpec {
    /// `Q_p[β]`, `β^e = p`; `e = 1` is `Q_p` itself.
    Eisenstein { p: u32, e: u32 },
    /// `F_q((t))` with `F_q = F_p[x]/(modulus)`, `q = p^f`. Coefficients are
    /// listed lowest degree first; `None` picks the first monic irreducible.
    Laurent {
        p: u32,
        f: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        modulus: Option<Vec<u32>>,
    },
}

impl FieldSpec {
    pub fn eisenstein(p: u32, e: u32) -> Self {
        FieldSpec::Eisenstein { p, e }
    }

    pub fn laurent(p: u32, f: u32) -> Self {
        FieldSpec::Laurent { p, f, modulus: None }
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Arith {
    Eisenstein,
    Laurent(ResidueField),
}

/// A validated local field with its structure constants.
#[derive(Clone, Debug)]
pub struct Field {
    spec: FieldSpec,
    p: u32,
    q: u32,
    e: u32,
    f: u32,
    d: u32,
    arith: Arith,
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u32;
    while i.saturating_mul(i) <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// Validates `spec` and computes `q`, `e`, `f` and the exponent of the different.
pub fn make_field(spec: FieldSpec) -> Result<Field, FieldError> {
    match &spec {
        &FieldSpec::Eisenstein { p, e } => {
            if !is_prime(p) {
                return Err(FieldError::NonPrimeP(p));
            }
            if e == 0 {
                return Err(FieldError::InvalidDegree("ramification index must be >= 1".into()));
            }
            if e % p == 0 {
                return Err(FieldError::WildRamification { p, e });
            }
            // Tame: the different is β^{e-1}.
            Ok(Field { p, q: p, e, f: 1, d: e - 1, arith: Arith::Eisenstein, spec })
        }
        FieldSpec::Laurent { p, f, modulus } => {
            let (p, f) = (*p, *f);
            if !is_prime(p) {
                return Err(FieldError::NonPrimeP(p));
            }
            if f == 0 {
                return Err(FieldError::InvalidDegree("inertia degree must be >= 1".into()));
            }
            let modulus = match modulus {
                Some(m) => m.clone(),
                None => default_modulus(p, f),
            };
            let residue = ResidueField::new(p, &modulus)?;
            if residue.degree() != f {
                return Err(FieldError::InvalidDegree(format!(
                    "modulus has degree {}, expected {f}",
                    residue.degree()
                )));
            }
            let q = residue.size();
            let spec = FieldSpec::Laurent { p, f, modulus: Some(modulus) };
            Ok(Field { p, q, e: 1, f, d: 0, arith: Arith::Laurent(residue), spec })
        }
    }
}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Self, FieldError> {
        make_field(spec)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Size of the residue field `O/P`.
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    /// Exponent of the different of `K` over its prime subfield.
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn is_laurent(&self) -> bool {
        matches!(self.arith, Arith::Laurent(_))
    }

    pub fn residue_field(&self) -> Option<&ResidueField> {
        match &self.arith {
            Arith::Laurent(r) => Some(r),
            Arith::Eisenstein => None,
        }
    }

    pub(crate) fn arith(&self) -> &Arith {
        &self.arith
    }

    pub fn describe(&self) -> String {
        match &self.spec {
            FieldSpec::Eisenstein { p, e: 1 } => format!("Q_{p}"),
            FieldSpec::Eisenstein { p, e } => format!("Q_{p}[{p}^(1/{e})]"),
            FieldSpec::Laurent { p, f, .. } => format!("F_{}((t))", p.pow(*f)),
        }
    }
}
