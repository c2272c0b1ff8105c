//! The rank-zero additive character, evaluated as an exact rational phase.

use std::fmt;
use std::ops::{Add, Neg};

use num_complex::Complex64;

use super::{Arith, Field, FieldElement};

/// `num / den` in `[0, 1)`, always reduced; `den` is a power of `p`.
/// The character value is `exp(2πi · num/den)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CharacterPhase {
    num: u128,
    den: u128,
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl CharacterPhase {
    pub const ZERO: Self = Self { num: 0, den: 1 };

    /// `num / den` reduced modulo 1.
    pub fn new(num: u128, den: u128) -> Self {
        assert!(den > 0, "zero denominator");
        let num = num % den;
        if num == 0 {
            return Self::ZERO;
        }
        let g = gcd(num, den);
        Self { num: num / g, den: den / g }
    }

    pub fn num(&self) -> u128 {
        self.num
    }

    pub fn den(&self) -> u128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `exp(2πi r)`.
    pub fn to_complex(&self) -> Complex64 {
        if self.num == 0 {
            return Complex64::new(1.0, 0.0);
        }
        Complex64::from_polar(1.0, std::f64::consts::TAU * self.as_f64())
    }
}

impl Add for CharacterPhase {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        // Both denominators are powers of the same prime, so one divides the other.
        let (big, small) = if self.den >= rhs.den { (self, rhs) } else { (rhs, self) };
        let scale = big.den / small.den;
        Self::new(big.num + small.num * scale, big.den)
    }
}

impl Neg for CharacterPhase {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(self.den - self.num, self.den)
    }
}

impl fmt::Display for CharacterPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Field {
    /// Exact phase of `χ(x)`.
    ///
    /// Characteristic zero: `χ(x) = χ_p(Tr(β^{-d} x))` with
    /// `Tr(Σ a_j β^j) = e · Σ_{e | j} a_j p^{j/e}` (the other powers of `β`
    /// have trace zero for `β^e = p`); only terms with `j < 0` survive the
    /// fractional part.
    /// Positive characteristic: `χ(x) = exp(2πi Tr(x_{-1}) / p)`.
    pub fn character_phase(&self, x: &FieldElement) -> CharacterPhase {
        let p = self.p() as u128;
        match self.arith() {
            Arith::Eisenstein => {
                let e = self.e() as i32;
                let shift = -(self.d() as i32);
                // Exponents of β^{-d}x are j = i + shift.
                let lowest = x.lo() + shift;
                if x.is_zero() || lowest >= 0 {
                    return CharacterPhase::ZERO;
                }
                let depth = ((-lowest) as u32).div_ceil(self.e());
                let den = p.checked_pow(depth).expect("character denominator overflows u128");
                let mut num: u128 = 0;
                for (i, a) in x.terms() {
                    let j = i + shift;
                    if j >= 0 {
                        break;
                    }
                    if j % e != 0 {
                        continue;
                    }
                    let m = (-j / e) as u32;
                    let weight = p.pow(depth - m);
                    num = (num + (self.e() as u128 * a as u128 % den) * weight) % den;
                }
                CharacterPhase::new(num, den)
            }
            Arith::Laurent(k) => CharacterPhase::new(k.trace(x.digit(-1)) as u128, p),
        }
    }

    pub fn character(&self, x: &FieldElement) -> Complex64 {
        self.character_phase(x).to_complex()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, FieldSpec};

    #[test]
    fn phase_arithmetic() {
        let a = CharacterPhase::new(2, 9);
        let b = CharacterPhase::new(2, 3);
        assert_eq!(a + b, CharacterPhase::new(8, 9));
        assert_eq!(b + b + b, CharacterPhase::ZERO);
        assert_eq!(-a, CharacterPhase::new(7, 9));
        assert_eq!(a + (-a), CharacterPhase::ZERO);
        assert_eq!(CharacterPhase::new(3, 9), CharacterPhase::new(1, 3));
    }

    #[test]
    fn integers_have_trivial_character() {
        let k = make_field(FieldSpec::eisenstein(3, 2)).unwrap();
        let x = k.parse_element("0:2,1:1,3:2").unwrap();
        assert!(k.character_phase(&x).is_zero());
        assert_eq!(k.character(&k.zero()), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn q3_sqrt3_phases() {
        let k = make_field(FieldSpec::eisenstein(3, 2)).unwrap();
        // β^{-1}·β^{-2} = β^{-3}, odd exponent: trace zero.
        assert!(k.character_phase(&k.monomial(1, -2)).is_zero());
        // β^{-1}·β^{-3} = β^{-4} = 1/9, trace 2/9.
        assert_eq!(k.character_phase(&k.monomial(1, -3)), CharacterPhase::new(2, 9));
        // rank-zero witness: |β^{-1}| = q and β^{-2} = 1/3 has trace 2/3.
        assert_eq!(k.character_phase(&k.monomial(1, -1)), CharacterPhase::new(2, 3));
    }

    #[test]
    fn qp_phase_is_fractional_part() {
        let k = make_field(FieldSpec::eisenstein(5, 1)).unwrap();
        // 3/25 + 4/5 = 23/25
        let x = k.parse_element("-2:3,-1:4,0:1").unwrap();
        assert_eq!(k.character_phase(&x), CharacterPhase::new(23, 25));
    }

    #[test]
    fn laurent_phase_reads_residue_coefficient() {
        let k = make_field(FieldSpec::laurent(3, 1)).unwrap();
        let x = k.parse_element("-2:1,-1:2,0:1").unwrap();
        assert_eq!(k.character_phase(&x), CharacterPhase::new(2, 3));
        assert!(k.character_phase(&k.monomial(1, -2)).is_zero());
    }
}
