//! Finite residue fields `F_q = F_p[x]/(m(x))` with table-driven arithmetic.
//!
//! Elements are encoded as integers `0..q`: the base-`p` digits of the code are
//! the polynomial coefficients, lowest degree first.

use super::FieldError;

#[derive(Clone, Debug)]
pub struct ResidueField {
    p: u32,
    degree: u32,
    q: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    trace: Vec<u32>,
}

impl ResidueField {
    /// Builds `F_p[x]/(modulus)`. `modulus` lists coefficients lowest degree
    /// first and must be monic of degree `f >= 1`.
    pub fn new(p: u32, modulus: &[u32]) -> Result<Self, FieldError> {
        let modulus = normalize_poly(modulus, p);
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(FieldError::ReducibleModulus(format!(
                "modulus {modulus:?} must be monic of degree >= 1"
            )));
        }
        if !is_irreducible(&modulus, p) {
            return Err(FieldError::ReducibleModulus(format!(
                "{modulus:?} factors over F_{p}"
            )));
        }
        let degree = (modulus.len() - 1) as u32;
        let q = p
            .checked_pow(degree)
            .filter(|&q| q <= 1 << 12)
            .ok_or_else(|| FieldError::TooLarge(format!("residue field of size {p}^{degree}")))?;

        let decode = |c: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(degree as usize);
            let mut c = c;
            for _ in 0..degree {
                v.push(c % p);
                c /= p;
            }
            v
        };
        let encode = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &d| acc * p + d) };

        let qs = q as usize;
        let mut add = vec![0; qs * qs];
        let mut mul = vec![0; qs * qs];
        let mut neg = vec![0; qs];
        for a in 0..q {
            let da = decode(a);
            neg[a as usize] = encode(&da.iter().map(|&x| (p - x) % p).collect::<Vec<_>>());
            for b in 0..q {
                let db = decode(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                add[a as usize * qs + b as usize] = encode(&sum);
                let prod = poly_rem(&poly_mul(&da, &db, p), &modulus, p);
                let mut prod = prod;
                prod.resize(degree as usize, 0);
                mul[a as usize * qs + b as usize] = encode(&prod);
            }
        }

        let mut field = Self { p, degree, q, add, mul, neg, trace: vec![0; qs] };
        // Tr(a) = a + a^p + ... + a^{p^{f-1}}, which lands in the prime field.
        for a in 0..q {
            let mut acc = 0;
            let mut frob = a;
            for _ in 0..degree {
                acc = field.add(acc, frob);
                frob = field.pow(frob, p);
            }
            debug_assert!(acc < p, "trace must lie in the prime field");
            field.trace[a as usize] = acc;
        }
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn size(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// Absolute trace to the prime field, as an integer in `0..p`.
    #[inline]
    pub fn trace(&self, a: u32) -> u32 {
        self.trace[a as usize]
    }

    pub fn pow(&self, a: u32, mut e: u32) -> u32 {
        let mut base = a;
        let mut acc = 1 % self.q.max(2);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

fn normalize_poly(coeffs: &[u32], p: u32) -> Vec<u32> {
    let mut v: Vec<u32> = coeffs.iter().map(|&c| c % p).collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x as u64 * y as u64;
        }
    }
    normalize_poly(&out.iter().map(|&c| (c % p as u64) as u32).collect::<Vec<_>>(), p)
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = normalize_poly(a, p);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let sub = (lead as u64 * c as u64 % p as u64) as u32;
            r[i + shift] = (r[i + shift] + p - sub) % p;
        }
        r = normalize_poly(&r, p);
    }
    r
}

/// Exhaustive check: no monic polynomial of degree `1..=deg/2` divides `m`.
pub(crate) fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                cand.push((c % p as u64) as u32);
                c /= p as u64;
            }
            cand.push(1);
            if poly_rem(m, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically first monic irreducible polynomial of degree `f` over `F_p`.
pub fn default_modulus(p: u32, f: u32) -> Vec<u32> {
    let count = (p as u64).pow(f);
    for code in 0..count {
        let mut cand = Vec::with_capacity(f as usize + 1);
        let mut c = code;
        for _ in 0..f {
            cand.push((c % p as u64) as u32);
            c /= p as u64;
        }
        cand.push(1);
        if is_irreducible(&cand, p) {
            return cand;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f9_is_a_field() {
        // x^2 + 1 is irreducible over F_3.
        let k = ResidueField::new(3, &[1, 0, 1]).unwrap();
        assert_eq!(k.size(), 9);
        for a in 1..9 {
            let inv = (1..9).filter(|&b| k.mul(a, b) == 1).count();
            assert_eq!(inv, 1, "element {a} must have exactly one inverse");
        }
        for a in 0..9 {
            assert_eq!(k.add(a, k.neg(a)), 0);
            // Frobenius fixes exactly the prime field.
            assert_eq!(k.pow(a, 3) == a, a < 3);
        }
    }

    #[test]
    fn trace_of_prime_field_element_is_multiple() {
        let k = ResidueField::new(3, &[1, 0, 1]).unwrap();
        // Tr(c) = f * c for c in F_p.
        for c in 0..3 {
            assert_eq!(k.trace(c), (2 * c) % 3);
        }
        // Trace is onto F_p and balanced: each value hit q/p times.
        let mut hits = [0; 3];
        for a in 0..9 {
            hits[k.trace(a) as usize] += 1;
        }
        assert_eq!(hits, [3, 3, 3]);
    }

    #[test]
    fn rejects_reducible_moduli() {
        // x^2 + 2 = (x + 1)(x + 2) over F_3.
        assert!(matches!(
            ResidueField::new(3, &[2, 0, 1]),
            Err(FieldError::ReducibleModulus(_))
        ));
        assert!(!is_irreducible(&[0, 0, 1], 5));
        assert!(is_irreducible(&[1, 1, 1], 2));
    }

    #[test]
    fn default_modulus_is_irreducible() {
        for (p, f) in [(2, 1), (2, 3), (3, 2), (5, 2), (7, 1)] {
            let m = default_modulus(p, f);
            assert_eq!(m.len() as u32, f + 1);
            assert!(is_irreducible(&m, p));
        }
    }
}
