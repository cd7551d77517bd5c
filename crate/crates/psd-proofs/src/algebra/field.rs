//! Prime fields and their extensions.
//!
//! Fields act as contexts: elements are plain data and every operation takes
//! the field by reference. This keeps extension elements free of shared
//! pointers and makes the modulus explicit at each call site.

use num_bigint::BigUint;

use crate::protocol::random::RandomStream;

/// A field given as an explicit arithmetic context.
pub trait Field {
    type Elem: Clone + PartialEq + Eq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// A uniformly random element drawn from the given stream.
    fn sample(&self, rng: &mut RandomStream) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn pow(&self, a: &Self::Elem, exp: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        let bits = exp.bits();
        for i in 0..bits {
            if exp.bit(i) {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
        }
        acc
    }
}

/// The prime field F_p for a word-size prime `p < 2^62`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(crate::algebra::primes::is_prime(p), "modulus must be prime");
        assert!(p < 1 << 62, "modulus must fit 62 bits");
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, value: i64) -> u64 {
        value.rem_euclid(self.p as i64) as u64
    }

    pub fn elem_u64(&self, value: u64) -> u64 {
        value % self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        Some(self.pow(a, &BigUint::from(self.p - 2)))
    }

    fn sample(&self, rng: &mut RandomStream) -> u64 {
        rng.below(self.p)
    }
}

/// The extension field F_{p^l} as F_p[x] modulo a monic irreducible
/// polynomial of degree l. Elements are coefficient vectors of length l in
/// ascending degree order, matching their transcript encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtField {
    base: PrimeField,
    /// Monic modulus, ascending coefficients, length l + 1.
    modulus: Vec<u64>,
}

pub type ExtElem = Vec<u64>;

impl ExtField {
    /// Builds the field, verifying the modulus is monic and irreducible.
    pub fn new(base: PrimeField, modulus: Vec<u64>) -> Option<Self> {
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return None;
        }
        if !crate::algebra::poly::check_irreducible(&base, &modulus).ok()? {
            return None;
        }
        Some(ExtField { base, modulus })
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus_poly(&self) -> &[u64] {
        &self.modulus
    }

    /// Number of field elements, p^l.
    pub fn order(&self) -> BigUint {
        BigUint::from(self.base.p).pow(self.degree() as u32)
    }

    /// Embeds a base-field element as a constant.
    pub fn embed(&self, value: u64) -> ExtElem {
        let mut e = vec![0u64; self.degree()];
        e[0] = value % self.base.p;
        e
    }

    /// The element with the given coefficients, reduced mod p; must have
    /// exactly l coefficients.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Option<ExtElem> {
        if coeffs.len() != self.degree() {
            return None;
        }
        Some(coeffs.iter().map(|c| c % self.base.p).collect())
    }

    /// If the element lies in the prime subfield, returns its value.
    pub fn as_base(&self, a: &ExtElem) -> Option<u64> {
        if a[1..].iter().all(|&c| c == 0) {
            Some(a[0])
        } else {
            None
        }
    }

    /// Reduces a polynomial (ascending, any length) modulo the field
    /// modulus, returning an element of length l.
    fn reduce(&self, mut poly: Vec<u64>) -> ExtElem {
        let l = self.degree();
        let p = &self.base;
        while poly.len() > l {
            let top = poly.pop().unwrap();
            if top != 0 {
                let shift = poly.len() - l;
                for (i, &m) in self.modulus[..l].iter().enumerate() {
                    let t = p.mul(&top, &m);
                    poly[shift + i] = p.sub(&poly[shift + i], &t);
                }
            }
        }
        poly.resize(l, 0);
        poly
    }
}

impl Field for ExtField {
    type Elem = ExtElem;

    fn zero(&self) -> ExtElem {
        vec![0; self.degree()]
    }

    fn one(&self) -> ExtElem {
        self.embed(1)
    }

    fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }

    fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }

    fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let l = self.degree();
        let mut prod = vec![0u64; 2 * l - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = self.base.mul(x, y);
                prod[i + j] = self.base.add(&prod[i + j], &t);
            }
        }
        self.reduce(prod)
    }

    fn neg(&self, a: &ExtElem) -> ExtElem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }

    fn inv(&self, a: &ExtElem) -> Option<ExtElem> {
        if self.is_zero(a) {
            return None;
        }
        // Fermat: a^(p^l - 2).
        let exp = self.order() - BigUint::from(2u32);
        Some(self.pow(a, &exp))
    }

    fn sample(&self, rng: &mut RandomStream) -> ExtElem {
        (0..self.degree()).map(|_| rng.below(self.base.p)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::random::{RandomStream, Role};

    fn f5() -> PrimeField {
        PrimeField::new(5)
    }

    /// F_9 = F_3[x]/(x^2 + 1); -1 is a non-residue mod 3.
    fn f9() -> ExtField {
        ExtField::new(PrimeField::new(3), vec![1, 0, 1]).unwrap()
    }

    #[test]
    fn prime_field_basics() {
        let f = f5();
        assert_eq!(f.add(&3, &4), 2);
        assert_eq!(f.mul(&3, &4), 2);
        assert_eq!(f.sub(&1, &3), 3);
        assert_eq!(f.inv(&2), Some(3));
        assert_eq!(f.inv(&0), None);
        assert_eq!(f.elem(-7), 3);
    }

    #[test]
    fn ext_field_mul_and_inv() {
        let f = f9();
        // (x + 1)(x + 2) = x^2 + 3x + 2 = x^2 + 2 = -1 + 2 = 1 (mod x^2+1, 3).
        let a = vec![1, 1];
        let b = vec![2, 1];
        assert_eq!(f.mul(&a, &b), f.one());
        assert_eq!(f.inv(&a), Some(b));
    }

    #[test]
    fn ext_field_rejects_reducible_modulus() {
        // x^2 + 1 = (x+2)(x+3) over F_5.
        assert!(ExtField::new(f5(), vec![1, 0, 1]).is_none());
        // x^2 (non-irreducible, also not square-free).
        assert!(ExtField::new(PrimeField::new(3), vec![0, 0, 1]).is_none());
    }

    fn spot_check_axioms<F: Field>(f: &F, rng: &mut RandomStream) {
        for _ in 0..1000 {
            let a = f.sample(rng);
            let b = f.sample(rng);
            let c = f.sample(rng);
            // Associativity and distributivity.
            assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
            assert_eq!(
                f.mul(&a, &f.add(&b, &c)),
                f.add(&f.mul(&a, &b), &f.mul(&a, &c))
            );
            // Inverses.
            if !f.is_zero(&a) {
                let ai = f.inv(&a).unwrap();
                assert_eq!(f.mul(&a, &ai), f.one());
            }
            assert!(f.is_zero(&f.add(&a, &f.neg(&a))));
        }
    }

    #[test]
    fn field_axioms_prime() {
        let mut rng = RandomStream::derive(42, Role::Verifier);
        spot_check_axioms(&PrimeField::new(1_000_000_007), &mut rng);
    }

    #[test]
    fn field_axioms_extension() {
        let mut rng = RandomStream::derive(43, Role::Verifier);
        // F_{521^2}, the OV field at desk scale (521 is the first prime
        // past 8^2 * 8); x^2 + 3 works since -3 is a non-residue mod 521.
        let base = PrimeField::new(521);
        let f = ExtField::new(base, vec![3, 0, 1]).expect("x^2+3 irreducible over F_521");
        spot_check_axioms(&f, &mut rng);
    }

    #[test]
    fn embed_and_as_base() {
        let f = f9();
        assert_eq!(f.as_base(&f.embed(2)), Some(2));
        assert_eq!(f.as_base(&vec![1, 2]), None);
    }
}
