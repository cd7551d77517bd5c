//! Dense univariate polynomials over a [`Field`], with interpolation,
//! subproduct-tree multipoint evaluation, and irreducibility machinery.

use crate::algebra::field::{ExtField, Field, PrimeField};
use crate::error::{Error, Result};
use crate::protocol::random::RandomStream;

/// Coefficients in ascending degree order; the leading coefficient is
/// nonzero unless the polynomial is zero (empty coefficient vector).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensePolynomial<F: Field> {
    coeffs: Vec<F::Elem>,
}

impl<F: Field> DensePolynomial<F> {
    pub fn new(field: &F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().map_or(false, |c| field.is_zero(c)) {
            coeffs.pop();
        }
        DensePolynomial { coeffs }
    }

    pub fn zero() -> Self {
        DensePolynomial { coeffs: Vec::new() }
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        Self::new(field, vec![c])
    }

    /// x - a.
    pub fn linear_root(field: &F, a: &F::Elem) -> Self {
        Self::new(field, vec![field.neg(a), field.one()])
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, field: &F, x: &F::Elem) -> F::Elem {
        let mut acc = field.zero();
        for c in self.coeffs.iter().rev() {
            acc = field.add(&field.mul(&acc, x), c);
        }
        acc
    }

    pub fn add(&self, field: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(|| field.zero());
            let b = other.coeffs.get(i).cloned().unwrap_or_else(|| field.zero());
            out.push(field.add(&a, &b));
        }
        Self::new(field, out)
    }

    pub fn sub(&self, field: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(|| field.zero());
            let b = other.coeffs.get(i).cloned().unwrap_or_else(|| field.zero());
            out.push(field.sub(&a, &b));
        }
        Self::new(field, out)
    }

    pub fn mul(&self, field: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if field.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let t = field.mul(a, b);
                out[i + j] = field.add(&out[i + j], &t);
            }
        }
        Self::new(field, out)
    }

    pub fn scale(&self, field: &F, k: &F::Elem) -> Self {
        Self::new(field, self.coeffs.iter().map(|c| field.mul(c, k)).collect())
    }

    /// Quotient and remainder; the divisor must be nonzero.
    pub fn divrem(&self, field: &F, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dlen = divisor.coeffs.len();
        if self.coeffs.len() < dlen {
            return (Self::zero(), self.clone());
        }
        let lead_inv = field
            .inv(divisor.coeffs.last().unwrap())
            .expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![field.zero(); rem.len() - dlen + 1];
        for k in (0..quot.len()).rev() {
            let top = rem[k + dlen - 1].clone();
            if field.is_zero(&top) {
                continue;
            }
            let q = field.mul(&top, &lead_inv);
            for (i, d) in divisor.coeffs.iter().enumerate() {
                let t = field.mul(&q, d);
                rem[k + i] = field.sub(&rem[k + i], &t);
            }
            quot[k] = q;
        }
        (Self::new(field, quot), Self::new(field, rem))
    }

    pub fn rem(&self, field: &F, divisor: &Self) -> Self {
        self.divrem(field, divisor).1
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, field: &F, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(field, &b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let inv = field.inv(a.coeffs.last().unwrap()).unwrap();
        a.scale(field, &inv)
    }

    /// self^exp modulo `modulus`.
    pub fn powmod(&self, field: &F, exp: u64, modulus: &Self) -> Self {
        let mut acc = Self::constant(field, field.one()).rem(field, modulus);
        let mut base = self.rem(field, modulus);
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(field, &base).rem(field, modulus);
            }
            base = base.mul(field, &base).rem(field, modulus);
            e >>= 1;
        }
        acc
    }
}

/// The unique polynomial of degree < #points through the given points.
///
/// Newton's divided differences; nodes must be pairwise distinct.
pub fn interpolate<F: Field>(
    field: &F,
    points: &[(F::Elem, F::Elem)],
) -> Result<DensePolynomial<F>> {
    if points.is_empty() {
        return Ok(DensePolynomial::zero());
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i].0 == points[j].0 {
                return Err(Error::config("interpolation nodes must be distinct"));
            }
        }
    }
    let k = points.len();
    let mut dd: Vec<F::Elem> = points.iter().map(|(_, y)| y.clone()).collect();
    for j in 1..k {
        for i in (j..k).rev() {
            let num = field.sub(&dd[i], &dd[i - 1]);
            let den = field.sub(&points[i].0, &points[i - j].0);
            let den_inv = field.inv(&den).expect("distinct nodes");
            dd[i] = field.mul(&num, &den_inv);
        }
    }
    // Expand the Newton form.
    let mut poly = DensePolynomial::constant(field, dd[k - 1].clone());
    for i in (0..k - 1).rev() {
        let lin = DensePolynomial::linear_root(field, &points[i].0);
        poly = poly.mul(field, &lin);
        poly = poly.add(field, &DensePolynomial::constant(field, dd[i].clone()));
    }
    Ok(poly)
}

struct SubproductTree<F: Field> {
    poly: DensePolynomial<F>,
    children: Option<(Box<SubproductTree<F>>, Box<SubproductTree<F>>)>,
    node: Option<F::Elem>,
}

impl<F: Field> SubproductTree<F> {
    fn build(field: &F, nodes: &[F::Elem]) -> Self {
        match nodes {
            [x] => SubproductTree {
                poly: DensePolynomial::linear_root(field, x),
                children: None,
                node: Some(x.clone()),
            },
            _ => {
                let (l, r) = nodes.split_at(nodes.len() / 2);
                let left = Self::build(field, l);
                let right = Self::build(field, r);
                SubproductTree {
                    poly: left.poly.mul(field, &right.poly),
                    children: Some((Box::new(left), Box::new(right))),
                    node: None,
                }
            }
        }
    }

    fn eval_into(&self, field: &F, poly: &DensePolynomial<F>, out: &mut Vec<F::Elem>) {
        let rem = poly.rem(field, &self.poly);
        match &self.children {
            None => {
                let x = self.node.as_ref().unwrap();
                out.push(rem.eval(field, x));
            }
            Some((l, r)) => {
                l.eval_into(field, &rem, out);
                r.eval_into(field, &rem, out);
            }
        }
    }
}

/// Evaluates `poly` at every node via subproduct-tree remaindering.
pub fn multipoint_eval<F: Field>(
    field: &F,
    poly: &DensePolynomial<F>,
    nodes: &[F::Elem],
) -> Vec<F::Elem> {
    if nodes.is_empty() {
        return Vec::new();
    }
    let tree = SubproductTree::build(field, nodes);
    let mut out = Vec::with_capacity(nodes.len());
    tree.eval_into(field, poly, &mut out);
    out
}

/// True iff the monic polynomial `f` (ascending coefficients over F_p) is
/// irreducible: gcd(f, x^{p^i} - x) = 1 for all i <= l/2 and
/// x^{p^l} = x mod f.
pub fn check_irreducible(field: &PrimeField, f: &[u64]) -> Result<bool> {
    if f.len() < 2 {
        return Err(Error::config("irreducibility check needs degree >= 1"));
    }
    if *f.last().unwrap() % field.modulus() != 1 {
        return Err(Error::config("irreducibility check requires a monic input"));
    }
    let l = f.len() - 1;
    let fp = DensePolynomial::new(field, f.to_vec());
    if fp.degree() != Some(l) {
        return Err(Error::config("irreducibility check requires a monic input"));
    }
    if l == 1 {
        return Ok(true);
    }
    let x = DensePolynomial::new(field, vec![0, 1]);
    // t_i = x^{p^i} mod f, advanced by one Frobenius power per step.
    let mut t = x.clone();
    for i in 1..=l {
        t = t.powmod(field, field.modulus(), &fp);
        if i <= l / 2 {
            let diff = t.sub(field, &x);
            let g = diff.gcd(field, &fp);
            if g.degree() != Some(0) {
                return Ok(false);
            }
        }
    }
    Ok(t == x)
}

/// Finds a monic irreducible polynomial of degree `l` over F_p by seeded
/// random sampling; expected O(l) tries.
pub fn find_irreducible(field: &PrimeField, l: usize, rng: &mut RandomStream) -> Vec<u64> {
    assert!(l >= 1, "degree must be at least 1");
    loop {
        let mut coeffs: Vec<u64> = (0..l).map(|_| rng.below(field.modulus())).collect();
        coeffs.push(1);
        if check_irreducible(field, &coeffs).unwrap() {
            return coeffs;
        }
    }
}

/// Convenience: the extension field F_{p^l} with a freshly sampled modulus.
pub fn build_ext_field(field: PrimeField, l: usize, rng: &mut RandomStream) -> ExtField {
    let modulus = find_irreducible(&field, l, rng);
    ExtField::new(field, modulus).expect("sampled modulus passed the irreducibility check")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::random::{RandomStream, Role};

    fn f5() -> PrimeField {
        PrimeField::new(5)
    }

    #[test]
    fn interpolate_line_over_f5() {
        let f = f5();
        let p = interpolate(&f, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(p.coeffs(), &[1, 1]); // x + 1
    }

    #[test]
    fn interpolate_constant() {
        let f = f5();
        let p = interpolate(&f, &[(0, 3)]).unwrap();
        assert_eq!(p.coeffs(), &[3]);
    }

    #[test]
    fn interpolate_three_points_over_f5() {
        // Brute-force oracle: scan all 125 polynomials of degree <= 2 for
        // the unique one through (0,1), (1,2), (2,0).
        let f = f5();
        let mut expected = None;
        for c0 in 0..5u64 {
            for c1 in 0..5u64 {
                for c2 in 0..5u64 {
                    let p = DensePolynomial::new(&f, vec![c0, c1, c2]);
                    if p.eval(&f, &0) == 1 && p.eval(&f, &1) == 2 && p.eval(&f, &2) == 0 {
                        assert!(expected.is_none(), "interpolant not unique");
                        expected = Some(p);
                    }
                }
            }
        }
        let expected = expected.expect("some interpolant exists");
        // The oracle finds x^2 + 1: 0 -> 1, 1 -> 2, 2 -> 5 = 0.
        assert_eq!(expected.coeffs(), &[1, 0, 1]);
        let got = interpolate(&f, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn interpolate_rejects_duplicate_nodes() {
        assert!(interpolate(&f5(), &[(1, 2), (1, 3)]).is_err());
    }

    #[test]
    fn multipoint_matches_direct_eval() {
        let f = f5();
        let p = DensePolynomial::new(&f, vec![1, 0, 1]); // x^2 + 1
        assert_eq!(multipoint_eval(&f, &p, &[0, 1, 2]), vec![1, 2, 0]);
        let zero = DensePolynomial::<PrimeField>::zero();
        assert_eq!(multipoint_eval(&f, &zero, &[0, 3]), vec![0, 0]);
    }

    #[test]
    fn multipoint_equals_horner_on_random_inputs() {
        let f = PrimeField::new(97);
        let mut rng = RandomStream::derive(5, Role::Prover);
        for _ in 0..20 {
            let coeffs: Vec<u64> = (0..8).map(|_| rng.below(97)).collect();
            let p = DensePolynomial::new(&f, coeffs);
            let mut nodes = Vec::new();
            while nodes.len() < 8 {
                let x = rng.below(97);
                if !nodes.contains(&x) {
                    nodes.push(x);
                }
            }
            let fast = multipoint_eval(&f, &p, &nodes);
            let slow: Vec<u64> = nodes.iter().map(|x| p.eval(&f, x)).collect();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn interpolate_eval_round_trip() {
        let f = PrimeField::new(101);
        let mut rng = RandomStream::derive(9, Role::Prover);
        for d in 0..12usize {
            let coeffs: Vec<u64> = (0..=d).map(|_| rng.below(101)).collect();
            let p = DensePolynomial::new(&f, coeffs);
            let points: Vec<(u64, u64)> = (0..=d as u64).map(|x| (x, p.eval(&f, &x))).collect();
            let q = interpolate(&f, &points).unwrap();
            assert_eq!(p, q);
        }
    }

    #[test]
    fn irreducibility_known_cases() {
        // x^2 + 1 over F_3: -1 is a non-residue mod 3.
        assert!(check_irreducible(&PrimeField::new(3), &[1, 0, 1]).unwrap());
        // x^2 over F_3.
        assert!(!check_irreducible(&PrimeField::new(3), &[0, 0, 1]).unwrap());
        // x^2 + 1 = (x+2)(x+3) over F_5.
        assert!(!check_irreducible(&f5(), &[1, 0, 1]).unwrap());
        // x^2 + 2 over F_5: squares mod 5 are {0,1,4}, so -2 = 3 has no root.
        assert!(check_irreducible(&f5(), &[2, 0, 1]).unwrap());
        // Non-monic input is an error, not `false`.
        assert!(check_irreducible(&f5(), &[1, 0, 2]).is_err());
    }

    #[test]
    fn irreducibility_matches_root_scan_for_quadratics() {
        // Degree <= 3 is irreducible iff rootless; scan all monic cubics
        // over F_7 and compare.
        let f = PrimeField::new(7);
        for c0 in 0..7u64 {
            for c1 in 0..7u64 {
                for c2 in 0..7u64 {
                    let poly = [c0, c1, c2, 1];
                    let has_root = (0..7u64).any(|x| {
                        DensePolynomial::new(&f, poly.to_vec()).eval(&f, &x) == 0
                    });
                    assert_eq!(
                        check_irreducible(&f, &poly).unwrap(),
                        !has_root,
                        "mismatch for {poly:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn find_irreducible_degrees() {
        let mut rng = RandomStream::derive(77, Role::Prover);
        for l in 1..=4 {
            let f = find_irreducible(&PrimeField::new(2), l, &mut rng);
            assert_eq!(f.len(), l + 1);
            assert!(check_irreducible(&PrimeField::new(2), &f).unwrap());
        }
        let f521 = PrimeField::new(521);
        let m = find_irreducible(&f521, 2, &mut rng);
        assert!(check_irreducible(&f521, &m).unwrap());
    }
}
