//! Orthogonal Vectors: an MA protocol. The prover commits to a univariate
//! polynomial whose value at the j-th node is the number of vectors
//! orthogonal to v^j; the verifier spot-checks it at a random extension
//! field point (Schwartz-Zippel), then reads all n counts off the
//! polynomial by multipoint evaluation.

use crate::algebra::field::{ExtElem, ExtField, Field, PrimeField};
use crate::algebra::poly::{
    check_irreducible, find_irreducible, interpolate, multipoint_eval, DensePolynomial,
};
use crate::algebra::primes::is_prime;
use crate::error::{Error, Result};
use crate::protocol::outcome::ProtocolOutcome;
use crate::protocol::random::RandomStream;
use crate::protocol::text::{join_ints, parse_u64_list, parse_usize, parse_usize_list, KvLines};

/// n binary vectors of dimension d <= n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OvInstance {
    vectors: Vec<Vec<u8>>,
}

impl OvInstance {
    pub fn new(vectors: Vec<Vec<u8>>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::parse("OV needs at least one vector"));
        }
        let d = vectors[0].len();
        if d == 0 || d > vectors.len() {
            return Err(Error::parse("OV requires 1 <= d <= n"));
        }
        for v in &vectors {
            if v.len() != d {
                return Err(Error::parse("OV vectors must share one dimension"));
            }
            if v.iter().any(|&b| b > 1) {
                return Err(Error::parse("OV vectors must be 0/1"));
            }
        }
        Ok(OvInstance { vectors })
    }

    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    pub fn d(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn vectors(&self) -> &[Vec<u8>] {
        &self.vectors
    }

    pub fn render_body(&self, kv: &mut KvLines) {
        kv.push("n", self.n().to_string());
        kv.push("d", self.d().to_string());
        for v in &self.vectors {
            kv.push_ints("v", v);
        }
    }

    pub fn parse_body(kv: &KvLines) -> Result<Self> {
        let n = parse_usize(kv.require("n")?)?;
        let d = parse_usize(kv.require("d")?)?;
        let vectors: Vec<Vec<u8>> = kv
            .get_all("v")
            .map(|line| {
                let vals = parse_usize_list(line)?;
                Ok(vals.into_iter().map(|x| x as u8).collect())
            })
            .collect::<Result<_>>()?;
        if vectors.len() != n || vectors.iter().any(|v| v.len() != d) {
            return Err(Error::parse("OV header does not match vector lines"));
        }
        Self::new(vectors)
    }
}

/// Field parameters: p the smallest prime above n^2 d, and l the smallest
/// power with p^l > n * 2d / eps for eps = n^{-2}, i.e. p^l > 2 d n^3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OvParams {
    pub p: u64,
    pub l: usize,
}

pub fn ov_params(n: usize, d: usize) -> OvParams {
    let floor = (n as u64) * (n as u64) * (d as u64);
    let mut p = floor + 1;
    while !is_prime(p) {
        p += 1;
    }
    let target = 2u128 * d as u128 * (n as u128).pow(3);
    let mut l = 1usize;
    let mut power = p as u128;
    while power <= target {
        power *= p as u128;
        l += 1;
    }
    OvParams { p, l }
}

fn dot(u: &[u8], v: &[u8]) -> u64 {
    u.iter().zip(v).map(|(&a, &b)| (a & b) as u64).sum()
}

fn self_orthogonal(v: &[u8]) -> bool {
    v.iter().all(|&b| b == 0)
}

/// Lexicographically first ordered pair (i, j), i < j, of orthogonal
/// vectors; 1-based.
pub fn lex_first_pair(inst: &OvInstance) -> Option<(usize, usize)> {
    let vs = inst.vectors();
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            if dot(&vs[i], &vs[j]) == 0 {
                return Some((i + 1, j + 1));
            }
        }
    }
    None
}

/// The ext-field element with base-p digits of `m`; injective below p^l.
fn index_elem(field: &ExtField, m: u64) -> ExtElem {
    let p = field.base().modulus();
    let mut e = field.zero();
    let mut rest = m;
    for c in e.iter_mut() {
        *c = rest % p;
        rest /= p;
    }
    e
}

/// The interpolation node for the j-th vector (1-based): the embedding of
/// the integer j into the prime subfield. Distinct since p > n.
fn node(field: &ExtField, j: usize) -> ExtElem {
    field.embed(j as u64)
}

/// The degree <= d(n-1) polynomial Q with Q(a_j) = #{u in V : <u, v^j> = 0}
/// (counting v^j itself when self-orthogonal), computed by evaluating at
/// d(n-1)+1 distinct points and interpolating.
pub fn build_orthogonality_polynomial(
    inst: &OvInstance,
    field: &ExtField,
) -> Result<DensePolynomial<ExtField>> {
    let (n, d) = (inst.n(), inst.d());
    if field.base().modulus() <= (n as u64) * (n as u64) * (d as u64) {
        return Err(Error::config("OV field modulus must exceed n^2 d"));
    }
    let psi = interpolate_coordinates(inst, field)?;
    let degree_bound = d * (n - 1);
    let mut points = Vec::with_capacity(degree_bound + 1);
    for m in 1..=(degree_bound as u64 + 1) {
        let x = index_elem(field, m);
        let psi_at: Vec<ExtElem> = psi.iter().map(|pi| pi.eval(field, &x)).collect();
        points.push((x, count_term(inst, field, &psi_at)));
    }
    interpolate(field, &points)
}

/// psi_i, the degree < n interpolant through (a_j, v^j_i).
fn interpolate_coordinates(
    inst: &OvInstance,
    field: &ExtField,
) -> Result<Vec<DensePolynomial<ExtField>>> {
    let n = inst.n();
    (0..inst.d())
        .map(|i| {
            let points: Vec<(ExtElem, ExtElem)> = (1..=n)
                .map(|j| {
                    (
                        node(field, j),
                        field.embed(inst.vectors()[j - 1][i] as u64),
                    )
                })
                .collect();
            interpolate(field, &points)
        })
        .collect()
}

/// sum_{u in V} prod_i (1 - u_i * psi_i(x)), given psi_i(x).
fn count_term(inst: &OvInstance, field: &ExtField, psi_at: &[ExtElem]) -> ExtElem {
    let one = field.one();
    let mut total = field.zero();
    for u in inst.vectors() {
        let mut prod = one.clone();
        for (i, &bit) in u.iter().enumerate() {
            if bit == 1 {
                prod = field.mul(&prod, &field.sub(&one, &psi_at[i]));
            }
            if field.is_zero(&prod) {
                break;
            }
        }
        total = field.add(&total, &prod);
    }
    total
}

/// All Lagrange basis values L_j(r) for nodes 1..n, shared across the d
/// coordinate polynomials: O(n) field multiplications after O(n) base-field
/// factorial weights.
fn lagrange_basis_at(field: &ExtField, n: usize, r: &ExtElem) -> Vec<ExtElem> {
    // r equal to a node: indicator basis.
    for j in 1..=n {
        if *r == node(field, j) {
            let mut basis = vec![field.zero(); n];
            basis[j - 1] = field.one();
            return basis;
        }
    }
    let base = field.base();
    // prefix[j] = prod_{m < j} (r - a_m), suffix[j] = prod_{m > j} (r - a_m).
    let diffs: Vec<ExtElem> = (1..=n)
        .map(|j| field.sub(r, &node(field, j)))
        .collect();
    let mut prefix = vec![field.one(); n + 1];
    for j in 0..n {
        prefix[j + 1] = field.mul(&prefix[j], &diffs[j]);
    }
    let mut suffix = vec![field.one(); n + 1];
    for j in (0..n).rev() {
        suffix[j] = field.mul(&suffix[j + 1], &diffs[j]);
    }
    // w_j = 1 / prod_{m != j} (a_j - a_m) = 1 / ((j-1)! * (n-j)! * (-1)^(n-j))
    // in the prime subfield.
    let mut fact = vec![1u64; n];
    for i in 1..n {
        fact[i] = base.mul(&fact[i - 1], &(i as u64));
    }
    (1..=n)
        .map(|j| {
            let mut denom = base.mul(&fact[j - 1], &fact[n - j]);
            if (n - j) % 2 == 1 {
                denom = base.neg(&denom);
            }
            let w = base.inv(&denom).expect("factorials nonzero below p");
            let num = field.mul(&prefix[j - 1], &suffix[j]);
            field.mul(&num, &field.embed(w))
        })
        .collect()
}

/// psi_i(r) for every i via the shared basis: O(nd) field operations.
fn coordinates_at(inst: &OvInstance, field: &ExtField, r: &ExtElem) -> Vec<ExtElem> {
    let basis = lagrange_basis_at(field, inst.n(), r);
    (0..inst.d())
        .map(|i| {
            let mut acc = field.zero();
            for (j, v) in inst.vectors().iter().enumerate() {
                if v[i] == 1 {
                    acc = field.add(&acc, &basis[j]);
                }
            }
            acc
        })
        .collect()
}

fn render_counts_cert(
    kv: &mut KvLines,
    field: &ExtField,
    q: &DensePolynomial<ExtField>,
) {
    kv.push_ints("modulus", field.modulus_poly());
    for coeff in q.coeffs() {
        kv.push_ints("q-coeff", coeff);
    }
}

/// Prover half of the count certification: sample a reducing polynomial,
/// build Q, and serialize both.
pub fn certify_counts_prove(inst: &OvInstance, rng: &mut RandomStream) -> Result<Vec<u8>> {
    let params = ov_params(inst.n(), inst.d());
    let base = PrimeField::new(params.p);
    let modulus = find_irreducible(&base, params.l, rng);
    let field = ExtField::new(base, modulus).expect("sampled modulus is irreducible");
    let q = build_orthogonality_polynomial(inst, &field)?;
    let mut kv = KvLines::new();
    render_counts_cert(&mut kv, &field, &q);
    Ok(kv.render().into_bytes())
}

/// Verifier half of the count certification. On acceptance returns the n
/// orthogonality counts; on rejection returns the failing check's tag.
pub fn verify_counts(
    inst: &OvInstance,
    kv: &KvLines,
    rng: &mut RandomStream,
) -> std::result::Result<Vec<u64>, String> {
    let params = ov_params(inst.n(), inst.d());
    let (n, d) = (inst.n(), inst.d());

    let modulus = match kv.get("modulus").map(parse_u64_list) {
        Some(Ok(m)) => m,
        _ => return Err("missing-modulus".into()),
    };
    if modulus.len() != params.l + 1 {
        return Err("modulus-degree".into());
    }
    if modulus.iter().any(|&c| c >= params.p) {
        return Err("modulus-coeff-range".into());
    }
    let base = PrimeField::new(params.p);
    match check_irreducible(&base, &modulus) {
        Ok(true) => {}
        _ => return Err("modulus-not-irreducible".into()),
    }
    let field = ExtField::new(base, modulus).expect("just checked irreducible");

    let mut coeffs: Vec<ExtElem> = Vec::new();
    for line in kv.get_all("q-coeff") {
        let vals = parse_u64_list(line).map_err(|_| "malformed-q-coeff".to_string())?;
        if vals.len() != params.l || vals.iter().any(|&c| c >= params.p) {
            return Err("q-coeff-range".into());
        }
        coeffs.push(vals);
    }
    let degree_bound = d * (n - 1);
    if coeffs.len() > degree_bound + 1 {
        return Err("q-degree-too-high".into());
    }
    let q = DensePolynomial::new(&field, coeffs);

    // Schwartz-Zippel: compare Q against the direct evaluation at a random
    // point. Both sides are polynomials of degree <= d(n-1), so a cheating
    // Q survives with probability at most d(n-1)/p^l < eps.
    let r = field.sample(rng);
    let claimed = q.eval(&field, &r);
    let direct = count_term(inst, &field, &coordinates_at(inst, &field, &r));
    if claimed != direct {
        return Err("coefficient-check".into());
    }

    // Read the counts off Q by fast multipoint evaluation at a_1..a_n.
    let nodes: Vec<ExtElem> = (1..=n).map(|j| node(&field, j)).collect();
    let values = multipoint_eval(&field, &q, &nodes);
    let mut counts = Vec::with_capacity(n);
    for value in &values {
        match field.as_base(value) {
            Some(c) if c <= n as u64 => counts.push(c),
            _ => return Err("count-out-of-range".into()),
        }
    }
    Ok(counts)
}

/// Standalone count certification (verifier side over a raw message).
pub fn certify_counts_verify(
    inst: &OvInstance,
    message: &[u8],
    rng: &mut RandomStream,
) -> std::result::Result<Vec<u64>, String> {
    let text = std::str::from_utf8(message).map_err(|_| "malformed-utf8".to_string())?;
    let kv = KvLines::parse(text).map_err(|_| "malformed-message".to_string())?;
    verify_counts(inst, &kv, rng)
}

pub fn prove(inst: &OvInstance, rng: &mut RandomStream) -> Result<Vec<u8>> {
    let params = ov_params(inst.n(), inst.d());
    let base = PrimeField::new(params.p);
    let modulus = find_irreducible(&base, params.l, rng);
    let field = ExtField::new(base, modulus).expect("sampled modulus is irreducible");
    let q = build_orthogonality_polynomial(inst, &field)?;
    let mut kv = KvLines::new();
    match lex_first_pair(inst) {
        Some((i, j)) => kv.push("solution", join_ints(&[i, j])),
        None => kv.push("solution", "none"),
    }
    render_counts_cert(&mut kv, &field, &q);
    Ok(kv.render().into_bytes())
}

pub fn verify(inst: &OvInstance, message: &[u8], rng: &mut RandomStream) -> ProtocolOutcome {
    let text = match std::str::from_utf8(message) {
        Ok(t) => t,
        Err(_) => return ProtocolOutcome::bot("malformed-utf8"),
    };
    let kv = match KvLines::parse(text) {
        Ok(kv) => kv,
        Err(_) => return ProtocolOutcome::bot("malformed-message"),
    };
    let solution = match kv.get("solution") {
        Some(s) => s,
        None => return ProtocolOutcome::bot("missing-solution"),
    };
    let counts = match verify_counts(inst, &kv, rng) {
        Ok(c) => c,
        Err(tag) => return ProtocolOutcome::bot(tag),
    };
    let vs = inst.vectors();
    let n = inst.n();

    if solution == "none" {
        // No pair anywhere: every count must be explained by
        // self-orthogonality alone.
        for (j, v) in vs.iter().enumerate() {
            let self_term = u64::from(self_orthogonal(v));
            if counts[j] != self_term {
                return ProtocolOutcome::bot("counts-contradict-no-solution");
            }
        }
        return ProtocolOutcome::bot("no-solution");
    }

    let idx = match parse_usize_list(solution) {
        Ok(v) if v.len() == 2 => v,
        _ => return ProtocolOutcome::bot("malformed-solution"),
    };
    let (i, j) = (idx[0], idx[1]);
    if i == 0 || j == 0 || i >= j || j > n {
        return ProtocolOutcome::bot("solution-out-of-range");
    }
    if dot(&vs[i - 1], &vs[j - 1]) != 0 {
        return ProtocolOutcome::bot("pair-not-orthogonal");
    }
    // No vector before i is orthogonal to anything (except itself).
    for m in 0..i - 1 {
        let self_term = u64::from(self_orthogonal(&vs[m]));
        if counts[m] != self_term {
            return ProtocolOutcome::bot("prefix-count");
        }
    }
    // No partner of v_i strictly between i and j, checked directly.
    for m in i..j - 1 {
        if dot(&vs[i - 1], &vs[m]) == 0 {
            return ProtocolOutcome::bot("prefix-pair");
        }
    }
    ProtocolOutcome::canonical(join_ints(&[i, j]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::random::Role;

    fn inst(vectors: &[&[u8]]) -> OvInstance {
        OvInstance::new(vectors.iter().map(|v| v.to_vec()).collect()).unwrap()
    }

    fn honest_field(inst: &OvInstance, seed: u64) -> ExtField {
        let params = ov_params(inst.n(), inst.d());
        let base = PrimeField::new(params.p);
        let mut rng = RandomStream::derive(seed, Role::Prover);
        let modulus = find_irreducible(&base, params.l, &mut rng);
        ExtField::new(base, modulus).unwrap()
    }

    /// Brute-force orthogonality counts, the independent oracle for Q.
    fn brute_counts(inst: &OvInstance) -> Vec<u64> {
        inst.vectors()
            .iter()
            .map(|v| {
                inst.vectors()
                    .iter()
                    .filter(|u| dot(u, v) == 0)
                    .count() as u64
            })
            .collect()
    }

    #[test]
    fn params_at_desk_scale() {
        let p = ov_params(8, 8);
        assert_eq!(p.p, 521);
        assert_eq!(p.l, 2);
    }

    #[test]
    fn polynomial_counts_match_hand_examples() {
        // V = {(1,0), (0,1)}: each vector has exactly one partner.
        let i1 = inst(&[&[1, 0], &[0, 1]]);
        let f = honest_field(&i1, 7);
        let q = build_orthogonality_polynomial(&i1, &f).unwrap();
        let vals: Vec<u64> = (1..=2)
            .map(|j| f.as_base(&q.eval(&f, &node(&f, j))).unwrap())
            .collect();
        assert_eq!(vals, vec![1, 1]);

        // V = {(1,1)}: <v,v> = 2, count 0.
        let i2 = inst(&[&[1, 1]]);
        let f = honest_field(&i2, 8);
        let q = build_orthogonality_polynomial(&i2, &f).unwrap();
        assert_eq!(f.as_base(&q.eval(&f, &node(&f, 1))).unwrap(), 0);

        // V = {(0,0), (1,1)}: zero vector orthogonal to both (incl. itself).
        let i3 = inst(&[&[0, 0], &[1, 1]]);
        let f = honest_field(&i3, 9);
        let q = build_orthogonality_polynomial(&i3, &f).unwrap();
        let vals: Vec<u64> = (1..=2)
            .map(|j| f.as_base(&q.eval(&f, &node(&f, j))).unwrap())
            .collect();
        assert_eq!(vals, vec![2, 1]);
    }

    #[test]
    fn polynomial_counts_match_oracle_on_random_instances() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(21);
        for _ in 0..15 {
            let n = rng.gen_range(2..=10);
            let d = rng.gen_range(1..=n.min(6));
            let vectors: Vec<Vec<u8>> = (0..n)
                .map(|_| (0..d).map(|_| rng.gen_range(0..=1u8)).collect())
                .collect();
            let i = OvInstance::new(vectors).unwrap();
            let f = honest_field(&i, rng.gen());
            let q = build_orthogonality_polynomial(&i, &f).unwrap();
            let got: Vec<u64> = (1..=n)
                .map(|j| f.as_base(&q.eval(&f, &node(&f, j))).unwrap())
                .collect();
            assert_eq!(got, brute_counts(&i));
        }
    }

    fn run(i: &OvInstance, pseed: u64, vseed: u64) -> ProtocolOutcome {
        let mut prng = RandomStream::derive(pseed, Role::Prover);
        let mut vrng = RandomStream::derive(vseed, Role::Verifier);
        let msg = prove(i, &mut prng).unwrap();
        verify(i, &msg, &mut vrng)
    }

    #[test]
    fn spec_examples_honest_runs() {
        // (1,0) and (0,1) are orthogonal: pair (1,2).
        let i = inst(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(run(&i, 1, 2).canonical_payload(), Some(b"1 2".as_ref()));

        // No orthogonal pair.
        let i = inst(&[&[1, 1], &[1, 0]]);
        assert_eq!(run(&i, 1, 2).bot_reason(), Some("no-solution"));
    }

    #[test]
    fn pseudo_determinism_across_verifier_seeds() {
        let i = inst(&[&[1, 0, 1], &[0, 1, 0], &[1, 1, 0], &[0, 0, 1]]);
        let expected = run(&i, 5, 0);
        assert!(expected.is_canonical());
        for vseed in 1..20 {
            assert_eq!(run(&i, 5, vseed), expected);
        }
    }

    #[test]
    fn tampered_coefficient_rejected() {
        let i = inst(&[&[1, 0], &[0, 1], &[1, 1]]);
        let mut prng = RandomStream::derive(3, Role::Prover);
        let msg = String::from_utf8(prove(&i, &mut prng).unwrap()).unwrap();
        // Bump the first q-coeff value by one.
        let mutated = mutate_first_q_coeff(&msg);
        let mut vrng = RandomStream::derive(4, Role::Verifier);
        let out = verify(&i, mutated.as_bytes(), &mut vrng);
        assert!(!out.is_canonical());
    }

    fn mutate_first_q_coeff(msg: &str) -> String {
        let params_p = ov_params(3, 2).p;
        let mut out = Vec::new();
        let mut done = false;
        for line in msg.lines() {
            if !done {
                if let Some(rest) = line.strip_prefix("q-coeff: ") {
                    let mut vals: Vec<u64> =
                        rest.split_whitespace().map(|t| t.parse().unwrap()).collect();
                    vals[0] = (vals[0] + 1) % params_p;
                    out.push(format!("q-coeff: {}", join_ints(&vals)));
                    done = true;
                    continue;
                }
            }
            out.push(line.to_string());
        }
        out.join("\n") + "\n"
    }

    #[test]
    fn zero_vector_prefix_is_not_a_false_positive() {
        // A zero vector first: it is orthogonal to everything, so (1,2) is
        // the canonical pair.
        let i = inst(&[&[0, 0], &[1, 1]]);
        assert_eq!(run(&i, 1, 2).canonical_payload(), Some(b"1 2".as_ref()));
    }
}
