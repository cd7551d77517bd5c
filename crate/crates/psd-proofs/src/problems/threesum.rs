//! 3-SUM: find the lexicographically first index triple (i, j, k) with
//! `a_i + b_j + c_k = 0`, certified by mod-p nonexistence certificates for
//! the rejected prefix.

use crate::algebra::convolve::exact_convolve;
use crate::algebra::primes::{is_prime, primes_first};
use crate::error::{Error, ProveError, Result};
use crate::protocol::outcome::ProtocolOutcome;
use crate::protocol::random::RandomStream;
use crate::protocol::text::{join_ints, parse_i64_list, parse_usize, parse_usize_list, KvLines};

/// Three integer lists of common length n with entries bounded by
/// `max(n,2)^3` in magnitude (the fixed `C = 3` instantiation of the
/// O(log n)-bit entry requirement).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeSumInstance {
    a: Vec<i64>,
    b: Vec<i64>,
    c: Vec<i64>,
}

impl ThreeSumInstance {
    pub fn new(a: Vec<i64>, b: Vec<i64>, c: Vec<i64>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() || b.len() != c.len() {
            return Err(Error::parse("3-SUM lists must have equal non-zero length"));
        }
        let bound = Self::magnitude_bound(a.len());
        for v in a.iter().chain(&b).chain(&c) {
            if v.abs() >= bound {
                return Err(Error::parse(format!(
                    "3-SUM entry {v} exceeds the magnitude bound {bound}"
                )));
            }
        }
        Ok(ThreeSumInstance { a, b, c })
    }

    /// Entries must satisfy |v| < max(n,2)^3.
    pub fn magnitude_bound(n: usize) -> i64 {
        let base = (n.max(2)) as i64;
        base * base * base
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn lists(&self) -> (&[i64], &[i64], &[i64]) {
        (&self.a, &self.b, &self.c)
    }

    pub fn render_body(&self, kv: &mut KvLines) {
        kv.push("n", self.n().to_string());
        kv.push_ints("a", &self.a);
        kv.push_ints("b", &self.b);
        kv.push_ints("c", &self.c);
    }

    pub fn parse_body(kv: &KvLines) -> Result<Self> {
        let n = parse_usize(kv.require("n")?)?;
        let a = parse_i64_list(kv.require("a")?)?;
        let b = parse_i64_list(kv.require("b")?)?;
        let c = parse_i64_list(kv.require("c")?)?;
        if a.len() != n {
            return Err(Error::parse("3-SUM `n` does not match list length"));
        }
        Self::new(a, b, c)
    }
}

/// Size of the prime pool, ceil(n^1.5).
pub fn pool_size(n: usize) -> usize {
    let cube = (n as u128).pow(3);
    ceil_sqrt(cube) as usize
}

fn ceil_sqrt(x: u128) -> u128 {
    if x == 0 {
        return 0;
    }
    let mut s = (x as f64).sqrt() as u128;
    while s * s > x {
        s -= 1;
    }
    while s * s < x {
        s += 1;
    }
    s
}

fn ceil_log2_usize(n: usize) -> u64 {
    let mut bits = 0u64;
    while (1usize << bits) < n {
        bits += 1;
    }
    bits
}

/// False-positive threshold, ceil(n^1.5) * ceil(log2 n)^2 with a small floor
/// so tiny instances stay provable. The threshold only bounds verifier work;
/// soundness comes from the exact count equality.
pub fn fp_threshold(n: usize) -> u64 {
    let lg = ceil_log2_usize(n);
    (pool_size(n) as u64 * lg * lg).max(4)
}

/// A proof that three (possibly unequal-length) lists contain no triple
/// summing to zero: a pool prime, the exact count of triples summing to
/// zero mod p, and the full list of those false positives in strictly
/// increasing lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModPNonexistenceCert {
    pub p: u64,
    pub t: u64,
    /// 1-based (i, j, k) index triples.
    pub triples: Vec<(usize, usize, usize)>,
}

impl ModPNonexistenceCert {
    pub fn render_into(&self, kv: &mut KvLines, prefix: &str) {
        kv.push(&format!("{prefix}prime"), self.p.to_string());
        kv.push(&format!("{prefix}count"), self.t.to_string());
        for (i, j, k) in &self.triples {
            kv.push(&format!("{prefix}triple"), join_ints(&[*i, *j, *k]));
        }
    }

    pub fn parse_from(kv: &KvLines, prefix: &str) -> Result<Option<Self>> {
        let p = match kv.get(&format!("{prefix}prime")) {
            None => return Ok(None),
            Some(v) => crate::protocol::text::parse_u64(v)?,
        };
        let t = crate::protocol::text::parse_u64(kv.require(&format!("{prefix}count"))?)?;
        let mut triples = Vec::new();
        for line in kv.get_all(&format!("{prefix}triple")) {
            let idx = parse_usize_list(line)?;
            if idx.len() != 3 {
                return Err(Error::parse("certificate triple must have three indices"));
            }
            triples.push((idx[0], idx[1], idx[2]));
        }
        Ok(Some(ModPNonexistenceCert { p, t, triples }))
    }
}

const PRIME_RETRY_CAP: u32 = 64;

fn residue(v: i64, p: u64) -> u64 {
    v.rem_euclid(p as i64) as u64
}

/// Sorted (residue of c_k mod p, k) pairs for membership scans.
fn sorted_residue_table(c: &[i64], p: u64) -> Vec<(u64, usize)> {
    let mut table: Vec<(u64, usize)> = c
        .iter()
        .enumerate()
        .map(|(k, &v)| (residue(v, p), k))
        .collect();
    table.sort_unstable();
    table
}

fn residue_range<'t>(table: &'t [(u64, usize)], r: u64) -> &'t [(u64, usize)] {
    let lo = table.partition_point(|&(res, _)| res < r);
    let hi = table.partition_point(|&(res, _)| res <= r);
    &table[lo..hi]
}

/// Builds a nonexistence certificate for the lists (a, b, c), which the
/// caller guarantees contain no true zero triple; the prover still checks
/// while enumerating. Pool and threshold are derived from `params_n`, the
/// common length of the enclosing instance.
pub fn prove_nonexistence(
    a: &[i64],
    b: &[i64],
    c: &[i64],
    params_n: usize,
    rng: &mut RandomStream,
) -> std::result::Result<ModPNonexistenceCert, ProveError> {
    if a.is_empty() || b.is_empty() || c.is_empty() {
        // No triples at all; certify with the smallest pool prime.
        return Ok(ModPNonexistenceCert {
            p: 2,
            t: 0,
            triples: Vec::new(),
        });
    }
    let pool = primes_first(pool_size(params_n));
    let threshold = fp_threshold(params_n);
    for _ in 0..PRIME_RETRY_CAP {
        let p = pool[rng.below(pool.len() as u64) as usize];
        let table = sorted_residue_table(c, p);
        // Counting pass.
        let mut count: u64 = 0;
        for &ai in a {
            for &bj in b {
                let target = (p - (residue(ai, p) + residue(bj, p)) % p) % p;
                count += residue_range(&table, target).len() as u64;
            }
        }
        if count > threshold {
            continue;
        }
        // Collection pass; (i asc, j asc, k asc) yields strict lex order.
        let mut triples = Vec::with_capacity(count as usize);
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                let target = (p - (residue(ai, p) + residue(bj, p)) % p) % p;
                let mut ks: Vec<usize> =
                    residue_range(&table, target).iter().map(|&(_, k)| k).collect();
                ks.sort_unstable();
                for k in ks {
                    if ai + bj + c[k] == 0 {
                        return Err(ProveError::Internal(
                            "nonexistence prover found a true zero triple".into(),
                        ));
                    }
                    triples.push((i + 1, j + 1, k + 1));
                }
            }
        }
        return Ok(ModPNonexistenceCert { p, t: count, triples });
    }
    Err(ProveError::PrimeRetriesExhausted(PRIME_RETRY_CAP))
}

/// Exact count of index triples with a_i + b_j + c_k = 0 (mod p), via
/// residue histograms and exact integer convolution.
pub fn count_zero_triples_mod_p(a: &[i64], b: &[i64], c: &[i64], p: u64) -> Result<u128> {
    if a.is_empty() || b.is_empty() || c.is_empty() {
        return Ok(0);
    }
    let pu = p as usize;
    let mut ha = vec![0u64; pu];
    let mut hb = vec![0u64; pu];
    let mut hc = vec![0u64; pu];
    for &v in a {
        ha[residue(v, p) as usize] += 1;
    }
    for &v in b {
        hb[residue(v, p) as usize] += 1;
    }
    for &v in c {
        hc[residue(v, p) as usize] += 1;
    }
    let ab = exact_convolve(&ha, &hb)?;
    drop(ha);
    drop(hb);
    let mut count: u128 = 0;
    for (u, &w) in ab.iter().enumerate() {
        if w == 0 {
            continue;
        }
        let rc = (2 * pu - u % pu) % pu;
        count += w * hc[rc] as u128;
    }
    Ok(count)
}

/// Verifier side of the nonexistence certificate. Returns the failing
/// check's tag on rejection.
pub fn verify_nonexistence(
    a: &[i64],
    b: &[i64],
    c: &[i64],
    params_n: usize,
    cert: &ModPNonexistenceCert,
) -> std::result::Result<(), String> {
    // (1) p is a prime from the first ceil(n^1.5) primes.
    if !is_prime(cert.p) {
        return Err("cert-prime-not-prime".into());
    }
    let pool = primes_first(pool_size(params_n));
    if cert.p > *pool.last().unwrap() {
        return Err("cert-prime-out-of-pool".into());
    }
    // (2) count matches the list, is under threshold, and the list is
    // strictly lex-increasing with indices in range.
    if cert.t != cert.triples.len() as u64 {
        return Err("cert-count-list-mismatch".into());
    }
    if cert.t > fp_threshold(params_n) {
        return Err("cert-count-over-threshold".into());
    }
    for w in cert.triples.windows(2) {
        if w[0] >= w[1] {
            return Err("cert-list-not-increasing".into());
        }
    }
    for &(i, j, k) in &cert.triples {
        if i == 0 || j == 0 || k == 0 || i > a.len() || j > b.len() || k > c.len() {
            return Err("cert-index-out-of-range".into());
        }
    }
    // (3) independent mod-p count.
    let counted = count_zero_triples_mod_p(a, b, c, cert.p).map_err(|_| "cert-count-overflow")?;
    if counted != cert.t as u128 {
        return Err("cert-count-mismatch".into());
    }
    // (4) every listed triple sums to 0 mod p and nonzero over the integers.
    for &(i, j, k) in &cert.triples {
        let sum = a[i - 1] + b[j - 1] + c[k - 1];
        if sum == 0 {
            return Err("cert-triple-true-zero".into());
        }
        if sum.rem_euclid(cert.p as i64) != 0 {
            return Err("cert-triple-not-zero-mod-p".into());
        }
    }
    Ok(())
}

/// Standalone nonexistence prover over a full instance.
pub fn threesum_nonexistence_prove(
    inst: &ThreeSumInstance,
    rng: &mut RandomStream,
) -> std::result::Result<ModPNonexistenceCert, ProveError> {
    let (a, b, c) = inst.lists();
    prove_nonexistence(a, b, c, inst.n(), rng)
}

/// Standalone nonexistence verifier over a full instance.
pub fn threesum_nonexistence_verify(
    inst: &ThreeSumInstance,
    cert: &ModPNonexistenceCert,
) -> std::result::Result<(), String> {
    let (a, b, c) = inst.lists();
    verify_nonexistence(a, b, c, inst.n(), cert)
}

/// Lexicographically first zero triple (1-based), by sorted-table lookups
/// over c: O(n^2 log n).
pub fn lex_first_triple(inst: &ThreeSumInstance) -> Option<(usize, usize, usize)> {
    let (a, b, c) = inst.lists();
    // (value, k) sorted so the smallest k per value comes first.
    let mut table: Vec<(i64, usize)> = c.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    table.sort_unstable();
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            let target = -(ai + bj);
            let lo = table.partition_point(|&(v, _)| v < target);
            let hi = table.partition_point(|&(v, _)| v <= target);
            if let Some(k) = table[lo..hi].iter().map(|&(_, k)| k).min() {
                return Some((i + 1, j + 1, k + 1));
            }
        }
    }
    None
}

pub fn prove(inst: &ThreeSumInstance, rng: &mut RandomStream) -> Result<Vec<u8>> {
    let (a, b, c) = inst.lists();
    let mut kv = KvLines::new();
    match lex_first_triple(inst) {
        Some((i, j, k)) => {
            kv.push("solution", join_ints(&[i, j, k]));
            if i > 1 {
                let cert = prove_nonexistence(&a[..i - 1], b, c, inst.n(), rng)?;
                cert.render_into(&mut kv, "cert-");
            }
        }
        None => {
            kv.push("solution", "none");
            let cert = prove_nonexistence(a, b, c, inst.n(), rng)?;
            cert.render_into(&mut kv, "cert-");
        }
    }
    Ok(kv.render().into_bytes())
}

pub fn verify(inst: &ThreeSumInstance, message: &[u8], _rng: &mut RandomStream) -> ProtocolOutcome {
    let text = match std::str::from_utf8(message) {
        Ok(t) => t,
        Err(_) => return ProtocolOutcome::bot("malformed-utf8"),
    };
    let kv = match KvLines::parse(text) {
        Ok(kv) => kv,
        Err(_) => return ProtocolOutcome::bot("malformed-message"),
    };
    let (a, b, c) = inst.lists();
    let n = inst.n();
    let solution = match kv.get("solution") {
        Some(s) => s,
        None => return ProtocolOutcome::bot("missing-solution"),
    };
    let cert = match ModPNonexistenceCert::parse_from(&kv, "cert-") {
        Ok(c) => c,
        Err(_) => return ProtocolOutcome::bot("malformed-certificate"),
    };

    if solution == "none" {
        let cert = match cert {
            Some(c) => c,
            None => return ProtocolOutcome::bot("missing-certificate"),
        };
        return match verify_nonexistence(a, b, c, n, &cert) {
            Ok(()) => ProtocolOutcome::bot("no-solution"),
            Err(tag) => ProtocolOutcome::bot(tag),
        };
    }

    let idx = match parse_usize_list(solution) {
        Ok(v) if v.len() == 3 => v,
        _ => return ProtocolOutcome::bot("malformed-solution"),
    };
    let (i, j, k) = (idx[0], idx[1], idx[2]);
    if i == 0 || j == 0 || k == 0 || i > n || j > n || k > n {
        return ProtocolOutcome::bot("solution-out-of-range");
    }
    if a[i - 1] + b[j - 1] + c[k - 1] != 0 {
        return ProtocolOutcome::bot("solution-not-zero");
    }
    // No zero triple uses a_1..a_{i-1}: mod-p certificate.
    if i > 1 {
        let cert = match cert {
            Some(c) => c,
            None => return ProtocolOutcome::bot("missing-certificate"),
        };
        if let Err(tag) = verify_nonexistence(&a[..i - 1], b, c, n, &cert) {
            return ProtocolOutcome::bot(tag);
        }
    } else if cert.is_some() {
        return ProtocolOutcome::bot("unexpected-certificate");
    }
    // No j' < j works with a_i: membership scan against sorted c.
    let mut sorted_c: Vec<i64> = c.to_vec();
    sorted_c.sort_unstable();
    for &bj in &b[..j - 1] {
        let target = -(a[i - 1] + bj);
        if sorted_c.binary_search(&target).is_ok() {
            return ProtocolOutcome::bot("prefix-b-has-solution");
        }
    }
    // No k' < k works with (a_i, b_j): linear scan.
    for &ck in &c[..k - 1] {
        if a[i - 1] + b[j - 1] + ck == 0 {
            return ProtocolOutcome::bot("prefix-c-has-solution");
        }
    }
    ProtocolOutcome::canonical(join_ints(&[i, j, k]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::random::Role;

    fn inst(a: &[i64], b: &[i64], c: &[i64]) -> ThreeSumInstance {
        ThreeSumInstance::new(a.to_vec(), b.to_vec(), c.to_vec()).unwrap()
    }

    /// Independent oracle: full cubic scan.
    fn brute_first(inst: &ThreeSumInstance) -> Option<(usize, usize, usize)> {
        let (a, b, c) = inst.lists();
        for i in 0..a.len() {
            for j in 0..b.len() {
                for k in 0..c.len() {
                    if a[i] + b[j] + c[k] == 0 {
                        return Some((i + 1, j + 1, k + 1));
                    }
                }
            }
        }
        None
    }

    #[test]
    fn pool_and_threshold_values() {
        assert_eq!(pool_size(1), 1);
        assert_eq!(pool_size(4), 8);
        // ceil(32^1.5) = ceil(181.02) = 182.
        assert_eq!(pool_size(32), 182);
        // 182 * 5^2 = 4550.
        assert_eq!(fp_threshold(32), 4550);
        assert_eq!(fp_threshold(1), 4);
    }

    #[test]
    fn magnitude_bound_enforced() {
        assert!(ThreeSumInstance::new(vec![1], vec![1], vec![-3]).is_ok());
        assert!(ThreeSumInstance::new(vec![8], vec![0], vec![0]).is_err());
        assert!(ThreeSumInstance::new(vec![1, 2], vec![3, 4], vec![-4, -5]).is_ok());
    }

    #[test]
    fn lex_first_matches_brute_force() {
        let cases = [
            inst(&[1, 2], &[3, 4], &[-4, -5]),
            inst(&[0, 0], &[0, 0], &[0, 0]),
            inst(&[5], &[5], &[5]),
            inst(&[1, -1, 2], &[0, 1, -2], &[0, 1, -1]),
        ];
        for c in &cases {
            assert_eq!(lex_first_triple(c), brute_first(c));
        }
    }

    #[test]
    fn spec_examples_honest_run() {
        let mut prng = RandomStream::derive(1, Role::Prover);
        let mut vrng = RandomStream::derive(2, Role::Verifier);

        // Lex-first zero triple is (1,1,1): 1 + 3 - 4 = 0.
        let i1 = inst(&[1, 2], &[3, 4], &[-4, -5]);
        let msg = prove(&i1, &mut prng).unwrap();
        let out = verify(&i1, &msg, &mut vrng);
        assert_eq!(out.canonical_payload(), Some(b"1 1 1".as_ref()));

        // 3 > 0: no zero triple.
        let i2 = inst(&[1], &[1], &[1]);
        let msg = prove(&i2, &mut prng).unwrap();
        let out = verify(&i2, &msg, &mut vrng);
        assert_eq!(out.bot_reason(), Some("no-solution"));

        // All-zero instance: first triple solves, no certificates needed.
        let i3 = inst(&[0, 0], &[0, 0], &[0, 0]);
        let msg = prove(&i3, &mut prng).unwrap();
        assert!(!String::from_utf8_lossy(&msg).contains("cert-prime"));
        let out = verify(&i3, &msg, &mut vrng);
        assert_eq!(out.canonical_payload(), Some(b"1 1 1".as_ref()));
    }

    #[test]
    fn truncated_message_rejected() {
        let i1 = inst(&[1, 2], &[3, 4], &[-4, -5]);
        let mut prng = RandomStream::derive(1, Role::Prover);
        let mut vrng = RandomStream::derive(2, Role::Verifier);
        let msg = prove(&i1, &mut prng).unwrap();
        let truncated = &msg[..msg.len() / 2];
        let out = verify(&i1, truncated, &mut vrng);
        assert!(!out.is_canonical());
    }

    #[test]
    fn nonexistence_cert_hand_cases() {
        let mut rng = RandomStream::derive(3, Role::Prover);
        // n = 1: pool = {2}. 1 + 1 + 1 = 3 = 1 (mod 2), so t = 0.
        let i1 = inst(&[1], &[1], &[1]);
        let cert = threesum_nonexistence_prove(&i1, &mut rng).unwrap();
        assert_eq!((cert.p, cert.t), (2, 0));
        assert!(threesum_nonexistence_verify(&i1, &cert).is_ok());

        // 1 + 1 - 3 = -1 = 1 (mod 2): t = 0.
        let i2 = inst(&[1], &[1], &[-3]);
        let cert = threesum_nonexistence_prove(&i2, &mut rng).unwrap();
        assert_eq!((cert.p, cert.t), (2, 0));
        assert!(threesum_nonexistence_verify(&i2, &cert).is_ok());

        // 2 + 2 + 2 = 6 = 0 (mod 2) but != 0: one false positive listed.
        let i3 = inst(&[2], &[2], &[2]);
        let cert = threesum_nonexistence_prove(&i3, &mut rng).unwrap();
        assert_eq!((cert.p, cert.t), (2, 1));
        assert_eq!(cert.triples, vec![(1, 1, 1)]);
        assert!(threesum_nonexistence_verify(&i3, &cert).is_ok());
    }

    #[test]
    fn nonexistence_verify_rejects_mutations() {
        // Mod-5 false positives: 1 + 1 + 3 = 5. Use an instance large
        // enough that 5 is in the pool (n = 2: pool = {2, 3, 5}); the four
        // triples ending at c_1 = 3 are exactly the false positives.
        let i = inst(&[1, 1], &[1, 1], &[3, 4]);
        let full = ModPNonexistenceCert {
            p: 5,
            t: 4,
            triples: vec![(1, 1, 1), (1, 2, 1), (2, 1, 1), (2, 2, 1)],
        };
        assert!(threesum_nonexistence_verify(&i, &full).is_ok());

        // t decremented and one triple dropped: independent count differs.
        let mut dropped = full.clone();
        dropped.t -= 1;
        dropped.triples.pop();
        assert_eq!(
            threesum_nonexistence_verify(&i, &dropped),
            Err("cert-count-mismatch".to_string())
        );

        // A listed triple whose true sum is zero.
        let iz = inst(&[0, 1], &[0, 1], &[0, 1]);
        let bad = ModPNonexistenceCert {
            p: 2,
            t: 1,
            triples: vec![(1, 1, 1)],
        };
        let r = threesum_nonexistence_verify(&iz, &bad);
        assert!(r.is_err());

        // Prime outside the pool.
        let mut off_pool = full.clone();
        off_pool.p = 7;
        assert_eq!(
            threesum_nonexistence_verify(&i, &off_pool),
            Err("cert-prime-out-of-pool".to_string())
        );

        // Composite p.
        let mut composite = full.clone();
        composite.p = 4;
        assert_eq!(
            threesum_nonexistence_verify(&i, &composite),
            Err("cert-prime-not-prime".to_string())
        );

        // Swapped entries break strict lex order.
        let mut swapped = full.clone();
        swapped.triples.swap(0, 1);
        assert_eq!(
            threesum_nonexistence_verify(&i, &swapped),
            Err("cert-list-not-increasing".to_string())
        );
    }

    #[test]
    fn convolution_count_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(99);
        for _ in 0..50 {
            let n = rng.gen_range(1..=24);
            let bound = ThreeSumInstance::magnitude_bound(n) - 1;
            let gen_list =
                |rng: &mut rand_chacha::ChaCha12Rng| -> Vec<i64> {
                    (0..n).map(|_| rng.gen_range(-bound..=bound)).collect()
                };
            let i = inst(&gen_list(&mut rng), &gen_list(&mut rng), &gen_list(&mut rng));
            let p = [2u64, 3, 5, 7, 11, 13][rng.gen_range(0..6)];
            let (a, b, c) = i.lists();
            let mut brute: u128 = 0;
            for &x in a {
                for &y in b {
                    for &z in c {
                        if (x + y + z).rem_euclid(p as i64) == 0 {
                            brute += 1;
                        }
                    }
                }
            }
            assert_eq!(count_zero_triples_mod_p(a, b, c, p).unwrap(), brute);
        }
    }
}
