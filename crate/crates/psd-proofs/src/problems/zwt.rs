//! Zero-Weight Triangle: find the lexicographically first triangle
//! (i, j, k), i < j < k, with e(i,j) + e(i,k) + e(j,k) = 0, certified by a
//! mod-p false-positive list over the triangles preceding it.

use crate::algebra::primes::{is_prime, primes_first};
use crate::error::{Error, ProveError, Result};
use crate::problems::threesum::pool_size;
use crate::protocol::outcome::ProtocolOutcome;
use crate::protocol::random::RandomStream;
use crate::protocol::text::{join_ints, parse_i64, parse_usize, parse_usize_list, KvLines};

/// Complete graph on n vertices with symmetric integer edge weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZwtInstance {
    n: usize,
    /// Full symmetric matrix, zero diagonal.
    w: Vec<Vec<i64>>,
}

impl ZwtInstance {
    pub fn new(n: usize, edges: &[(usize, usize, i64)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::parse("ZWT needs at least one vertex"));
        }
        let mut w = vec![vec![0i64; n + 1]; n + 1];
        let mut seen = vec![vec![false; n + 1]; n + 1];
        for &(i, j, wt) in edges {
            if i == 0 || j == 0 || i >= j || j > n {
                return Err(Error::parse("ZWT edges must satisfy 1 <= i < j <= n"));
            }
            if seen[i][j] {
                return Err(Error::parse("duplicate ZWT edge"));
            }
            seen[i][j] = true;
            w[i][j] = wt;
            w[j][i] = wt;
        }
        for i in 1..=n {
            for j in i + 1..=n {
                if !seen[i][j] {
                    return Err(Error::parse("ZWT graph must be complete"));
                }
            }
        }
        Ok(ZwtInstance { n, w })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edge weight; vertices are 1-based and distinct.
    pub fn weight(&self, i: usize, j: usize) -> i64 {
        self.w[i][j]
    }

    /// Max |e|, the weight bound W.
    pub fn weight_bound(&self) -> i64 {
        let mut w = 0;
        for i in 1..=self.n {
            for j in i + 1..=self.n {
                w = w.max(self.w[i][j].abs());
            }
        }
        w
    }

    pub fn triangle_weight(&self, i: usize, j: usize, k: usize) -> i64 {
        self.w[i][j] + self.w[i][k] + self.w[j][k]
    }

    pub fn render_body(&self, kv: &mut KvLines) {
        kv.push("n", self.n.to_string());
        for i in 1..=self.n {
            for j in i + 1..=self.n {
                kv.push_bare(format!("{} {} {}", i, j, self.w[i][j]));
            }
        }
    }

    pub fn parse_body(kv: &KvLines) -> Result<Self> {
        let n = parse_usize(kv.require("n")?)?;
        let mut edges = Vec::new();
        for line in kv.bare() {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(Error::parse("ZWT edge line must be `i j w`"));
            }
            edges.push((
                parse_usize(parts[0])?,
                parse_usize(parts[1])?,
                parse_i64(parts[2])?,
            ));
        }
        Self::new(n, &edges)
    }
}

/// Exact count of triangles i < j < k with weight 0 mod p.
pub fn zwt_count_mod_p(inst: &ZwtInstance, p: u64) -> u64 {
    count_mod_p_min_below(inst, p, inst.n() + 1)
}

/// Triangles with minimum vertex strictly below `bound`, counted mod p.
fn count_mod_p_min_below(inst: &ZwtInstance, p: u64, bound: usize) -> u64 {
    let n = inst.n();
    let mut count = 0u64;
    for i in 1..bound.min(n + 1) {
        for j in i + 1..=n {
            for k in j + 1..=n {
                if inst.triangle_weight(i, j, k).rem_euclid(p as i64) == 0 {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Threshold on listed false positives: ceil(2 n^3 ceil(log2(3W+1)) / pool),
/// floored so tiny instances stay provable.
pub fn zwt_threshold(n: usize, weight_bound: i64) -> u64 {
    let mut lw = 0u64;
    let target = 3 * weight_bound as u128 + 1;
    while (1u128 << lw) < target {
        lw += 1;
    }
    let pool = pool_size(n) as u128;
    let num = 2 * (n as u128).pow(3) * lw as u128;
    (((num + pool - 1) / pool) as u64).max(4)
}

/// Mod-p nonexistence certificate over all triangles with min vertex below
/// `min_below` (1-based, exclusive).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZwtNonexistenceCert {
    pub p: u64,
    pub t: u64,
    /// Strictly lex-increasing (i, j, k) triangles, i < j < k.
    pub triangles: Vec<(usize, usize, usize)>,
}

const PRIME_RETRY_CAP: u32 = 64;

fn prove_nonexistence(
    inst: &ZwtInstance,
    min_below: usize,
    rng: &mut RandomStream,
) -> std::result::Result<ZwtNonexistenceCert, ProveError> {
    let n = inst.n();
    let pool = primes_first(pool_size(n));
    let threshold = zwt_threshold(n, inst.weight_bound());
    for _ in 0..PRIME_RETRY_CAP {
        let p = pool[rng.below(pool.len() as u64) as usize];
        let count = count_mod_p_min_below(inst, p, min_below);
        if count > threshold {
            continue;
        }
        let mut triangles = Vec::with_capacity(count as usize);
        for i in 1..min_below.min(n + 1) {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    let w = inst.triangle_weight(i, j, k);
                    if w.rem_euclid(p as i64) == 0 {
                        if w == 0 {
                            return Err(ProveError::Internal(
                                "ZWT nonexistence prover found a true zero triangle".into(),
                            ));
                        }
                        triangles.push((i, j, k));
                    }
                }
            }
        }
        return Ok(ZwtNonexistenceCert { p, t: count, triangles });
    }
    Err(ProveError::PrimeRetriesExhausted(PRIME_RETRY_CAP))
}

fn verify_nonexistence(
    inst: &ZwtInstance,
    min_below: usize,
    cert: &ZwtNonexistenceCert,
) -> std::result::Result<(), String> {
    let n = inst.n();
    if !is_prime(cert.p) {
        return Err("cert-prime-not-prime".into());
    }
    let pool = primes_first(pool_size(n));
    if cert.p > *pool.last().unwrap() {
        return Err("cert-prime-out-of-pool".into());
    }
    if cert.t != cert.triangles.len() as u64 {
        return Err("cert-count-list-mismatch".into());
    }
    if cert.t > zwt_threshold(n, inst.weight_bound()) {
        return Err("cert-count-over-threshold".into());
    }
    for w in cert.triangles.windows(2) {
        if w[0] >= w[1] {
            return Err("cert-list-not-increasing".into());
        }
    }
    for &(i, j, k) in &cert.triangles {
        if i == 0 || !(i < j && j < k) || k > n || i >= min_below {
            return Err("cert-triangle-out-of-range".into());
        }
        let w = inst.triangle_weight(i, j, k);
        if w == 0 {
            return Err("cert-triangle-true-zero".into());
        }
        if w.rem_euclid(cert.p as i64) != 0 {
            return Err("cert-triangle-not-zero-mod-p".into());
        }
    }
    if count_mod_p_min_below(inst, cert.p, min_below) != cert.t {
        return Err("cert-count-mismatch".into());
    }
    Ok(())
}

/// Lexicographically first zero-weight triangle, by brute force.
pub fn lex_first_triangle(inst: &ZwtInstance) -> Option<(usize, usize, usize)> {
    let n = inst.n();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                if inst.triangle_weight(i, j, k) == 0 {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

fn render_cert(kv: &mut KvLines, cert: &ZwtNonexistenceCert) {
    kv.push("cert-prime", cert.p.to_string());
    kv.push("cert-count", cert.t.to_string());
    for (i, j, k) in &cert.triangles {
        kv.push("cert-triangle", join_ints(&[*i, *j, *k]));
    }
}

fn parse_cert(kv: &KvLines) -> Result<Option<ZwtNonexistenceCert>> {
    let p = match kv.get("cert-prime") {
        None => return Ok(None),
        Some(v) => crate::protocol::text::parse_u64(v)?,
    };
    let t = crate::protocol::text::parse_u64(kv.require("cert-count")?)?;
    let mut triangles = Vec::new();
    for line in kv.get_all("cert-triangle") {
        let v = parse_usize_list(line)?;
        if v.len() != 3 {
            return Err(Error::parse("certificate triangle needs three vertices"));
        }
        triangles.push((v[0], v[1], v[2]));
    }
    Ok(Some(ZwtNonexistenceCert { p, t, triangles }))
}

pub fn prove(inst: &ZwtInstance, rng: &mut RandomStream) -> Result<Vec<u8>> {
    let mut kv = KvLines::new();
    match lex_first_triangle(inst) {
        Some((i, j, k)) => {
            kv.push("solution", join_ints(&[i, j, k]));
            if i > 1 {
                let cert = prove_nonexistence(inst, i, rng)?;
                render_cert(&mut kv, &cert);
            }
        }
        None => {
            kv.push("solution", "none");
            let cert = prove_nonexistence(inst, inst.n() + 1, rng)?;
            render_cert(&mut kv, &cert);
        }
    }
    Ok(kv.render().into_bytes())
}

pub fn verify(inst: &ZwtInstance, message: &[u8], _rng: &mut RandomStream) -> ProtocolOutcome {
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
    let cert = match parse_cert(&kv) {
        Ok(c) => c,
        Err(_) => return ProtocolOutcome::bot("malformed-certificate"),
    };
    let n = inst.n();

    if solution == "none" {
        let cert = match cert {
            Some(c) => c,
            None => return ProtocolOutcome::bot("missing-certificate"),
        };
        return match verify_nonexistence(inst, n + 1, &cert) {
            Ok(()) => ProtocolOutcome::bot("no-solution"),
            Err(tag) => ProtocolOutcome::bot(tag),
        };
    }

    let idx = match parse_usize_list(solution) {
        Ok(v) if v.len() == 3 => v,
        _ => return ProtocolOutcome::bot("malformed-solution"),
    };
    let (i, j, k) = (idx[0], idx[1], idx[2]);
    if i == 0 || !(i < j && j < k) || k > n {
        return ProtocolOutcome::bot("solution-out-of-range");
    }
    if inst.triangle_weight(i, j, k) != 0 {
        return ProtocolOutcome::bot("solution-not-zero");
    }
    // No zero triangle with minimum vertex before i: mod-p certificate.
    if i > 1 {
        let cert = match cert {
            Some(c) => c,
            None => return ProtocolOutcome::bot("missing-certificate"),
        };
        if let Err(tag) = verify_nonexistence(inst, i, &cert) {
            return ProtocolOutcome::bot(tag);
        }
    } else if cert.is_some() {
        return ProtocolOutcome::bot("unexpected-certificate");
    }
    // No (i, j', k') lexicographically before (i, j, k): direct O(n^2) scan.
    for jp in i + 1..=n {
        for kp in jp + 1..=n {
            if (jp, kp) >= (j, k) {
                break;
            }
            if inst.triangle_weight(i, jp, kp) == 0 {
                return ProtocolOutcome::bot("prefix-pair-has-triangle");
            }
        }
    }
    ProtocolOutcome::canonical(join_ints(&[i, j, k]))
}
