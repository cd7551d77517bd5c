//! The generic lex-first composer: given an existence relation over block
//! decompositions y = y_1..y_k and a prefix-nonexistence check, produce a
//! prover/verifier pair whose canonical solution is the lexicographically
//! first y with R(x, y).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::protocol::outcome::ProtocolOutcome;
use crate::protocol::random::RandomStream;
use crate::protocol::registry::ProtocolPair;
use crate::protocol::text::{join_ints, parse_u64_list, KvLines};

/// Relation check over a full block tuple.
pub type RelationFn = dyn Fn(&[u32]) -> bool + Send + Sync;

/// `(prefix, bound) -> true` iff no z < bound extends `prefix` to a
/// solution. When absent, the verifier brute-forces completions through the
/// relation.
pub type PrefixNonexistenceFn = dyn Fn(&[u32], u32) -> bool + Send + Sync;

/// A lex-first search specification: k blocks with domains 0..size_i,
/// compared ascending per block, tuples left-to-right.
#[derive(Clone)]
pub struct LexSearchSpec {
    pub label: String,
    pub block_domains: Vec<u32>,
    pub relation: Arc<RelationFn>,
    pub prefix_nonexistence: Option<Arc<PrefixNonexistenceFn>>,
}

impl LexSearchSpec {
    pub fn block_count(&self) -> usize {
        self.block_domains.len()
    }
}

fn for_each_tuple_lex(domains: &[u32], mut f: impl FnMut(&[u32]) -> bool) -> bool {
    let k = domains.len();
    let mut tuple = vec![0u32; k];
    loop {
        if f(&tuple) {
            return true;
        }
        // Advance in lex order (odometer from the last block).
        let mut pos = k;
        loop {
            if pos == 0 {
                return false;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < domains[pos] {
                break;
            }
            tuple[pos] = 0;
        }
        for slot in tuple.iter_mut().skip(pos + 1) {
            *slot = 0;
        }
    }
}

/// First solution in lexicographic order, by full enumeration.
pub fn lex_first_solution(spec: &LexSearchSpec) -> Option<Vec<u32>> {
    let mut found = None;
    for_each_tuple_lex(&spec.block_domains, |tuple| {
        if (spec.relation)(tuple) {
            found = Some(tuple.to_vec());
            true
        } else {
            false
        }
    });
    found
}

/// True iff some completion of `prefix ++ [z]` satisfies the relation.
fn prefix_extends(spec: &LexSearchSpec, prefix: &[u32], z: u32) -> bool {
    let fixed = prefix.len() + 1;
    let rest = &spec.block_domains[fixed..];
    let mut tuple = Vec::with_capacity(spec.block_count());
    tuple.extend_from_slice(prefix);
    tuple.push(z);
    if rest.is_empty() {
        return (spec.relation)(&tuple);
    }
    for_each_tuple_lex(rest, |suffix| {
        tuple.truncate(fixed);
        tuple.extend_from_slice(suffix);
        (spec.relation)(&tuple)
    })
}

/// True iff no z < bound extends the prefix to a solution; uses the spec's
/// own nonexistence handle when provided.
pub fn prefix_none_below(spec: &LexSearchSpec, prefix: &[u32], bound: u32) -> bool {
    if let Some(check) = &spec.prefix_nonexistence {
        return check(prefix, bound);
    }
    !(0..bound).any(|z| prefix_extends(spec, prefix, z))
}

/// Verifier side: the two-stage check that `blocks` is the lex-first
/// solution. Returns the failing check's tag on rejection.
pub fn check_blocks(spec: &LexSearchSpec, blocks: &[u32]) -> std::result::Result<(), String> {
    if blocks.len() != spec.block_count() {
        return Err("solution-block-count".into());
    }
    for (b, d) in blocks.iter().zip(&spec.block_domains) {
        if b >= d {
            return Err("solution-out-of-domain".into());
        }
    }
    if !(spec.relation)(blocks) {
        return Err("relation-fails".into());
    }
    for i in 0..blocks.len() {
        if !prefix_none_below(spec, &blocks[..i], blocks[i]) {
            return Err("prefix-not-minimal".into());
        }
    }
    Ok(())
}

/// True iff the relation has no solution at all.
pub fn check_no_solution(spec: &LexSearchSpec) -> bool {
    spec.block_domains.first().map_or(true, |&d0| {
        prefix_none_below(spec, &[], d0)
    })
}

/// Builds the pseudo-deterministic pair realizing the lex-first search. The
/// prover finds the lex-first solution; the verifier checks the relation
/// plus one prefix-nonexistence claim per block.
pub fn compose_lex_first(spec: LexSearchSpec) -> Result<ProtocolPair> {
    if spec.block_count() == 0 {
        return Err(Error::config("lex search needs at least one block"));
    }
    if spec.block_domains.iter().any(|&d| d == 0) {
        return Err(Error::config("lex search blocks need non-empty domains"));
    }
    let label = spec.label.clone();
    let prover_spec = Arc::new(spec);
    let verifier_spec = Arc::clone(&prover_spec);

    let prover = Box::new(move |_inst: &Instance, _rng: &mut RandomStream| {
        let mut kv = KvLines::new();
        match lex_first_solution(&prover_spec) {
            Some(blocks) => kv.push("solution", join_ints(&blocks)),
            None => kv.push("solution", "none"),
        }
        Ok(kv.render().into_bytes())
    });

    let verifier = Box::new(move |_inst: &Instance, message: &[u8], _rng: &mut RandomStream| {
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
        if solution == "none" {
            return if check_no_solution(&verifier_spec) {
                ProtocolOutcome::bot("no-solution")
            } else {
                ProtocolOutcome::bot("solution-exists")
            };
        }
        let blocks: Vec<u32> = match parse_u64_list(solution) {
            Ok(v) => v.into_iter().map(|x| x as u32).collect(),
            Err(_) => return ProtocolOutcome::bot("malformed-solution"),
        };
        match check_blocks(&verifier_spec, &blocks) {
            Ok(()) => ProtocolOutcome::canonical(join_ints(&blocks)),
            Err(tag) => ProtocolOutcome::bot(tag),
        }
    });

    Ok(ProtocolPair {
        tag: label,
        prover,
        verifier,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec_from_set(domains: Vec<u32>, solutions: Vec<Vec<u32>>) -> LexSearchSpec {
        LexSearchSpec {
            label: "lex-test".into(),
            block_domains: domains,
            relation: Arc::new(move |y: &[u32]| solutions.iter().any(|s| s == y)),
            prefix_nonexistence: None,
        }
    }

    #[test]
    fn lex_first_of_explicit_set() {
        // Solutions {10, 11} over {0,1}^2: lex-first is 10.
        let spec = spec_from_set(vec![2, 2], vec![vec![1, 0], vec![1, 1]]);
        assert_eq!(lex_first_solution(&spec), Some(vec![1, 0]));
        assert!(check_blocks(&spec, &[1, 0]).is_ok());
        assert_eq!(
            check_blocks(&spec, &[1, 1]),
            Err("prefix-not-minimal".to_string())
        );
    }

    #[test]
    fn no_solution_case() {
        let spec = spec_from_set(vec![2, 2], vec![]);
        assert_eq!(lex_first_solution(&spec), None);
        assert!(check_no_solution(&spec));
    }

    #[test]
    fn odd_parity_over_three_bits() {
        // All y in {0,1}^3 with odd parity; enumeration gives 001 first.
        let spec = LexSearchSpec {
            label: "parity".into(),
            block_domains: vec![2, 2, 2],
            relation: Arc::new(|y: &[u32]| y.iter().sum::<u32>() % 2 == 1),
            prefix_nonexistence: None,
        };
        assert_eq!(lex_first_solution(&spec), Some(vec![0, 0, 1]));
        assert!(check_blocks(&spec, &[0, 0, 1]).is_ok());
    }

    #[test]
    fn zero_blocks_is_a_config_error() {
        let spec = spec_from_set(vec![], vec![]);
        assert!(compose_lex_first(spec).is_err());
        let spec = spec_from_set(vec![2, 0], vec![]);
        assert!(compose_lex_first(spec).is_err());
    }

    #[test]
    fn custom_prefix_handle_is_used() {
        use std::sync::atomic::{AtomicUsize, Ordering};
        static CALLS: AtomicUsize = AtomicUsize::new(0);
        let spec = LexSearchSpec {
            label: "handle".into(),
            block_domains: vec![3],
            relation: Arc::new(|y: &[u32]| y[0] == 1),
            prefix_nonexistence: Some(Arc::new(|_prefix: &[u32], bound: u32| {
                CALLS.fetch_add(1, Ordering::Relaxed);
                bound <= 1
            })),
        };
        assert!(check_blocks(&spec, &[1]).is_ok());
        assert!(CALLS.load(Ordering::Relaxed) > 0);
    }
}
