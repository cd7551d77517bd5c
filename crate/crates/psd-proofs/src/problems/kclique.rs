//! k-Clique (k = 3 or 4) through the generic lex-first composer with
//! brute-force existence and prefix checks at desk scale.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::protocol::composer::{compose_lex_first, LexSearchSpec};
use crate::protocol::outcome::ProtocolOutcome;
use crate::protocol::random::RandomStream;
use crate::protocol::text::{join_ints, parse_usize, parse_usize_list, KvLines};

pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KCliqueInstance {
    n: usize,
    k: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl KCliqueInstance {
    pub fn new(n: usize, k: usize, edge_list: &[(usize, usize)]) -> Result<Self> {
        if !(k == 3 || k == 4) {
            return Err(Error::parse("k-clique supports k = 3 or 4"));
        }
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::parse(format!(
                "k-clique supports 1..={MAX_VERTICES} vertices"
            )));
        }
        let mut edges = BTreeSet::new();
        for &(a, b) in edge_list {
            if a == 0 || b == 0 || a > n || b > n || a == b {
                return Err(Error::parse("edge endpoints must be distinct vertices"));
            }
            edges.insert((a.min(b), a.max(b)));
        }
        Ok(KCliqueInstance { n, k, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn render_body(&self, kv: &mut KvLines) {
        kv.push("n", self.n.to_string());
        kv.push("k", self.k.to_string());
        for &(a, b) in &self.edges {
            kv.push("e", format!("{a} {b}"));
        }
    }

    pub fn parse_body(kv: &KvLines) -> Result<Self> {
        let n = parse_usize(kv.require("n")?)?;
        let k = parse_usize(kv.require("k")?)?;
        let mut edges = Vec::new();
        for line in kv.get_all("e") {
            let v = parse_usize_list(line)?;
            if v.len() != 2 {
                return Err(Error::parse("edge line must be `e: a b`"));
            }
            edges.push((v[0], v[1]));
        }
        Self::new(n, k, &edges)
    }

    /// The lex-first search over k vertex blocks: a tuple is a solution
    /// when strictly increasing and pairwise adjacent. Blocks are 0-based;
    /// vertex v corresponds to block value v - 1.
    pub fn lex_spec(&self) -> LexSearchSpec {
        let inst = self.clone();
        LexSearchSpec {
            label: "kclique".into(),
            block_domains: vec![self.n as u32; self.k],
            relation: Arc::new(move |blocks: &[u32]| {
                blocks.windows(2).all(|w| w[0] < w[1])
                    && blocks.iter().enumerate().all(|(a, &va)| {
                        blocks[a + 1..]
                            .iter()
                            .all(|&vb| inst.has_edge(va as usize + 1, vb as usize + 1))
                    })
            }),
            prefix_nonexistence: None,
        }
    }
}

/// Lexicographically first increasing k-clique, 1-based.
pub fn lex_first_clique(inst: &KCliqueInstance) -> Option<Vec<usize>> {
    crate::protocol::composer::lex_first_solution(&inst.lex_spec())
        .map(|blocks| blocks.into_iter().map(|b| b as usize + 1).collect())
}

pub fn prove(inst: &KCliqueInstance, rng: &mut RandomStream) -> Result<Vec<u8>> {
    let pair = compose_lex_first(inst.lex_spec())?;
    let placeholder = Instance::KClique(inst.clone());
    let raw = (pair.prover)(&placeholder, rng)?;
    // Rewrite 0-based blocks as 1-based vertices.
    let kv = KvLines::parse(std::str::from_utf8(&raw).expect("composer emits utf8"))?;
    let mut out = KvLines::new();
    match kv.require("solution")? {
        "none" => out.push("solution", "none"),
        blocks => {
            let vertices: Vec<usize> = parse_usize_list(blocks)?
                .into_iter()
                .map(|b| b + 1)
                .collect();
            out.push("solution", join_ints(&vertices));
        }
    }
    Ok(out.render().into_bytes())
}

pub fn verify(inst: &KCliqueInstance, message: &[u8], rng: &mut RandomStream) -> ProtocolOutcome {
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
    let pair = match compose_lex_first(inst.lex_spec()) {
        Ok(p) => p,
        Err(_) => return ProtocolOutcome::bot("bad-spec"),
    };
    let placeholder = Instance::KClique(inst.clone());
    let inner = if solution == "none" {
        "solution: none\n".to_string()
    } else {
        let vertices = match parse_usize_list(solution) {
            Ok(v) => v,
            Err(_) => return ProtocolOutcome::bot("malformed-solution"),
        };
        if vertices.iter().any(|&v| v == 0) {
            return ProtocolOutcome::bot("solution-out-of-domain");
        }
        let blocks: Vec<usize> = vertices.iter().map(|&v| v - 1).collect();
        format!("solution: {}\n", join_ints(&blocks))
    };
    match (pair.verifier)(&placeholder, inner.as_bytes(), rng) {
        ProtocolOutcome::Canonical(payload) => {
            let blocks = parse_usize_list(
                KvLines::parse(std::str::from_utf8(&payload).unwrap())
                    .ok()
                    .and_then(|kv| kv.get("solution").map(str::to_string))
                    .as_deref()
                    .unwrap_or(std::str::from_utf8(&payload).unwrap()),
            )
            .unwrap_or_default();
            let vertices: Vec<usize> = blocks.into_iter().map(|b| b + 1).collect();
            ProtocolOutcome::canonical(join_ints(&vertices))
        }
        bot => bot,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::random::Role;

    fn inst(n: usize, k: usize, edges: &[(usize, usize)]) -> KCliqueInstance {
        KCliqueInstance::new(n, k, edges).unwrap()
    }

    fn run(i: &KCliqueInstance) -> ProtocolOutcome {
        let mut prng = RandomStream::derive(1, Role::Prover);
        let mut vrng = RandomStream::derive(2, Role::Verifier);
        let msg = prove(i, &mut prng).unwrap();
        verify(i, &msg, &mut vrng)
    }

    #[test]
    fn spec_examples() {
        // Triangle graph.
        let i = inst(3, 3, &[(1, 2), (1, 3), (2, 3)]);
        assert_eq!(run(&i).canonical_payload(), Some(b"1 2 3".as_ref()));

        // C4 has no triangle.
        let i = inst(4, 3, &[(1, 2), (2, 3), (3, 4), (4, 1)]);
        assert_eq!(run(&i).bot_reason(), Some("no-solution"));

        // K4 minus edge (1,2): triples by brute force leave (1,3,4) first.
        let i = inst(4, 3, &[(1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
        assert_eq!(run(&i).canonical_payload(), Some(b"1 3 4".as_ref()));
    }

    #[test]
    fn four_cliques() {
        // K5 minus edge (1,2): first 4-clique avoids {1,2} together.
        let mut edges = Vec::new();
        for a in 1..=5usize {
            for b in a + 1..=5 {
                if (a, b) != (1, 2) {
                    edges.push((a, b));
                }
            }
        }
        let i = inst(5, 4, &edges);
        assert_eq!(run(&i).canonical_payload(), Some(b"1 3 4 5".as_ref()));
    }

    #[test]
    fn forged_clique_rejected() {
        // Two triangles; the later one is rejected.
        let i = inst(6, 3, &[(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)]);
        let mut vrng = RandomStream::derive(2, Role::Verifier);
        let out = verify(&i, b"solution: 4 5 6\n", &mut vrng);
        assert_eq!(out.bot_reason(), Some("prefix-not-minimal"));
        let out = verify(&i, b"solution: 3 2 1\n", &mut vrng);
        assert!(!out.is_canonical());
    }

    #[test]
    fn k_bounds_enforced() {
        assert!(KCliqueInstance::new(5, 2, &[]).is_err());
        assert!(KCliqueInstance::new(5, 5, &[]).is_err());
    }
}
