//! Hitting Set: find the first set in S that intersects every set in T,
//! with per-set witnesses and empty-intersection witnesses for the rejected
//! prefix.

use crate::error::{Error, Result};
use crate::protocol::outcome::ProtocolOutcome;
use crate::protocol::random::RandomStream;
use crate::protocol::text::{join_ints, parse_i64_list, parse_usize, KvLines};

/// Collections S and T; every set is a sorted duplicate-free integer list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingSetInstance {
    s_sets: Vec<Vec<i64>>,
    t_sets: Vec<Vec<i64>>,
}

impl HittingSetInstance {
    pub fn new(s_sets: Vec<Vec<i64>>, t_sets: Vec<Vec<i64>>) -> Result<Self> {
        for set in s_sets.iter().chain(&t_sets) {
            if set.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::parse(
                    "hitting set collections must be sorted and duplicate-free",
                ));
            }
        }
        Ok(HittingSetInstance { s_sets, t_sets })
    }

    pub fn s_sets(&self) -> &[Vec<i64>] {
        &self.s_sets
    }

    pub fn t_sets(&self) -> &[Vec<i64>] {
        &self.t_sets
    }

    /// Total element count m.
    pub fn m(&self) -> usize {
        self.s_sets.iter().map(Vec::len).sum::<usize>()
            + self.t_sets.iter().map(Vec::len).sum::<usize>()
    }

    pub fn render_body(&self, kv: &mut KvLines) {
        for s in &self.s_sets {
            kv.push_ints("s", s);
        }
        for t in &self.t_sets {
            kv.push_ints("t", t);
        }
    }

    pub fn parse_body(kv: &KvLines) -> Result<Self> {
        let s_sets: Vec<Vec<i64>> = kv
            .get_all("s")
            .map(parse_i64_list)
            .collect::<Result<_>>()?;
        let t_sets: Vec<Vec<i64>> = kv
            .get_all("t")
            .map(parse_i64_list)
            .collect::<Result<_>>()?;
        Self::new(s_sets, t_sets)
    }
}

fn sorted_disjoint(a: &[i64], b: &[i64]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

/// First 1-based index s with S_s hitting every T, found by scanning.
pub fn first_hitting_set(inst: &HittingSetInstance) -> Option<usize> {
    inst.s_sets
        .iter()
        .position(|s| inst.t_sets.iter().all(|t| !sorted_disjoint(s, t)))
        .map(|i| i + 1)
}

/// A set in T missed by the given S-set (any witness works; take the first).
fn find_miss(inst: &HittingSetInstance, s: &[i64]) -> Option<usize> {
    inst.t_sets
        .iter()
        .position(|t| sorted_disjoint(s, t))
        .map(|i| i + 1)
}

pub fn prove(inst: &HittingSetInstance, _rng: &mut RandomStream) -> Result<Vec<u8>> {
    let mut kv = KvLines::new();
    match first_hitting_set(inst) {
        Some(s) => {
            kv.push("solution", s.to_string());
            let chosen = &inst.s_sets[s - 1];
            for t in &inst.t_sets {
                let u = chosen
                    .iter()
                    .find(|v| t.binary_search(v).is_ok())
                    .expect("chosen set hits every T");
                kv.push("witness", u.to_string());
            }
            for prior in &inst.s_sets[..s - 1] {
                let miss = find_miss(inst, prior).expect("prior sets miss some T");
                kv.push("miss", miss.to_string());
            }
        }
        None => {
            kv.push("solution", "none");
            for s in &inst.s_sets {
                let miss = find_miss(inst, s).expect("every set misses some T");
                kv.push("miss", miss.to_string());
            }
        }
    }
    Ok(kv.render().into_bytes())
}

/// Checks a list of claimed empty intersections: `misses[i]` names a T-set
/// disjoint from `sets[i]`, verified by sorted-merge scan.
fn check_misses(
    inst: &HittingSetInstance,
    sets: &[Vec<i64>],
    misses: &[usize],
) -> std::result::Result<(), String> {
    if misses.len() != sets.len() {
        return Err("miss-count-mismatch".into());
    }
    for (s, &t_idx) in sets.iter().zip(misses) {
        if t_idx == 0 || t_idx > inst.t_sets.len() {
            return Err("miss-index-out-of-range".into());
        }
        if !sorted_disjoint(s, &inst.t_sets[t_idx - 1]) {
            return Err("claimed-miss-intersects".into());
        }
    }
    Ok(())
}

pub fn verify(inst: &HittingSetInstance, message: &[u8], _rng: &mut RandomStream) -> ProtocolOutcome {
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
    let misses: Vec<usize> = match kv
        .get_all("miss")
        .map(|v| v.parse::<usize>().map_err(|_| ()))
        .collect::<std::result::Result<_, _>>()
    {
        Ok(v) => v,
        Err(()) => return ProtocolOutcome::bot("malformed-miss"),
    };

    if solution == "none" {
        return match check_misses(inst, &inst.s_sets, &misses) {
            Ok(()) => ProtocolOutcome::bot("no-solution"),
            Err(tag) => ProtocolOutcome::bot(tag),
        };
    }

    let s: usize = match solution.parse() {
        Ok(v) => v,
        Err(_) => return ProtocolOutcome::bot("malformed-solution"),
    };
    if s == 0 || s > inst.s_sets.len() {
        return ProtocolOutcome::bot("solution-out-of-range");
    }
    let chosen = &inst.s_sets[s - 1];
    let witnesses: Vec<i64> = match kv
        .get_all("witness")
        .map(|v| v.parse::<i64>().map_err(|_| ()))
        .collect::<std::result::Result<_, _>>()
    {
        Ok(v) => v,
        Err(()) => return ProtocolOutcome::bot("malformed-witness"),
    };
    if witnesses.len() != inst.t_sets.len() {
        return ProtocolOutcome::bot("witness-count-mismatch");
    }
    for (t, u) in inst.t_sets.iter().zip(&witnesses) {
        if chosen.binary_search(u).is_err() || t.binary_search(u).is_err() {
            return ProtocolOutcome::bot("witness-not-in-intersection");
        }
    }
    if let Err(tag) = check_misses(inst, &inst.s_sets[..s - 1], &misses) {
        return ProtocolOutcome::bot(tag);
    }
    ProtocolOutcome::canonical(s.to_string())
}
