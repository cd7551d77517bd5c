//! Ordered protocol transcripts with a canonical file encoding.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::protocol::random::Role;
use crate::protocol::text::{split_sections, KvLines, SECTION_DELIMITER};

/// Hex SHA-256 of a canonical serialization; used to bind transcripts to the
/// instance they were produced for.
pub fn digest_hex(bytes: &[u8]) -> String {
    let d = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in d {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// The ordered prover/verifier messages of one protocol run. Roles
/// alternate starting with the prover; every protocol here is prover-first
/// and constant-round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub problem: String,
    pub instance_digest: String,
    messages: Vec<(Role, Vec<u8>)>,
}

impl Transcript {
    pub fn new(problem: impl Into<String>, instance_digest: impl Into<String>) -> Self {
        Transcript {
            problem: problem.into(),
            instance_digest: instance_digest.into(),
            messages: Vec::new(),
        }
    }

    pub fn push(&mut self, role: Role, payload: Vec<u8>) {
        let expected = if self.messages.len() % 2 == 0 {
            Role::Prover
        } else {
            Role::Verifier
        };
        assert_eq!(role, expected, "transcript roles must alternate, prover first");
        self.messages.push((role, payload));
    }

    pub fn messages(&self) -> &[(Role, Vec<u8>)] {
        &self.messages
    }

    pub fn prover_messages(&self) -> impl Iterator<Item = &[u8]> {
        self.messages
            .iter()
            .filter(|(r, _)| *r == Role::Prover)
            .map(|(_, p)| p.as_slice())
    }

    /// First prover message; every protocol in this crate sends exactly one.
    pub fn first_prover_message(&self) -> Result<&[u8]> {
        self.prover_messages()
            .next()
            .ok_or_else(|| Error::parse("transcript has no prover message"))
    }

    /// Replaces the first prover message, used by the adversarial harness.
    pub fn with_first_prover_message(&self, payload: Vec<u8>) -> Transcript {
        let mut t = self.clone();
        for slot in t.messages.iter_mut() {
            if slot.0 == Role::Prover {
                slot.1 = payload;
                break;
            }
        }
        t
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("problem: {}\n", self.problem));
        out.push_str(&format!("instance-digest: {}\n", self.instance_digest));
        for (role, payload) in &self.messages {
            out.push_str(SECTION_DELIMITER);
            out.push('\n');
            out.push_str(&format!("role: {}\n", role.as_str()));
            out.push_str(&String::from_utf8_lossy(payload));
            if !payload.is_empty() && !payload.ends_with(b"\n") {
                out.push('\n');
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Transcript> {
        let sections = split_sections(text);
        if sections.is_empty() {
            return Err(Error::parse("empty transcript"));
        }
        let header = KvLines::parse(&sections[0])?;
        let problem = header.require("problem")?.to_string();
        let digest = header.require("instance-digest")?.to_string();
        let mut t = Transcript::new(problem, digest);
        for section in &sections[1..] {
            let (role_line, payload) = match section.split_once('\n') {
                Some((first, rest)) => (first, rest),
                None => (section.as_str(), ""),
            };
            let role = match role_line.trim() {
                "role: prover" => Role::Prover,
                "role: verifier" => Role::Verifier,
                other => {
                    return Err(Error::parse(format!(
                        "transcript section must start with a role line, got `{other}`"
                    )))
                }
            };
            let expected = if t.messages.len() % 2 == 0 {
                Role::Prover
            } else {
                Role::Verifier
            };
            if role != expected {
                return Err(Error::parse("transcript roles out of order"));
            }
            t.messages.push((role, payload.as_bytes().to_vec()));
        }
        Ok(t)
    }
}
