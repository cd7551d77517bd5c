//! Verifier verdicts.

/// The verifier's verdict: either the canonical solution for the instance or
/// rejection. These are the only two outcomes a protocol run can produce;
/// malformed instances and prover-side failures surface as typed errors
/// before any verdict exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProtocolOutcome {
    /// The canonical solution, in the problem's canonical text encoding.
    /// Always non-empty.
    Canonical(Vec<u8>),
    /// Rejection; `reason` names the failing check when the verifier can
    /// tell (e.g. `count-mismatch`), or records a certified correct
    /// rejection (e.g. `infeasible`).
    Bot { reason: Option<String> },
}

impl ProtocolOutcome {
    pub fn canonical(payload: impl Into<Vec<u8>>) -> Self {
        let payload = payload.into();
        assert!(!payload.is_empty(), "canonical payload must be non-empty");
        ProtocolOutcome::Canonical(payload)
    }

    pub fn bot(reason: impl Into<String>) -> Self {
        ProtocolOutcome::Bot {
            reason: Some(reason.into()),
        }
    }

    pub fn bot_unexplained() -> Self {
        ProtocolOutcome::Bot { reason: None }
    }

    pub fn is_canonical(&self) -> bool {
        matches!(self, ProtocolOutcome::Canonical(_))
    }

    pub fn canonical_payload(&self) -> Option<&[u8]> {
        match self {
            ProtocolOutcome::Canonical(p) => Some(p),
            ProtocolOutcome::Bot { .. } => None,
        }
    }

    pub fn bot_reason(&self) -> Option<&str> {
        match self {
            ProtocolOutcome::Canonical(_) => None,
            ProtocolOutcome::Bot { reason } => reason.as_deref(),
        }
    }

    /// Exit code for embedding: 0 = Canonical, 2 = Bot. (3 is reserved for
    /// typed errors, which never reach an outcome.)
    pub fn exit_code(&self) -> i32 {
        match self {
            ProtocolOutcome::Canonical(_) => 0,
            ProtocolOutcome::Bot { .. } => 2,
        }
    }
}

/// Exit code for typed errors, alongside `ProtocolOutcome::exit_code`.
pub const EXIT_ERROR: i32 = 3;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(ProtocolOutcome::canonical("1 2 3").exit_code(), 0);
        assert_eq!(ProtocolOutcome::bot("why").exit_code(), 2);
        assert_eq!(EXIT_ERROR, 3);
    }

    #[test]
    #[should_panic]
    fn empty_canonical_payload_rejected() {
        let _ = ProtocolOutcome::canonical("");
    }
}
