use thiserror::Error;

/// Errors surfaced by instance parsing, protocol configuration, and the
/// honest prover. These are distinct from a `Bot` verdict: `Bot` means the
/// verifier examined a well-formed run and rejected it, an `Error` means the
/// run could not be carried out at all.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("prover error: {0}")]
    Prove(#[from] ProveError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Failures of the honest prover while constructing a message.
#[derive(Debug, Error)]
pub enum ProveError {
    /// The prover drew this many consecutive primes whose false-positive
    /// count exceeded the certificate threshold. Markov's bound makes each
    /// draw succeed with probability at least 1/2, so exhausting the budget
    /// signals a bug rather than bad luck.
    #[error("prime retry budget exhausted after {0} draws")]
    PrimeRetriesExhausted(u32),
    #[error("internal prover failure: {0}")]
    Internal(String),
}

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
