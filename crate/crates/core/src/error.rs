use thiserror::Error;

/// Errors shared across the order constructors, the engines and the probes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed order expression: {0}")]
    ParseOrder(String),

    #[error("malformed predicate JSON: {0}")]
    ParsePredicate(String),

    #[error("code {code} is not a member of the order")]
    NotAMember { code: u64 },

    #[error("exponent order is not claimed to be a well-order; pass the unsafe flag to build it anyway")]
    UnsafeExponent,

    #[error("{engine} requires {requirement}")]
    OrderRejected {
        engine: &'static str,
        requirement: &'static str,
    },

    #[error("fuel exhausted during {during}")]
    FuelExhausted { during: &'static str },

    #[error("predicate left (n={n}, x={x}) undecided at its claimed decided length {len}")]
    InconsistentPredicate { n: u64, x: u64, len: u64 },

    #[error("order has no least element, required for {context}")]
    NoLeastElement { context: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
