use thiserror::Error;

/// Errors raised while constructing or analysing finite rings and modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid additive order {0}: orders must be at least 1")]
    InvalidOrder(i64),

    #[error("{what} has {size} elements, above the configured cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: u128,
        cap: u128,
    },

    #[error("{axiom} fails: {witness}")]
    AxiomViolation { axiom: String, witness: String },

    #[error("order {order} does not divide the characteristic {modulus} of Z_{modulus}")]
    OrderDivisibility { order: u64, modulus: u64 },

    #[error("malformed description: {0}")]
    Malformed(String),

    #[error("modules are defined over different rings")]
    RingMismatch,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("submodules belong to different modules")]
    OwnerMismatch,

    #[error("containment violated: {0}")]
    NotContained(String),

    #[error("canonical forms are only defined over Z or Z_n")]
    NotAbelianRing,

    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),

    #[error("malformed property expression: {0}")]
    MalformedExpression(String),

    #[error("inconsistent property report: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
