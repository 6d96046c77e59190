use thiserror::Error;

#[derive(Debug, Error)]
pub enum LdpError {
    #[error("invalid probability {value} at position {index}")]
    InvalidProbability { index: usize, value: f64 },
    #[error("probabilities sum to {sum}, outside renormalization tolerance")]
    NotNormalized { sum: f64 },
    #[error("duplicate symbol `{0}` in support")]
    DuplicateSymbol(String),
    #[error("empty support")]
    EmptySupport,
    #[error("support violation: `{symbol}` has positive mass in p but zero mass in q")]
    SupportViolation { symbol: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("randomizer `{0}` is not pure (zero/nonzero probability pair or delta > 0)")]
    NonPureRandomizer(String),
    #[error("degenerate randomizer: minimal eps is 0, decomposition is all data-independent")]
    DegenerateRandomizer,
    #[error("unknown randomizer id `{0}` in registry")]
    UnknownRandomizer(String),
    #[error("domain mismatch: prior symbol `{0}` not in randomizer domain")]
    DomainMismatch(String),
    #[error("protocol exceeded round cap of {0}")]
    RunawayProtocol(usize),
    #[error("round {round}: assigned randomizer `{id}` has minimal eps {minimal} > declared {declared}")]
    EpsMismatch {
        round: usize,
        id: String,
        minimal: f64,
        declared: f64,
    },
    #[error("zero evidence: transcript impossible under the prior")]
    ZeroEvidence,
    #[error("zero likelihood: no domain element is consistent with the user view")]
    ZeroLikelihood,
    #[error("rejection sampling exceeded {0} draws")]
    MaxDrawsExceeded(u64),
    #[error("transcript tree exceeded cap of {0} nodes")]
    TreeOverflow(usize),
    #[error("instance too large: {0}")]
    SizeOverflow(String),
    #[error("insufficient count: {got} observations, need at least {need}")]
    InsufficientCount { got: u64, need: u64 },
    #[error("ground set of size {0} exceeds the 16-symbol event enumeration limit")]
    IntractableGroundSet(usize),
    #[error("degenerate instance: certified game value {value} is below tolerance {tol}")]
    DegenerateInstance { value: f64, tol: f64 },
    #[error("game solver failed to certify within {iters} iterations (gap {gap})")]
    SolverConvergence { iters: u64, gap: f64 },
    #[error("serialization error: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, LdpError>;
