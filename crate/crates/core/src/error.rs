use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("no exact quotient exists")]
    NotDivisible,
    #[error("support mismatch: {0}")]
    SupportMismatch(String),
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("weight {0} is not dominant")]
    NotDominant(String),
    #[error("invalid rank {rank} for family {family}")]
    InvalidRank { family: String, rank: usize },
    #[error("charge {charge} outside 0..{bound}")]
    ChargeOutOfRange { charge: i64, bound: i64 },
    #[error("family mismatch: {0}")]
    FamilyMismatch(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("case not applicable: {0}")]
    CaseInapplicable(String),
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("modulus {0} is too small (need > 3)")]
    ModulusTooSmall(i64),
    #[error("pairing is not integral")]
    NonIntegral,
    #[error("negative multiplicity {mult} at weight {weight}")]
    NegativeMultiplicity { weight: String, mult: String },
    #[error("negative coefficient in d({weight})")]
    NegativeCoefficient { weight: String },
    #[error("rank {0} too large for the character computation")]
    RankTooLarge(usize),
    #[error("peeling failed at weight {0}")]
    PeelingFailure(String),
    #[error("a term left the embedded subspace: {0}")]
    LeftEmbedding(String),
    #[error("identity violated at {0}")]
    IdentityViolation(String),
    #[error("{relation} fails on {sample}")]
    RelationViolated { relation: String, sample: String },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
