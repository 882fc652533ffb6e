use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("order relation has a cycle: {0} <= {1} <= {0}")]
    Cycle(String, String),

    #[error("unknown element id `{0}`")]
    UnknownId(String),

    #[error("duplicate element id `{0}`")]
    DuplicateId(String),

    #[error("{what} exceeds cap: {count} > {cap}")]
    CapExceeded {
        what: &'static str,
        count: usize,
        cap: usize,
    },

    #[error("poset is not a lattice: {0}")]
    NotALattice(String),

    #[error("lattice is not distributive: {x} ^ ({y} v {z}) != ({x} ^ {y}) v ({x} ^ {z})")]
    NotDistributive { x: String, y: String, z: String },

    #[error("duality round trip failed: {0}")]
    RoundTripFailure(String),

    #[error("space universe does not match the poset elements")]
    UniverseMismatch,

    #[error("subbase member {0} is not a subset of the universe")]
    SubbaseOutOfRange(usize),

    #[error("union construction needs at least two parts, got {0}")]
    TooFewParts(usize),

    #[error("part {0} is not a Priestley space")]
    NotPriestley(usize),

    #[error("part index {0} out of range")]
    PartOutOfRange(usize),

    #[error("cannot place fragment intervals: {0}")]
    InfeasiblePlacement(String),

    #[error("gap bounds too coarse to decide against {0}")]
    UndecidableAtDepth(String),

    #[error("no separating set exists: {u} is above or equal to {v}")]
    NotSeparablePrecondition { u: String, v: String },

    #[error("separation case analysis broke down: {0}")]
    SeparationFailure(String),

    #[error("isomorphism check failed: {0}")]
    IsoFailure(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidInput(e.to_string())
    }
}
