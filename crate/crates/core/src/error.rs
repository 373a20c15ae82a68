use thiserror::Error;

use crate::signatures::Signature;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter out of range: {0}")]
    ParameterBound(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("signature {signature} has length {found}, expected rank {expected}")]
    RankMismatch {
        signature: Signature,
        found: usize,
        expected: usize,
    },

    #[error("Pochhammer factor vanishes at ν = {nu}, signature {signature}")]
    ZeroFactor { nu: String, signature: Signature },

    #[error("weight table has no entry for signature {0}")]
    MissingTableEntry(Signature),

    #[error("weight for signature {signature} must be positive, got {value}")]
    NonPositiveWeight { signature: Signature, value: String },

    #[error("boundary profile of {signature} is {profile:?}, formula requires {required}")]
    ProfileMismatch {
        signature: Signature,
        profile: Vec<usize>,
        required: &'static str,
    },

    #[error("unsupported domain for this operation: {0}")]
    UnsupportedDomain(String),

    #[error("unknown {kind}: {name}")]
    Unknown { kind: &'static str, name: String },

    #[error("isotypic dimension unstable for {signature}: {first} vs {second} across seeds")]
    Instability {
        signature: Signature,
        first: usize,
        second: usize,
    },

    #[error("block for {signature} is not scalar (relative residual {residual:e})")]
    NonScalarBlock { signature: Signature, residual: f64 },

    #[error("grade {grade} decomposition incomplete: {message}")]
    IncompleteDecomposition { grade: usize, message: String },

    #[error("incompatible inputs: {0}")]
    Incompatible(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}
