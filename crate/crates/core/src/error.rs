use thiserror::Error;

use crate::clustertree::KauszReport;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("not a prime: {0}")]
    NotPrime(u64),
    #[error("log of zero")]
    LogOfZero,
    #[error("characteristic 2 excluded")]
    CharacteristicTwo,
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("invalid root configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid index tuple: {0}")]
    InvalidIndices(String),
    #[error("roots not in Kausz normal form: {}", .0.summary())]
    NotKauszForm(KauszReport),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("genus too small: total genus {0} < 2")]
    GenusTooSmall(u64),
    #[error("measure must have total mass 1, found {0}")]
    MassNotOne(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("sequence length mismatch: {0}")]
    LengthMismatch(String),
    #[error("bound not stated for g={0}")]
    BoundNotStated(u32),
    #[error("wrong number of parameters for type {kind}: expected {expected}, got {got}")]
    Arity {
        kind: String,
        expected: usize,
        got: usize,
    },
    #[error("mixed genus across places: {0} and {1}")]
    MixedGenus(u32, u32),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not_prime",
            Error::LogOfZero => "log_of_zero",
            Error::CharacteristicTwo => "characteristic_two",
            Error::Degenerate(_) => "degenerate",
            Error::InvalidConfig(_) => "invalid_config",
            Error::InvalidIndices(_) => "invalid_indices",
            Error::NotKauszForm(_) => "not_kausz_form",
            Error::InvalidGraph(_) => "invalid_graph",
            Error::Disconnected => "disconnected",
            Error::GenusTooSmall(_) => "genus_too_small",
            Error::MassNotOne(_) => "mass_not_one",
            Error::InvalidPoint(_) => "invalid_point",
            Error::LengthMismatch(_) => "length_mismatch",
            Error::BoundNotStated(_) => "bound_not_stated",
            Error::Arity { .. } => "arity",
            Error::MixedGenus(..) => "mixed_genus",
            Error::Parse(_) => "parse",
        }
    }
}
