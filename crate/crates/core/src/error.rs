use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid basket of index {r}: {reason}")]
    InvalidBasket { r: i64, a: i64, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("no geometric solution: {0}")]
    Infeasible(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("canonical amplitude {0} is not positive")]
    NotGeneralType(i64),

    #[error("unsupported normalization: canonical amplitude {0} (only 1 is supported)")]
    UnsupportedNormalization(i64),

    #[error("unknown preset {0:?}")]
    UnknownPreset(String),

    #[error("no bound recorded for nu(E_{0})")]
    MissingBound(u32),

    #[error("no multiplication rule for ({0},{1})")]
    NoValidRule(u32, u32),

    #[error("nu(E_{n}) >= {bound} is below 1")]
    InsufficientSlope { n: u32, bound: Rational },

    #[error("unsupported fiber (K^2, p_g, chi) = ({kf2}, {pg}, {chi}); only the (1,2) type is modeled")]
    UnsupportedFiber { kf2: i64, pg: i64, chi: i64 },
}

pub type Result<T> = std::result::Result<T, Error>;
