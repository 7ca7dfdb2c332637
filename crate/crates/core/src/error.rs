use thiserror::Error;

use crate::analytic::EvalResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure class, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Domain,
    Resource,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("birth exceeds the budget of {budget_bits} bits")]
    BirthOverflow { budget_bits: u64 },

    #[error("only {found} distinct trees are born at or below {bound}, {wanted} requested")]
    InsufficientBound {
        wanted: usize,
        found: usize,
        bound: u64,
    },

    #[error("{what} = {value} exceeds the cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: u64,
        cap: u64,
    },

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("no census table for x = {0}")]
    MissingCensus(u64),

    #[error("tolerance {target:e} not reached (best error bound {:e})", .partial.error_bound)]
    ToleranceUnachievable { target: f64, partial: EvalResult },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse { .. } => ErrorKind::Parse,
            Error::Domain(_) | Error::InsufficientBound { .. } | Error::MissingCensus(_) => {
                ErrorKind::Domain
            }
            Error::BirthOverflow { .. }
            | Error::CapExceeded { .. }
            | Error::Resource(_)
            | Error::ToleranceUnachievable { .. } => ErrorKind::Resource,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(position: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: msg.into(),
        }
    }
}
