use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid design n={n}, m={m}: need 1 <= m <= n - 1 and n <= {max}")]
    InvalidDesign { n: u32, m: u32, max: u32 },

    #[error("margin violation: {0}")]
    MarginViolation(String),

    #[error("stratum counts {counts:?} sum to {sum}, but the design has n = {n}")]
    StratumTotal { counts: [u32; 4], sum: u64, n: u32 },

    #[error("invalid prior: {0}")]
    InvalidPrior(String),

    #[error(
        "posterior is undefined: no stratum has both positive prior mass and positive likelihood"
    )]
    DegeneratePosterior,

    #[error("invalid utility specification: {0}")]
    InvalidUtility(String),

    #[error("unknown rule `{0}` (valid rules: ml, bayes, es, frechet, coinflip)")]
    UnknownRule(String),

    #[error("unknown criterion `{0}` (valid criteria: maximin, maximin-normalized, bayes, ml)")]
    UnknownCriterion(String),

    #[error("exact arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid configuration field `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("cannot parse {what}: {reason}")]
    Parse { what: String, reason: String },

    #[error("I/O error at {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn parse(what: impl Into<String>, reason: impl ToString) -> Self {
        Error::Parse {
            what: what.into(),
            reason: reason.to_string(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
