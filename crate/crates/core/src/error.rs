use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("ket at position {pos} has {found} digits, expected {expected}")]
    InconsistentKetLength {
        pos: usize,
        expected: usize,
        found: usize,
    },

    #[error("digit {digit} out of range for local dimension {dim}")]
    DigitOutOfRange { digit: usize, dim: usize },

    #[error("state vector is zero")]
    ZeroVector,

    #[error("invalid local dimension {0}, must be at least 2")]
    InvalidDimension(usize),

    #[error("amplitude vector has length {found}, dims require {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("system size {size} exceeds the cap of {cap}")]
    TooLarge { size: usize, cap: usize },

    #[error("site {site} out of range for a {sites}-site state")]
    SiteOutOfRange { site: usize, sites: usize },

    #[error("operator dimension {operator} does not match site dimension {site}")]
    DimensionMismatch { operator: usize, site: usize },

    #[error("state has heterogeneous local dimensions {0:?}")]
    HeterogeneousDims(Vec<usize>),

    #[error("the measure needs at least 2 sites, state has {0}")]
    TooFewSites(usize),

    #[error("calibration gain undefined at site {site}: deviations from eta sum to zero")]
    AlphaUndefined { site: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        Error::Syntax {
            pos,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
