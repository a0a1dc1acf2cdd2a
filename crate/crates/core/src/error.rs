use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed topology: {0}")]
    Structure(String),

    #[error("unknown bond label `{0}`")]
    UnknownBond(String),

    #[error("site {site} is outside bond `{bond}`")]
    SiteOutOfRange { bond: String, site: i64 },

    #[error("ghost width {width} exceeds the {available} sites available on bond `{bond}`")]
    GhostWidth {
        bond: String,
        width: usize,
        available: usize,
    },

    /// A non-finite amplitude appeared during integration.
    #[error(
        "integration diverged at t = {time}: non-finite amplitude on bond `{bond}`, site {site}"
    )]
    Divergence { bond: String, site: i64, time: f64 },

    /// The run finished but its outcome cannot be measured reliably.
    #[error("inconclusive run: {0}")]
    Inconclusive(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn structure(msg: impl Into<String>) -> Self {
        Error::Structure(msg.into())
    }
}
