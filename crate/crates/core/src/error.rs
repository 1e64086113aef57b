use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error in {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    /// A denominator factor vanishes.
    #[error("pole in {what}: {detail}")]
    Pole { what: &'static str, detail: String },

    #[error("invalid precision policy: {0}")]
    Policy(String),

    #[error("unknown property `{0}`")]
    UnknownProperty(String),

    #[error("invalid scan spec: {0}")]
    InvalidSpec(String),

    #[error("scan over `{0}` has an empty effective domain")]
    EmptyDomain(String),

    #[error("report serialization failed: {0}")]
    Serialize(String),
}

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }

    pub(crate) fn pole(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Pole {
            what,
            detail: detail.into(),
        }
    }

    /// Pole and domain errors mark a sample point as skipped rather than failed.
    pub fn is_domain_skip(&self) -> bool {
        matches!(self, Error::Domain { .. } | Error::Pole { .. })
    }

    /// Short machine-readable kind, used in CLI error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::Pole { .. } => "pole",
            Error::Policy(_) => "policy",
            Error::UnknownProperty(_) => "unknown_property",
            Error::InvalidSpec(_) => "invalid_spec",
            Error::EmptyDomain(_) => "empty_domain",
            Error::Serialize(_) => "serialize",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
