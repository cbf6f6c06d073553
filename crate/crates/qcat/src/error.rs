use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QcError {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("simplicial identity violated: {0}")]
    IdentityViolation(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("not a subcomplex: {0}")]
    NotSubcomplex(String),

    #[error("unsupported enumeration: {0}")]
    UnsupportedEnumeration(String),

    #[error("not a verified quasi-category: {0}")]
    NotVerifiedQuasiCategory(String),

    #[error("no filler found: {0}")]
    FillerNotFound(String),

    #[error("precondition failed, edge is not a quasi-isomorphism: {0}")]
    PreconditionNotQuasiIso(String),

    #[error("filler missing over a verified quasi-category: {0}")]
    TheoremViolation(String),

    #[error("unknown simplex id {0:?}")]
    UnknownId(String),

    #[error("arithmetic overflow")]
    Overflow,

    #[error("io error: {0}")]
    Io(String),
}

impl QcError {
    /// Process exit code used by the `qc` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            QcError::UnsupportedEnumeration(_) => 2,
            QcError::Malformed(_)
            | QcError::IdentityViolation(_)
            | QcError::UnknownId(_)
            | QcError::Io(_) => 3,
            _ => 1,
        }
    }
}

impl From<serde_json::Error> for QcError {
    fn from(e: serde_json::Error) -> Self {
        QcError::Malformed(e.to_string())
    }
}

impl From<std::io::Error> for QcError {
    fn from(e: std::io::Error) -> Self {
        QcError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, QcError>;
