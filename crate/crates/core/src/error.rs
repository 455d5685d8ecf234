use std::fmt;

/// Errors surfaced by every operation in the crate.
///
/// Each variant has a stable kebab-case code used by the CLI, the C ABI and
/// JSON reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    Malformed(String),
    NotSuccessive { index: usize },
    EmptyVector,
    SupportTooLarge { size: usize, cap: usize },
    Infeasible { what: String, estimate: String },
    PsiProjectionInvalid(String),
    NotTypeI,
    NotTypeII,
    ConstructionInvariantViolated(String),
    MalformedInstance(String),
    VerificationFailed(String),
    Io(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Malformed(_) => "malformed-input",
            Error::NotSuccessive { .. } => "not-successive",
            Error::EmptyVector => "empty-vector",
            Error::SupportTooLarge { .. } => "support-too-large",
            Error::Infeasible { .. } => "infeasible-at-budget",
            Error::PsiProjectionInvalid(_) => "psi-projection-invalid",
            Error::NotTypeI => "not-type-I",
            Error::NotTypeII => "not-type-II",
            Error::ConstructionInvariantViolated(_) => "construction-invariant-violated",
            Error::MalformedInstance(_) => "malformed-instance",
            Error::VerificationFailed(_) => "verification-failed",
            Error::Io(_) => "io-error",
        }
    }

    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Infeasible { .. } => 3,
            Error::VerificationFailed(_) | Error::ConstructionInvariantViolated(_) => 1,
            Error::Io(_) => 4,
            _ => 2,
        }
    }

    pub fn malformed(msg: impl Into<String>) -> Self {
        Error::Malformed(msg.into())
    }

    pub fn infeasible(what: impl Into<String>, estimate: impl Into<String>) -> Self {
        Error::Infeasible { what: what.into(), estimate: estimate.into() }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Malformed(m) => write!(f, "malformed input: {m}"),
            Error::NotSuccessive { index } => {
                write!(f, "blocks {index} and {} are not successive", index + 1)
            }
            Error::EmptyVector => write!(f, "vector has empty support"),
            Error::SupportTooLarge { size, cap } => {
                write!(f, "support of size {size} exceeds the cap {cap}")
            }
            Error::Infeasible { what, estimate } => {
                write!(f, "{what} is infeasible at this budget (estimate: {estimate})")
            }
            Error::PsiProjectionInvalid(m) => write!(f, "psi projection is not a basic s.c.c.: {m}"),
            Error::NotTypeI => write!(f, "functional is not of type I"),
            Error::NotTypeII => write!(f, "functional is not of type II"),
            Error::ConstructionInvariantViolated(m) => {
                write!(f, "construction invariant violated: {m}")
            }
            Error::MalformedInstance(m) => write!(f, "malformed instance: {m}"),
            Error::VerificationFailed(m) => write!(f, "verification failed: {m}"),
            Error::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        let text = e.to_string();
        Error::Malformed(text.strip_prefix("malformed input: ").map(str::to_string).unwrap_or(text))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
