use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("radius {needed} exceeds the exploration limit {max}")]
    RadiusExceeded { needed: u32, max: u32 },

    #[error("exploring B({radius}) could exceed the cap of {cap} elements")]
    BallTooLarge { radius: u32, cap: usize },

    #[error("element {label} was not reached within radius {max}")]
    NotReached { label: String, max: u32 },

    #[error("enumeration of {count} items exceeds the cap {cap}; reduce the window radius or the alphabet")]
    CapExceeded { count: String, cap: u64 },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unsupported group atom `{0}`")]
    UnsupportedAtom(String),

    #[error("generator list is not symmetric: inverse of generator {0} is missing")]
    NotSymmetric(usize),

    #[error("configuration is not finitely supported on the zero symbol (default is `{0}`)")]
    NotInDelta(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("rule table for generator `{generator}` is missing pattern `{pattern}`")]
    Incomplete { generator: String, pattern: String },

    #[error("cannot resolve label `{label}`: {msg}")]
    Label { label: String, msg: String },

    #[error("unsupported document version {found} (expected {expected})")]
    Version { found: u32, expected: u32 },

    #[error("invalid document: {0}")]
    Document(String),

    #[error("no geodesic extension found: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn label(label: &str, msg: impl Into<String>) -> Self {
        Error::Label {
            label: label.to_string(),
            msg: msg.into(),
        }
    }
}
