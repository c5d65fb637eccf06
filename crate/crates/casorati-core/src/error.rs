use alloc::string::String;

/// Failures raised anywhere in the pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singular matrix in {0}")]
    Singular(String),
    #[error("rank deficient column {index} in {context}")]
    RankDeficient { context: String, index: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("metric is not positive definite at the point")]
    NotPositiveDefinite,
    #[error("point violates domain predicate {index}")]
    OutsideDomain { index: usize },
    #[error("frame construction failed: {0}")]
    Frame(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        source: alloc::boxed::Box<Error>,
    },
}

impl Error {
    /// Wraps an error with the pipeline stage that produced it.
    pub fn at(self, stage: &'static str) -> Error {
        match self {
            Error::Stage { .. } => self,
            other => Error::Stage {
                stage,
                source: alloc::boxed::Box::new(other),
            },
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
