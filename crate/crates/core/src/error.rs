use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// The caller supplied arguments outside an operation's domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Exact and floating-point series were combined without an explicit conversion.
    #[error("coefficient mode mismatch: {left} vs {right}")]
    ModeMismatch {
        left: &'static str,
        right: &'static str,
    },

    /// A series operation would need coefficients beyond a truncation bound.
    #[error("truncation: {0}")]
    Truncation(String),

    /// A linear system had no unique solution.
    #[error("rank-deficient system: {0}")]
    RankDeficient(String),

    /// A linear system was solvable but too badly conditioned to trust.
    #[error("ill-conditioned system (condition number {condition:.3e}): {context}")]
    IllConditioned { condition: f64, context: String },

    /// An iterative evaluation stopped before reaching its accuracy target.
    #[error("numeric failure in {what}: partial value {partial:e}, estimated error {estimate:e}")]
    NumericFailure {
        what: String,
        partial: f64,
        estimate: f64,
    },

    /// A stage of a verification pipeline failed.
    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("malformed coefficient file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Wraps an error with the name of the pipeline stage it came from.
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// True when the error reflects a caller mistake rather than a numerical shortfall.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::InvalidInput(_)
            | Error::ModeMismatch { .. }
            | Error::Format(_)
            | Error::Io(_) => true,
            Error::Stage { source, .. } => source.is_input_error(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
