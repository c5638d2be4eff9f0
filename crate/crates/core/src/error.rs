use alloc::boxed::Box;
use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("degenerate class structure: {0}")]
    DegenerateClasses(String),
    #[error(
        "within-class scatter is numerically singular (eigenvalue range {min:e}..{max:e}); \
         increase the shrinkage"
    )]
    Conditioning { min: f64, max: f64 },
    #[error("no in-vocabulary tokens in {0:?}")]
    Coverage(String),
    #[error("symmetric eigensolver failed to converge")]
    NoConvergence,
    #[error("factor `{factor}`: {source}")]
    Head {
        factor: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for errors caused by the caller's arguments rather than the data.
    pub fn is_argument(&self) -> bool {
        match self {
            Error::Argument(_) | Error::Dimension { .. } => true,
            Error::Head { source, .. } => source.is_argument(),
            _ => false,
        }
    }

    pub(crate) fn in_factor(self, factor: &str) -> Error {
        Error::Head {
            factor: factor.into(),
            source: Box::new(self),
        }
    }
}
