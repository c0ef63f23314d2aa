use thiserror::Error;

/// Error taxonomy shared by every module.
///
/// Each variant maps onto a stable tag (see [`Error::tag`]) which the CLI
/// prints verbatim, and onto a coarse class used for exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("composition mismatch: {0}")]
    CompositionMismatch(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("unsupported point: {0}")]
    UnsupportedPoint(String),
    #[error("unsupported presentation: {0}")]
    UnsupportedPresentation(String),
    #[error("separability error: {0}")]
    Separability(String),
    #[error("effectivity error: {0}")]
    Effectivity(String),
    #[error("window exhausted: {0}")]
    WindowExhausted(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("not a smooth scheme: {0}")]
    NotSmooth(String),
    #[error("model error: {0}")]
    Model(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

impl Error {
    pub fn tag(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::DegenerateInput(_) => "degenerate-input",
            Error::CompositionMismatch(_) => "composition-mismatch",
            Error::InvalidMorphism(_) => "invalid-morphism",
            Error::Unsupported(_) => "unsupported-input",
            Error::UnsupportedPoint(_) => "unsupported-point",
            Error::UnsupportedPresentation(_) => "unsupported-presentation",
            Error::Separability(_) => "separability",
            Error::Effectivity(_) => "effectivity",
            Error::WindowExhausted(_) => "window-exhausted",
            Error::Precondition(_) => "precondition",
            Error::NotSmooth(_) => "not-smooth",
            Error::Model(_) => "model",
            Error::InvariantViolation(_) => "invariant-violation",
        }
    }

    /// True for errors that signal a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::InvariantViolation(_) | Error::Model(_))
    }

    pub(crate) fn parse_at(src: &str, offset: usize, message: impl Into<String>) -> Self {
        let before = &src[..offset.min(src.len())];
        let line = before.matches('\n').count() + 1;
        let column = before
            .rfind('\n')
            .map_or(before.len(), |p| before.len() - p - 1)
            + 1;
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
