use std::fmt;

use thiserror::Error;

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{pos}: {message}")]
    Parse { pos: Pos, message: String },
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn parse(pos: Pos, message: impl Into<String>) -> Self {
        CliError::Parse { pos, message: message.into() }
    }

    pub fn semantic(line: usize, message: impl Into<String>) -> Self {
        CliError::Semantic { line, message: message.into() }
    }
}

/// Names the mathematical step behind a core failure, so reports say what
/// broke rather than which routine.
pub fn concept(err: &tac_core::Error) -> String {
    use tac_core::Error as E;
    let what = match err {
        E::NotAComplex(_) => "complex condition d∘d = 0",
        E::NotAChainMap(_) => "chain map condition",
        E::SolveFailed { .. } => "lifting along the comparison theorem",
        E::CompleteResolution(_) => "complete resolution",
        E::Precondition(_) => "standing hypothesis",
        E::OutsideWindow { .. } => "window of known degrees",
        E::RingMismatch(_) | E::UnsupportedRing(_) => "ring homomorphism Q -> R",
        E::Shape(_) | E::RankMismatch { .. } => "matrix shapes",
        E::Parse(_) => "polynomial syntax",
        E::InvalidField(_) => "coefficient field",
        E::NotMember => "submodule membership",
    };
    format!("{what}: {err}")
}
