//! Error and validation-report types shared by every module.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GogError {
    #[error("the identity has no primitive root")]
    IdentityRoot,
    #[error("membership in the powers of the identity is undefined")]
    TrivialBase,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown dart `{0}`")]
    UnknownDart(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("word is not connected at letter {position}: {detail}")]
    Disconnected { position: usize, detail: String },
    #[error("endpoint mismatch: {0}")]
    Endpoint(String),
    #[error("element does not lie in the expected group: {0}")]
    GroupMismatch(String),
    #[error("structure is invalid:\n{0}")]
    Invalid(Report),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
}

/// One failed check, attached to the named vertex, dart or component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub subject: String,
    pub message: String,
}

/// Outcome of a validation pass. Empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, subject: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            subject: subject.into(),
            message: message.into(),
        });
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Appends the violations of a nested report, prefixing their subjects.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for v in other.violations {
            self.violations.push(Violation {
                subject: format!("{prefix}/{}", v.subject),
                message: v.message,
            });
        }
    }

    pub fn into_result(self) -> Result<(), GogError> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(GogError::Invalid(self))
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}: {}", v.subject, v.message)?;
        }
        Ok(())
    }
}
