//! OpenQASM 2.0 frontend: text to [`Circuit`](crate::circuit::Circuit) and back.

mod emit;
mod lexer;
mod parser;

pub use emit::{emit_qasm, EmitError};
pub use parser::{parse_named, parse_qasm};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QasmError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: undeclared register `{name}`")]
    UndeclaredRegister { name: String, line: usize, col: usize },
    #[error("{line}:{col}: index {index} out of range for register `{name}` of size {size}")]
    IndexOutOfRange {
        name: String,
        index: usize,
        size: usize,
        line: usize,
        col: usize,
    },
    #[error("{line}:{col}: unsupported OpenQASM version `{version}`, only 2.0 is accepted")]
    UnsupportedVersion {
        version: String,
        line: usize,
        col: usize,
    },
    #[error("{line}:{col}: {message}")]
    Invalid {
        line: usize,
        col: usize,
        message: String,
    },
}

impl QasmError {
    pub(crate) fn syntax(line: usize, col: usize, message: impl Into<String>) -> Self {
        QasmError::Syntax {
            line,
            col,
            message: message.into(),
        }
    }

    pub(crate) fn undeclared(name: &str, at: &lexer::Token) -> Self {
        QasmError::UndeclaredRegister {
            name: name.to_string(),
            line: at.line,
            col: at.col,
        }
    }

    /// `(line, column)` of the offending token, 1-based.
    pub fn position(&self) -> Option<(usize, usize)> {
        match *self {
            QasmError::Syntax { line, col, .. }
            | QasmError::UndeclaredRegister { line, col, .. }
            | QasmError::IndexOutOfRange { line, col, .. }
            | QasmError::UnsupportedVersion { line, col, .. }
            | QasmError::Invalid { line, col, .. } => Some((line, col)),
        }
    }
}
