//! Front end for the accepted Java subset: tokens, class models and the
//! resolved class hierarchy.

mod hierarchy;
mod lexer;
mod model;
mod parser;

pub use hierarchy::{resolve_hierarchy, Hierarchy, OverridePair, ResolveOptions, VisibleField, VisibleMethod};
pub use lexer::{is_keyword, tokenize, LiteralKind, Token, TokenKind};
pub use model::*;
pub use parser::{parse_source, parse_unit};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("lexical error at offset {offset}: {message}")]
    Lex { offset: usize, message: String },
    #[error("parse error: {message}")]
    Parse { span: Span, message: String },
    #[error("duplicate member `{member}` in class `{class}`")]
    DuplicateMember { class: String, member: String, span: Span },
    #[error("class `{name}` is declared more than once")]
    DuplicateClass { name: String, span: Span },
    #[error("cyclic inheritance involving {}", .classes.join(" -> "))]
    Cycle { classes: Vec<String> },
    #[error("class `{class}` extends unknown class `{superclass}`")]
    UnknownSuperclass { class: String, superclass: String },
}

impl FrontendError {
    /// Byte offset the error points at, when it has one.
    pub fn offset(&self) -> Option<usize> {
        match self {
            FrontendError::Lex { offset, .. } => Some(*offset),
            FrontendError::Parse { span, .. }
            | FrontendError::DuplicateMember { span, .. }
            | FrontendError::DuplicateClass { span, .. } => Some(span.start),
            FrontendError::Cycle { .. } | FrontendError::UnknownSuperclass { .. } => None,
        }
    }
}
