//! Concrete syntax for QPPL programs.
//!
//! Source files use a Python-like layout: a `def main(x, y : bit):` header
//! followed by an indented body with one statement per line. Sugar such as
//! `==`, `!=`, `^` and `new y := E` is expanded while parsing, so the tree
//! handed to the interpreters only contains the core constructors.

mod ast;
mod lexer;
mod parser;
mod pretty;

use std::fmt;

pub use ast::{assigned_vars, free_vars, Comp, CompKind, Expr, Program, Return, Span, Stmt};
pub use parser::parse;
pub use pretty::{pretty_comp, pretty_expr, pretty_program, pretty_stmt};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub span: Span,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(span: Span, message: impl Into<String>) -> Self {
        ParseError {
            span,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: syntax error: {}", self.span, self.message)
    }
}

impl std::error::Error for ParseError {}
