//! Dedukti-style surface syntax.
//!
//! ```text
//! nat : Set.
//! def add : El nat -> El nat -> El nat.
//! [x, y] add x (S y) --> S (add x y).
//! thm refl : a : Set -> Prf (all a (x : El a => eq a x x)) := ... .
//! ```

mod lexer;
mod parser;
mod printer;

use std::fmt;

use thiserror::Error;

use crate::kernel::{Name, Term};

pub use parser::{parse, parse_term};
pub use printer::{print, print_declaration, print_term};

/// Position of a token, 1-based.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Span {
    pub line: usize,
    pub col: usize,
    /// Byte range in the source text.
    pub start: usize,
    pub end: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Declaration {
    Const {
        name: Name,
        ty: Term,
        definable: bool,
    },
    /// Rule variables are free variables of `lhs` and `rhs`.
    Rule {
        vars: Vec<Name>,
        lhs: Term,
        rhs: Term,
    },
    Theorem {
        name: Name,
        statement: Term,
        proof: Term,
    },
}

impl Declaration {
    pub fn name(&self) -> Option<&Name> {
        match self {
            Declaration::Const { name, .. } | Declaration::Theorem { name, .. } => Some(name),
            Declaration::Rule { .. } => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Item {
    pub decl: Declaration,
    pub span: Option<Span>,
}

#[derive(Clone, Debug, Default)]
pub struct SourceFile {
    pub items: Vec<Item>,
}

impl SourceFile {
    pub fn from_decls(decls: impl IntoIterator<Item = Declaration>) -> SourceFile {
        SourceFile {
            items: decls
                .into_iter()
                .map(|decl| Item { decl, span: None })
                .collect(),
        }
    }

    pub fn decls(&self) -> impl Iterator<Item = &Declaration> {
        self.items.iter().map(|i| &i.decl)
    }

    pub fn theorems(&self) -> impl Iterator<Item = (&Name, &Term, &Term)> {
        self.decls().filter_map(|d| match d {
            Declaration::Theorem {
                name,
                statement,
                proof,
            } => Some((name, statement, proof)),
            _ => None,
        })
    }
}

/// Declaration-wise α-equality; spans are ignored.
impl PartialEq for SourceFile {
    fn eq(&self, other: &SourceFile) -> bool {
        self.items.len() == other.items.len()
            && self.decls().zip(other.decls()).all(|(a, b)| a == b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    BadChar(char),
    #[error("unterminated comment")]
    UnterminatedComment,
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("unbound identifier `{0}`")]
    Unbound(String),
    #[error("`{0}` is already declared")]
    Duplicate(String),
    #[error("rule variable `{0}` does not occur in the left-hand side")]
    UnusedRuleVar(String),
    #[error("rule variable `{0}` is listed twice")]
    DuplicateRuleVar(String),
    #[error("`{0}` is a keyword")]
    Keyword(String),
}

impl ParseErrorKind {
    /// Stable name of the error class.
    pub fn class(&self) -> &'static str {
        match self {
            ParseErrorKind::BadChar(_) | ParseErrorKind::UnterminatedComment => "LexError",
            ParseErrorKind::Unexpected { .. } | ParseErrorKind::Keyword(_) => "SyntaxError",
            ParseErrorKind::Unbound(_) => "UnboundIdentifier",
            ParseErrorKind::Duplicate(_) => "DuplicateName",
            ParseErrorKind::UnusedRuleVar(_) | ParseErrorKind::DuplicateRuleVar(_) => {
                "RuleVariable"
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{span}: {kind}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: Span,
}
