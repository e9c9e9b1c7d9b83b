//! Formulas over colored graphs: syntax, parsing, statistics and semantics.

pub mod ast;
pub mod builtin;
pub mod closure;
pub mod eval;
pub mod parser;
pub mod stats;

use thiserror::Error;

pub use ast::{Atom, BinOp, Formula, Quantifier, Sort, FREE_SET};
pub use builtin::{builtin, builtin_names};
pub use closure::{budget_closure, ClosureChecker, MoveModel};
pub use eval::{model_check, ModelChecker};
pub use parser::{parse, parse_with_free};
pub use stats::{stats, FormulaStats, Fragment};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unbound variable `{name}` at byte {position}")]
    UnboundVariable { name: String, position: usize },
    #[error("variable `{name}` bound twice (byte {position})")]
    DuplicateBinder { name: String, position: usize },
    #[error("free variable `{0}` has no value")]
    UnassignedFreeVariable(String),
    #[error("invalid assignment: {0}")]
    Assignment(String),
    #[error("budget must be non-negative, got {0}")]
    NegativeBudget(i64),
    #[error("unknown builtin formula `{0}`")]
    UnknownName(String),
}
