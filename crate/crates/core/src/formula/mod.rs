//! Formula AST, concrete syntax and sublanguage classification.

mod ast;
mod classify;
mod parse;
mod print;

pub use ast::{Atom, Formula};
pub use classify::{classify, well_formed, well_formed_in, Diagnostic, LangClass};
pub use parse::{parse, parse_assignment, parse_bindings, ParseError, ParseErrorKind};
