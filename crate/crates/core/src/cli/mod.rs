//! The problem-description language and the `residuum` command surface.

mod ast;
mod build;
mod commands;
mod json;
mod lexer;
mod parser;
mod pretty;

pub use ast::{BinOp, Expr, Factor, Located, ProblemSpec};
pub use build::{build, BuildError, Problem};
pub use commands::{analyze, eval, grouping, parse_grouping, run, verify, Args, Command, Outcome};
pub use lexer::Pos;
pub use parser::{parse, parse_expr, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_CERTIFIED: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[cfg(test)]
mod tests;
