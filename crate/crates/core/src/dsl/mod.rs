//! A small arithmetic expression language for distance kernels `D`,
//! perturbations `ħ`, control functions `ζ`, and self-maps `T`.
//!
//! The grammar is documented in `docs/dsl.md`. Expressions are pure: parsing
//! is total and deterministic, evaluation is strict IEEE arithmetic with
//! left-to-right operand order, and a given tree plus bindings always
//! produces a bit-identical result.

mod ast;
mod eval;
mod lexer;
mod parser;
mod pretty;

pub use ast::{BinaryOp, CmpOp, Comparison, ExprAst, ReduceOp, UnaryOp, VarName};
pub use eval::{evaluate, Binding, Bindings, EvalError};
pub use parser::{parse, ParseError, MAX_DEPTH, MAX_NODES, MAX_SOURCE_BYTES};
pub use pretty::pretty;
