//! Canonical printing of expression trees.
//!
//! The output re-parses to the same tree, and printing is idempotent on
//! parsed input: `pretty ∘ parse ∘ pretty` is a fixed point.

use std::fmt::Write;

use super::ast::{BinaryOp, ExprAst, UnaryOp};

/// Precedence levels, lowest to highest.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Level {
    Conditional = 0,
    Sum = 1,
    Product = 2,
    Unary = 3,
    Power = 4,
    Atom = 5,
}

/// Renders the canonical textual form of an expression.
pub fn pretty(ast: &ExprAst) -> String {
    let mut out = String::new();
    write_expr(&mut out, ast, Level::Conditional);
    out
}

fn write_expr(out: &mut String, ast: &ExprAst, min_level: Level) {
    let level = node_level(ast);
    let parens = level < min_level;
    if parens {
        out.push('(');
    }
    match ast {
        ExprAst::Constant(c) => write_constant(out, *c),
        ExprAst::Var(v) => out.push_str(v.as_str()),
        ExprAst::Index(v) => {
            out.push_str(v.as_str());
            out.push_str("[i]");
        }
        ExprAst::Unary(UnaryOp::Neg, inner) => {
            out.push('-');
            write_expr(out, inner, Level::Unary);
        }
        ExprAst::Unary(UnaryOp::Abs, inner) => write_call(out, "abs", &[inner]),
        ExprAst::Unary(UnaryOp::Even, inner) => write_call(out, "even", &[inner]),
        ExprAst::Binary(op, lhs, rhs) => match op {
            BinaryOp::Min => write_call(out, "min", &[lhs, rhs]),
            BinaryOp::Max => write_call(out, "max", &[lhs, rhs]),
            BinaryOp::Add | BinaryOp::Sub => {
                write_expr(out, lhs, Level::Sum);
                out.push_str(if *op == BinaryOp::Add { " + " } else { " - " });
                write_expr(out, rhs, Level::Product);
            }
            BinaryOp::Mul | BinaryOp::Div => {
                write_expr(out, lhs, Level::Product);
                out.push_str(if *op == BinaryOp::Mul { " * " } else { " / " });
                write_expr(out, rhs, Level::Unary);
            }
            BinaryOp::Pow => {
                write_expr(out, lhs, Level::Atom);
                out.push_str(" ^ ");
                // exponent re-parses through the unary branch
                write_expr(out, rhs, Level::Unary);
            }
        },
        ExprAst::Reduce(op, body) => {
            let name = match op {
                super::ast::ReduceOp::Sum => "sum_i",
                super::ast::ReduceOp::Max => "max_i",
            };
            write_call(out, name, &[body]);
        }
        ExprAst::Conditional { cond, then, els } => {
            write_expr(out, then, Level::Sum);
            out.push_str(" if ");
            write_expr(out, &cond.lhs, Level::Sum);
            let _ = write!(out, " {} ", cond.op.as_str());
            write_expr(out, &cond.rhs, Level::Sum);
            out.push_str(" else ");
            write_expr(out, els, Level::Conditional);
        }
    }
    if parens {
        out.push(')');
    }
}

fn write_call(out: &mut String, name: &str, args: &[&ExprAst]) {
    out.push_str(name);
    out.push('(');
    for (i, arg) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_expr(out, arg, Level::Conditional);
    }
    out.push(')');
}

fn write_constant(out: &mut String, c: f64) {
    if c.is_infinite() {
        out.push_str("INF");
    } else {
        // shortest round-trip form; always re-lexes as one number
        let _ = write!(out, "{c:?}");
    }
}

fn node_level(ast: &ExprAst) -> Level {
    match ast {
        ExprAst::Conditional { .. } => Level::Conditional,
        ExprAst::Binary(BinaryOp::Add | BinaryOp::Sub, _, _) => Level::Sum,
        ExprAst::Binary(BinaryOp::Mul | BinaryOp::Div, _, _) => Level::Product,
        ExprAst::Unary(UnaryOp::Neg, _) => Level::Unary,
        ExprAst::Binary(BinaryOp::Pow, _, _) => Level::Power,
        _ => Level::Atom,
    }
}
