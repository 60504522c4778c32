//! Recursive-descent parser for the kernel expression language.
//!
//! Precedence, lowest to highest: conditional, `+ -`, `* /`, unary `-`,
//! `^` (right-associative), atoms. `min`, `max`, `pow`, `abs`, `even`,
//! `sum_i`, `max_i` are function calls; `x[i]` indexes a vector variable
//! inside a reduction.

use thiserror::Error;

use super::ast::{BinaryOp, CmpOp, Comparison, ExprAst, ReduceOp, UnaryOp, VarName};
use super::lexer::{lex, Lexeme, Tok};

/// Input size cap: parsing is total on anything at or below this length.
pub const MAX_SOURCE_BYTES: usize = 4096;
/// Recursion depth cap for the expression tree.
pub const MAX_DEPTH: usize = 64;
/// Node count cap for the expression tree.
pub const MAX_NODES: usize = 4096;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ParseError {
    #[error("at byte {offset}: expected {expected}, found {found}")]
    Syntax {
        offset: usize,
        expected: String,
        found: String,
    },
    #[error("at byte {offset}: variable `{var}` is outside the declared arity {arity}")]
    Arity {
        offset: usize,
        var: VarName,
        arity: usize,
    },
    #[error("at byte {offset}: numeric literal does not fit a finite double")]
    NonFiniteLiteral { offset: usize },
    #[error("at byte {offset}: `{var}[i]` is only valid inside sum_i/max_i")]
    IndexOutsideReduce { offset: usize, var: VarName },
    #[error("at byte {offset}: reductions cannot be nested")]
    NestedReduce { offset: usize },
    #[error("expression exceeds {MAX_DEPTH} levels of nesting")]
    TooDeep,
    #[error("expression exceeds {MAX_NODES} nodes")]
    TooManyNodes,
    #[error("source is {len} bytes; the limit is {MAX_SOURCE_BYTES}")]
    SourceTooLong { len: usize },
}

impl ParseError {
    pub(crate) fn syntax(offset: usize, expected: &str, found: &str) -> Self {
        ParseError::Syntax {
            offset,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    /// Byte offset of the error when one is attached.
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::Arity { offset, .. }
            | ParseError::NonFiniteLiteral { offset }
            | ParseError::IndexOutsideReduce { offset, .. }
            | ParseError::NestedReduce { offset } => Some(*offset),
            _ => None,
        }
    }
}

/// Parses `source` as an expression of the given arity (1 to 4 variables).
///
/// Deterministic and total: any input yields an AST or a [`ParseError`].
pub fn parse(source: &str, arity: usize) -> Result<ExprAst, ParseError> {
    assert!((1..=4).contains(&arity), "arity must be 1..=4");
    if source.len() > MAX_SOURCE_BYTES {
        return Err(ParseError::SourceTooLong { len: source.len() });
    }
    let lexemes = lex(source)?;
    let mut p = Parser {
        lexemes,
        pos: 0,
        source_len: source.len(),
        arity,
        in_reduce: false,
    };
    let expr = p.conditional(0)?;
    if let Some(lx) = p.peek() {
        return Err(ParseError::syntax(
            lx.offset,
            "end of input",
            &lx.tok.describe(),
        ));
    }
    if expr.node_count() > MAX_NODES {
        return Err(ParseError::TooManyNodes);
    }
    Ok(expr)
}

struct Parser {
    lexemes: Vec<Lexeme>,
    pos: usize,
    source_len: usize,
    arity: usize,
    in_reduce: bool,
}

impl Parser {
    fn peek(&self) -> Option<Lexeme> {
        self.lexemes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<Lexeme> {
        let lx = self.peek();
        if lx.is_some() {
            self.pos += 1;
        }
        lx
    }

    fn eof_offset(&self) -> usize {
        self.source_len
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<usize, ParseError> {
        match self.peek() {
            Some(lx) if lx.tok == tok => {
                self.pos += 1;
                Ok(lx.offset)
            }
            Some(lx) => Err(ParseError::syntax(lx.offset, what, &lx.tok.describe())),
            None => Err(ParseError::syntax(self.eof_offset(), what, "end of input")),
        }
    }

    fn check_depth(&self, depth: usize) -> Result<(), ParseError> {
        if depth > MAX_DEPTH {
            Err(ParseError::TooDeep)
        } else {
            Ok(())
        }
    }

    fn check_var(&self, var: VarName, offset: usize) -> Result<(), ParseError> {
        if var.slot() >= self.arity {
            Err(ParseError::Arity {
                offset,
                var,
                arity: self.arity,
            })
        } else {
            Ok(())
        }
    }

    /// `conditional := sum ("if" comparison "else" conditional)?`
    fn conditional(&mut self, depth: usize) -> Result<ExprAst, ParseError> {
        self.check_depth(depth)?;
        let then = self.sum(depth + 1)?;
        if let Some(lx) = self.peek() {
            if lx.tok == Tok::If {
                self.pos += 1;
                let cond = self.comparison(depth + 1)?;
                self.expect(Tok::Else, "`else`")?;
                let els = self.conditional(depth + 1)?;
                return Ok(ExprAst::Conditional {
                    cond: Box::new(cond),
                    then: Box::new(then),
                    els: Box::new(els),
                });
            }
        }
        Ok(then)
    }

    /// `comparison := sum cmp sum`
    fn comparison(&mut self, depth: usize) -> Result<Comparison, ParseError> {
        self.check_depth(depth)?;
        let lhs = self.sum(depth + 1)?;
        let op = match self.peek() {
            Some(lx) => match lx.tok {
                Tok::Eq => CmpOp::Eq,
                Tok::Ne => CmpOp::Ne,
                Tok::Lt => CmpOp::Lt,
                Tok::Le => CmpOp::Le,
                Tok::Gt => CmpOp::Gt,
                Tok::Ge => CmpOp::Ge,
                _ => {
                    return Err(ParseError::syntax(
                        lx.offset,
                        "comparison operator",
                        &lx.tok.describe(),
                    ))
                }
            },
            None => {
                return Err(ParseError::syntax(
                    self.eof_offset(),
                    "comparison operator",
                    "end of input",
                ))
            }
        };
        self.pos += 1;
        let rhs = self.sum(depth + 1)?;
        Ok(Comparison { op, lhs, rhs })
    }

    fn sum(&mut self, depth: usize) -> Result<ExprAst, ParseError> {
        self.check_depth(depth)?;
        let mut acc = self.product(depth + 1)?;
        while let Some(lx) = self.peek() {
            let op = match lx.tok {
                Tok::Plus => BinaryOp::Add,
                Tok::Minus => BinaryOp::Sub,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.product(depth + 1)?;
            acc = ExprAst::Binary(op, Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn product(&mut self, depth: usize) -> Result<ExprAst, ParseError> {
        self.check_depth(depth)?;
        let mut acc = self.unary(depth + 1)?;
        while let Some(lx) = self.peek() {
            let op = match lx.tok {
                Tok::Star => BinaryOp::Mul,
                Tok::Slash => BinaryOp::Div,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.unary(depth + 1)?;
            acc = ExprAst::Binary(op, Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn unary(&mut self, depth: usize) -> Result<ExprAst, ParseError> {
        self.check_depth(depth)?;
        if let Some(lx) = self.peek() {
            if lx.tok == Tok::Minus {
                self.pos += 1;
                let inner = self.unary(depth + 1)?;
                return Ok(ExprAst::Unary(UnaryOp::Neg, Box::new(inner)));
            }
        }
        self.power(depth + 1)
    }

    /// `power := atom ("^" unary)?`, right-associative via the unary branch.
    fn power(&mut self, depth: usize) -> Result<ExprAst, ParseError> {
        self.check_depth(depth)?;
        let base = self.atom(depth + 1)?;
        if let Some(lx) = self.peek() {
            if lx.tok == Tok::Caret {
                self.pos += 1;
                let exponent = self.unary(depth + 1)?;
                return Ok(ExprAst::Binary(
                    BinaryOp::Pow,
                    Box::new(base),
                    Box::new(exponent),
                ));
            }
        }
        Ok(base)
    }

    fn atom(&mut self, depth: usize) -> Result<ExprAst, ParseError> {
        self.check_depth(depth)?;
        let lx = match self.bump() {
            Some(lx) => lx,
            None => {
                return Err(ParseError::syntax(
                    self.eof_offset(),
                    "expression",
                    "end of input",
                ))
            }
        };
        match lx.tok {
            Tok::Num(n) => Ok(ExprAst::Constant(n)),
            Tok::Inf => Ok(ExprAst::Constant(f64::INFINITY)),
            Tok::Var(var) => {
                self.check_var(var, lx.offset)?;
                if let Some(next) = self.peek() {
                    if next.tok == Tok::LBracket {
                        if !self.in_reduce {
                            return Err(ParseError::IndexOutsideReduce {
                                offset: next.offset,
                                var,
                            });
                        }
                        self.pos += 1;
                        self.expect(Tok::IndexVar, "index `i`")?;
                        self.expect(Tok::RBracket, "`]`")?;
                        return Ok(ExprAst::Index(var));
                    }
                }
                Ok(ExprAst::Var(var))
            }
            Tok::LParen => {
                let inner = self.conditional(depth + 1)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Abs => self.unary_call(UnaryOp::Abs, depth),
            Tok::Even => self.unary_call(UnaryOp::Even, depth),
            Tok::Min => self.binary_call(BinaryOp::Min, depth),
            Tok::Max => self.binary_call(BinaryOp::Max, depth),
            Tok::PowFn => self.binary_call(BinaryOp::Pow, depth),
            Tok::SumI => self.reduce_call(ReduceOp::Sum, lx.offset, depth),
            Tok::MaxI => self.reduce_call(ReduceOp::Max, lx.offset, depth),
            other => Err(ParseError::syntax(
                lx.offset,
                "expression",
                &other.describe(),
            )),
        }
    }

    fn unary_call(&mut self, op: UnaryOp, depth: usize) -> Result<ExprAst, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let inner = self.conditional(depth + 1)?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(ExprAst::Unary(op, Box::new(inner)))
    }

    fn binary_call(&mut self, op: BinaryOp, depth: usize) -> Result<ExprAst, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let lhs = self.conditional(depth + 1)?;
        self.expect(Tok::Comma, "`,`")?;
        let rhs = self.conditional(depth + 1)?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(ExprAst::Binary(op, Box::new(lhs), Box::new(rhs)))
    }

    fn reduce_call(
        &mut self,
        op: ReduceOp,
        offset: usize,
        depth: usize,
    ) -> Result<ExprAst, ParseError> {
        if self.in_reduce {
            return Err(ParseError::NestedReduce { offset });
        }
        self.expect(Tok::LParen, "`(`")?;
        self.in_reduce = true;
        let body = self.conditional(depth + 1);
        self.in_reduce = false;
        let body = body?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(ExprAst::Reduce(op, Box::new(body)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_difference_power() {
        let ast = parse("(x-y)^4", 2).unwrap();
        assert_eq!(
            ast,
            ExprAst::Binary(
                BinaryOp::Pow,
                Box::new(ExprAst::Binary(
                    BinaryOp::Sub,
                    Box::new(ExprAst::Var(VarName::X)),
                    Box::new(ExprAst::Var(VarName::Y)),
                )),
                Box::new(ExprAst::Constant(4.0)),
            )
        );
    }

    #[test]
    fn parses_zero_constant() {
        assert_eq!(parse("0", 2).unwrap(), ExprAst::Constant(0.0));
    }

    #[test]
    fn parses_reduce_with_index() {
        let ast = parse("max_i(abs(x[i]-y[i])^0.5)", 2).unwrap();
        match ast {
            ExprAst::Reduce(ReduceOp::Max, _) => {}
            other => panic!("expected reduce, got {other:?}"),
        }
    }

    #[test]
    fn rejects_variable_beyond_arity() {
        let err = parse("x+z", 2).unwrap_err();
        assert!(matches!(
            err,
            ParseError::Arity {
                var: VarName::Z,
                arity: 2,
                offset: 2
            }
        ));
    }

    #[test]
    fn rejects_index_outside_reduce() {
        let err = parse("x[i]", 2).unwrap_err();
        assert!(matches!(err, ParseError::IndexOutsideReduce { .. }));
    }

    #[test]
    fn rejects_nested_reduce() {
        let err = parse("sum_i(sum_i(x[i]))", 2).unwrap_err();
        assert!(matches!(err, ParseError::NestedReduce { .. }));
    }

    #[test]
    fn rejects_unbalanced_parens_with_offset() {
        let err = parse("(x+y", 2).unwrap_err();
        assert_eq!(err.offset(), Some(4));
    }

    #[test]
    fn power_is_right_associative() {
        let ast = parse("x^y^2", 2).unwrap();
        let expected = ExprAst::Binary(
            BinaryOp::Pow,
            Box::new(ExprAst::Var(VarName::X)),
            Box::new(ExprAst::Binary(
                BinaryOp::Pow,
                Box::new(ExprAst::Var(VarName::Y)),
                Box::new(ExprAst::Constant(2.0)),
            )),
        );
        assert_eq!(ast, expected);
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        // -x^2 parses as -(x^2)
        let ast = parse("-x^2", 2).unwrap();
        assert!(matches!(ast, ExprAst::Unary(UnaryOp::Neg, _)));
    }

    #[test]
    fn conditional_is_right_nesting() {
        let ast = parse("1 if x = y else 2 if x < y else 3", 2).unwrap();
        match ast {
            ExprAst::Conditional { els, .. } => {
                assert!(matches!(*els, ExprAst::Conditional { .. }))
            }
            other => panic!("expected conditional, got {other:?}"),
        }
    }

    #[test]
    fn rejects_non_finite_literal() {
        let err = parse("1e999", 2).unwrap_err();
        assert!(matches!(err, ParseError::NonFiniteLiteral { offset: 0 }));
    }

    #[test]
    fn rejects_overlong_source() {
        let src = "1+".repeat(3000) + "1";
        assert!(matches!(
            parse(&src, 2),
            Err(ParseError::SourceTooLong { .. })
        ));
    }
}
