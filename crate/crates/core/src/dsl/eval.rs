//! Strict IEEE evaluation of expression trees.
//!
//! Operands evaluate left to right. Division by zero, zero raised to a
//! negative power, fractional powers of negative bases, and any operation
//! producing a NaN are evaluation errors rather than silent non-finite
//! values. `INF` and overflow-produced infinities flow through as values.

use thiserror::Error;

use super::ast::{BinaryOp, CmpOp, ExprAst, ReduceOp, UnaryOp, VarName};
use crate::num::{real, Real};

/// Tolerance for the `even(e)` integrality test.
const EVEN_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("variable `{0}` is not bound")]
    UnboundVariable(VarName),
    #[error("variable `{0}` is vector-valued; use `{0}[i]` inside sum_i/max_i")]
    VectorWithoutIndex(VarName),
    #[error("variable `{0}` is scalar-valued and cannot be indexed")]
    IndexOnScalar(VarName),
    #[error("sum_i/max_i needs at least one vector-valued binding")]
    ReduceWithoutVector,
    #[error("coordinate index {index} is out of range for `{var}` (dimension {dim})")]
    IndexOutOfRange {
        var: VarName,
        index: usize,
        dim: usize,
    },
    #[error("label `{0}` has no numeric value")]
    NonNumericLabel(String),
}

/// Value bound to a variable slot: a scalar or a borrowed coordinate vector.
#[derive(Debug, Clone, Copy)]
pub enum Binding<'a, F> {
    Scalar(F),
    Vector(&'a [F]),
}

/// Variable environment for one evaluation; slots follow [`VarName`] order.
#[derive(Debug, Clone, Copy, Default)]
pub struct Bindings<'a, F> {
    slots: [Option<Binding<'a, F>>; 4],
}

impl<'a, F: Real> Bindings<'a, F> {
    pub fn new() -> Self {
        Bindings { slots: [None; 4] }
    }

    pub fn bind(mut self, var: VarName, value: Binding<'a, F>) -> Self {
        self.slots[var.slot()] = Some(value);
        self
    }

    pub fn scalar(self, var: VarName, value: F) -> Self {
        self.bind(var, Binding::Scalar(value))
    }

    pub fn vector(self, var: VarName, coords: &'a [F]) -> Self {
        self.bind(var, Binding::Vector(coords))
    }

    fn get(&self, var: VarName) -> Result<Binding<'a, F>, EvalError> {
        self.slots[var.slot()].ok_or(EvalError::UnboundVariable(var))
    }

    /// Dimension of the first vector-valued binding, scanning slot order.
    fn reduce_dim(&self) -> Option<usize> {
        self.slots.iter().find_map(|slot| match slot {
            Some(Binding::Vector(v)) => Some(v.len()),
            _ => None,
        })
    }
}

/// Evaluates `ast` under `bindings`. Deterministic: identical AST and
/// bindings produce a bit-identical result.
pub fn evaluate<F: Real>(ast: &ExprAst, bindings: &Bindings<'_, F>) -> Result<F, EvalError> {
    eval_node(ast, bindings, None)
}

fn eval_node<F: Real>(
    ast: &ExprAst,
    b: &Bindings<'_, F>,
    reduce_index: Option<usize>,
) -> Result<F, EvalError> {
    match ast {
        ExprAst::Constant(c) => Ok(real(*c)),
        ExprAst::Var(var) => match b.get(*var)? {
            Binding::Scalar(v) => Ok(v),
            Binding::Vector(_) => Err(EvalError::VectorWithoutIndex(*var)),
        },
        ExprAst::Index(var) => {
            let index = reduce_index.ok_or(EvalError::ReduceWithoutVector)?;
            match b.get(*var)? {
                Binding::Scalar(_) => Err(EvalError::IndexOnScalar(*var)),
                Binding::Vector(coords) => {
                    coords.get(index).copied().ok_or(EvalError::IndexOutOfRange {
                        var: *var,
                        index,
                        dim: coords.len(),
                    })
                }
            }
        }
        ExprAst::Unary(op, inner) => {
            let v = eval_node(inner, b, reduce_index)?;
            let out = match op {
                UnaryOp::Neg => -v,
                UnaryOp::Abs => v.abs(),
                UnaryOp::Even => is_even(v),
            };
            finite_or_inf(out)
        }
        ExprAst::Binary(op, lhs, rhs) => {
            let a = eval_node(lhs, b, reduce_index)?;
            let c = eval_node(rhs, b, reduce_index)?;
            apply_binary(*op, a, c)
        }
        ExprAst::Reduce(op, body) => {
            let dim = b.reduce_dim().ok_or(EvalError::ReduceWithoutVector)?;
            let mut acc = eval_node(body, b, Some(0))?;
            for i in 1..dim {
                let term = eval_node(body, b, Some(i))?;
                acc = match op {
                    ReduceOp::Sum => acc + term,
                    ReduceOp::Max => acc.max(term),
                };
            }
            finite_or_inf(acc)
        }
        ExprAst::Conditional { cond, then, els } => {
            let lhs = eval_node(&cond.lhs, b, reduce_index)?;
            let rhs = eval_node(&cond.rhs, b, reduce_index)?;
            let taken = match cond.op {
                CmpOp::Eq => lhs == rhs,
                CmpOp::Ne => lhs != rhs,
                CmpOp::Lt => lhs < rhs,
                CmpOp::Le => lhs <= rhs,
                CmpOp::Gt => lhs > rhs,
                CmpOp::Ge => lhs >= rhs,
            };
            if taken {
                eval_node(then, b, reduce_index)
            } else {
                eval_node(els, b, reduce_index)
            }
        }
    }
}

fn apply_binary<F: Real>(op: BinaryOp, a: F, b: F) -> Result<F, EvalError> {
    let out = match op {
        BinaryOp::Add => a + b,
        BinaryOp::Sub => a - b,
        BinaryOp::Mul => a * b,
        BinaryOp::Div => {
            if b == F::zero() {
                return Err(EvalError::DivisionByZero);
            }
            a / b
        }
        BinaryOp::Pow => return checked_pow(a, b),
        BinaryOp::Min => a.min(b),
        BinaryOp::Max => a.max(b),
    };
    finite_or_inf(out)
}

fn checked_pow<F: Real>(base: F, exponent: F) -> Result<F, EvalError> {
    if base == F::zero() && exponent < F::zero() {
        return Err(EvalError::Domain("zero raised to a negative power"));
    }
    if base < F::zero() && exponent.fract() != F::zero() {
        return Err(EvalError::Domain("fractional power of a negative base"));
    }
    finite_or_inf(base.powf(exponent))
}

/// Rejects NaN results; infinities are legal values.
fn finite_or_inf<F: Real>(v: F) -> Result<F, EvalError> {
    if v.is_nan() {
        Err(EvalError::Domain("operation produced NaN"))
    } else {
        Ok(v)
    }
}

/// `even(e)`: 1 when the value is within 1e-9 of an integer and that
/// integer is even, else 0.
fn is_even<F: Real>(v: F) -> F {
    let rounded = v.round();
    let close = (v - rounded).abs() <= real(EVEN_EPS);
    if close && (rounded % real(2.0)).abs() == F::zero() {
        F::one()
    } else {
        F::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parser::parse;

    fn eval2(src: &str, x: f64, y: f64) -> Result<f64, EvalError> {
        let ast = parse(src, 2).unwrap();
        evaluate(&ast, &Bindings::new().scalar(VarName::X, x).scalar(VarName::Y, y))
    }

    #[test]
    fn kamran_control_value() {
        assert_eq!(eval2("1+x+y", 2.0, 3.0).unwrap(), 6.0);
    }

    #[test]
    fn identity_difference_is_zero() {
        assert_eq!(eval2("abs(x-y)", 7.25, 7.25).unwrap(), 0.0);
    }

    #[test]
    fn samreen_control_at_one_three() {
        // hand oracle: |1-3|^3 = 8
        let v = eval2("abs(x-y)^3 if x != y else 1", 1.0, 3.0).unwrap();
        assert_eq!(v, 8.0);
        let diag = eval2("abs(x-y)^3 if x != y else 1", 3.0, 3.0).unwrap();
        assert_eq!(diag, 1.0);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(eval2("x/(y-y)", 1.0, 2.0), Err(EvalError::DivisionByZero));
    }

    #[test]
    fn zero_to_negative_power_is_an_error() {
        assert!(matches!(eval2("(x-x)^-1", 1.0, 2.0), Err(EvalError::Domain(_))));
    }

    #[test]
    fn fractional_power_of_negative_base_is_an_error() {
        assert!(matches!(eval2("x^0.5", -4.0, 0.0), Err(EvalError::Domain(_))));
    }

    #[test]
    fn integer_power_of_negative_base_is_exact() {
        assert_eq!(eval2("x^4", -2.0, 0.0).unwrap(), 16.0);
        assert_eq!(eval2("x^3", -2.0, 0.0).unwrap(), -8.0);
    }

    #[test]
    fn one_over_infinity_is_exactly_zero() {
        assert_eq!(eval2("1/x", f64::INFINITY, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn infinity_compares_equal_to_inf_literal() {
        assert_eq!(eval2("1 if x = INF else 0", f64::INFINITY, 0.0).unwrap(), 1.0);
        assert_eq!(eval2("1 if x = INF else 0", 5.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn inf_minus_inf_is_a_domain_error() {
        assert!(matches!(
            eval2("x-y", f64::INFINITY, f64::INFINITY),
            Err(EvalError::Domain(_))
        ));
    }

    #[test]
    fn even_predicate() {
        assert_eq!(eval2("even(x)", 4.0, 0.0).unwrap(), 1.0);
        assert_eq!(eval2("even(x)", 7.0, 0.0).unwrap(), 0.0);
        assert_eq!(eval2("even(x)", 4.0 + 5e-10, 0.0).unwrap(), 1.0);
        assert_eq!(eval2("even(x)", 4.5, 0.0).unwrap(), 0.0);
        assert_eq!(eval2("even(x)", f64::INFINITY, 0.0).unwrap(), 0.0);
        assert_eq!(eval2("even(x)", -6.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn conditional_branches_are_lazy() {
        // the untaken branch would divide by zero
        assert_eq!(eval2("0 if x = y else 1/(x-y)", 3.0, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn unbound_variable_reported() {
        let ast = parse("x+y", 2).unwrap();
        let b = Bindings::<f64>::new().scalar(VarName::X, 1.0);
        assert_eq!(evaluate(&ast, &b), Err(EvalError::UnboundVariable(VarName::Y)));
    }

    #[test]
    fn reduce_matches_loop_oracle_exactly() {
        let ast = parse("sum_i(abs(x[i]-y[i])^0.5)", 2).unwrap();
        let xs = [1.0, 0.25, 2.0, 0.0];
        let ys = [0.0, 1.0, 2.0, 0.5];
        let got = evaluate(
            &ast,
            &Bindings::new().vector(VarName::X, &xs).vector(VarName::Y, &ys),
        )
        .unwrap();
        // independent loop oracle, same left-to-right order
        let mut want = (xs[0] - ys[0]).abs().powf(0.5);
        for i in 1..4 {
            want += (xs[i] - ys[i]).abs().powf(0.5);
        }
        assert_eq!(got, want);
    }

    #[test]
    fn max_reduce_matches_loop_oracle() {
        let ast = parse("max_i(abs(x[i]-y[i])^0.5)", 2).unwrap();
        let xs = [1.0, 0.25, 2.0, 0.0];
        let ys = [0.0, 1.0, 2.0, 0.5];
        let got = evaluate(
            &ast,
            &Bindings::new().vector(VarName::X, &xs).vector(VarName::Y, &ys),
        )
        .unwrap();
        let mut want = (xs[0] - ys[0]).abs().powf(0.5);
        for i in 1..4 {
            want = want.max((xs[i] - ys[i]).abs().powf(0.5));
        }
        assert_eq!(got, want);
    }

    #[test]
    fn mixed_scalar_vector_bindings() {
        let ast = parse("sum_i(x[i]*y)", 2).unwrap();
        let xs = [1.0, 2.0, 3.0];
        let got = evaluate(
            &ast,
            &Bindings::new().vector(VarName::X, &xs).scalar(VarName::Y, 2.0),
        )
        .unwrap();
        assert_eq!(got, 12.0);
    }

    #[test]
    fn vector_used_as_scalar_is_an_error() {
        let ast = parse("x+1", 1).unwrap();
        let xs = [1.0, 2.0];
        let b = Bindings::new().vector(VarName::X, &xs);
        assert_eq!(evaluate(&ast, &b), Err(EvalError::VectorWithoutIndex(VarName::X)));
    }

    #[test]
    fn evaluation_is_generic_over_f32() {
        let ast = parse("(x-y)^2", 2).unwrap();
        let got: f32 = evaluate(
            &ast,
            &Bindings::new().scalar(VarName::X, 3.0f32).scalar(VarName::Y, 1.0f32),
        )
        .unwrap();
        assert_eq!(got, 4.0f32);
    }
}
