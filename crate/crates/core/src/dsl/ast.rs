//! Expression tree for user-defined distance kernels, perturbations, control
//! functions, and self-maps.

use std::fmt;

/// Variable slots, bound positionally by the arity of the kernel slot an
/// expression fills: arity 1 uses `x`, arity 2 uses `x,y`, arity 3 `x,y,z`,
/// arity 4 `x,y,z,t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarName {
    X,
    Y,
    Z,
    T,
}

impl VarName {
    pub const ALL: [VarName; 4] = [VarName::X, VarName::Y, VarName::Z, VarName::T];

    pub fn slot(self) -> usize {
        match self {
            VarName::X => 0,
            VarName::Y => 1,
            VarName::Z => 2,
            VarName::T => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            VarName::X => "x",
            VarName::Y => "y",
            VarName::Z => "z",
            VarName::T => "t",
        }
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Abs,
    /// 0/1 predicate: 1 when the value is within 1e-9 of an even integer.
    Even,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReduceOp {
    /// `sum_i(e)`: left-to-right sum of `e` over the coordinate index.
    Sum,
    /// `max_i(e)`: maximum of `e` over the coordinate index.
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn as_str(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

/// Comparison of two subexpressions, the guard of a conditional.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub op: CmpOp,
    pub lhs: ExprAst,
    pub rhs: ExprAst,
}

/// Parsed expression tree.
///
/// Constants are kept as `f64`; evaluation converts them into the working
/// scalar. `INF` is stored as `Constant(f64::INFINITY)`.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprAst {
    Constant(f64),
    Var(VarName),
    /// `x[i]`: coordinate of a vector-valued variable, valid only inside a
    /// reduction.
    Index(VarName),
    Unary(UnaryOp, Box<ExprAst>),
    Binary(BinaryOp, Box<ExprAst>, Box<ExprAst>),
    Reduce(ReduceOp, Box<ExprAst>),
    Conditional {
        cond: Box<Comparison>,
        then: Box<ExprAst>,
        els: Box<ExprAst>,
    },
}

impl ExprAst {
    /// Number of nodes in the tree (comparisons count both sides).
    pub fn node_count(&self) -> usize {
        match self {
            ExprAst::Constant(_) | ExprAst::Var(_) | ExprAst::Index(_) => 1,
            ExprAst::Unary(_, e) | ExprAst::Reduce(_, e) => 1 + e.node_count(),
            ExprAst::Binary(_, a, b) => 1 + a.node_count() + b.node_count(),
            ExprAst::Conditional { cond, then, els } => {
                1 + cond.lhs.node_count()
                    + cond.rhs.node_count()
                    + then.node_count()
                    + els.node_count()
            }
        }
    }

    /// All variables occurring in the tree, in slot order.
    pub fn variables(&self) -> Vec<VarName> {
        let mut seen = [false; 4];
        self.collect_vars(&mut seen);
        VarName::ALL
            .into_iter()
            .filter(|v| seen[v.slot()])
            .collect()
    }

    fn collect_vars(&self, seen: &mut [bool; 4]) {
        match self {
            ExprAst::Constant(_) => {}
            ExprAst::Var(v) | ExprAst::Index(v) => seen[v.slot()] = true,
            ExprAst::Unary(_, e) | ExprAst::Reduce(_, e) => e.collect_vars(seen),
            ExprAst::Binary(_, a, b) => {
                a.collect_vars(seen);
                b.collect_vars(seen);
            }
            ExprAst::Conditional { cond, then, els } => {
                cond.lhs.collect_vars(seen);
                cond.rhs.collect_vars(seen);
                then.collect_vars(seen);
                els.collect_vars(seen);
            }
        }
    }
}
