//! Defining-function expressions and domain configuration.

mod domain;
mod eval;
mod parser;

pub use domain::{builtin_domain, builtin_from_str, load_domain_spec, DomainSpec, DEFAULT_MESH, DEFAULT_ORDER};
pub use eval::{eval_expression_jet, eval_plain};
pub use parser::{parse_expression, parse_expression_with};

use std::fmt;

use crate::jets::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    Z,
    W,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprNode {
    Literal(C64),
    Var(Var),
    Conj(Box<ExprNode>),
    Re(Box<ExprNode>),
    Im(Box<ExprNode>),
    Abs2(Box<ExprNode>),
    Neg(Box<ExprNode>),
    Add(Box<ExprNode>, Box<ExprNode>),
    Sub(Box<ExprNode>, Box<ExprNode>),
    Mul(Box<ExprNode>, Box<ExprNode>),
    Div(Box<ExprNode>, Box<ExprNode>),
    Powi(Box<ExprNode>, u32),
    Log(Box<ExprNode>),
    Exp(Box<ExprNode>),
    Sqrt(Box<ExprNode>),
}

impl ExprNode {
    pub fn real(x: f64) -> ExprNode {
        ExprNode::Literal(C64::new(x, 0.0))
    }

    pub fn depth(&self) -> usize {
        use ExprNode::*;
        match self {
            Literal(_) | Var(_) => 1,
            Conj(a) | Re(a) | Im(a) | Abs2(a) | Neg(a) | Powi(a, _) | Log(a) | Exp(a) | Sqrt(a) => 1 + a.depth(),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

fn write_number(f: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    // `{:?}` keeps a decimal point or exponent and round-trips exactly.
    write!(f, "{x:?}")
}

/// Prints a fully parenthesized form that parses back to the same tree.
impl fmt::Display for ExprNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ExprNode::*;
        match self {
            Literal(c) => {
                if c.im == 0.0 && c.re.is_sign_positive() {
                    write_number(f, c.re)
                } else {
                    write!(f, "complex(")?;
                    write_number(f, c.re)?;
                    write!(f, ", ")?;
                    write_number(f, c.im)?;
                    write!(f, ")")
                }
            }
            Var(self::Var::Z) => write!(f, "z"),
            Var(self::Var::W) => write!(f, "w"),
            Conj(a) => write!(f, "conj({a})"),
            Re(a) => write!(f, "re({a})"),
            Im(a) => write!(f, "im({a})"),
            Abs2(a) => write!(f, "abs2({a})"),
            Log(a) => write!(f, "log({a})"),
            Exp(a) => write!(f, "exp({a})"),
            Sqrt(a) => write!(f, "sqrt({a})"),
            Neg(a) => write!(f, "(-{a})"),
            Add(a, b) => write!(f, "({a} + {b})"),
            Sub(a, b) => write!(f, "({a} - {b})"),
            Mul(a, b) => write!(f, "({a} * {b})"),
            Div(a, b) => write!(f, "({a} / {b})"),
            Powi(a, n) => write!(f, "({a} ^ {n})"),
        }
    }
}
