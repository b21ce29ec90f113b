//! Expressions in one variable `t`, parsed by recursive descent and
//! differentiated twice in forward mode.
//!
//! Grammar (lowest to highest precedence):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | '+' unary | power
//! power   := primary ('^' unary)?          right associative
//! primary := number | 't' | name | func '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! `-t^2` parses as `-(t^2)`. Functions: `exp`, `log`, `sqrt`, `sinh`,
//! `cosh`, `tanh`, `pow`. Any other name must be bound in the parameter map.

mod dual;
mod parser;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use dual::Dual2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
    Tanh,
    Pow,
}

impl Func {
    fn lookup(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => Self::Exp,
            "log" => Self::Log,
            "sqrt" => Self::Sqrt,
            "sinh" => Self::Sinh,
            "cosh" => Self::Cosh,
            "tanh" => Self::Tanh,
            "pow" => Self::Pow,
            _ => return None,
        })
    }

    fn arity(self) -> usize {
        match self {
            Self::Pow => 2,
            _ => 1,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Self::Exp => "exp",
            Self::Log => "log",
            Self::Sqrt => "sqrt",
            Self::Sinh => "sinh",
            Self::Cosh => "cosh",
            Self::Tanh => "tanh",
            Self::Pow => "pow",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    Var,
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Call(Func, Vec<Node>),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: found {found}, expected one of {}", expected.join(", "))]
    Syntax {
        offset: usize,
        found: String,
        expected: Vec<&'static str>,
    },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("function `{name}` at offset {offset} takes {expected} argument(s), got {found}")]
    Arity {
        offset: usize,
        name: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("invalid number literal `{text}` at offset {offset}")]
    Number { offset: usize, text: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            Self::Syntax { offset, .. }
            | Self::UnknownIdentifier { offset, .. }
            | Self::Arity { offset, .. }
            | Self::Number { offset, .. } => *offset,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EvalError {
    #[error("{function} is undefined at argument {arg} (t = {t})")]
    Domain { function: &'static str, arg: f64, t: f64 },
    #[error("division by zero (t = {t})")]
    DivisionByZero { t: f64 },
}

/// A parsed expression together with its source text.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    source: String,
    root: Node,
}

impl Expr {
    pub fn parse(src: &str) -> Result<Self, ParseError> {
        Self::parse_with(src, &BTreeMap::new())
    }

    /// Parses with named parameters substituted as constants.
    pub fn parse_with(src: &str, params: &BTreeMap<String, f64>) -> Result<Self, ParseError> {
        let root = parser::Parser::new(src, params).parse()?;
        Ok(Self {
            source: src.to_string(),
            root,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Value, first and second derivative at `t`.
    pub fn eval_dual(&self, t: f64) -> Result<Dual2, EvalError> {
        eval(&self.root, Dual2::variable(t), t)
    }

    pub fn eval(&self, t: f64) -> Result<f64, EvalError> {
        self.eval_dual(t).map(|d| d.v)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

fn eval(node: &Node, var: Dual2, t: f64) -> Result<Dual2, EvalError> {
    Ok(match node {
        Node::Const(c) => Dual2::constant(*c),
        Node::Var => var,
        Node::Neg(inner) => -eval(inner, var, t)?,
        Node::Binary(op, l, r) => {
            let a = eval(l, var, t)?;
            let b = eval(r, var, t)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b.v == 0.0 {
                        return Err(EvalError::DivisionByZero { t });
                    }
                    a / b
                }
                BinOp::Pow => power(a, b, t)?,
            }
        }
        Node::Call(func, args) => {
            let a = eval(&args[0], var, t)?;
            let domain = |ok: bool| {
                if ok {
                    Ok(())
                } else {
                    Err(EvalError::Domain {
                        function: func.name(),
                        arg: a.v,
                        t,
                    })
                }
            };
            match func {
                Func::Exp => a.exp(),
                Func::Log => {
                    domain(a.v > 0.0)?;
                    a.ln()
                }
                Func::Sqrt => {
                    domain(a.v >= 0.0)?;
                    a.sqrt()
                }
                Func::Sinh => a.sinh(),
                Func::Cosh => a.cosh(),
                Func::Tanh => a.tanh(),
                Func::Pow => power(a, eval(&args[1], var, t)?, t)?,
            }
        }
    })
}

fn power(base: Dual2, exponent: Dual2, t: f64) -> Result<Dual2, EvalError> {
    let constant_exp = exponent.d1 == 0.0 && exponent.d2 == 0.0;
    let integral_exp = constant_exp && exponent.v.fract() == 0.0;
    if base.v < 0.0 && !integral_exp || base.v == 0.0 && !constant_exp {
        return Err(EvalError::Domain {
            function: "pow",
            arg: base.v,
            t,
        });
    }
    Ok(base.pow(exponent))
}
