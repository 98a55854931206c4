//! Real-valued expressions in one variable `x` with named parameters.
//!
//! Expressions are written in ordinary infix notation (`A*sinh(alpha*x)/(b+c*cosh(alpha*x))`),
//! parsed into an immutable tree, and can be evaluated, differentiated with respect to `x`
//! and simplified. Evaluation never returns a silent `NaN`: out-of-domain operations and
//! overflows come back as [`ExprError`] values so grid scans can report isolated bad points.

mod diff;
mod parse;
mod simplify;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use parse::parse;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at offset {offset}: expected {expected}, found {found}")]
    Syntax {
        offset: usize,
        expected: String,
        found: String,
    },
    #[error("unknown function `{name}` at offset {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("non-finite result in {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = std::result::Result<T, ExprError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    /// Applies the operator with the same domain rules as [`Expression::evaluate`].
    pub fn apply(self, a: f64, b: f64) -> Result<f64> {
        let v = match self {
            BinOp::Add => a + b,
            BinOp::Sub => a - b,
            BinOp::Mul => a * b,
            BinOp::Div => {
                if b == 0.0 {
                    return Err(ExprError::Domain(format!("division by zero ({a}/0)")));
                }
                a / b
            }
            BinOp::Pow => {
                if a < 0.0 && b.fract() != 0.0 {
                    return Err(ExprError::Domain(format!(
                        "negative base {a} raised to non-integer power {b}"
                    )));
                }
                if a == 0.0 && b < 0.0 {
                    return Err(ExprError::Domain(format!("zero raised to negative power {b}")));
                }
                a.powf(b)
            }
        };
        finite(v, self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Sqrt,
    Sin,
    Cos,
    Log,
}

impl Func {
    pub const ALL: [Func; 8] = [
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Exp,
        Func::Sqrt,
        Func::Sin,
        Func::Cos,
        Func::Log,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Log => "log",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn apply(self, a: f64) -> Result<f64> {
        let v = match self {
            Func::Sinh => a.sinh(),
            Func::Cosh => a.cosh(),
            Func::Tanh => a.tanh(),
            Func::Exp => a.exp(),
            Func::Sqrt => {
                if a < 0.0 {
                    return Err(ExprError::Domain(format!("sqrt of negative argument {a}")));
                }
                a.sqrt()
            }
            Func::Sin => a.sin(),
            Func::Cos => a.cos(),
            Func::Log => {
                if a <= 0.0 {
                    return Err(ExprError::Domain(format!("log of non-positive argument {a}")));
                }
                a.ln()
            }
        };
        finite(v, self.name())
    }
}

fn finite(v: f64, op: &'static str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ExprError::NonFinite(op))
    }
}

/// Values for the named parameters of an expression.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParameterBindings(BTreeMap<String, f64>);

impl ParameterBindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.insert(name, value);
        self
    }

    pub fn insert(&mut self, name: &str, value: f64) {
        self.0.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Overlays `other` on top of `self`; entries in `other` win.
    pub fn merged(&self, other: &ParameterBindings) -> ParameterBindings {
        let mut out = self.clone();
        for (k, v) in other.iter() {
            out.insert(k, v);
        }
        out
    }

    /// Parses a single `name=value` assignment.
    pub fn parse_assignment(text: &str) -> std::result::Result<(String, f64), String> {
        let (name, value) = text
            .split_once('=')
            .ok_or_else(|| format!("expected name=value, got `{text}`"))?;
        let name = name.trim();
        if name.is_empty() {
            return Err(format!("missing parameter name in `{text}`"));
        }
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| format!("invalid number in `{text}`"))?;
        if !value.is_finite() {
            return Err(format!("non-finite value in `{text}`"));
        }
        Ok((name.to_string(), value))
    }
}

impl fmt::Display for ParameterBindings {
    /// Semicolon-joined `name=value` list, in name order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

impl<'a> FromIterator<(&'a str, f64)> for ParameterBindings {
    fn from_iter<I: IntoIterator<Item = (&'a str, f64)>>(iter: I) -> Self {
        let mut b = ParameterBindings::new();
        for (k, v) in iter {
            b.insert(k, v);
        }
        b
    }
}

/// Expression tree. Immutable once built; all operations return new trees.
#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Const(f64),
    /// The independent variable `x`.
    Var,
    Param(String),
    Neg(Box<Expression>),
    Binary(BinOp, Box<Expression>, Box<Expression>),
    Call(Func, Box<Expression>),
}

impl Expression {
    pub fn constant(c: f64) -> Self {
        Expression::Const(c)
    }

    pub fn param(name: &str) -> Self {
        Expression::Param(name.to_string())
    }

    pub fn binary(op: BinOp, a: Expression, b: Expression) -> Self {
        Expression::Binary(op, Box::new(a), Box::new(b))
    }

    pub fn call(f: Func, a: Expression) -> Self {
        Expression::Call(f, Box::new(a))
    }

    pub fn neg(a: Expression) -> Self {
        Expression::Neg(Box::new(a))
    }

    pub fn evaluate(&self, x: f64, bindings: &ParameterBindings) -> Result<f64> {
        match self {
            Expression::Const(c) => Ok(*c),
            Expression::Var => Ok(x),
            Expression::Param(name) => bindings
                .get(name)
                .ok_or_else(|| ExprError::UnboundParameter(name.clone())),
            Expression::Neg(a) => Ok(-a.evaluate(x, bindings)?),
            Expression::Binary(op, a, b) => {
                op.apply(a.evaluate(x, bindings)?, b.evaluate(x, bindings)?)
            }
            Expression::Call(f, a) => f.apply(a.evaluate(x, bindings)?),
        }
    }

    /// Evaluates a parameter-free expression.
    pub fn eval(&self, x: f64) -> Result<f64> {
        self.evaluate(x, &EMPTY)
    }

    /// Substitutes every parameter by its bound value and simplifies the result.
    ///
    /// Fails with [`ExprError::UnboundParameter`] naming the first missing parameter.
    pub fn bind(&self, bindings: &ParameterBindings) -> Result<Expression> {
        Ok(self.substitute(bindings)?.simplify())
    }

    fn substitute(&self, bindings: &ParameterBindings) -> Result<Expression> {
        Ok(match self {
            Expression::Param(name) => Expression::Const(
                bindings
                    .get(name)
                    .ok_or_else(|| ExprError::UnboundParameter(name.clone()))?,
            ),
            Expression::Const(_) | Expression::Var => self.clone(),
            Expression::Neg(a) => Expression::neg(a.substitute(bindings)?),
            Expression::Binary(op, a, b) => {
                Expression::binary(*op, a.substitute(bindings)?, b.substitute(bindings)?)
            }
            Expression::Call(f, a) => Expression::call(*f, a.substitute(bindings)?),
        })
    }

    /// Names of all parameters referenced by the tree.
    pub fn parameters(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_params(&mut out);
        out
    }

    fn collect_params(&self, out: &mut BTreeSet<String>) {
        match self {
            Expression::Param(name) => {
                out.insert(name.clone());
            }
            Expression::Const(_) | Expression::Var => {}
            Expression::Neg(a) | Expression::Call(_, a) => a.collect_params(out),
            Expression::Binary(_, a, b) => {
                a.collect_params(out);
                b.collect_params(out);
            }
        }
    }

    pub fn depends_on_x(&self) -> bool {
        match self {
            Expression::Var => true,
            Expression::Const(_) | Expression::Param(_) => false,
            Expression::Neg(a) | Expression::Call(_, a) => a.depends_on_x(),
            Expression::Binary(_, a, b) => a.depends_on_x() || b.depends_on_x(),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expression::Const(_) | Expression::Var | Expression::Param(_) => 1,
            Expression::Neg(a) | Expression::Call(_, a) => 1 + a.node_count(),
            Expression::Binary(_, a, b) => 1 + a.node_count() + b.node_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Expression::Const(_) | Expression::Var | Expression::Param(_) => 1,
            Expression::Neg(a) | Expression::Call(_, a) => 1 + a.depth(),
            Expression::Binary(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Binding strength used by the printer; higher binds tighter.
    fn precedence(&self) -> u8 {
        match self {
            Expression::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expression::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Expression::Neg(_) => 3,
            Expression::Binary(BinOp::Pow, ..) => 4,
            _ => 5,
        }
    }
}

static EMPTY: ParameterBindings = ParameterBindings(BTreeMap::new());

impl FromStr for Expression {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

fn write_child(
    f: &mut fmt::Formatter<'_>,
    child: &Expression,
    parens: bool,
) -> fmt::Result {
    if parens {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for Expression {
    /// Prints with the minimal parentheses needed for the parser to rebuild the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Const(c) => {
                if c.is_sign_negative() {
                    write!(f, "({c})")
                } else {
                    write!(f, "{c}")
                }
            }
            Expression::Var => f.write_str("x"),
            Expression::Param(name) => f.write_str(name),
            Expression::Neg(a) => {
                f.write_str("-")?;
                write_child(f, a, a.precedence() < 3)
            }
            Expression::Binary(BinOp::Pow, a, b) => {
                write_child(f, a, a.precedence() <= 4)?;
                f.write_str("^")?;
                write_child(f, b, b.precedence() < 3)
            }
            Expression::Binary(op, a, b) => {
                let p = self.precedence();
                write_child(f, a, a.precedence() < p)?;
                write!(f, " {} ", op.symbol())?;
                write_child(f, b, b.precedence() <= p)
            }
            Expression::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}
