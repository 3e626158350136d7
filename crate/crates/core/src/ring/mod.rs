//! Exact multivariate polynomials and rational functions over the rationals.

mod gcd;
pub mod parse;
mod poly;
pub mod print;
mod ratfunc;

use std::sync::Arc;

use num_rational::BigRational;

pub use gcd::gcd;
pub use parse::{parse_expr, Expr};
pub use poly::{Monomial, MultiPoly};
pub use ratfunc::RatFunc;

use crate::error::{Error, Result};

/// Maximum number of chart coordinates.
pub const MAX_VARS: usize = 8;

/// Ordered coordinate names of a chart.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Context {
    vars: Vec<String>,
}

impl Context {
    pub fn new<S: AsRef<str>>(vars: &[S]) -> Result<Arc<Context>> {
        if vars.len() > MAX_VARS {
            return Err(Error::TooManyVariables(vars.len()));
        }
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::Parse { pos: 0, msg: format!("duplicate variable `{}`", v) });
            }
            if v == "d" || !v.chars().next().map(|c| c.is_ascii_alphabetic() || c == '_').unwrap_or(false) {
                return Err(Error::Parse { pos: 0, msg: format!("invalid variable name `{}`", v) });
            }
        }
        Ok(Arc::new(Context { vars }))
    }

    /// Context `x1..xn`.
    pub fn standard(n: usize) -> Arc<Context> {
        let names: Vec<String> = (1..=n).map(|i| format!("x{}", i)).collect();
        Context::new(&names).expect("standard names are valid")
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn var(&self, name: &str) -> Result<RatFunc> {
        Ok(RatFunc::var(self.index(name)?))
    }

    /// Parse a function literal.
    pub fn parse(&self, s: &str) -> Result<RatFunc> {
        self.eval(&parse_expr(s)?)
    }

    pub fn eval(&self, e: &Expr) -> Result<RatFunc> {
        Ok(match e {
            Expr::Int(n) => RatFunc::from_rational(BigRational::from_integer(n.clone())),
            Expr::Var(v) => self.var(v)?,
            Expr::Call(name, _) => {
                return Err(Error::Parse { pos: 0, msg: format!("`{}(..)` is not a function literal", name) })
            }
            Expr::Neg(a) => -self.eval(a)?,
            Expr::Add(a, b) => self.eval(a)? + self.eval(b)?,
            Expr::Sub(a, b) => self.eval(a)? - self.eval(b)?,
            Expr::Mul(a, b) => self.eval(a)? * self.eval(b)?,
            Expr::Div(a, b) => self.eval(a)?.checked_div(&self.eval(b)?)?,
            Expr::Pow(a, b) => {
                let e = b
                    .as_int()
                    .and_then(|n| i64::try_from(n).ok())
                    .ok_or_else(|| Error::Parse { pos: 0, msg: "exponent must be an integer".into() })?;
                self.eval(a)?.pow(e)?
            }
        })
    }

    pub fn print(&self, f: &RatFunc) -> String {
        print::ratfunc_to_string(f, &self.vars)
    }

    /// Partial derivative by variable name.
    pub fn partial(&self, f: &RatFunc, var: &str) -> Result<RatFunc> {
        Ok(f.partial(self.index(var)?))
    }

    /// Substitute by a name-keyed map that must cover every variable.
    pub fn substitute(&self, f: &RatFunc, map: &[(String, RatFunc)]) -> Result<RatFunc> {
        let mut images = Vec::with_capacity(self.dim());
        for v in &self.vars {
            let img = map
                .iter()
                .find(|(k, _)| k == v)
                .map(|(_, f)| f.clone())
                .ok_or_else(|| Error::UnknownVariable(v.clone()))?;
            images.push(img);
        }
        for (k, _) in map {
            self.index(k)?;
        }
        f.substitute(&images)
    }
}

/// The four field operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn ring_arith(a: &RatFunc, b: &RatFunc, op: ArithOp) -> Result<RatFunc> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}
