//! Form literals such as `x1*d(x2) - 3*x2^2*d(x1)^d(x3)`.
//!
//! `*` and a non-integer `^` act as the wedge product, `d(..)` is the exterior
//! derivative and `/` divides by a function.

use super::form::{basis_degree, basis_indices, DiffForm};
use super::VectorField;
use crate::error::{Error, Result};
use crate::ring::print::ratfunc_to_string;
use crate::ring::{parse_expr, Context, Expr, RatFunc};

fn perr<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { pos: 0, msg: msg.into() })
}

fn function_of(a: &DiffForm) -> Result<RatFunc> {
    if a.is_homogeneous(0) {
        Ok(a.as_function())
    } else {
        perr("expected a function, found a form of positive degree")
    }
}

pub fn eval_form(ctx: &Context, e: &Expr) -> Result<DiffForm> {
    let n = ctx.dim();
    Ok(match e {
        Expr::Int(_) | Expr::Var(_) => DiffForm::function(n, ctx.eval(e)?),
        Expr::Call(name, inner) if name == "d" => eval_form(ctx, inner)?.ext_d(),
        Expr::Call(name, _) => return perr(format!("unknown operator `{}`", name)),
        Expr::Neg(a) => -eval_form(ctx, a)?,
        Expr::Add(a, b) => eval_form(ctx, a)? + eval_form(ctx, b)?,
        Expr::Sub(a, b) => eval_form(ctx, a)? - eval_form(ctx, b)?,
        Expr::Mul(a, b) => eval_form(ctx, a)?.wedge(&eval_form(ctx, b)?),
        Expr::Div(a, b) => {
            let den = function_of(&eval_form(ctx, b)?)?;
            eval_form(ctx, a)?.scale(&den.recip()?)
        }
        Expr::Pow(a, b) => {
            let base = eval_form(ctx, a)?;
            match b.as_int() {
                Some(k) => {
                    let k = i64::try_from(k).map_err(|_| Error::Parse { pos: 0, msg: "exponent too large".into() })?;
                    DiffForm::function(n, function_of(&base)?.pow(k)?)
                }
                None => base.wedge(&eval_form(ctx, b)?),
            }
        }
    })
}

/// Parse a form literal over the chart's coordinates.
pub fn parse_form(ctx: &Context, s: &str) -> Result<DiffForm> {
    eval_form(ctx, &parse_expr(s)?)
}

/// Parse a vector field given by its component functions.
pub fn parse_vector<S: AsRef<str>>(ctx: &Context, comps: &[S]) -> Result<VectorField> {
    if comps.len() != ctx.dim() {
        return Err(Error::ContextMismatch { left: ctx.dim(), right: comps.len() });
    }
    Ok(VectorField::new(comps.iter().map(|c| ctx.parse(c.as_ref())).collect::<Result<_>>()?))
}

fn needs_parens(f: &RatFunc) -> bool {
    f.denom().is_one() && f.numer().num_terms() > 1
}

/// Canonical text: terms by degree, then by increasing index tuple.
pub fn form_to_string(a: &DiffForm, names: &[String]) -> String {
    if a.is_zero() {
        return "0".into();
    }
    let mut keys: Vec<_> = a.terms().map(|(&b, f)| (basis_degree(b), basis_indices(b), f)).collect();
    keys.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
    let mut out = String::new();
    for (k, (deg, idx, f)) in keys.into_iter().enumerate() {
        let neg = deg > 0 && f.numer().leading_is_negative();
        let f = if neg { -f } else { f.clone() };
        out.push_str(match (k, neg) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        let dx: Vec<String> = idx.iter().map(|&i| format!("d({})", names[i])).collect();
        let dx = dx.join("^");
        if deg == 0 {
            out.push_str(&ratfunc_to_string(&f, names));
        } else if f.is_one() {
            out.push_str(&dx);
        } else if needs_parens(&f) {
            out.push_str(&format!("({})*{}", ratfunc_to_string(&f, names), dx));
        } else {
            out.push_str(&format!("{}*{}", ratfunc_to_string(&f, names), dx));
        }
    }
    out
}

pub fn vector_to_string(v: &VectorField, names: &[String]) -> String {
    let comps: Vec<String> = v.components().iter().map(|f| ratfunc_to_string(f, names)).collect();
    format!("[{}]", comps.join(", "))
}

impl Context {
    pub fn parse_form(&self, s: &str) -> Result<DiffForm> {
        parse_form(self, s)
    }

    pub fn print_form(&self, a: &DiffForm) -> String {
        form_to_string(a, self.vars())
    }

    pub fn print_vector(&self, v: &VectorField) -> String {
        vector_to_string(v, self.vars())
    }
}
