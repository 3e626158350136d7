use num_rational::BigRational;
use num_traits::{One, Signed};

use super::poly::{Monomial, MultiPoly};
use super::ratfunc::RatFunc;

fn monomial_string(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{}", names[i], e)),
        }
    }
    parts.join("*")
}

fn abs_term(c: &BigRational, m: &Monomial, names: &[String]) -> String {
    let a = c.abs();
    if m.is_one() {
        return a.to_string();
    }
    let ms = monomial_string(m, names);
    if a.is_one() {
        ms
    } else {
        format!("{}*{}", a, ms)
    }
}

/// Canonical text: terms in decreasing graded-lex order.
pub fn poly_to_string(p: &MultiPoly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&abs_term(c, m, names));
    }
    out
}

fn is_bare_power(p: &MultiPoly) -> bool {
    if p.num_terms() != 1 {
        return false;
    }
    let (m, c) = p.leading().unwrap();
    c.is_one() && m.0.iter().filter(|&&e| e > 0).count() == 1
}

pub fn ratfunc_to_string(f: &RatFunc, names: &[String]) -> String {
    let n = poly_to_string(f.numer(), names);
    if f.denom().is_one() {
        return n;
    }
    let n = if f.numer().num_terms() == 1 { n } else { format!("({})", n) };
    let d = poly_to_string(f.denom(), names);
    let d = if is_bare_power(f.denom()) { d } else { format!("({})", d) };
    format!("{}/{}", n, d)
}

/// Whether a function prints as a single signed term, so it can be a bare factor.
pub fn is_simple(f: &RatFunc) -> bool {
    f.denom().is_one() && f.numer().num_terms() == 1
}
