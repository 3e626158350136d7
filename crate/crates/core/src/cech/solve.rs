use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::cover::{CechCochain, CoverSpec, TotalCochain};
use crate::cartan::{basis_degree, Basis, DiffForm};
use crate::error::{Error, Result};
use crate::linalg::{monomials_up_to, Row, SparseSystem};
use crate::ring::{gcd, Monomial, MultiPoly, RatFunc};

pub const DEFAULT_DEGREE_BOUND: usize = 6;

type Slot = (usize, Vec<usize>, Basis);

struct Unknown {
    p: usize,
    simplex: Vec<usize>,
    basis: Basis,
    mono: Monomial,
}

fn lcm(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let g = gcd(a, b);
    a.mul(&b.div_exact(&g).expect("gcd divides"))
}

/// `(d±δ̌)` of one unknown, as contributions per slot.
fn image(cover: &CoverSpec, u: &Unknown, q: usize, cofaces: &[(Vec<usize>, usize)]) -> Result<Vec<(Slot, DiffForm)>> {
    let n = cover.dim();
    let term = DiffForm::term(n, u.basis, RatFunc::from_poly(MultiPoly::monomial(u.mono, BigRational::one())));
    let mut out = Vec::new();
    if q < n {
        for (b, f) in term.ext_d().terms() {
            out.push(((u.p, u.simplex.clone(), *b), DiffForm::term(n, *b, f.clone())));
        }
    }
    let last = *u.simplex.last().expect("non-empty");
    for (tau, j) in cofaces {
        let to = *tau.last().expect("non-empty");
        let moved = cover.transport(last, to, &term)?;
        let sign = if (j + q) % 2 == 0 { 1 } else { -1 };
        for (b, f) in moved.terms() {
            out.push(((u.p + 1, tau.clone(), *b), DiffForm::term(n, *b, f.scale_int(sign))));
        }
    }
    Ok(out)
}

/// Solves `(d±δ̌) X = target` for `X` with components in `Č^p(Ω^q)`, `q ≥ 2`,
/// whose coefficients are polynomials of total degree at most `bound`.
pub fn coboundary_solve(cover: &CoverSpec, target: &TotalCochain, bound: usize) -> Result<TotalCochain> {
    let t = target.degree;
    if t == 0 {
        return Err(Error::DegreeError("a degree-0 target has no preimage".into()));
    }
    let dt = target.total_d(cover)?;
    if !dt.is_zero() {
        return Err(Error::NotClosed("(d±δ̌) target ≠ 0".into()));
    }
    let n = cover.dim();
    let mut solution = TotalCochain::new(t - 1);
    if target.is_zero() {
        return Ok(solution);
    }
    let monos = monomials_up_to(n, bound as u32);
    let mut unknowns = Vec::new();
    let mut degrees = BTreeMap::new();
    for p in 0..t.min(cover.max_degree() + 1) {
        let q = t - 1 - p;
        if q < 2 || q > n {
            continue;
        }
        degrees.insert(p, q);
        for s in cover.simplices_of_degree(p) {
            for b in (0..(1u32 << n)).filter(|&b| basis_degree(b) == q) {
                for m in &monos {
                    unknowns.push(Unknown { p, simplex: s.clone(), basis: b, mono: *m });
                }
            }
        }
    }

    let mut slots: BTreeMap<Slot, (Vec<(usize, RatFunc)>, RatFunc)> = BTreeMap::new();
    for c in target.parts.values() {
        for (s, a) in &c.values {
            for (b, f) in a.terms() {
                slots.entry((c.p, s.clone(), *b)).or_insert_with(|| (Vec::new(), RatFunc::zero())).1 = f.clone();
            }
        }
    }
    let mut cofaces: BTreeMap<Vec<usize>, Vec<(Vec<usize>, usize)>> = BTreeMap::new();
    for (col, u) in unknowns.iter().enumerate() {
        let cf = cofaces.entry(u.simplex.clone()).or_insert_with(|| {
            cover
                .simplices_of_degree(u.p + 1)
                .into_iter()
                .filter_map(|tau| {
                    (0..tau.len()).find(|&j| {
                        let mut f = tau.clone();
                        f.remove(j);
                        f == u.simplex
                    })
                    .map(|j| (tau, j))
                })
                .collect()
        });
        for (slot, form) in image(cover, u, degrees[&u.p], cf)? {
            let f = form.coefficient(slot.2);
            slots.entry(slot).or_insert_with(|| (Vec::new(), RatFunc::zero())).0.push((col, f));
        }
    }

    let mut sys = SparseSystem::new(unknowns.len());
    for (entries, rhs) in slots.values() {
        let mut den = rhs.denom().clone();
        for (_, f) in entries {
            den = lcm(&den, f.denom());
        }
        let scaled = |f: &RatFunc| f.numer().mul(&den.div_exact(f.denom()).expect("lcm is a multiple"));
        let mut rows: BTreeMap<Monomial, Row> = BTreeMap::new();
        for (col, f) in entries {
            for (m, c) in scaled(f).terms() {
                let e = rows.entry(*m).or_default().entry(*col).or_insert_with(BigRational::zero);
                *e += c;
            }
        }
        let target_poly = scaled(rhs);
        for (m, _) in target_poly.terms() {
            rows.entry(*m).or_default();
        }
        for (m, row) in rows {
            let b = target_poly.coefficient(&m);
            sys.push(row, b);
        }
    }
    let x = sys.solve().ok_or(Error::NoSolutionWithinBound(bound))?;

    let mut values: BTreeMap<usize, BTreeMap<Vec<usize>, DiffForm>> = BTreeMap::new();
    for (p, _) in &degrees {
        let entry = values.entry(*p).or_default();
        for s in cover.simplices_of_degree(*p) {
            entry.insert(s, DiffForm::zero(n));
        }
    }
    for (u, v) in unknowns.iter().zip(&x) {
        if v.is_zero() {
            continue;
        }
        let term = DiffForm::term(n, u.basis, RatFunc::from_poly(MultiPoly::monomial(u.mono, v.clone())));
        let e = values.get_mut(&u.p).expect("declared").get_mut(&u.simplex).expect("declared");
        *e = &*e + &term;
    }
    for (p, vals) in values {
        solution.insert(CechCochain { p, q: degrees[&p], values: vals })?;
    }
    if solution.total_d(cover)?.sub(target)?.is_zero() {
        Ok(solution)
    } else {
        Err(Error::NoSolutionWithinBound(bound))
    }
}
