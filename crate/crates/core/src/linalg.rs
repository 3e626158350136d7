//! Sparse exact linear systems over the rationals, and polynomial primitives of closed forms.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::cartan::{basis_degree, Basis, DiffForm};
use crate::error::{Error, Result};
use crate::ring::{Monomial, MultiPoly, RatFunc, MAX_VARS};

pub type Row = BTreeMap<usize, BigRational>;

/// Equations `Σ a_c x_c = b` in `ncols` unknowns.
#[derive(Debug, Clone, Default)]
pub struct SparseSystem {
    ncols: usize,
    rows: Vec<(Row, BigRational)>,
}

fn axpy(row: &mut Row, rhs: &mut BigRational, factor: &BigRational, prow: &Row, prhs: &BigRational) {
    for (c, v) in prow {
        let e = row.entry(*c).or_insert_with(BigRational::zero);
        *e -= factor * v;
        if e.is_zero() {
            row.remove(c);
        }
    }
    *rhs -= factor * prhs;
}

impl SparseSystem {
    pub fn new(ncols: usize) -> Self {
        SparseSystem { ncols, rows: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn push(&mut self, mut row: Row, rhs: BigRational) {
        row.retain(|_, v| !v.is_zero());
        debug_assert!(row.keys().all(|&c| c < self.ncols));
        self.rows.push((row, rhs));
    }

    /// A particular solution with free unknowns set to zero, or `None` if inconsistent.
    pub fn solve(&self) -> Option<Vec<BigRational>> {
        let mut pivots: BTreeMap<usize, (Row, BigRational)> = BTreeMap::new();
        for (row, rhs) in &self.rows {
            let mut row = row.clone();
            let mut rhs = rhs.clone();
            let mut from = 0usize;
            loop {
                let hit = row.range(from..).find(|(c, _)| pivots.contains_key(c)).map(|(c, v)| (*c, v.clone()));
                match hit {
                    Some((c, factor)) => {
                        let (prow, prhs) = &pivots[&c];
                        axpy(&mut row, &mut rhs, &factor, prow, prhs);
                        from = c + 1;
                    }
                    None => break,
                }
            }
            match row.keys().next().copied() {
                None => {
                    if !rhs.is_zero() {
                        return None;
                    }
                }
                Some(lead) => {
                    let inv = row[&lead].recip();
                    for v in row.values_mut() {
                        *v *= &inv;
                    }
                    rhs *= &inv;
                    pivots.insert(lead, (row, rhs));
                }
            }
        }
        let mut x = vec![BigRational::zero(); self.ncols];
        for (&lead, (row, rhs)) in pivots.iter().rev() {
            let mut v = rhs.clone();
            for (c, a) in row.range(lead + 1..) {
                v -= a * &x[*c];
            }
            x[lead] = v;
        }
        Some(x)
    }
}

/// All monomials in `n` variables of total degree at most `d`.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, i: usize, left: u32, cur: &mut [u16; MAX_VARS], out: &mut Vec<Monomial>) {
        if i == n {
            out.push(Monomial(*cur));
            return;
        }
        for e in 0..=left {
            cur[i] = e as u16;
            rec(n, i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(n, 0, d, &mut [0u16; MAX_VARS], &mut out);
    out
}

/// Polynomial coefficients of a form, keyed by basis element.
pub fn polynomial_terms(a: &DiffForm) -> Result<Vec<(Basis, MultiPoly)>> {
    a.terms()
        .map(|(&b, f)| match f.as_poly() {
            Some(p) => Ok((b, p.clone())),
            None => Err(Error::StructureMismatch("expected polynomial coefficients".into())),
        })
        .collect()
}

/// A form `h` with polynomial coefficients of degree `≤ bound` and `dh = target`.
pub fn polynomial_primitive(target: &DiffForm, bound: u32) -> Result<DiffForm> {
    let n = target.dim();
    if target.is_zero() {
        return Ok(DiffForm::zero(n));
    }
    let p = target.degree().ok_or(Error::NotHomogeneous)?;
    if p == 0 {
        return Err(Error::NotClosed("functions have no primitive".into()));
    }
    if !target.is_closed() {
        return Err(Error::NotClosed("target form is not closed".into()));
    }
    let terms = polynomial_terms(target)?;
    let bases: Vec<Basis> = (0..(1u32 << n)).filter(|&b| basis_degree(b) == p - 1).collect();
    let monos = monomials_up_to(n, bound);
    let col = |bi: usize, mi: usize| bi * monos.len() + mi;

    let mut eqs: BTreeMap<(Basis, Monomial), Row> = BTreeMap::new();
    for (bi, &b) in bases.iter().enumerate() {
        for (mi, m) in monos.iter().enumerate() {
            for k in 0..n {
                if m.0[k] == 0 || b & (1 << k) != 0 {
                    continue;
                }
                let mut dm = *m;
                dm.0[k] -= 1;
                let sign = crate::cartan::merge_sign(1 << k, b).expect("disjoint");
                let coef = BigRational::from_integer((i64::from(m.0[k]) * i64::from(sign)).into());
                eqs.entry((b | (1 << k), dm)).or_default().insert(col(bi, mi), coef);
            }
        }
    }
    let mut rhs: BTreeMap<(Basis, Monomial), BigRational> = BTreeMap::new();
    for (b, poly) in &terms {
        for (m, c) in poly.terms() {
            rhs.insert((*b, *m), c.clone());
        }
    }
    let mut sys = SparseSystem::new(bases.len() * monos.len());
    for key in rhs.keys() {
        if !eqs.contains_key(key) {
            return Err(Error::NoSolutionWithinBound(bound as usize));
        }
    }
    for (key, row) in eqs {
        let b = rhs.remove(&key).unwrap_or_else(BigRational::zero);
        sys.push(row, b);
    }
    let x = sys.solve().ok_or(Error::NoSolutionWithinBound(bound as usize))?;
    let mut out = DiffForm::zero(n);
    for (bi, &b) in bases.iter().enumerate() {
        let mut poly = MultiPoly::zero();
        for (mi, m) in monos.iter().enumerate() {
            let v = &x[col(bi, mi)];
            if !v.is_zero() {
                poly.add_term(*m, v.clone());
            }
        }
        if !poly.is_zero() {
            out.add_term(b, RatFunc::from_poly(poly));
        }
    }
    debug_assert!(out.ext_d() == *target);
    Ok(out)
}
