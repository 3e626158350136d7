use std::fmt;

use num_rational::BigRational;

use super::form::DiffForm;
use super::VectorField;
use crate::error::{Error, Result};
use crate::ring::RatFunc;

/// An `r×r` matrix of homogeneous `p`-forms, i.e. a `gl_r`-valued `p`-form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixForm {
    n: usize,
    r: usize,
    p: usize,
    entries: Vec<DiffForm>,
}

impl MatrixForm {
    pub fn zero(n: usize, r: usize, p: usize) -> Self {
        MatrixForm { n, r, p, entries: vec![DiffForm::zero(n); r * r] }
    }

    pub fn from_entries(n: usize, r: usize, p: usize, entries: Vec<DiffForm>) -> Result<Self> {
        if entries.len() != r * r {
            return Err(Error::RankMismatch { left: r * r, right: entries.len() });
        }
        for e in &entries {
            if e.dim() != n {
                return Err(Error::ContextMismatch { left: n, right: e.dim() });
            }
            e.require_degree(p)?;
        }
        Ok(MatrixForm { n, r, p, entries })
    }

    /// Homogeneous entries with the degree inferred (0 if all vanish).
    pub fn from_rows(n: usize, rows: Vec<Vec<DiffForm>>) -> Result<Self> {
        let r = rows.len();
        let entries: Vec<DiffForm> = rows.into_iter().flatten().collect();
        let p = entries.iter().find_map(|e| if e.is_zero() { None } else { e.degree() });
        let p = match p {
            Some(p) => p,
            None if entries.iter().all(|e| e.is_zero()) => 0,
            None => return Err(Error::NotHomogeneous),
        };
        Self::from_entries(n, r, p, entries)
    }

    /// Degree-0 matrix from function entries.
    pub fn from_functions(n: usize, rows: Vec<Vec<RatFunc>>) -> Self {
        let r = rows.len();
        let entries = rows.into_iter().flatten().map(|f| DiffForm::function(n, f)).collect();
        MatrixForm { n, r, p: 0, entries }
    }

    /// Elementary matrix `E_ij` as a 0-form.
    pub fn elementary(n: usize, r: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(n, r, 0);
        m.entries[i * r + j] = DiffForm::one(n);
        m
    }

    pub fn identity(n: usize, r: usize) -> Self {
        let mut m = Self::zero(n, r, 0);
        for i in 0..r {
            m.entries[i * r + i] = DiffForm::one(n);
        }
        m
    }

    /// `α ⊗ m` for a homogeneous form `α` and a degree-0 matrix `m`.
    pub fn tensor(alpha: &DiffForm, m: &MatrixForm) -> Result<Self> {
        let p = alpha.degree().unwrap_or(0);
        alpha.require_degree(p)?;
        let entries = m.entries.iter().map(|e| alpha.scale(&e.as_function())).collect();
        Ok(MatrixForm { n: m.n, r: m.r, p, entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn entry(&self, i: usize, j: usize) -> &DiffForm {
        &self.entries[i * self.r + j]
    }

    pub fn entries(&self) -> &[DiffForm] {
        &self.entries
    }

    /// Entry of a degree-0 matrix as a function.
    pub fn function(&self, i: usize, j: usize) -> RatFunc {
        self.entry(i, j).as_function()
    }

    pub fn functions(&self) -> Vec<Vec<RatFunc>> {
        (0..self.r).map(|i| (0..self.r).map(|j| self.function(i, j)).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    fn check(&self, other: &MatrixForm) -> Result<()> {
        if self.r != other.r {
            return Err(Error::RankMismatch { left: self.r, right: other.r });
        }
        if self.n != other.n {
            return Err(Error::ContextMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MatrixForm) -> Result<MatrixForm> {
        self.check(other)?;
        if self.p != other.p && !self.is_zero() && !other.is_zero() {
            return Err(Error::NotHomogeneous);
        }
        let p = if self.is_zero() { other.p } else { self.p };
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(MatrixForm { n: self.n, r: self.r, p, entries })
    }

    pub fn add(&self, other: &MatrixForm) -> MatrixForm {
        self.try_add(other).expect("incompatible matrix forms")
    }

    pub fn sub(&self, other: &MatrixForm) -> MatrixForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MatrixForm {
        self.map(|e| -e)
    }

    pub fn scale(&self, f: &RatFunc) -> MatrixForm {
        self.map(|e| e.scale(f))
    }

    pub fn scale_q(&self, c: &BigRational) -> MatrixForm {
        self.map(|e| e.scale_q(c))
    }

    pub fn scale_int(&self, c: i64) -> MatrixForm {
        self.map(|e| e.scale_int(c))
    }

    /// Entrywise map preserving degree.
    pub fn map<F: FnMut(&DiffForm) -> DiffForm>(&self, f: F) -> MatrixForm {
        MatrixForm { n: self.n, r: self.r, p: self.p, entries: self.entries.iter().map(f).collect() }
    }

    /// Entrywise fallible map; the degree is recomputed.
    pub fn try_map<F: FnMut(&DiffForm) -> Result<DiffForm>>(&self, f: F) -> Result<MatrixForm> {
        let entries: Vec<DiffForm> = self.entries.iter().map(f).collect::<Result<_>>()?;
        let n = entries.first().map(|e| e.dim()).unwrap_or(self.n);
        let p = entries.iter().find_map(|e| e.degree()).unwrap_or(0);
        MatrixForm::from_entries(n, self.r, p, entries)
    }

    /// Matrix product with wedge of entries.
    pub fn try_mul(&self, other: &MatrixForm) -> Result<MatrixForm> {
        self.check(other)?;
        let r = self.r;
        let mut entries = Vec::with_capacity(r * r);
        for i in 0..r {
            for k in 0..r {
                let mut acc = DiffForm::zero(self.n);
                for j in 0..r {
                    let a = self.entry(i, j);
                    let b = other.entry(j, k);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &a.wedge(b);
                    }
                }
                entries.push(acc);
            }
        }
        Ok(MatrixForm { n: self.n, r, p: self.p + other.p, entries })
    }

    pub fn mul(&self, other: &MatrixForm) -> MatrixForm {
        self.try_mul(other).expect("incompatible matrix forms")
    }

    /// Graded commutator `AB − (−1)^{pq} BA`.
    pub fn try_bracket(&self, other: &MatrixForm) -> Result<MatrixForm> {
        let ab = self.try_mul(other)?;
        let ba = other.try_mul(self)?;
        Ok(if (self.p * other.p) % 2 == 0 { ab.sub(&ba) } else { ab.add(&ba) })
    }

    pub fn bracket(&self, other: &MatrixForm) -> MatrixForm {
        self.try_bracket(other).expect("incompatible matrix forms")
    }

    pub fn trace(&self) -> DiffForm {
        (0..self.r).fold(DiffForm::zero(self.n), |acc, i| &acc + self.entry(i, i))
    }

    /// Trace pairing `⟨A ∧ B⟩`.
    pub fn try_pair(&self, other: &MatrixForm) -> Result<DiffForm> {
        self.check(other)?;
        let mut acc = DiffForm::zero(self.n);
        for i in 0..self.r {
            for j in 0..self.r {
                let a = self.entry(i, j);
                let b = other.entry(j, i);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &a.wedge(b);
                }
            }
        }
        Ok(acc)
    }

    pub fn pair(&self, other: &MatrixForm) -> DiffForm {
        self.try_pair(other).expect("incompatible matrix forms")
    }

    pub fn ext_d(&self) -> MatrixForm {
        MatrixForm { n: self.n, r: self.r, p: self.p + 1, entries: self.entries.iter().map(|e| e.ext_d()).collect() }
    }

    pub fn interior(&self, xi: &VectorField) -> MatrixForm {
        MatrixForm {
            n: self.n,
            r: self.r,
            p: self.p.saturating_sub(1),
            entries: self.entries.iter().map(|e| e.interior(xi)).collect(),
        }
    }

    /// `A(ξ_1, …, ξ_p)` as a degree-0 matrix.
    pub fn eval(&self, fields: &[VectorField]) -> MatrixForm {
        MatrixForm {
            n: self.n,
            r: self.r,
            p: 0,
            entries: self.entries.iter().map(|e| DiffForm::function(self.n, e.eval(fields))).collect(),
        }
    }

    /// Entrywise derivative `ξ(m)` of a degree-0 matrix.
    pub fn derive(&self, xi: &VectorField) -> MatrixForm {
        self.map(|e| DiffForm::function(self.n, xi.apply(&e.as_function())))
    }
}

impl fmt::Debug for MatrixForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<&DiffForm>> = (0..self.r).map(|i| (0..self.r).map(|j| self.entry(i, j)).collect()).collect();
        write!(f, "{:?}", rows)
    }
}

pub fn mat_wedge_pair(a: &MatrixForm, b: &MatrixForm) -> Result<DiffForm> {
    a.try_pair(b)
}

pub fn mat_bracket(a: &MatrixForm, b: &MatrixForm) -> Result<MatrixForm> {
    a.try_bracket(b)
}

/// `dA + [ω, A]`.
pub fn covariant_d(omega: &MatrixForm, a: &MatrixForm) -> Result<MatrixForm> {
    if omega.degree() != 1 && !omega.is_zero() {
        return Err(Error::DegreeError(format!("connection form has degree {}", omega.degree())));
    }
    let br = omega.try_bracket(a)?;
    a.ext_d().try_add(&br)
}

/// Determinant of a square matrix of functions.
pub fn det(m: &[Vec<RatFunc>]) -> RatFunc {
    let r = m.len();
    let mut a: Vec<Vec<RatFunc>> = m.to_vec();
    let mut d = RatFunc::one();
    for c in 0..r {
        let piv = match (c..r).find(|&i| !a[i][c].is_zero()) {
            Some(p) => p,
            None => return RatFunc::zero(),
        };
        if piv != c {
            a.swap(piv, c);
            d = -d;
        }
        let pv = a[c][c].clone();
        d = &d * &pv;
        let inv = pv.recip().expect("nonzero pivot");
        for i in c + 1..r {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..r {
                let t = &f * &a[c][j];
                a[i][j] = &a[i][j] - &t;
            }
        }
    }
    d
}

/// Inverse of a square matrix of functions.
pub fn inverse(m: &[Vec<RatFunc>]) -> Result<Vec<Vec<RatFunc>>> {
    let r = m.len();
    let mut a: Vec<Vec<RatFunc>> = m.to_vec();
    let mut inv: Vec<Vec<RatFunc>> =
        (0..r).map(|i| (0..r).map(|j| if i == j { RatFunc::one() } else { RatFunc::zero() }).collect()).collect();
    for c in 0..r {
        let piv = (c..r).find(|&i| !a[i][c].is_zero()).ok_or(Error::Singular)?;
        a.swap(piv, c);
        inv.swap(piv, c);
        let pinv = a[c][c].recip()?;
        for j in 0..r {
            a[c][j] = &a[c][j] * &pinv;
            inv[c][j] = &inv[c][j] * &pinv;
        }
        for i in 0..r {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..r {
                let t = &f * &a[c][j];
                a[i][j] = &a[i][j] - &t;
                let t = &f * &inv[c][j];
                inv[i][j] = &inv[i][j] - &t;
            }
        }
    }
    Ok(inv)
}
