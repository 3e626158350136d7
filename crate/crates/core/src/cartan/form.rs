use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;

use super::VectorField;
use crate::error::{Error, Result};
use crate::ring::RatFunc;

/// Bitmask of the coordinate differentials in a basis form `dx_I`.
pub type Basis = u32;

pub fn basis_degree(b: Basis) -> usize {
    b.count_ones() as usize
}

pub fn basis_indices(b: Basis) -> Vec<usize> {
    (0..32).filter(|i| b & (1 << i) != 0).collect()
}

pub fn basis_from(indices: &[usize]) -> Basis {
    indices.iter().fold(0, |acc, &i| acc | (1 << i))
}

/// Sign of `dx_a ∧ dx_b` relative to `dx_{a∪b}`, or `None` when they overlap.
pub fn merge_sign(a: Basis, b: Basis) -> Option<i32> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0;
    for j in basis_indices(b) {
        inversions += (a >> (j + 1)).count_ones();
    }
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

/// Possibly mixed-degree differential form `Σ f_I dx_I` on an `n`-dimensional chart.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiffForm {
    n: usize,
    terms: BTreeMap<Basis, RatFunc>,
}

impl DiffForm {
    pub fn zero(n: usize) -> Self {
        DiffForm { n, terms: BTreeMap::new() }
    }

    pub fn function(n: usize, f: RatFunc) -> Self {
        Self::term(n, 0, f)
    }

    pub fn one(n: usize) -> Self {
        Self::function(n, RatFunc::one())
    }

    pub fn term(n: usize, b: Basis, f: RatFunc) -> Self {
        let mut out = Self::zero(n);
        out.add_term(b, f);
        out
    }

    /// The coordinate differential `dx_i`.
    pub fn dx(n: usize, i: usize) -> Self {
        Self::term(n, 1 << i, RatFunc::one())
    }

    /// `dx_{i_1} ∧ … ∧ dx_{i_p}` in the given order.
    pub fn dx_wedge(n: usize, indices: &[usize]) -> Self {
        indices.iter().fold(Self::one(n), |acc, &i| acc.wedge(&Self::dx(n, i)))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Basis, &RatFunc)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, b: Basis) -> RatFunc {
        self.terms.get(&b).cloned().unwrap_or_default()
    }

    /// Coefficient of `dx_{i_1} ∧ … ∧ dx_{i_p}` for indices in any order.
    pub fn component(&self, indices: &[usize]) -> RatFunc {
        let mut b = 0;
        let mut sign = 1;
        for &i in indices {
            match merge_sign(b, 1 << i) {
                None => return RatFunc::zero(),
                Some(s) => sign *= s,
            }
            b |= 1 << i;
        }
        self.coefficient(b).scale_int(sign as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, b: Basis, f: RatFunc) {
        if f.is_zero() {
            return;
        }
        let slot = self.terms.entry(b).or_default();
        *slot = &*slot + &f;
        if slot.is_zero() {
            self.terms.remove(&b);
        }
    }

    /// Whether every term has degree `p` (true for the zero form).
    pub fn is_homogeneous(&self, p: usize) -> bool {
        self.terms.keys().all(|&b| basis_degree(b) == p)
    }

    /// Degree when homogeneous and nonzero.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|&b| basis_degree(b));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn require_degree(&self, p: usize) -> Result<()> {
        if self.is_homogeneous(p) {
            Ok(())
        } else {
            Err(Error::NotHomogeneous)
        }
    }

    /// Homogeneous component of degree `p`.
    pub fn part(&self, p: usize) -> DiffForm {
        DiffForm {
            n: self.n,
            terms: self.terms.iter().filter(|(&b, _)| basis_degree(b) == p).map(|(&b, f)| (b, f.clone())).collect(),
        }
    }

    /// Value of a 0-form (its degree-0 coefficient).
    pub fn as_function(&self) -> RatFunc {
        self.coefficient(0)
    }

    fn check(&self, other: &DiffForm) -> Result<()> {
        if self.n != other.n {
            return Err(Error::ContextMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &DiffForm) -> Result<DiffForm> {
        self.check(other)?;
        let mut out = self.clone();
        for (&b, f) in other.terms.iter() {
            out.add_term(b, f.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &DiffForm) -> Result<DiffForm> {
        self.try_add(&other.neg_ref())
    }

    pub fn neg_ref(&self) -> DiffForm {
        DiffForm { n: self.n, terms: self.terms.iter().map(|(&b, f)| (b, -f)).collect() }
    }

    pub fn scale(&self, f: &RatFunc) -> DiffForm {
        if f.is_zero() {
            return DiffForm::zero(self.n);
        }
        let mut out = DiffForm::zero(self.n);
        for (&b, g) in self.terms.iter() {
            out.add_term(b, g * f);
        }
        out
    }

    pub fn scale_q(&self, c: &BigRational) -> DiffForm {
        let mut out = DiffForm::zero(self.n);
        for (&b, g) in self.terms.iter() {
            out.add_term(b, g.scale(c));
        }
        out
    }

    pub fn scale_int(&self, c: i64) -> DiffForm {
        self.scale_q(&BigRational::from_integer(c.into()))
    }

    pub fn try_wedge(&self, other: &DiffForm) -> Result<DiffForm> {
        self.check(other)?;
        let mut out = DiffForm::zero(self.n);
        for (&a, f) in self.terms.iter() {
            for (&b, g) in other.terms.iter() {
                if let Some(s) = merge_sign(a, b) {
                    let c = f * g;
                    out.add_term(a | b, if s < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Exterior product; panics on dimension mismatch.
    pub fn wedge(&self, other: &DiffForm) -> DiffForm {
        self.try_wedge(other).expect("wedge of forms on different charts")
    }

    pub fn ext_d(&self) -> DiffForm {
        let mut out = DiffForm::zero(self.n);
        for (&b, f) in self.terms.iter() {
            for j in 0..self.n {
                if b & (1 << j) != 0 {
                    continue;
                }
                let df = f.partial(j);
                if df.is_zero() {
                    continue;
                }
                let s = merge_sign(1 << j, b).unwrap();
                out.add_term(b | (1 << j), if s < 0 { -df } else { df });
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.ext_d().is_zero()
    }

    /// `ι_ξ(dx_I) = Σ_k (−1)^k ξ_{i_k} dx_{I∖i_k}`.
    pub fn try_interior(&self, xi: &VectorField) -> Result<DiffForm> {
        if xi.dim() != self.n {
            return Err(Error::ContextMismatch { left: xi.dim(), right: self.n });
        }
        let mut out = DiffForm::zero(self.n);
        for (&b, f) in self.terms.iter() {
            for (k, i) in basis_indices(b).into_iter().enumerate() {
                let c = xi.component(i);
                if c.is_zero() {
                    continue;
                }
                let t = f * c;
                out.add_term(b & !(1 << i), if k % 2 == 0 { t } else { -t });
            }
        }
        Ok(out)
    }

    pub fn interior(&self, xi: &VectorField) -> DiffForm {
        self.try_interior(xi).expect("interior product on different charts")
    }

    /// Cartan formula `L_ξ = d ι_ξ + ι_ξ d`.
    pub fn try_lie_derivative(&self, xi: &VectorField) -> Result<DiffForm> {
        self.try_interior(xi)?.ext_d().try_add(&self.ext_d().interior(xi))
    }

    pub fn lie_derivative(&self, xi: &VectorField) -> DiffForm {
        self.try_lie_derivative(xi).expect("Lie derivative on different charts")
    }

    /// `α(ξ_1, …, ξ_p)` with `(dx_1∧dx_2)(∂_1,∂_2) = 1`.
    pub fn eval(&self, fields: &[VectorField]) -> RatFunc {
        let mut a = self.part(fields.len());
        for xi in fields {
            a = a.interior(xi);
        }
        a.as_function()
    }

    /// Apply a function to every coefficient.
    pub fn map_coefficients<F>(&self, mut f: F) -> Result<DiffForm>
    where
        F: FnMut(&RatFunc) -> Result<RatFunc>,
    {
        let mut out = DiffForm::zero(self.n);
        for (&b, g) in self.terms.iter() {
            out.add_term(b, f(g)?);
        }
        Ok(out)
    }

    /// Largest total degree among coefficients.
    pub fn coefficient_degree(&self) -> u32 {
        self.terms.values().map(|f| f.total_degree()).max().unwrap_or(0)
    }
}

impl fmt::Debug for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.n).map(|i| format!("x{}", i)).collect();
        write!(f, "{}", super::literal::form_to_string(self, &names))
    }
}

impl<'a> Add<&'a DiffForm> for &'a DiffForm {
    type Output = DiffForm;
    fn add(self, rhs: &'a DiffForm) -> DiffForm {
        self.try_add(rhs).expect("sum of forms on different charts")
    }
}

impl<'a> Sub<&'a DiffForm> for &'a DiffForm {
    type Output = DiffForm;
    fn sub(self, rhs: &'a DiffForm) -> DiffForm {
        self.try_sub(rhs).expect("difference of forms on different charts")
    }
}

impl<'a> Mul<&'a DiffForm> for &'a DiffForm {
    type Output = DiffForm;
    fn mul(self, rhs: &'a DiffForm) -> DiffForm {
        self.wedge(rhs)
    }
}

impl Add for DiffForm {
    type Output = DiffForm;
    fn add(self, rhs: DiffForm) -> DiffForm {
        &self + &rhs
    }
}

impl Sub for DiffForm {
    type Output = DiffForm;
    fn sub(self, rhs: DiffForm) -> DiffForm {
        &self - &rhs
    }
}

impl Neg for &DiffForm {
    type Output = DiffForm;
    fn neg(self) -> DiffForm {
        self.neg_ref()
    }
}

impl Neg for DiffForm {
    type Output = DiffForm;
    fn neg(self) -> DiffForm {
        self.neg_ref()
    }
}

pub fn wedge(a: &DiffForm, b: &DiffForm) -> Result<DiffForm> {
    a.try_wedge(b)
}

pub fn ext_d(a: &DiffForm) -> DiffForm {
    a.ext_d()
}

pub fn interior(xi: &VectorField, a: &DiffForm) -> Result<DiffForm> {
    a.try_interior(xi)
}

pub fn lie_derivative(xi: &VectorField, a: &DiffForm) -> Result<DiffForm> {
    a.try_lie_derivative(xi)
}
