use std::fmt;

use crate::error::{Error, Result};
use crate::ring::RatFunc;

/// `Σ f_i ∂/∂x_i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VectorField {
    comps: Vec<RatFunc>,
}

impl VectorField {
    pub fn new(comps: Vec<RatFunc>) -> Self {
        VectorField { comps }
    }

    pub fn zero(n: usize) -> Self {
        VectorField { comps: vec![RatFunc::zero(); n] }
    }

    /// The coordinate field `∂_i`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.comps[i] = RatFunc::one();
        v
    }

    pub fn coordinates(n: usize) -> Vec<VectorField> {
        (0..n).map(|i| Self::coordinate(n, i)).collect()
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn component(&self, i: usize) -> &RatFunc {
        &self.comps[i]
    }

    pub fn components(&self) -> &[RatFunc] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|f| f.is_zero())
    }

    /// Derivative `ξ(f)`.
    pub fn apply(&self, f: &RatFunc) -> RatFunc {
        let mut acc = RatFunc::zero();
        for (i, c) in self.comps.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &(c * &f.partial(i));
            }
        }
        acc
    }

    fn check(&self, other: &VectorField) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::ContextMismatch { left: self.dim(), right: other.dim() });
        }
        Ok(())
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        assert_eq!(self.dim(), other.dim(), "vector fields on different charts");
        VectorField { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> VectorField {
        VectorField { comps: self.comps.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, f: &RatFunc) -> VectorField {
        VectorField { comps: self.comps.iter().map(|a| a * f).collect() }
    }

    pub fn try_bracket(&self, other: &VectorField) -> Result<VectorField> {
        self.check(other)?;
        Ok(VectorField {
            comps: (0..self.dim())
                .map(|i| &self.apply(&other.comps[i]) - &other.apply(&self.comps[i]))
                .collect(),
        })
    }

    /// Lie bracket `[ξ, η]`.
    pub fn bracket(&self, other: &VectorField) -> VectorField {
        self.try_bracket(other).expect("bracket of vector fields on different charts")
    }

    pub fn map_components<F>(&self, f: F) -> Result<VectorField>
    where
        F: FnMut(&RatFunc) -> Result<RatFunc>,
    {
        Ok(VectorField { comps: self.comps.iter().map(f).collect::<Result<_>>()? })
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.dim()).map(|i| format!("x{}", i)).collect();
        write!(f, "{}", super::literal::vector_to_string(self, &names))
    }
}

pub fn vf_bracket(xi: &VectorField, eta: &VectorField) -> Result<VectorField> {
    xi.try_bracket(eta)
}
