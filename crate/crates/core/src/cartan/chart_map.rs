use super::form::{basis_indices, DiffForm};
use super::VectorField;
use crate::error::{Error, Result};
use crate::ring::RatFunc;

/// A map between charts given by the images of the target coordinates,
/// expressed as functions of the source coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChartMap {
    source_dim: usize,
    images: Vec<RatFunc>,
}

impl ChartMap {
    pub fn new(source_dim: usize, images: Vec<RatFunc>) -> Self {
        ChartMap { source_dim, images }
    }

    pub fn identity(n: usize) -> Self {
        ChartMap { source_dim: n, images: (0..n).map(RatFunc::var).collect() }
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[RatFunc] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.source_dim == self.images.len() && self.images.iter().enumerate().all(|(i, f)| *f == RatFunc::var(i))
    }

    /// `f ∘ φ`.
    pub fn pull_function(&self, f: &RatFunc) -> Result<RatFunc> {
        if self.is_identity() {
            return Ok(f.clone());
        }
        f.substitute(&self.images)
    }

    /// Pullback of a form on the target chart to the source chart.
    pub fn pullback(&self, a: &DiffForm) -> Result<DiffForm> {
        if a.dim() != self.target_dim() {
            return Err(Error::ContextMismatch { left: a.dim(), right: self.target_dim() });
        }
        if self.is_identity() {
            return Ok(a.clone());
        }
        let n = self.source_dim;
        let dphi: Vec<DiffForm> = self.images.iter().map(|f| DiffForm::function(n, f.clone()).ext_d()).collect();
        let mut out = DiffForm::zero(n);
        for (&b, f) in a.terms() {
            let mut t = DiffForm::function(n, self.pull_function(f)?);
            for i in basis_indices(b) {
                t = t.wedge(&dphi[i]);
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &ChartMap) -> Result<ChartMap> {
        if other.target_dim() != self.source_dim {
            return Err(Error::ContextMismatch { left: self.source_dim, right: other.target_dim() });
        }
        let images = self.images.iter().map(|f| other.pull_function(f)).collect::<Result<_>>()?;
        Ok(ChartMap { source_dim: other.source_dim, images })
    }

    /// Jacobian `∂φ_i/∂x_j` as rows indexed by target coordinate.
    pub fn jacobian(&self) -> Vec<Vec<RatFunc>> {
        self.images.iter().map(|f| (0..self.source_dim).map(|j| f.partial(j)).collect()).collect()
    }

    /// Pushforward `φ_* v`, given the inverse map.
    pub fn pushforward(&self, v: &VectorField, inverse: &ChartMap) -> Result<VectorField> {
        let jac = self.jacobian();
        let comps = jac
            .iter()
            .map(|row| {
                let mut acc = RatFunc::zero();
                for (j, c) in row.iter().enumerate() {
                    acc = &acc + &(c * v.component(j));
                }
                inverse.pull_function(&acc)
            })
            .collect::<Result<_>>()?;
        Ok(VectorField::new(comps))
    }
}

pub fn pullback(map: &ChartMap, a: &DiffForm) -> Result<DiffForm> {
    map.pullback(a)
}
