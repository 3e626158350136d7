use num_rational::BigRational;

use super::frame::{FrameEVA, VertexElement};
use crate::cartan::{DiffForm, VectorField};
use crate::courant::{CourantElement, CourantStructure};
use crate::error::{Error, Result};
use crate::ring::RatFunc;

/// A class `[(v1, v2)]` in the pushout of `V1 ×_T V2` by the difference map,
/// normalized so that `v2` has no `Ω¹` part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairClass {
    pub first: VertexElement,
    pub second: VertexElement,
}

impl PairClass {
    pub fn new(first: VertexElement, second: VertexElement) -> Self {
        let shift = second.alpha.clone();
        PairClass {
            first: VertexElement { alpha: &first.alpha - &shift, coeffs: first.coeffs },
            second: VertexElement { alpha: DiffForm::zero(second.dim()), coeffs: second.coeffs },
        }
    }

    pub fn add(&self, other: &PairClass) -> PairClass {
        PairClass::new(self.first.add(&other.first), self.second.add(&other.second))
    }

    pub fn sub(&self, other: &PairClass) -> PairClass {
        PairClass::new(self.first.sub(&other.first), self.second.sub(&other.second))
    }

    pub fn is_zero(&self) -> bool {
        self.first.is_zero() && self.second.is_zero()
    }
}

/// `V1 − V2` presented as an exact Courant algebroid `Q_H`, with the isotropic
/// splitting obtained from the two frame splittings.
#[derive(Debug, Clone)]
pub struct EvaDifference {
    pub v1: FrameEVA,
    pub v2: FrameEVA,
    pub structure: CourantStructure,
    /// Images of the coordinate fields under the isotropized splitting.
    pub splitting: Vec<PairClass>,
}

impl EvaDifference {
    /// `i(α) = [(α, 0)]`.
    pub fn form(&self, alpha: &DiffForm) -> PairClass {
        let n = alpha.dim();
        PairClass::new(VertexElement::form(alpha.clone()), VertexElement::zero(n))
    }

    pub fn star(&self, f: &RatFunc, p: &PairClass) -> PairClass {
        PairClass::new(self.v1.star(f, &p.first), self.v2.star(f, &p.second))
    }

    pub fn bracket(&self, p: &PairClass, q: &PairClass) -> Result<PairClass> {
        Ok(PairClass::new(self.v1.eva_bracket(&p.first, &q.first)?, self.v2.eva_bracket(&p.second, &q.second)?))
    }

    pub fn pairing(&self, p: &PairClass, q: &PairClass) -> Result<RatFunc> {
        Ok(&self.v1.eva_pairing(&p.first, &q.first)? - &self.v2.eva_pairing(&p.second, &q.second)?)
    }

    pub fn anchor(&self, p: &PairClass) -> VectorField {
        self.v1.anchor(&p.first)
    }

    /// `(α, ξ) ↦ i(α) + Σ ξ_i * s(∂_i)`.
    pub fn embed(&self, q: &CourantElement) -> PairClass {
        let mut out = self.form(&q.alpha);
        for (f, s) in q.xi.components().iter().zip(&self.splitting) {
            if !f.is_zero() {
                out = out.add(&self.star(f, s));
            }
        }
        out
    }
}

pub fn eva_difference(v1: &FrameEVA, v2: &FrameEVA) -> Result<EvaDifference> {
    if v1.context().vars() != v2.context().vars() {
        return Err(Error::ContextMismatch { left: v1.dim(), right: v2.dim() });
    }
    let n = v1.dim();
    let fields = VectorField::coordinates(n);
    let mut out = EvaDifference {
        v1: v1.clone(),
        v2: v2.clone(),
        structure: CourantStructure::exact(n, DiffForm::zero(n))?,
        splitting: fields.iter().map(|x| PairClass::new(v1.lift(x), v2.lift(x))).collect(),
    };
    let half = BigRational::new((-1).into(), 2.into());
    let mut iso = Vec::with_capacity(n);
    for e in &out.splitting {
        let mut corr = DiffForm::zero(n);
        for (j, g) in out.splitting.iter().enumerate() {
            let p = out.pairing(e, g)?;
            if !p.is_zero() {
                corr.add_term(1 << j, p.scale(&half));
            }
        }
        iso.push(e.add(&out.form(&corr)));
    }
    out.splitting = iso;
    let mut h = DiffForm::zero(n);
    for i in 0..n {
        for j in i + 1..n {
            let c = out.bracket(&out.splitting[i], &out.splitting[j])?;
            for k in j + 1..n {
                let v = out.pairing(&c, &out.splitting[k])?;
                if !v.is_zero() {
                    h.add_term((1 << i) | (1 << j) | (1 << k), v);
                }
            }
        }
    }
    out.structure = CourantStructure::exact(n, h)?;
    Ok(out)
}
