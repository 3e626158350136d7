use std::fmt;
use std::sync::Arc;

use crate::cartan::{ChartMap, DiffForm, VectorField};
use crate::error::{Error, Result};
use crate::ring::{Context, RatFunc};

/// An element `α + Σ f_k ⊗ t_k` of `Ω¹ ⊕ T`, with `f ⊗ t = f * (1 ⊗ t)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexElement {
    pub alpha: DiffForm,
    pub coeffs: Vec<RatFunc>,
}

impl VertexElement {
    pub fn new(alpha: DiffForm, coeffs: Vec<RatFunc>) -> Result<Self> {
        alpha.require_degree(1)?;
        if alpha.dim() != coeffs.len() {
            return Err(Error::ContextMismatch { left: alpha.dim(), right: coeffs.len() });
        }
        Ok(VertexElement { alpha, coeffs })
    }

    pub fn zero(n: usize) -> Self {
        VertexElement { alpha: DiffForm::zero(n), coeffs: vec![RatFunc::zero(); n] }
    }

    pub fn form(alpha: DiffForm) -> Self {
        let n = alpha.dim();
        VertexElement { alpha, coeffs: vec![RatFunc::zero(); n] }
    }

    /// `f ⊗ t_i`.
    pub fn tensor(n: usize, f: RatFunc, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.coeffs[i] = f;
        v
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_form(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &VertexElement) -> VertexElement {
        VertexElement {
            alpha: &self.alpha + &other.alpha,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &VertexElement) -> VertexElement {
        VertexElement {
            alpha: &self.alpha - &other.alpha,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> VertexElement {
        VertexElement { alpha: -&self.alpha, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale_q(&self, c: &num_rational::BigRational) -> VertexElement {
        VertexElement { alpha: self.alpha.scale_q(c), coeffs: self.coeffs.iter().map(|f| f.scale(c)).collect() }
    }
}

impl fmt::Debug for VertexElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}; {:?})", self.alpha, self.coeffs)
    }
}

/// The exact vertex algebroid on `Ω¹ ⊕ T` attached to a commuting frame `τ`.
#[derive(Clone, Debug)]
pub struct FrameEVA {
    ctx: Arc<Context>,
    frame: Vec<VectorField>,
    inverse: Vec<Vec<RatFunc>>,
}

impl PartialEq for FrameEVA {
    fn eq(&self, other: &Self) -> bool {
        self.frame == other.frame && self.ctx.vars() == other.ctx.vars()
    }
}

impl FrameEVA {
    pub fn new(ctx: Arc<Context>, frame: Vec<VectorField>) -> Result<Self> {
        let n = ctx.dim();
        if frame.len() != n {
            return Err(Error::FrameInvalid(format!("{} fields for {} coordinates", frame.len(), n)));
        }
        if let Some(t) = frame.iter().find(|t| t.dim() != n) {
            return Err(Error::ContextMismatch { left: n, right: t.dim() });
        }
        for (i, s) in frame.iter().enumerate() {
            for (j, t) in frame.iter().enumerate().skip(i + 1) {
                if !s.bracket(t).is_zero() {
                    return Err(Error::FrameInvalid(format!("[t{}, t{}] ≠ 0", i + 1, j + 1)));
                }
            }
        }
        let m: Vec<Vec<RatFunc>> = (0..n).map(|i| frame.iter().map(|t| t.component(i).clone()).collect()).collect();
        let inverse = invert(m).map_err(|_| Error::FrameInvalid("fields are not a module basis".into()))?;
        Ok(FrameEVA { ctx, frame, inverse })
    }

    pub fn coordinate(ctx: Arc<Context>) -> Self {
        let n = ctx.dim();
        Self::new(ctx, VectorField::coordinates(n)).expect("coordinate frame is valid")
    }

    /// The frame `t_i = φ_* ∂_i` for an automorphism `φ` with inverse `ψ`.
    pub fn from_automorphism(ctx: Arc<Context>, phi: &ChartMap, psi: &ChartMap) -> Result<Self> {
        let n = ctx.dim();
        if phi.source_dim() != n || phi.target_dim() != n || psi.source_dim() != n || psi.target_dim() != n {
            return Err(Error::ContextMismatch { left: n, right: phi.target_dim() });
        }
        if !phi.compose(psi)?.is_identity() || !psi.compose(phi)?.is_identity() {
            return Err(Error::FrameInvalid("maps are not mutually inverse".into()));
        }
        let frame = VectorField::coordinates(n).iter().map(|d| phi.pushforward(d, psi)).collect::<Result<_>>()?;
        Self::new(ctx, frame)
    }

    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.frame.len()
    }

    pub fn frame(&self) -> &[VectorField] {
        &self.frame
    }

    /// `1 ⊗ t_i`.
    pub fn generator(&self, i: usize) -> VertexElement {
        VertexElement::tensor(self.dim(), RatFunc::one(), i)
    }

    /// Coefficients `c` with `ξ = Σ c_k t_k`.
    pub fn frame_coefficients(&self, xi: &VectorField) -> Vec<RatFunc> {
        self.inverse
            .iter()
            .map(|row| row.iter().zip(xi.components()).fold(RatFunc::zero(), |acc, (a, b)| &acc + &(a * b)))
            .collect()
    }

    /// The frame splitting `ξ ↦ Σ c_k ⊗ t_k`.
    pub fn lift(&self, xi: &VectorField) -> VertexElement {
        VertexElement { alpha: DiffForm::zero(self.dim()), coeffs: self.frame_coefficients(xi) }
    }

    pub fn contains(&self, v: &VertexElement) -> bool {
        v.dim() == self.dim()
    }

    pub fn check(&self, v: &VertexElement) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::StructureMismatch(format!("element of dimension {} in a {}-dimensional algebroid", v.dim(), self.dim())))
        }
    }
}

fn invert(mut m: Vec<Vec<RatFunc>>) -> Result<Vec<Vec<RatFunc>>> {
    let n = m.len();
    let mut inv: Vec<Vec<RatFunc>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { RatFunc::one() } else { RatFunc::zero() }).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(Error::Singular)?;
        m.swap(col, piv);
        inv.swap(col, piv);
        let p = m[col][col].recip()?;
        for j in 0..n {
            m[col][j] = &m[col][j] * &p;
            inv[col][j] = &inv[col][j] * &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let c = m[r][col].clone();
                for j in 0..n {
                    m[r][j] = &m[r][j] - &(&c * &m[col][j]);
                    inv[r][j] = &inv[r][j] - &(&c * &inv[col][j]);
                }
            }
        }
    }
    Ok(inv)
}
