use super::morphism::cs_form;
use super::structure::{CourantElement, CourantStructure};
use crate::cartan::DiffForm;
use crate::error::{Error, Result};

/// `Q_{H_Q} + Â_{∇,H} = Â_{∇, H + H_Q}`.
pub fn baer_sum(q: &CourantStructure, s: &CourantStructure) -> Result<CourantStructure> {
    if !q.is_exact() {
        return Err(Error::StructureMismatch("the first summand must be an exact algebroid".into()));
    }
    if q.dim() != s.dim() {
        return Err(Error::ChartMismatch(format!("{} vs {} coordinates", q.dim(), s.dim())));
    }
    s.twist_by_h(q.h())
}

/// The class of `(x, y) ∈ Q ×_T Â` in the sum: `(α_x + α_y, a_y, ξ)`.
pub fn baer_pushout(x: &CourantElement, y: &CourantElement) -> Result<CourantElement> {
    if x.rank() != 0 {
        return Err(Error::StructureMismatch("left factor must lie in an exact algebroid".into()));
    }
    if x.xi != y.xi {
        return Err(Error::StructureMismatch("factors have different anchors".into()));
    }
    Ok(CourantElement { alpha: &x.alpha + &y.alpha, a: y.a.clone(), xi: y.xi.clone() })
}

/// The exact algebroid `Q` with `s2 ≅ Q + s1`, represented after moving `s1` to the
/// connection of `s2`: `H = H2 − H1 − P(∇1, ∇2)`.
pub fn courant_difference(s2: &CourantStructure, s1: &CourantStructure) -> Result<CourantStructure> {
    if s1.rank() != s2.rank() {
        return Err(Error::PairingMismatch);
    }
    if s1.dim() != s2.dim() {
        return Err(Error::ChartMismatch(format!("{} vs {} coordinates", s2.dim(), s1.dim())));
    }
    let p = if s1.is_exact() { DiffForm::zero(s1.dim()) } else { cs_form(&s1.connection_or_flat(), &s2.connection_or_flat())? };
    let h = &(s2.h() - s1.h()) - &p;
    CourantStructure::exact(s1.dim(), h)
}

/// One label of an `(Ω² → Ω³_cl)`-torsor presentation: the offset from a common
/// base point and the curvature at that label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsorLabel {
    pub label: String,
    pub offset: DiffForm,
    pub curvature: DiffForm,
}

/// The twist of `Q_0` by a presented torsor; elements are pairs `(label index, q)`.
#[derive(Debug, Clone)]
pub struct TorsorTwist {
    n: usize,
    labels: Vec<TorsorLabel>,
    q0: CourantStructure,
}

impl TorsorTwist {
    pub fn new(n: usize, labels: Vec<TorsorLabel>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InconsistentPresentation("no labels".into()));
        }
        for l in &labels {
            l.offset.require_degree(2)?;
            l.curvature.require_degree(3)?;
            if !l.curvature.is_closed() {
                return Err(Error::InconsistentPresentation(format!("curvature at `{}` is not closed", l.label)));
            }
        }
        for a in &labels {
            for b in &labels {
                if &a.curvature - &b.curvature != (&a.offset - &b.offset).ext_d() {
                    return Err(Error::InconsistentPresentation(format!(
                        "c({}) − c({}) is not d of the offset difference",
                        a.label, b.label
                    )));
                }
            }
        }
        Ok(TorsorTwist { n, labels, q0: CourantStructure::exact(n, DiffForm::zero(n))? })
    }

    pub fn labels(&self) -> &[TorsorLabel] {
        &self.labels
    }

    /// `s_k − s_l` as a 2-form.
    pub fn difference(&self, k: usize, l: usize) -> DiffForm {
        &self.labels[k].offset - &self.labels[l].offset
    }

    /// Re-expresses `(s_k, q)` at label `l`: `(s_l, q + ι_{π(q)}(s_k − s_l))`.
    pub fn relabel(&self, k: usize, q: &CourantElement, l: usize) -> CourantElement {
        super::morphism::exp_b(&self.difference(k, l), q)
    }

    /// `[(s1,q1),(s2,q2)] = (s1, [q1, q2']_0 + ι_{π(q2)} ι_{π(q1)} c(s1))` with `q2'` the
    /// relabeling of `(s2,q2)` at `s1`.
    pub fn bracket(&self, x: (usize, &CourantElement), y: (usize, &CourantElement)) -> Result<(usize, CourantElement)> {
        let (k, q1) = x;
        let (l, q2) = y;
        let q2 = self.relabel(l, q2, k);
        let mut out = self.q0.bracket(q1, &q2)?;
        out.alpha = &out.alpha + &self.labels[k].curvature.interior(&q1.xi).interior(&q2.xi);
        Ok((k, out))
    }

    /// `Q_{c(s)}` at the chosen base label.
    pub fn structure(&self, base: usize) -> Result<CourantStructure> {
        CourantStructure::exact(self.n, self.labels[base].curvature.clone())
    }

    /// Independence of representatives, and agreement with `Q_{c(s_base)}`, on sample pairs.
    pub fn verify(&self, base: usize, samples: &[(usize, CourantElement)]) -> Result<bool> {
        let target = self.structure(base)?;
        for (i, (k, q1)) in samples.iter().enumerate() {
            let (l, q2) = &samples[(i + 1) % samples.len()];
            let (lab, v) = self.bracket((*k, q1), (*l, q2))?;
            let v = self.relabel(lab, &v, base);
            for m in 0..self.labels.len() {
                let (lab2, w) = self.bracket((m, &self.relabel(*k, q1, m)), (*l, q2))?;
                if self.relabel(lab2, &w, base) != v {
                    return Ok(false);
                }
                let (lab3, w) = self.bracket((*k, q1), (m, &self.relabel(*l, q2, m)))?;
                if self.relabel(lab3, &w, base) != v {
                    return Ok(false);
                }
            }
            let expected = target.bracket(&self.relabel(*k, q1, base), &self.relabel(*l, q2, base))?;
            if expected != v {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Builds the twisted algebroid of a presentation and returns it at the base label.
pub fn torsor_twist(n: usize, labels: Vec<TorsorLabel>, base: usize) -> Result<(CourantStructure, TorsorTwist)> {
    let t = TorsorTwist::new(n, labels)?;
    Ok((t.structure(base)?, t))
}
