use std::collections::BTreeMap;

use num_rational::BigRational;

use super::classes::transport_frame;
use super::cover::{CechCochain, CoverSpec, TotalCochain};
use crate::cartan::{DiffForm, VectorField};
use crate::error::{Error, Result};
use crate::vertex::{eva_difference, EvaDifference, FrameEVA, PairClass, VertexElement};

/// The EVA class: `H_{ij}` of `V_i − V_j` on pairs and the splitting
/// discrepancy `β_{ijk}` on triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaClass {
    pub h31: CechCochain,
    pub b22: CechCochain,
}

impl EvaClass {
    /// `−H + β` in total degree 4.
    pub fn total(&self) -> TotalCochain {
        let mut t = TotalCochain::new(4);
        t.insert(self.h31.scale_int(-1)).expect("total degree 4");
        t.insert(self.b22.clone()).expect("total degree 4");
        t
    }
}

fn chart_eva(cover: &CoverSpec, frames: &[Vec<VectorField>], a: usize, l: usize) -> Result<FrameEVA> {
    FrameEVA::new(cover.context().clone(), transport_frame(cover, &frames[a], a, l)?)
}

fn transport_element(cover: &CoverSpec, v: &VertexElement, from: usize, to: usize) -> Result<VertexElement> {
    Ok(VertexElement {
        alpha: cover.transport(from, to, &v.alpha)?,
        coeffs: v.coeffs.iter().map(|f| cover.transport_function(from, to, f)).collect::<Result<_>>()?,
    })
}

fn transport_class(cover: &CoverSpec, p: &PairClass, from: usize, to: usize) -> Result<PairClass> {
    Ok(PairClass::new(transport_element(cover, &p.first, from, to)?, transport_element(cover, &p.second, from, to)?))
}

/// `β` with `ι_{∂_l} β = s'(∂_l) − s(∂_l)`, where `s` is the splitting of
/// `V_i − V_j` built in chart `k` and `s'` the one built in chart `j`.
fn splitting_discrepancy(
    cover: &CoverSpec,
    in_j: &EvaDifference,
    in_k: &EvaDifference,
    j: usize,
    k: usize,
) -> Result<DiffForm> {
    let n = cover.dim();
    let jac = cover.transition(j, k).jacobian();
    let moved: Vec<PairClass> =
        in_j.splitting.iter().map(|p| transport_class(cover, p, j, k)).collect::<Result<_>>()?;
    let mut beta = DiffForm::zero(n);
    for l in 0..n {
        let mut s = in_k.form(&DiffForm::zero(n));
        for (m, p) in moved.iter().enumerate() {
            if !jac[m][l].is_zero() {
                s = s.add(&in_k.star(&jac[m][l], p));
            }
        }
        let gamma = s.sub(&in_k.splitting[l]);
        if !gamma.first.is_form() || !gamma.second.is_zero() {
            return Err(Error::StructureMismatch(format!("splittings differ off Ω¹ on ∂_{l}")));
        }
        beta = &beta + &DiffForm::dx(n, l).wedge(&gamma.first.alpha);
    }
    Ok(beta.scale_q(&BigRational::new(1.into(), 2.into())))
}

pub fn eva_class_cocycle(cover: &CoverSpec, frames: &[Vec<VectorField>]) -> Result<EvaClass> {
    if frames.len() != cover.num_charts() {
        return Err(Error::ChartMismatch(format!("{} frames for {} charts", frames.len(), cover.num_charts())));
    }
    let mut diffs = BTreeMap::new();
    let mut h31 = BTreeMap::new();
    for s in cover.simplices_of_degree(1) {
        let (i, j) = (s[0], s[1]);
        let d = eva_difference(&chart_eva(cover, frames, i, j)?, &chart_eva(cover, frames, j, j)?)?;
        h31.insert(s, d.structure.h().clone());
        diffs.insert((i, j), d);
    }
    let mut b22 = BTreeMap::new();
    for s in cover.simplices_of_degree(2) {
        let (i, j, k) = (s[0], s[1], s[2]);
        let in_k = eva_difference(&chart_eva(cover, frames, i, k)?, &chart_eva(cover, frames, j, k)?)?;
        b22.insert(s, splitting_discrepancy(cover, &diffs[&(i, j)], &in_k, j, k)?);
    }
    Ok(EvaClass { h31: CechCochain { p: 1, q: 3, values: h31 }, b22: CechCochain { p: 2, q: 2, values: b22 } })
}
