use std::collections::BTreeMap;

use num_rational::BigRational;

use super::cover::{cech_d, BundleCocycle, CechCochain, CoverSpec, TotalCochain};
use crate::algebroid::Connection;
use crate::cartan::{inverse, DiffForm, MatrixForm, VectorField};
use crate::courant::{cs_form, pontryagin_form};
use crate::error::{Error, Result};
use crate::ring::RatFunc;

/// Per-chart connections, each in its own chart and trivialization.
#[derive(Debug, Clone)]
pub enum Seed {
    Flat,
    PerChart(Vec<Connection>),
}

/// Connections `∇_i` and the differences `A_{ij} = ∇_j − ∇_i` in chart `j`.
#[derive(Debug, Clone)]
pub struct InducedConnections {
    pub connections: Vec<Connection>,
    pub a: BTreeMap<(usize, usize), MatrixForm>,
}

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn inverse_form(cover: &CoverSpec, g: &MatrixForm) -> Result<MatrixForm> {
    Ok(MatrixForm::from_functions(cover.dim(), inverse(&g.functions())?))
}

/// `g⁻¹ (φ_{ij}^* ω) g + g⁻¹ dg` with `g = g_{ij}`: `ω` moved from chart `i` to chart `j`.
pub fn gauge_transform(cover: &CoverSpec, bundle: &BundleCocycle, omega: &MatrixForm, i: usize, j: usize) -> Result<MatrixForm> {
    let g = bundle.matrix_form(cover, i, j)?;
    let gi = inverse_form(cover, &g)?;
    let moved = omega.try_map(|e| cover.transport(i, j, e))?;
    Ok(gi.mul(&moved).mul(&g).add(&gi.mul(&g.ext_d())))
}

/// `g⁻¹ (φ_{ij}^* a) g`: an endomorphism-valued form moved from chart `i` to chart `j`.
pub fn adjoint_transport(cover: &CoverSpec, bundle: &BundleCocycle, a: &MatrixForm, i: usize, j: usize) -> Result<MatrixForm> {
    if i == j {
        return Ok(a.clone());
    }
    let g = bundle.matrix_form(cover, i, j)?;
    let gi = inverse_form(cover, &g)?;
    let moved = a.try_map(|e| cover.transport(i, j, e))?;
    Ok(gi.mul(&moved).mul(&g))
}

pub fn induced_connections(cover: &CoverSpec, bundle: &BundleCocycle, seed: &Seed) -> Result<InducedConnections> {
    bundle.validate(cover)?;
    let (n, r) = (cover.dim(), bundle.rank);
    let connections = match seed {
        Seed::Flat => vec![Connection::flat(n, r); cover.num_charts()],
        Seed::PerChart(c) => {
            if c.len() != cover.num_charts() {
                return Err(Error::ChartMismatch(format!("{} connections for {} charts", c.len(), cover.num_charts())));
            }
            for conn in c {
                if conn.rank() != r {
                    return Err(Error::RankMismatch { left: r, right: conn.rank() });
                }
            }
            c.clone()
        }
    };
    let mut a = BTreeMap::new();
    for s in cover.simplices_of_degree(1) {
        let (i, j) = (s[0], s[1]);
        let wi = gauge_transform(cover, bundle, &connections[i].omega, i, j)?;
        a.insert((i, j), connections[j].omega.sub(&wi));
    }
    Ok(InducedConnections { connections, a })
}

impl InducedConnections {
    pub fn a(&self, i: usize, j: usize) -> Result<&MatrixForm> {
        self.a.get(&(i, j)).ok_or_else(|| Error::MissingSimplex(vec![i, j]))
    }

    /// `∇_i` written in chart `j` and its trivialization.
    pub fn connection_in(&self, cover: &CoverSpec, bundle: &BundleCocycle, i: usize, j: usize) -> Result<Connection> {
        if i == j {
            return Ok(self.connections[i].clone());
        }
        Connection::new(gauge_transform(cover, bundle, &self.connections[i].omega, i, j)?)
    }

    /// Checks `A_{ij} + A_{jk} = A_{ik}` in chart `k` on every declared triple.
    pub fn check_gauge(&self, cover: &CoverSpec, bundle: &BundleCocycle) -> Result<()> {
        for s in cover.simplices_of_degree(2) {
            let (i, j, k) = (s[0], s[1], s[2]);
            let lhs = adjoint_transport(cover, bundle, self.a(i, j)?, j, k)?.add(self.a(j, k)?);
            if lhs != *self.a(i, k)? {
                return Err(Error::CocycleViolation { simplex: s, msg: "A_ij + A_jk ≠ A_ik".into() });
            }
        }
        Ok(())
    }
}

/// The three components of the Pontryagin cocycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pontryagin {
    pub p40: CechCochain,
    pub p31: CechCochain,
    pub p22: CechCochain,
}

impl Pontryagin {
    pub fn total(&self) -> TotalCochain {
        let mut t = TotalCochain::new(4);
        for c in [&self.p40, &self.p31, &self.p22] {
            t.insert(c.clone()).expect("total degree 4");
        }
        t
    }
}

/// `−⟨A_{ij} ∧ A_{jk}⟩` in chart `k`.
fn triple_pairing(cover: &CoverSpec, bundle: &BundleCocycle, conns: &InducedConnections, s: &[usize]) -> Result<DiffForm> {
    let (i, j, k) = (s[0], s[1], s[2]);
    let aij = adjoint_transport(cover, bundle, conns.a(i, j)?, j, k)?;
    Ok(-aij.try_pair(conns.a(j, k)?)?)
}

pub fn pontryagin_cocycle(cover: &CoverSpec, bundle: &BundleCocycle, conns: &InducedConnections) -> Result<Pontryagin> {
    let mut p40 = BTreeMap::new();
    for (i, c) in conns.connections.iter().enumerate() {
        p40.insert(vec![i], pontryagin_form(c).scale_int(2));
    }
    let mut p31 = BTreeMap::new();
    for s in cover.simplices_of_degree(1) {
        let (i, j) = (s[0], s[1]);
        let ci = conns.connection_in(cover, bundle, i, j)?;
        p31.insert(s, cs_form(&ci, &conns.connections[j])?.scale_int(-2));
    }
    let mut p22 = BTreeMap::new();
    for s in cover.simplices_of_degree(2) {
        let v = triple_pairing(cover, bundle, conns, &s)?;
        p22.insert(s, v);
    }
    Ok(Pontryagin {
        p40: CechCochain { p: 0, q: 4, values: p40 },
        p31: CechCochain { p: 1, q: 3, values: p31 },
        p22: CechCochain { p: 2, q: 2, values: p22 },
    })
}

/// `ch₂ = ½ Π`.
pub fn ch2_cocycle(cover: &CoverSpec, bundle: &BundleCocycle, conns: &InducedConnections) -> Result<TotalCochain> {
    Ok(pontryagin_cocycle(cover, bundle, conns)?.total().scale_q(&q(1, 2)))
}

/// The components `P̂^{3,1}_{ij} = −H_j + H_i + P(∇_i, ∇_j)` and
/// `P̂^{2,2}_{ijk} = −½⟨A_{ij} ∧ A_{jk}⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HatP {
    pub p31: CechCochain,
    pub p22: CechCochain,
}

impl HatP {
    /// `P̂ = −P̂^{3,1} + P̂^{2,2}`.
    pub fn total(&self) -> TotalCochain {
        let mut t = TotalCochain::new(4);
        t.insert(self.p31.scale_int(-1)).expect("total degree 4");
        t.insert(self.p22.clone()).expect("total degree 4");
        t
    }
}

/// Assembles `P̂` and checks `dP̂^{3,1} = 0`, `dP̂^{2,2} = −δ̌P̂^{3,1}`,
/// `δ̌P̂^{2,2} = 0` and `P̂ = P − (d±δ̌)H` with `P = ch₂`.
pub fn hat_p_assembly(
    cover: &CoverSpec,
    bundle: &BundleCocycle,
    conns: &InducedConnections,
    primitives: &[DiffForm],
) -> Result<HatP> {
    if primitives.len() != cover.num_charts() {
        return Err(Error::ChartMismatch(format!("{} primitives for {} charts", primitives.len(), cover.num_charts())));
    }
    for (i, (h, c)) in primitives.iter().zip(&conns.connections).enumerate() {
        if !h.is_zero() && !h.is_homogeneous(3) {
            return Err(Error::PrimitiveInvalid { chart: i, msg: "H is not a 3-form".into() });
        }
        if h.ext_d() != pontryagin_form(c) {
            return Err(Error::PrimitiveInvalid { chart: i, msg: "dH ≠ ½⟨c∧c⟩".into() });
        }
    }
    let mut p31 = BTreeMap::new();
    for s in cover.simplices_of_degree(1) {
        let (i, j) = (s[0], s[1]);
        let ci = conns.connection_in(cover, bundle, i, j)?;
        let hi = cover.transport(i, j, &primitives[i])?;
        p31.insert(s, &(&hi - &primitives[j]) + &cs_form(&ci, &conns.connections[j])?);
    }
    let mut p22 = BTreeMap::new();
    for s in cover.simplices_of_degree(2) {
        p22.insert(s.clone(), triple_pairing(cover, bundle, conns, &s)?.scale_q(&q(1, 2)));
    }
    let out = HatP { p31: CechCochain { p: 1, q: 3, values: p31 }, p22: CechCochain { p: 2, q: 2, values: p22 } };

    let fail = |simplex: Vec<usize>, msg: &str| Error::CocycleViolation { simplex, msg: msg.into() };
    for (s, v) in &out.p31.values {
        if !v.is_closed() {
            return Err(fail(s.clone(), "P̂_ij is not closed"));
        }
    }
    let lhs = out.p22.ext_d();
    let rhs = cech_d(cover, &out.p31)?.scale_int(-1);
    for (s, v) in &lhs.values {
        if rhs.get(s)? != v {
            return Err(fail(s.clone(), "dP̂^{2,2} ≠ −δ̌P̂^{3,1}"));
        }
    }
    for (s, v) in &cech_d(cover, &out.p22)?.values {
        if !v.is_zero() {
            return Err(fail(s.clone(), "δ̌P̂^{2,2} ≠ 0"));
        }
    }
    let h = primitive_cochain(primitives);
    let expected = ch2_cocycle(cover, bundle, conns)?.sub(&h.total_d(cover)?)?;
    if out.total().sub(&expected)?.is_zero() {
        Ok(out)
    } else {
        Err(fail(Vec::new(), "P̂ ≠ P − (d±δ̌)H"))
    }
}

/// `{H_i}` as a total cochain of degree 3.
pub fn primitive_cochain(primitives: &[DiffForm]) -> TotalCochain {
    let values = primitives.iter().enumerate().map(|(i, h)| (vec![i], h.clone())).collect();
    let mut t = TotalCochain::new(3);
    t.insert(CechCochain { p: 0, q: 3, values }).expect("total degree 3");
    t
}

/// Matrix whose columns are the frame fields.
fn frame_matrix(frame: &[VectorField]) -> Vec<Vec<RatFunc>> {
    let n = frame.len();
    (0..n).map(|m| (0..n).map(|a| frame[a].component(m).clone()).collect()).collect()
}

fn transpose(m: &[Vec<RatFunc>]) -> Vec<Vec<RatFunc>> {
    let r = m.len();
    (0..r).map(|i| (0..r).map(|j| m[j][i].clone()).collect()).collect()
}

fn mat_mul(a: &[Vec<RatFunc>], b: &[Vec<RatFunc>]) -> Vec<Vec<RatFunc>> {
    let r = a.len();
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| (0..r).fold(RatFunc::zero(), |acc, k| &acc + &(&a[i][k] * &b[k][j])))
                .collect()
        })
        .collect()
}

/// Pushes the frame of chart `a` into the coordinates of chart `l`.
pub fn transport_frame(cover: &CoverSpec, frame: &[VectorField], a: usize, l: usize) -> Result<Vec<VectorField>> {
    if a == l {
        return Ok(frame.to_vec());
    }
    let fwd = cover.transition(l, a);
    let back = cover.transition(a, l);
    frame.iter().map(|v| fwd.pushforward(v, &back)).collect()
}

/// `Ω¹` trivialized on each chart by the coframe dual to the given frame.
pub fn cotangent_bundle(cover: &CoverSpec, frames: &[Vec<VectorField>]) -> Result<BundleCocycle> {
    if frames.len() != cover.num_charts() {
        return Err(Error::ChartMismatch(format!("{} frames for {} charts", frames.len(), cover.num_charts())));
    }
    let n = cover.dim();
    let mut g = BTreeMap::new();
    for s in cover.simplices_of_degree(1) {
        let (i, j) = (s[0], s[1]);
        let fi = frame_matrix(&transport_frame(cover, &frames[i], i, j)?);
        let fj = frame_matrix(&frames[j]);
        let fj_inv = inverse(&fj).map_err(|_| Error::FrameInvalid(format!("frame {j} is degenerate")))?;
        g.insert((i, j), transpose(&mat_mul(&fj_inv, &fi)));
    }
    BundleCocycle::new(cover, n, g)
}
