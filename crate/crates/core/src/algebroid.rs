//! Trivialized Atiyah algebroid `gl_r ⊕ T` on a chart, connections, curvature and
//! the fibre product `ĝ = A^∨ ×_{g^∨} g`.

use crate::cartan::{DiffForm, MatrixForm, VectorField};
use crate::error::{Error, Result};
use crate::ring::RatFunc;

/// The Atiyah algebroid of the trivial rank-`r` bundle on an `n`-dimensional chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AtiyahChart {
    pub n: usize,
    pub r: usize,
}

impl AtiyahChart {
    pub fn new(n: usize, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::RankMismatch { left: 1, right: 0 });
        }
        Ok(AtiyahChart { n, r })
    }

    pub fn zero(&self) -> AlgElement {
        AlgElement { m: MatrixForm::zero(self.n, self.r, 0), xi: VectorField::zero(self.n) }
    }

    pub fn contains(&self, e: &AlgElement) -> bool {
        e.m.dim() == self.n && e.m.rank() == self.r && e.xi.dim() == self.n
    }
}

/// A section `(m, ξ)` of `gl_r ⊕ T`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgElement {
    pub m: MatrixForm,
    pub xi: VectorField,
}

impl AlgElement {
    pub fn new(m: MatrixForm, xi: VectorField) -> Result<Self> {
        if m.degree() != 0 && !m.is_zero() {
            return Err(Error::DegreeError("g-part must be a function matrix".into()));
        }
        if m.dim() != xi.dim() {
            return Err(Error::ContextMismatch { left: m.dim(), right: xi.dim() });
        }
        Ok(AlgElement { m, xi })
    }

    pub fn vertical(m: MatrixForm) -> Self {
        let n = m.dim();
        AlgElement { m, xi: VectorField::zero(n) }
    }

    pub fn horizontal(r: usize, xi: VectorField) -> Self {
        AlgElement { m: MatrixForm::zero(xi.dim(), r, 0), xi }
    }

    pub fn anchor(&self) -> &VectorField {
        &self.xi
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero() && self.xi.is_zero()
    }

    pub fn add(&self, other: &AlgElement) -> AlgElement {
        AlgElement { m: self.m.add(&other.m), xi: self.xi.add(&other.xi) }
    }

    pub fn sub(&self, other: &AlgElement) -> AlgElement {
        AlgElement { m: self.m.sub(&other.m), xi: self.xi.sub(&other.xi) }
    }

    pub fn scale(&self, f: &RatFunc) -> AlgElement {
        AlgElement { m: self.m.scale(f), xi: self.xi.scale(f) }
    }
}

fn same_chart(e1: &AlgElement, e2: &AlgElement) -> Result<()> {
    if e1.m.rank() != e2.m.rank() || e1.xi.dim() != e2.xi.dim() {
        return Err(Error::ChartMismatch("elements live on different Atiyah charts".into()));
    }
    Ok(())
}

/// `([m1,m2] + ξ1(m2) − ξ2(m1), [ξ1,ξ2])`.
pub fn atiyah_bracket(e1: &AlgElement, e2: &AlgElement) -> Result<AlgElement> {
    same_chart(e1, e2)?;
    let m = e1.m.bracket(&e2.m).add(&e2.m.derive(&e1.xi)).sub(&e1.m.derive(&e2.xi));
    Ok(AlgElement { m, xi: e1.xi.bracket(&e2.xi) })
}

/// A connection `∇ξ = (ι_ξ ω, ξ)` given by its `gl_r`-valued 1-form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Connection {
    pub omega: MatrixForm,
}

impl Connection {
    pub fn new(omega: MatrixForm) -> Result<Self> {
        if omega.degree() != 1 {
            if omega.is_zero() {
                return Ok(Self::flat(omega.dim(), omega.rank()));
            }
            return Err(Error::DegreeError(format!("connection form has degree {}", omega.degree())));
        }
        Ok(Connection { omega })
    }

    /// The trivial connection `ω = 0`.
    pub fn flat(n: usize, r: usize) -> Self {
        Connection { omega: MatrixForm::zero(n, r, 1) }
    }

    pub fn dim(&self) -> usize {
        self.omega.dim()
    }

    pub fn rank(&self) -> usize {
        self.omega.rank()
    }

    /// `ι_{∂_k} ω`.
    pub fn component(&self, k: usize) -> MatrixForm {
        self.omega.interior(&VectorField::coordinate(self.dim(), k))
    }

    pub fn apply(&self, xi: &VectorField) -> AlgElement {
        AlgElement { m: self.omega.interior(xi), xi: xi.clone() }
    }

    pub fn curvature(&self) -> MatrixForm {
        curvature(self)
    }

    /// `∇_ξ a = ξ(a) + [ι_ξ ω, a]` on `gl_r`.
    pub fn covariant_derivative(&self, xi: &VectorField, a: &MatrixForm) -> MatrixForm {
        a.derive(xi).add(&self.omega.interior(xi).bracket(a))
    }

    pub fn difference(&self, other: &Connection) -> Result<MatrixForm> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch { left: self.rank(), right: other.rank() });
        }
        other.omega.try_add(&self.omega.neg())
    }

    pub fn is_flat(&self) -> bool {
        self.curvature().is_zero()
    }

    /// Whether `[∇∂i, ∇∂j] = ∇[∂i, ∂j]` for all coordinate fields.
    pub fn is_bracket_morphism_on_coordinates(&self) -> bool {
        let n = self.dim();
        let fields = VectorField::coordinates(n);
        (0..n).all(|i| {
            (i + 1..n).all(|j| {
                let lhs = atiyah_bracket(&self.apply(&fields[i]), &self.apply(&fields[j])).expect("same chart");
                lhs == self.apply(&fields[i].bracket(&fields[j]))
            })
        })
    }
}

/// `c = dω + ω∧ω`.
pub fn curvature(conn: &Connection) -> MatrixForm {
    conn.omega.ext_d().add(&conn.omega.mul(&conn.omega))
}

/// `Tr(a b)` for function matrices.
pub fn trace_pairing(a: &MatrixForm, b: &MatrixForm) -> RatFunc {
    a.pair(b).as_function()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceViolation {
    pub sample: usize,
    pub lhs: RatFunc,
    pub rhs: RatFunc,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InvarianceReport {
    pub checked: usize,
    pub violations: Vec<InvarianceViolation>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `π(a)⟨b,c⟩ = ⟨[a,b],c⟩ + ⟨b,[a,c]⟩` for the trace pairing.
pub fn pairing_invariance_check(
    chart: &AtiyahChart,
    samples: &[(AlgElement, MatrixForm, MatrixForm)],
) -> Result<InvarianceReport> {
    let mut report = InvarianceReport::default();
    for (k, (a, b, c)) in samples.iter().enumerate() {
        if !chart.contains(a) || b.rank() != chart.r || c.rank() != chart.r {
            return Err(Error::ChartMismatch("elements live on different Atiyah charts".into()));
        }
        let lhs = a.xi.apply(&trace_pairing(b, c));
        let ab = atiyah_bracket(a, &AlgElement::vertical(b.clone()))?.m;
        let ac = atiyah_bracket(a, &AlgElement::vertical(c.clone()))?.m;
        let rhs = &trace_pairing(&ab, c) + &trace_pairing(b, &ac);
        report.checked += 1;
        if lhs != rhs {
            report.violations.push(InvarianceViolation { sample: k, lhs, rhs });
        }
    }
    Ok(report)
}

/// An element of `ĝ`: a functional `(m, ξ) ↦ Tr(M m) + ι_ξ β` on `A` together with
/// `b ∈ g` such that `M = b`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GhatElement {
    pub dual_m: MatrixForm,
    pub beta: DiffForm,
    pub b: MatrixForm,
}

impl GhatElement {
    pub fn new(dual_m: MatrixForm, beta: DiffForm, b: MatrixForm) -> Result<Self> {
        if dual_m != b {
            return Err(Error::StructureMismatch("functional does not restrict to Tr(b·-) on g".into()));
        }
        beta.require_degree(1)?;
        Ok(GhatElement { dual_m, beta, b })
    }

    /// The element over `b` whose functional vanishes on `T`.
    pub fn from_parts(beta: DiffForm, b: MatrixForm) -> Result<Self> {
        Self::new(b.clone(), beta, b)
    }

    /// `∂f`: the functional `(m, ξ) ↦ ξ(f)` over `b = 0`.
    pub fn deriv(n: usize, r: usize, f: &RatFunc) -> Self {
        let z = MatrixForm::zero(n, r, 0);
        GhatElement { dual_m: z.clone(), beta: DiffForm::function(n, f.clone()).ext_d(), b: z }
    }

    pub fn evaluate(&self, e: &AlgElement) -> RatFunc {
        &trace_pairing(&self.dual_m, &e.m) + &self.beta.interior(&e.xi).as_function()
    }

    pub fn add(&self, other: &GhatElement) -> GhatElement {
        GhatElement { dual_m: self.dual_m.add(&other.dual_m), beta: &self.beta + &other.beta, b: self.b.add(&other.b) }
    }

    pub fn sub(&self, other: &GhatElement) -> GhatElement {
        GhatElement { dual_m: self.dual_m.sub(&other.dual_m), beta: &self.beta - &other.beta, b: self.b.sub(&other.b) }
    }

    pub fn scale(&self, f: &RatFunc) -> GhatElement {
        GhatElement { dual_m: self.dual_m.scale(f), beta: self.beta.scale(f), b: self.b.scale(f) }
    }
}

/// `(⟨[•, b1], b2⟩, [b1, b2])`.
pub fn ghat_bracket(g1: &GhatElement, g2: &GhatElement) -> Result<GhatElement> {
    if g1.b.rank() != g2.b.rank() || g1.b.dim() != g2.b.dim() {
        return Err(Error::ChartMismatch("elements live on different Atiyah charts".into()));
    }
    let n = g1.b.dim();
    let mut beta = DiffForm::zero(n);
    for k in 0..n {
        let dk = g1.b.derive(&VectorField::coordinate(n, k));
        let c = trace_pairing(&dk, &g2.b);
        if !c.is_zero() {
            beta = &beta + &DiffForm::dx(n, k).scale(&c);
        }
    }
    let b = g1.b.bracket(&g2.b);
    Ok(GhatElement { dual_m: b.clone(), beta, b })
}

pub fn ghat_pairing(g1: &GhatElement, g2: &GhatElement) -> RatFunc {
    trace_pairing(&g1.b, &g2.b)
}

/// The 1-form `ξ ↦ ⟨[∇ξ, a], b⟩`, i.e. `Σ_k Tr(([ω_k, a] + ∂_k a) b) dx_k`.
pub fn leibniz_cocycle(conn: &Connection, a: &MatrixForm, b: &MatrixForm) -> Result<DiffForm> {
    if a.rank() != conn.rank() || b.rank() != conn.rank() {
        return Err(Error::RankMismatch { left: conn.rank(), right: a.rank().max(b.rank()) });
    }
    let n = conn.dim();
    let mut out = DiffForm::zero(n);
    for k in 0..n {
        let xi = VectorField::coordinate(n, k);
        let c = trace_pairing(&conn.covariant_derivative(&xi, a), b);
        if !c.is_zero() {
            out = &out + &DiffForm::dx(n, k).scale(&c);
        }
    }
    Ok(out)
}
