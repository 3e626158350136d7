use super::frame::{FrameEVA, VertexElement};
use crate::error::{Error, Result};
use crate::ring::RatFunc;

/// An element of `V_0 ⊕ V_1 = O ⊕ V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Graded {
    Zero(RatFunc),
    One(VertexElement),
}

impl Graded {
    pub fn degree(&self) -> usize {
        match self {
            Graded::Zero(_) => 0,
            Graded::One(_) => 1,
        }
    }

    fn sub(&self, other: &Graded) -> Result<Graded> {
        match (self, other) {
            (Graded::Zero(a), Graded::Zero(b)) => Ok(Graded::Zero(a - b)),
            (Graded::One(a), Graded::One(b)) => Ok(Graded::One(a.sub(b))),
            _ => Err(Error::DegreeError("difference of elements of different degrees".into())),
        }
    }

    fn add(&self, other: &Graded) -> Result<Graded> {
        match (self, other) {
            (Graded::Zero(a), Graded::Zero(b)) => Ok(Graded::Zero(a + b)),
            (Graded::One(a), Graded::One(b)) => Ok(Graded::One(a.add(b))),
            _ => Err(Error::DegreeError("sum of elements of different degrees".into())),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Graded::Zero(a) => a.is_zero(),
            Graded::One(v) => v.is_zero(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    MinusOne,
    Zero,
    One,
}

impl OpKind {
    pub const ALL: [OpKind; 3] = [OpKind::MinusOne, OpKind::Zero, OpKind::One];

    fn index(self) -> i64 {
        match self {
            OpKind::MinusOne => -1,
            OpKind::Zero => 0,
            OpKind::One => 1,
        }
    }
}

/// The 1-truncated vertex algebra `(O, V, 1, ∂, _(−1), _(0), _(1))` of a vertex algebroid.
#[derive(Debug, Clone, Copy)]
pub struct TruncatedView<'a> {
    pub eva: &'a FrameEVA,
}

impl<'a> TruncatedView<'a> {
    pub fn new(eva: &'a FrameEVA) -> Self {
        TruncatedView { eva }
    }

    pub fn vacuum(&self) -> Graded {
        Graded::Zero(RatFunc::one())
    }

    pub fn partial(&self, a: &Graded) -> Result<Graded> {
        match a {
            Graded::Zero(f) => Ok(Graded::One(self.eva.deriv(f))),
            Graded::One(_) => Err(Error::DegreeError("∂ is defined on V_0 only".into())),
        }
    }

    /// `x_(i) y`; the degree of the result is `deg x + deg y − i − 1`.
    pub fn op(&self, kind: OpKind, x: &Graded, y: &Graded) -> Result<Graded> {
        let e = self.eva;
        use Graded::{One as V, Zero as O};
        match (kind, x, y) {
            (OpKind::MinusOne, O(a), O(b)) => Ok(O(a * b)),
            (OpKind::MinusOne, O(a), V(v)) => Ok(V(e.star(a, v))),
            (OpKind::MinusOne, V(v), O(a)) => Ok(V(e.star(a, v).add(&e.deriv(&e.anchor(v).apply(a))))),
            (OpKind::Zero, O(a), V(v)) => Ok(O(-e.anchor(v).apply(a))),
            (OpKind::Zero, V(v), O(a)) => Ok(O(e.anchor(v).apply(a))),
            (OpKind::Zero, V(v), V(w)) => Ok(V(e.eva_bracket(v, w)?)),
            (OpKind::One, V(v), V(w)) => Ok(O(e.eva_pairing(v, w)?)),
            _ => Err(Error::DegreeError(format!(
                "operation ({}) on degrees {} and {}",
                kind.index(),
                x.degree(),
                y.degree()
            ))),
        }
    }

    pub fn is_defined(kind: OpKind, x: &Graded, y: &Graded) -> bool {
        let d = x.degree() as i64 + y.degree() as i64 - kind.index() - 1;
        (0..=1).contains(&d)
    }
}

pub fn truncated_ops(view: &TruncatedView<'_>, kind: OpKind, x: &Graded, y: &Graded) -> Result<Graded> {
    view.op(kind, x, y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TruncatedAxiom {
    Vacuum,
    Deriv1,
    Deriv2,
    CommMinusOne,
    CommZero,
    CommOne,
    AssocMinusOne,
    AssocZero,
    AssocOne,
    AssocTwo,
    AssocThree,
}

impl TruncatedAxiom {
    pub const ALL: [TruncatedAxiom; 11] = [
        TruncatedAxiom::Vacuum,
        TruncatedAxiom::Deriv1,
        TruncatedAxiom::Deriv2,
        TruncatedAxiom::CommMinusOne,
        TruncatedAxiom::CommZero,
        TruncatedAxiom::CommOne,
        TruncatedAxiom::AssocMinusOne,
        TruncatedAxiom::AssocZero,
        TruncatedAxiom::AssocOne,
        TruncatedAxiom::AssocTwo,
        TruncatedAxiom::AssocThree,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TruncatedAxiom::Vacuum => "vacuum",
            TruncatedAxiom::Deriv1 => "deriv1",
            TruncatedAxiom::Deriv2 => "deriv2",
            TruncatedAxiom::CommMinusOne => "comm-1",
            TruncatedAxiom::CommZero => "comm0",
            TruncatedAxiom::CommOne => "comm1",
            TruncatedAxiom::AssocMinusOne => "assoc-1",
            TruncatedAxiom::AssocZero => "assoc0",
            TruncatedAxiom::AssocOne => "assoc1",
            TruncatedAxiom::AssocTwo => "assoc2",
            TruncatedAxiom::AssocThree => "assoc3",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedFailure {
    pub axiom: TruncatedAxiom,
    pub sample: usize,
    pub residual: Graded,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TruncatedReport {
    pub checked: Vec<(TruncatedAxiom, usize)>,
    pub failures: Vec<TruncatedFailure>,
}

impl TruncatedReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failed(&self, axiom: TruncatedAxiom) -> bool {
        self.failures.iter().any(|f| f.axiom == axiom)
    }

    fn record(&mut self, axiom: TruncatedAxiom, sample: usize, lhs: Graded, rhs: Graded) -> Result<()> {
        match self.checked.iter_mut().find(|(a, _)| *a == axiom) {
            Some((_, c)) => *c += 1,
            None => self.checked.push((axiom, 1)),
        }
        let residual = lhs.sub(&rhs)?;
        if !residual.is_zero() {
            self.failures.push(TruncatedFailure { axiom, sample, residual });
        }
        Ok(())
    }
}

/// Checks every axiom of a 1-truncated vertex algebra. Sample `k` uses functions
/// `a, b, c = f[k], f[k+1], f[k+2]` and elements `x, y, z = e[k], e[k+1], e[k+2]`.
pub fn check_truncated_axioms(view: &TruncatedView<'_>, functions: &[RatFunc], elements: &[VertexElement]) -> Result<TruncatedReport> {
    let mut rep = TruncatedReport::default();
    let (nf, ne) = (functions.len(), elements.len());
    if nf == 0 || ne == 0 {
        return Ok(rep);
    }
    let op = |k: OpKind, x: &Graded, y: &Graded| view.op(k, x, y);
    let (m1, z0, p1) = (OpKind::MinusOne, OpKind::Zero, OpKind::One);
    for s in 0..nf.max(ne) {
        let a = Graded::Zero(functions[s % nf].clone());
        let b = Graded::Zero(functions[(s + 1) % nf].clone());
        let c = Graded::Zero(functions[(s + 2) % nf].clone());
        let x = Graded::One(elements[s % ne].clone());
        let y = Graded::One(elements[(s + 1) % ne].clone());
        let z = Graded::One(elements[(s + 2) % ne].clone());
        let one = view.vacuum();
        let zero0 = Graded::Zero(RatFunc::zero());
        let da = view.partial(&a)?;
        let db = view.partial(&b)?;

        use TruncatedAxiom as T;
        rep.record(T::Vacuum, s, op(m1, &a, &one)?, a.clone())?;
        rep.record(T::Vacuum, s, op(m1, &x, &one)?, x.clone())?;
        rep.record(T::Vacuum, s, op(z0, &x, &one)?, zero0.clone())?;

        rep.record(T::Deriv1, s, op(z0, &da, &b)?, zero0.clone())?;
        rep.record(T::Deriv1, s, op(z0, &da, &x)?, Graded::One(VertexElement::zero(view.eva.dim())))?;
        rep.record(T::Deriv1, s, op(p1, &da, &x)?, Graded::Zero(-graded_fn(&op(z0, &a, &x)?)))?;

        rep.record(T::Deriv2, s, view.partial(&op(m1, &a, &b)?)?, op(m1, &da, &b)?.add(&op(m1, &a, &db)?)?)?;
        rep.record(T::Deriv2, s, view.partial(&op(z0, &x, &a)?)?, op(z0, &x, &da)?)?;

        rep.record(T::CommMinusOne, s, op(m1, &a, &b)?, op(m1, &b, &a)?)?;
        rep.record(T::CommMinusOne, s, op(m1, &a, &x)?, op(m1, &x, &a)?.sub(&view.partial(&op(z0, &x, &a)?)?)?)?;

        rep.record(T::CommZero, s, op(z0, &x, &a)?, Graded::Zero(-graded_fn(&op(z0, &a, &x)?)))?;
        rep.record(
            T::CommZero,
            s,
            op(z0, &x, &y)?,
            view.partial(&op(p1, &y, &x)?)?.sub(&op(z0, &y, &x)?)?,
        )?;
        rep.record(T::CommOne, s, op(p1, &x, &y)?, op(p1, &y, &x)?)?;

        rep.record(T::AssocMinusOne, s, op(m1, &op(m1, &a, &b)?, &c)?, op(m1, &a, &op(m1, &b, &c)?)?)?;

        let pool = [a.clone(), b.clone(), x.clone(), y.clone(), z.clone()];
        for alpha in &pool {
            for beta in &pool {
                for gamma in &pool {
                    for k in OpKind::ALL {
                        if !TruncatedView::is_defined(k, beta, gamma) {
                            continue;
                        }
                        let inner = op(k, beta, gamma)?;
                        if !TruncatedView::is_defined(z0, alpha, &inner) {
                            continue;
                        }
                        let lhs = op(z0, alpha, &inner)?;
                        let mut rhs: Option<Graded> = None;
                        if TruncatedView::is_defined(z0, alpha, beta) {
                            let ab = op(z0, alpha, beta)?;
                            if TruncatedView::is_defined(k, &ab, gamma) {
                                rhs = Some(op(k, &ab, gamma)?);
                            }
                        }
                        if TruncatedView::is_defined(z0, alpha, gamma) {
                            let ag = op(z0, alpha, gamma)?;
                            if TruncatedView::is_defined(k, beta, &ag) {
                                let t = op(k, beta, &ag)?;
                                rhs = Some(match rhs {
                                    Some(r) => r.add(&t)?,
                                    None => t,
                                });
                            }
                        }
                        let rhs = rhs.unwrap_or_else(|| zero_like(&lhs, view));
                        rep.record(T::AssocZero, s, lhs, rhs)?;
                    }
                }
            }
        }

        rep.record(T::AssocOne, s, op(z0, &op(m1, &a, &x)?, &b)?, op(m1, &a, &op(z0, &x, &b)?)?)?;
        let rhs = op(m1, &a, &op(m1, &b, &x)?)?
            .add(&op(m1, &da, &op(z0, &b, &x)?)?)?
            .add(&op(m1, &db, &op(z0, &a, &x)?)?)?;
        rep.record(T::AssocTwo, s, op(m1, &op(m1, &a, &b)?, &x)?, rhs)?;
        let rhs = op(m1, &a, &op(p1, &x, &y)?)?.sub(&op(z0, &x, &op(z0, &y, &a)?)?)?;
        rep.record(T::AssocThree, s, op(p1, &op(m1, &a, &x)?, &y)?, rhs)?;
    }
    Ok(rep)
}

fn graded_fn(g: &Graded) -> RatFunc {
    match g {
        Graded::Zero(f) => f.clone(),
        Graded::One(_) => unreachable!("degree-one value where a function was expected"),
    }
}

fn zero_like(g: &Graded, view: &TruncatedView<'_>) -> Graded {
    match g {
        Graded::Zero(_) => Graded::Zero(RatFunc::zero()),
        Graded::One(_) => Graded::One(VertexElement::zero(view.eva.dim())),
    }
}
