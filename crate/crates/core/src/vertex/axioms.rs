use std::fmt::Debug;

use super::frame::{FrameEVA, VertexElement};
use crate::cartan::VectorField;
use crate::courant::{Residual, Witness};
use crate::error::Result;
use crate::ring::RatFunc;

/// The operations a vertex algebroid exposes to the axiom checker.
pub trait VertexAlgebroid {
    type Elem: Clone + PartialEq + Debug;

    fn star(&self, f: &RatFunc, v: &Self::Elem) -> Self::Elem;
    fn bracket(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn pairing(&self, a: &Self::Elem, b: &Self::Elem) -> Result<RatFunc>;
    fn anchor(&self, a: &Self::Elem) -> VectorField;
    fn deriv(&self, f: &RatFunc) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
}

impl VertexAlgebroid for FrameEVA {
    type Elem = VertexElement;

    fn star(&self, f: &RatFunc, v: &VertexElement) -> VertexElement {
        FrameEVA::star(self, f, v)
    }

    fn bracket(&self, a: &VertexElement, b: &VertexElement) -> Result<VertexElement> {
        self.eva_bracket(a, b)
    }

    fn pairing(&self, a: &VertexElement, b: &VertexElement) -> Result<RatFunc> {
        self.eva_pairing(a, b)
    }

    fn anchor(&self, a: &VertexElement) -> VectorField {
        FrameEVA::anchor(self, a)
    }

    fn deriv(&self, f: &RatFunc) -> VertexElement {
        FrameEVA::deriv(self, f)
    }

    fn add(&self, a: &VertexElement, b: &VertexElement) -> VertexElement {
        a.add(b)
    }

    fn sub(&self, a: &VertexElement, b: &VertexElement) -> VertexElement {
        a.sub(b)
    }

    fn is_zero(&self, a: &VertexElement) -> bool {
        a.is_zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexAxiom {
    /// `f*(g*v) − (fg)*v = π(v)(f)*∂g + π(v)(g)*∂f`
    Assoc,
    /// `[v1, f*v2] = π(v1)(f)*v2 + f*[v1,v2]`
    Leib,
    /// `[v1,v2] + [v2,v1] = ∂⟨v1,v2⟩`
    SymmBracket,
    /// `π(f*v) = fπ(v)`
    AnchorLin,
    /// `⟨f*v1, v2⟩ = f⟨v1,v2⟩ − π(v1)(π(v2)(f))`
    Pairing,
    /// `π(v)⟨v1,v2⟩ = ⟨[v,v1],v2⟩ + ⟨v1,[v,v2]⟩`
    PairingInv,
    /// `∂(fg) = f*∂g + g*∂f`
    Deriv,
    /// `[v, ∂f] = ∂(π(v)(f))`
    BracketO,
    /// `⟨v, ∂f⟩ = π(v)(f)`
    PairingO,
}

impl VertexAxiom {
    pub const ALL: [VertexAxiom; 9] = [
        VertexAxiom::Assoc,
        VertexAxiom::Leib,
        VertexAxiom::SymmBracket,
        VertexAxiom::AnchorLin,
        VertexAxiom::Pairing,
        VertexAxiom::PairingInv,
        VertexAxiom::Deriv,
        VertexAxiom::BracketO,
        VertexAxiom::PairingO,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            VertexAxiom::Assoc => "assoc",
            VertexAxiom::Leib => "leib",
            VertexAxiom::SymmBracket => "symm-bracket",
            VertexAxiom::AnchorLin => "anchor-lin",
            VertexAxiom::Pairing => "pairing",
            VertexAxiom::PairingInv => "pairing-inv",
            VertexAxiom::Deriv => "deriv",
            VertexAxiom::BracketO => "bracket-o",
            VertexAxiom::PairingO => "pairing-o",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexAxiomResult<E> {
    pub axiom: VertexAxiom,
    pub checked: usize,
    pub witnesses: Vec<Witness<E>>,
}

impl<E> VertexAxiomResult<E> {
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexReport<E> {
    pub results: Vec<VertexAxiomResult<E>>,
}

impl<E> VertexReport<E> {
    pub fn get(&self, axiom: VertexAxiom) -> &VertexAxiomResult<E> {
        self.results.iter().find(|r| r.axiom == axiom).expect("every axiom is reported")
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed())
    }
}

/// Evaluates the nine identities. Sample `k` uses `v = e[k]`, `v1 = e[k+1]`, `v2 = e[k+2]`
/// and functions `f[k]`, `f[k+1]` (indices mod the lengths).
pub fn check_vertex_axioms<V: VertexAlgebroid>(
    s: &V,
    elements: &[V::Elem],
    functions: &[RatFunc],
) -> Result<VertexReport<V::Elem>> {
    let mut results: Vec<VertexAxiomResult<V::Elem>> =
        VertexAxiom::ALL.iter().map(|&axiom| VertexAxiomResult { axiom, checked: 0, witnesses: Vec::new() }).collect();
    let len = elements.len();
    if len == 0 {
        return Ok(VertexReport { results });
    }
    let one = RatFunc::one();
    let nf = functions.len();
    for k in 0..len.max(nf) {
        let f = if nf == 0 { &one } else { &functions[k % nf] };
        let g = if nf == 0 { &one } else { &functions[(k + 1) % nf] };
        let v = &elements[k % len];
        let v1 = &elements[(k + 1) % len];
        let v2 = &elements[(k + 2) % len];
        let mut el = |axiom: VertexAxiom, d: V::Elem| {
            let r = &mut results[axiom as usize];
            r.checked += 1;
            if !s.is_zero(&d) {
                r.witnesses.push(Witness { sample: k, residual: Residual::Element(d) });
            }
        };
        let pv = s.anchor(v);

        let lhs = s.sub(&s.star(f, &s.star(g, v)), &s.star(&(f * g), v));
        let rhs = s.add(&s.star(&pv.apply(f), &s.deriv(g)), &s.star(&pv.apply(g), &s.deriv(f)));
        el(VertexAxiom::Assoc, s.sub(&lhs, &rhs));

        let lhs = s.bracket(v1, &s.star(f, v2))?;
        let rhs = s.add(&s.star(&s.anchor(v1).apply(f), v2), &s.star(f, &s.bracket(v1, v2)?));
        el(VertexAxiom::Leib, s.sub(&lhs, &rhs));

        let lhs = s.add(&s.bracket(v1, v2)?, &s.bracket(v2, v1)?);
        el(VertexAxiom::SymmBracket, s.sub(&lhs, &s.deriv(&s.pairing(v1, v2)?)));

        el(VertexAxiom::Deriv, s.sub(&s.deriv(&(f * g)), &s.add(&s.star(f, &s.deriv(g)), &s.star(g, &s.deriv(f)))));

        let d = s.deriv(f);
        el(VertexAxiom::BracketO, s.sub(&s.bracket(v, &d)?, &s.deriv(&pv.apply(f))));

        let mut func = |axiom: VertexAxiom, d: RatFunc| {
            let r = &mut results[axiom as usize];
            r.checked += 1;
            if !d.is_zero() {
                r.witnesses.push(Witness { sample: k, residual: Residual::Function(d) });
            }
        };
        let p12 = s.pairing(v1, v2)?;
        let lhs = s.pairing(&s.star(f, v1), v2)?;
        let rhs = &(f * &p12) - &s.anchor(v1).apply(&s.anchor(v2).apply(f));
        func(VertexAxiom::Pairing, &lhs - &rhs);

        let rhs = &s.pairing(&s.bracket(v, v1)?, v2)? + &s.pairing(v1, &s.bracket(v, v2)?)?;
        func(VertexAxiom::PairingInv, &pv.apply(&p12) - &rhs);

        func(VertexAxiom::PairingO, &s.pairing(v, &d)? - &pv.apply(f));

        let r = &mut results[VertexAxiom::AnchorLin as usize];
        r.checked += 1;
        let d = s.anchor(&s.star(f, v)).sub(&pv.scale(f));
        if !d.is_zero() {
            r.witnesses.push(Witness { sample: k, residual: Residual::Field(d) });
        }
    }
    Ok(VertexReport { results })
}
