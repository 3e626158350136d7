use std::fmt::Debug;

use super::structure::{CourantElement, CourantStructure};
use crate::cartan::VectorField;
use crate::error::Result;
use crate::ring::RatFunc;

/// The operations a Courant algebroid exposes to the axiom checker.
pub trait CourantAlgebroid {
    type Elem: Clone + PartialEq + Debug;

    fn bracket(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn pairing(&self, a: &Self::Elem, b: &Self::Elem) -> Result<RatFunc>;
    fn anchor(&self, a: &Self::Elem) -> VectorField;
    fn deriv(&self, f: &RatFunc) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, f: &RatFunc, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
}

impl CourantAlgebroid for CourantStructure {
    type Elem = CourantElement;

    fn bracket(&self, a: &CourantElement, b: &CourantElement) -> Result<CourantElement> {
        CourantStructure::bracket(self, a, b)
    }

    fn pairing(&self, a: &CourantElement, b: &CourantElement) -> Result<RatFunc> {
        CourantStructure::pairing(self, a, b)
    }

    fn anchor(&self, a: &CourantElement) -> VectorField {
        a.xi.clone()
    }

    fn deriv(&self, f: &RatFunc) -> CourantElement {
        CourantStructure::deriv(self, f)
    }

    fn add(&self, a: &CourantElement, b: &CourantElement) -> CourantElement {
        a.add(b)
    }

    fn sub(&self, a: &CourantElement, b: &CourantElement) -> CourantElement {
        a.sub(b)
    }

    fn scale(&self, f: &RatFunc, a: &CourantElement) -> CourantElement {
        a.scale(f)
    }

    fn is_zero(&self, a: &CourantElement) -> bool {
        a.is_zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    /// `π ∘ ∂ = 0`
    Complex,
    /// `[q1, f q2] = f[q1,q2] + π(q1)(f) q2`
    Leibniz,
    /// `⟨[q,q1],q2⟩ + ⟨q1,[q,q2]⟩ = π(q)⟨q1,q2⟩`
    IpInvar,
    /// `[q, ∂f] = ∂(π(q)f)`
    BracketO,
    /// `⟨q, ∂f⟩ = π(q)f`
    IpO,
    /// `[q1,q2] + [q2,q1] = ∂⟨q1,q2⟩`
    IpSymm,
    /// `[a,[b,c]] = [[a,b],c] + [b,[a,c]]`
    Jacobi,
    /// `π[a,b] = [πa, πb]`
    AnchorMorphism,
}

impl Axiom {
    pub const ALL: [Axiom; 8] = [
        Axiom::Complex,
        Axiom::Leibniz,
        Axiom::IpInvar,
        Axiom::BracketO,
        Axiom::IpO,
        Axiom::IpSymm,
        Axiom::Jacobi,
        Axiom::AnchorMorphism,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Axiom::Complex => "complex",
            Axiom::Leibniz => "leibniz",
            Axiom::IpInvar => "ip-invar",
            Axiom::BracketO => "bracket-o",
            Axiom::IpO => "ip-o",
            Axiom::IpSymm => "ip-symm",
            Axiom::Jacobi => "jacobi",
            Axiom::AnchorMorphism => "anchor-morphism",
        }
    }

    /// The six compatibility identities, excluding the Leibniz-algebra structure axioms.
    pub fn is_compatibility(&self) -> bool {
        !matches!(self, Axiom::Jacobi | Axiom::AnchorMorphism)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Residual<E> {
    Element(E),
    Function(RatFunc),
    Field(VectorField),
}

/// A failing sample and the nonzero difference of the two sides.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness<E> {
    pub sample: usize,
    pub residual: Residual<E>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomResult<E> {
    pub axiom: Axiom,
    pub checked: usize,
    pub witnesses: Vec<Witness<E>>,
}

impl<E> AxiomResult<E> {
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport<E> {
    pub results: Vec<AxiomResult<E>>,
}

impl<E> AxiomReport<E> {
    pub fn get(&self, axiom: Axiom) -> &AxiomResult<E> {
        self.results.iter().find(|r| r.axiom == axiom).expect("every axiom is reported")
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed())
    }

    pub fn compatibility_passed(&self) -> bool {
        self.results.iter().filter(|r| r.axiom.is_compatibility()).all(|r| r.passed())
    }
}

/// `{a,{b,c}} − {{a,b},c} − {b,{a,c}}`.
pub fn jacobiator<C: CourantAlgebroid>(s: &C, a: &C::Elem, b: &C::Elem, c: &C::Elem) -> Result<C::Elem> {
    let bc = s.bracket(b, c)?;
    let ab = s.bracket(a, b)?;
    let ac = s.bracket(a, c)?;
    let t1 = s.bracket(a, &bc)?;
    let t2 = s.bracket(&ab, c)?;
    let t3 = s.bracket(b, &ac)?;
    Ok(s.sub(&s.sub(&t1, &t2), &t3))
}

/// Evaluates every axiom on the samples. Sample `k` is the triple
/// `(e[k], e[k+1], e[k+2])` (indices mod the length) with function `f[k mod len]`.
pub fn check_courant_axioms<C: CourantAlgebroid>(
    s: &C,
    elements: &[C::Elem],
    functions: &[RatFunc],
) -> Result<AxiomReport<C::Elem>> {
    let mut results: Vec<AxiomResult<C::Elem>> =
        Axiom::ALL.iter().map(|&axiom| AxiomResult { axiom, checked: 0, witnesses: Vec::new() }).collect();
    let len = elements.len();
    let one = RatFunc::one();
    for k in 0..len.max(functions.len()) {
        let f = if functions.is_empty() { &one } else { &functions[k % functions.len()] };
        let mut record = |axiom: Axiom, residual: Option<Residual<C::Elem>>| {
            let r = &mut results[axiom as usize];
            r.checked += 1;
            if let Some(residual) = residual {
                r.witnesses.push(Witness { sample: k, residual });
            }
        };
        let df = s.deriv(f);
        let pdf = s.anchor(&df);
        record(Axiom::Complex, (!pdf.is_zero()).then_some(Residual::Field(pdf)));
        if len == 0 {
            continue;
        }
        let q = &elements[k % len];
        let q1 = &elements[(k + 1) % len];
        let q2 = &elements[(k + 2) % len];
        let pq = s.anchor(q);

        let lhs = s.bracket(q1, &s.scale(f, q2))?;
        let rhs = s.add(&s.scale(f, &s.bracket(q1, q2)?), &s.scale(&s.anchor(q1).apply(f), q2));
        let d = s.sub(&lhs, &rhs);
        record(Axiom::Leibniz, (!s.is_zero(&d)).then_some(Residual::Element(d)));

        let lhs = &s.pairing(&s.bracket(q, q1)?, q2)? + &s.pairing(q1, &s.bracket(q, q2)?)?;
        let rhs = pq.apply(&s.pairing(q1, q2)?);
        let d = &lhs - &rhs;
        record(Axiom::IpInvar, (!d.is_zero()).then_some(Residual::Function(d)));

        let d = s.sub(&s.bracket(q, &df)?, &s.deriv(&pq.apply(f)));
        record(Axiom::BracketO, (!s.is_zero(&d)).then_some(Residual::Element(d)));

        let d = &s.pairing(q, &df)? - &pq.apply(f);
        record(Axiom::IpO, (!d.is_zero()).then_some(Residual::Function(d)));

        let q12 = s.bracket(q1, q2)?;
        let d = s.sub(&s.add(&q12, &s.bracket(q2, q1)?), &s.deriv(&s.pairing(q1, q2)?));
        record(Axiom::IpSymm, (!s.is_zero(&d)).then_some(Residual::Element(d)));

        let d = jacobiator(s, q, q1, q2)?;
        record(Axiom::Jacobi, (!s.is_zero(&d)).then_some(Residual::Element(d)));

        let d = s.anchor(&q12).sub(&s.anchor(q1).bracket(&s.anchor(q2)));
        record(Axiom::AnchorMorphism, (!d.is_zero()).then_some(Residual::Field(d)));
    }
    Ok(AxiomReport { results })
}
