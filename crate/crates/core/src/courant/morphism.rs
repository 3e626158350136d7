use num_rational::BigRational;

use super::structure::{CourantElement, CourantStructure};
use crate::algebroid::{trace_pairing, Connection};
use crate::cartan::{covariant_d, DiffForm, MatrixForm, VectorField};
use crate::error::{Error, Result};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// The map `exp(B)(q) = q + ι_{π(q)} B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoFormMorphism {
    pub b: DiffForm,
}

impl TwoFormMorphism {
    pub fn new(b: DiffForm) -> Result<Self> {
        b.require_degree(2)?;
        Ok(TwoFormMorphism { b })
    }

    pub fn is_closed(&self) -> bool {
        self.b.is_closed()
    }

    pub fn apply(&self, e: &CourantElement) -> CourantElement {
        exp_b(&self.b, e)
    }
}

pub fn exp_b(b: &DiffForm, e: &CourantElement) -> CourantElement {
    CourantElement { alpha: &e.alpha + &b.interior(&e.xi), a: e.a.clone(), xi: e.xi.clone() }
}

/// `[exp(B) e1, exp(B) e2] − exp(B)[e1, e2]` in `s`.
pub fn exp_b_bracket_defect(s: &CourantStructure, b: &DiffForm, e1: &CourantElement, e2: &CourantElement) -> Result<CourantElement> {
    let lhs = s.bracket(&exp_b(b, e1), &exp_b(b, e2))?;
    Ok(lhs.sub(&exp_b(b, &s.bracket(e1, e2)?)))
}

/// `P(∇,∇′) = ⟨c(∇) ∧ A⟩ + ½⟨∇A ∧ A⟩ + ⅙⟨[A,A] ∧ A⟩` with `A = ω′ − ω`.
pub fn cs_form(conn: &Connection, conn2: &Connection) -> Result<DiffForm> {
    let a = conn.difference(conn2)?;
    let t1 = conn.curvature().try_pair(&a)?;
    let t2 = covariant_d(&conn.omega, &a)?.try_pair(&a)?.scale_q(&q(1, 2));
    let t3 = a.try_bracket(&a)?.try_pair(&a)?.scale_q(&q(1, 6));
    Ok(&(&t1 + &t2) + &t3)
}

fn pair_with_components(m: &MatrixForm, a: &MatrixForm) -> DiffForm {
    let n = a.dim();
    let mut out = DiffForm::zero(n);
    for k in 0..n {
        let c = trace_pairing(m, &a.interior(&VectorField::coordinate(n, k)));
        if !c.is_zero() {
            out.add_term(1 << k, c);
        }
    }
    out
}

/// `(α, a, ξ) ↦ (α − ⟨a, A(•)⟩ − ½⟨A(ξ), A(•)⟩, a + A(ξ), ξ)` from `Â_{∇′,·}` to `Â_{∇,·}`.
pub fn phi_map(conn: &Connection, conn2: &Connection, e: &CourantElement) -> Result<CourantElement> {
    let a = conn.difference(conn2)?;
    if e.rank() != a.rank() {
        return Err(Error::RankMismatch { left: a.rank(), right: e.rank() });
    }
    let ax = a.interior(&e.xi);
    let alpha = &(&e.alpha - &pair_with_components(&e.a, &a)) - &pair_with_components(&ax, &a).scale_q(&q(1, 2));
    Ok(CourantElement { alpha, a: e.a.add(&ax), xi: e.xi.clone() })
}

/// `Â_{∇′, H + P(∇,∇′)}` for `s = Â_{∇,H}`.
pub fn change_of_connection(s: &CourantStructure, conn2: &Connection) -> Result<CourantStructure> {
    let conn = s.connection_or_flat();
    let p = cs_form(&conn, conn2)?;
    CourantStructure::extension(conn2.clone(), s.h().try_add(&p)?)
}

/// The isomorphism `Â_{∇′, H+P(∇,∇′)} → Â_{∇,H} = s`.
pub fn phi_change(s: &CourantStructure, conn2: &Connection, e: &CourantElement) -> Result<CourantElement> {
    let conn = s.connection_or_flat();
    if conn2.rank() != s.rank() || conn2.dim() != s.dim() {
        return Err(Error::RankMismatch { left: s.rank(), right: conn2.rank() });
    }
    phi_map(&conn, conn2, e)
}

/// Composes `φ(∇,∇′) ∘ φ(∇′,∇″) ∘ φ(∇″,∇)` and returns the 2-form `B` with composite `exp(B)`.
pub fn triple_composition(c0: &Connection, c1: &Connection, c2: &Connection) -> Result<TwoFormMorphism> {
    let (n, r) = (c0.dim(), c0.rank());
    if c1.rank() != r || c2.rank() != r {
        return Err(Error::RankMismatch { left: r, right: c1.rank().max(c2.rank()) });
    }
    let compose = |e: &CourantElement| -> Result<CourantElement> {
        let e = phi_map(c2, c0, e)?;
        let e = phi_map(c1, c2, &e)?;
        phi_map(c0, c1, &e)
    };
    let s = CourantStructure::extension(c0.clone(), DiffForm::zero(n))?;
    for idx in 0..s.num_generators() {
        let g = s.generator(s.generator_at(idx));
        let img = compose(&g)?;
        if img.xi != g.xi || img.a != g.a {
            return Err(Error::CompositionNotExpB(format!("generator {:?} is moved off its Ω¹-coset", s.generator_at(idx))));
        }
        if g.xi.is_zero() && img != g {
            return Err(Error::CompositionNotExpB(format!("generator {:?} is not fixed", s.generator_at(idx))));
        }
    }
    let fields = VectorField::coordinates(n);
    let shifts: Vec<DiffForm> =
        fields.iter().map(|x| compose(&CourantElement::field(r, x.clone())).map(|e| e.alpha)).collect::<Result<_>>()?;
    let mut b = DiffForm::zero(n);
    for i in 0..n {
        for j in 0..n {
            let bij = shifts[i].interior(&fields[j]).as_function();
            let bji = shifts[j].interior(&fields[i]).as_function();
            if bij != -&bji {
                return Err(Error::CompositionNotExpB(format!("shift is not skew at ({}, {})", i, j)));
            }
            if i < j && !bij.is_zero() {
                b.add_term((1 << i) | (1 << j), bij);
            }
        }
    }
    Ok(TwoFormMorphism { b })
}
