use super::frame::{FrameEVA, VertexElement};
use crate::cartan::{DiffForm, VectorField};
use crate::error::Result;
use crate::ring::RatFunc;

/// Normal-form atoms: `h * ∂(x_k)` and `f * (1 ⊗ t_i)`.
#[derive(Clone, Debug)]
enum Atom {
    Form(RatFunc, usize),
    Tensor(RatFunc, usize),
}

fn atoms(v: &VertexElement) -> Vec<Atom> {
    let n = v.dim();
    let mut out = Vec::new();
    for k in 0..n {
        let h = v.alpha.coefficient(1 << k);
        if !h.is_zero() {
            out.push(Atom::Form(h, k));
        }
    }
    for (i, f) in v.coeffs.iter().enumerate() {
        if !f.is_zero() {
            out.push(Atom::Tensor(f.clone(), i));
        }
    }
    out
}

fn df(n: usize, f: &RatFunc) -> DiffForm {
    DiffForm::function(n, f.clone()).ext_d()
}

impl FrameEVA {
    pub fn anchor(&self, v: &VertexElement) -> VectorField {
        v.coeffs
            .iter()
            .zip(self.frame())
            .fold(VectorField::zero(self.dim()), |acc, (f, t)| acc.add(&t.scale(f)))
    }

    pub fn deriv(&self, f: &RatFunc) -> VertexElement {
        VertexElement::form(df(self.dim(), f))
    }

    /// `f * v`; on `g ⊗ t` this is `fg ⊗ t + t(f) dg + t(g) df`.
    pub fn star(&self, f: &RatFunc, v: &VertexElement) -> VertexElement {
        let n = self.dim();
        let mut alpha = v.alpha.scale(f);
        let mut coeffs = Vec::with_capacity(n);
        for (g, t) in v.coeffs.iter().zip(self.frame()) {
            coeffs.push(f * g);
            if !g.is_zero() {
                alpha = &alpha + &(&df(n, g).scale(&t.apply(f)) + &df(n, f).scale(&t.apply(g)));
            }
        }
        VertexElement { alpha, coeffs }
    }

    fn atom_element(&self, a: &Atom) -> VertexElement {
        let n = self.dim();
        match a {
            Atom::Form(h, k) => VertexElement::form(DiffForm::dx(n, *k).scale(h)),
            Atom::Tensor(f, i) => VertexElement::tensor(n, f.clone(), *i),
        }
    }

    fn pair_atoms(&self, a: &Atom, b: &Atom) -> RatFunc {
        match (a, b) {
            // ⟨h*∂x, w⟩ = h ⟨∂x, w⟩ − π(∂x)(…) = h π(w)(x)
            (Atom::Form(h, k), w) | (w, Atom::Form(h, k)) => {
                h * self.anchor(&self.atom_element(w)).component(*k)
            }
            (Atom::Tensor(f, i), Atom::Tensor(g, j)) => {
                let (ti, tj) = (&self.frame()[*i], &self.frame()[*j]);
                if f.is_one() {
                    // ⟨1⊗t_i, g*(1⊗t_j)⟩ = ⟨g*(1⊗t_j), 1⊗t_i⟩ = g·0 − t_j(t_i(g))
                    -tj.apply(&ti.apply(g))
                } else {
                    // ⟨f*(1⊗t_i), w⟩ = f⟨1⊗t_i, w⟩ − t_i(π(w)(f))
                    let inner = self.pair_atoms(&Atom::Tensor(RatFunc::one(), *i), b);
                    &(f * &inner) - &ti.apply(&tj.apply(f).try_mul(g))
                }
            }
        }
    }

    fn bracket_atoms(&self, a: &Atom, b: &Atom) -> VertexElement {
        let n = self.dim();
        let pa = self.anchor(&self.atom_element(a));
        match (a, b) {
            // [v, h*∂x] = π(v)(h) ∂x + h ∂(π(v)(x))
            (_, Atom::Form(h, k)) => VertexElement::form(
                &DiffForm::dx(n, *k).scale(&pa.apply(h)) + &df(n, pa.component(*k)).scale(h),
            ),
            // [v, g*(1⊗t_j)] = π(v)(g) ⊗ t_j + g * [v, 1⊗t_j]
            (_, Atom::Tensor(g, j)) if !g.is_one() => {
                let first = VertexElement::tensor(n, pa.apply(g), *j);
                let inner = self.bracket_atoms(a, &Atom::Tensor(RatFunc::one(), *j));
                first.add(&self.star(g, &inner))
            }
            // τ → V is a morphism of Leibniz algebras and τ is abelian
            (Atom::Tensor(f, _), Atom::Tensor(_, _)) if f.is_one() => VertexElement::zero(n),
            // [v, 1⊗t_j] = −[1⊗t_j, v] + ∂⟨v, 1⊗t_j⟩
            (_, Atom::Tensor(_, _)) => {
                let swapped = self.bracket_atoms(b, a);
                self.deriv(&self.pair_atoms(a, b)).sub(&swapped)
            }
        }
    }

    pub fn eva_pairing(&self, v1: &VertexElement, v2: &VertexElement) -> Result<RatFunc> {
        self.check(v1)?;
        self.check(v2)?;
        let mut acc = RatFunc::zero();
        for a in atoms(v1) {
            for b in atoms(v2) {
                acc = &acc + &self.pair_atoms(&a, &b);
            }
        }
        Ok(acc)
    }

    pub fn eva_bracket(&self, v1: &VertexElement, v2: &VertexElement) -> Result<VertexElement> {
        self.check(v1)?;
        self.check(v2)?;
        let mut acc = VertexElement::zero(self.dim());
        for a in atoms(v1) {
            for b in atoms(v2) {
                acc = acc.add(&self.bracket_atoms(&a, &b));
            }
        }
        Ok(acc)
    }
}

pub fn star(v: &FrameEVA, f: &RatFunc, x: &VertexElement) -> VertexElement {
    v.star(f, x)
}

pub fn eva_bracket(v: &FrameEVA, x: &VertexElement, y: &VertexElement) -> Result<VertexElement> {
    v.eva_bracket(x, y)
}

pub fn eva_pairing(v: &FrameEVA, x: &VertexElement, y: &VertexElement) -> Result<RatFunc> {
    v.eva_pairing(x, y)
}
