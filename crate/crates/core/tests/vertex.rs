use std::sync::Arc;

use courant_core::cartan::{ChartMap, DiffForm, VectorField};
use courant_core::courant::{check_courant_axioms, CourantElement, Residual};
use courant_core::ring::{Context, RatFunc};
use courant_core::sample::{Bounds, Sampler};
use courant_core::vertex::*;
use courant_core::Result;
use proptest::prelude::*;

fn ctx(n: usize) -> Arc<Context> {
    Context::standard(n)
}

fn f(n: usize, s: &str) -> RatFunc {
    ctx(n).parse(s).unwrap()
}

fn form(n: usize, s: &str) -> DiffForm {
    ctx(n).parse_form(s).unwrap()
}

fn d(n: usize, f: &RatFunc) -> DiffForm {
    DiffForm::function(n, f.clone()).ext_d()
}

fn chart(n: usize, images: &[&str]) -> ChartMap {
    ChartMap::new(n, images.iter().map(|s| f(n, s)).collect())
}

fn sheared2() -> FrameEVA {
    FrameEVA::from_automorphism(ctx(2), &chart(2, &["x1", "x2 + x1^2"]), &chart(2, &["x1", "x2 - x1^2"])).unwrap()
}

fn sheared3() -> FrameEVA {
    FrameEVA::from_automorphism(
        ctx(3),
        &chart(3, &["x1", "x2 + x1^2", "x3 + x1*x2"]),
        &chart(3, &["x1", "x2 - x1^2", "x3 - x1*x2 + x1^3"]),
    )
    .unwrap()
}

fn composite3() -> FrameEVA {
    let m = |v: &[&str]| chart(3, v);
    let phi = m(&["x1", "x2 + x1^2", "x3"])
        .compose(&m(&["x1 + x3^2", "x2", "x3"]))
        .unwrap()
        .compose(&m(&["x1", "x2", "x3 + x2^2"]))
        .unwrap();
    let psi = m(&["x1", "x2", "x3 - x2^2"])
        .compose(&m(&["x1 - x3^2", "x2", "x3"]))
        .unwrap()
        .compose(&m(&["x1", "x2 - x1^2", "x3"]))
        .unwrap();
    FrameEVA::from_automorphism(ctx(3), &phi, &psi).unwrap()
}

fn sampler(seed: u64, n: usize) -> Sampler {
    Sampler::new(seed, n).with_bounds(Bounds { degree: 2, terms: 3, coeff: 3 })
}

fn random_element(s: &mut Sampler, n: usize) -> VertexElement {
    VertexElement::new(s.form(1), (0..n).map(|_| s.poly()).collect()).unwrap()
}

/// Closed form of the pairing, derived by hand from the axioms.
fn pairing_oracle(v: &FrameEVA, x: &VertexElement, y: &VertexElement) -> RatFunc {
    let t = v.frame();
    let mut acc = &x.alpha.interior(&v.anchor(y)).as_function() + &y.alpha.interior(&v.anchor(x)).as_function();
    for (i, fi) in x.coeffs.iter().enumerate() {
        for (j, gj) in y.coeffs.iter().enumerate() {
            let term = &(&(fi * &t[j].apply(&t[i].apply(gj))) + &(&t[i].apply(gj) * &t[j].apply(fi)))
                + &(gj * &t[i].apply(&t[j].apply(fi)));
            acc = &acc - &term;
        }
    }
    acc
}

/// Closed form of the bracket, derived by hand from the axioms.
fn bracket_oracle(v: &FrameEVA, x: &VertexElement, y: &VertexElement) -> VertexElement {
    let n = v.dim();
    let t = v.frame();
    let mut alpha = &y.alpha.lie_derivative(&v.anchor(x)) - &x.alpha.ext_d().interior(&v.anchor(y));
    let mut coeffs = vec![RatFunc::zero(); n];
    for (i, fi) in x.coeffs.iter().enumerate() {
        for (j, gj) in y.coeffs.iter().enumerate() {
            coeffs[j] = &coeffs[j] + &(fi * &t[i].apply(gj));
            coeffs[i] = &coeffs[i] - &(gj * &t[j].apply(fi));
            alpha = &alpha - &d(n, &t[j].apply(fi)).scale(&t[i].apply(gj));
            alpha = &alpha - &d(n, gj).scale(&t[i].apply(&t[j].apply(fi)));
            alpha = &alpha - &d(n, &t[j].apply(&t[i].apply(fi))).scale(gj);
        }
    }
    VertexElement { alpha, coeffs }
}

#[test]
fn frame_validation() {
    let v = FrameEVA::coordinate(ctx(2));
    assert_eq!(v.frame(), VectorField::coordinates(2).as_slice());
    let sh = sheared2();
    assert_eq!(sh.frame()[0], VectorField::new(vec![RatFunc::one(), f(2, "2*x1")]));
    assert_eq!(sh.frame()[1], VectorField::coordinate(2, 1));
    let noncommuting = vec![VectorField::coordinate(2, 0), VectorField::new(vec![RatFunc::zero(), f(2, "x1")])];
    assert!(matches!(FrameEVA::new(ctx(2), noncommuting), Err(courant_core::Error::FrameInvalid(_))));
    let degenerate = vec![VectorField::coordinate(2, 0), VectorField::coordinate(2, 0)];
    assert!(matches!(FrameEVA::new(ctx(2), degenerate), Err(courant_core::Error::FrameInvalid(_))));
    let not_inverse = FrameEVA::from_automorphism(ctx(2), &chart(2, &["x1", "x2 + x1^2"]), &chart(2, &["x1", "x2"]));
    assert!(matches!(not_inverse, Err(courant_core::Error::FrameInvalid(_))));
    let xi = VectorField::new(vec![f(2, "x2"), f(2, "x1")]);
    assert_eq!(sh.anchor(&sh.lift(&xi)), xi);
}

#[test]
fn star_examples() {
    let n = 2;
    let v = FrameEVA::coordinate(ctx(n));
    let g = f(n, "x1^2 - x2");
    assert_eq!(v.star(&g, &v.generator(0)), VertexElement::tensor(n, g.clone(), 0));
    let out = v.star(&f(n, "x1"), &VertexElement::tensor(n, f(n, "x2"), 0));
    let mut expected = VertexElement::tensor(n, f(n, "x1*x2"), 0);
    expected.alpha = form(n, "d(x2)");
    assert_eq!(out, expected);
    let w = VertexElement::new(form(n, "x2*d(x1)"), vec![f(n, "x1"), f(n, "x2^2")]).unwrap();
    assert_eq!(v.star(&RatFunc::one(), &w), w);
    assert_eq!(v.star(&f(n, "x1"), &VertexElement::form(form(n, "d(x2)"))), VertexElement::form(form(n, "x1*d(x2)")));

    let mut smp = sampler(3, n);
    for eva in [v, sheared2()] {
        for _ in 0..5 {
            let (a, b, x) = (smp.poly(), smp.poly(), random_element(&mut smp, n));
            let xi = eva.anchor(&x);
            let lhs = eva.star(&a, &eva.star(&b, &x)).sub(&eva.star(&(&a * &b), &x));
            let rhs = VertexElement::form(&d(n, &b).scale(&xi.apply(&a)) + &d(n, &a).scale(&xi.apply(&b)));
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn bracket_and_pairing_examples() {
    let n = 2;
    let v = sheared2();
    for i in 0..n {
        for j in 0..n {
            assert!(v.eva_bracket(&v.generator(i), &v.generator(j)).unwrap().is_zero());
            assert!(v.eva_pairing(&v.generator(i), &v.generator(j)).unwrap().is_zero());
        }
    }
    let c = FrameEVA::coordinate(ctx(n));
    let (a, b) = (f(n, "x1^2*x2"), f(n, "x1*x2 + 3"));
    let p = c.eva_pairing(&VertexElement::tensor(n, a.clone(), 0), &VertexElement::tensor(n, b.clone(), 1)).unwrap();
    let (t1, t2) = (&c.frame()[0], &c.frame()[1]);
    let expected = -&(&(&(&a * &t2.apply(&t1.apply(&b))) + &(&t1.apply(&b) * &t2.apply(&a))) + &(&b * &t1.apply(&t2.apply(&a))));
    assert_eq!(p, expected);
    let q = c.eva_pairing(&VertexElement::tensor(n, b, 1), &VertexElement::tensor(n, a, 0)).unwrap();
    assert_eq!(p, q);

    let mut smp = sampler(5, n);
    for eva in [c, v] {
        for _ in 0..5 {
            let x = random_element(&mut smp, n);
            let g = smp.poly();
            let lhs = eva.eva_bracket(&x, &eva.deriv(&g)).unwrap();
            assert_eq!(lhs, eva.deriv(&eva.anchor(&x).apply(&g)));
            assert!(eva.eva_bracket(&eva.deriv(&g), &x).unwrap().is_zero());
        }
    }
    assert!(matches!(
        dimension_mismatch(),
        Err(courant_core::Error::StructureMismatch(_))
    ));
}

fn dimension_mismatch() -> Result<VertexElement> {
    FrameEVA::coordinate(ctx(2)).eva_bracket(&VertexElement::zero(2), &VertexElement::zero(3))
}

#[test]
fn rewriting_matches_closed_forms() {
    let mut smp = sampler(11, 3);
    for eva in [FrameEVA::coordinate(ctx(3)), sheared3()] {
        for _ in 0..6 {
            let (x, y) = (random_element(&mut smp, 3), random_element(&mut smp, 3));
            assert_eq!(eva.eva_pairing(&x, &y).unwrap(), pairing_oracle(&eva, &x, &y));
            assert_eq!(eva.eva_bracket(&x, &y).unwrap(), bracket_oracle(&eva, &x, &y));
        }
    }
}

#[test]
fn axioms_hold_for_coordinate_and_sheared_frames() {
    let n = 2;
    let mut smp = sampler(17, n);
    let elems: Vec<_> = (0..8).map(|_| random_element(&mut smp, n)).collect();
    let funcs: Vec<_> = (0..8).map(|_| smp.poly()).collect();
    for eva in [FrameEVA::coordinate(ctx(n)), sheared2()] {
        let rep = check_vertex_axioms(&eva, &elems, &funcs).unwrap();
        assert!(rep.passed(), "{:?}", rep.results.iter().filter(|r| !r.passed()).collect::<Vec<_>>());
        assert!(rep.results.iter().all(|r| r.checked == 8));
        assert_eq!(rep.results.len(), 9);
    }
}

struct Corrupted(FrameEVA);

impl VertexAlgebroid for Corrupted {
    type Elem = VertexElement;
    fn star(&self, f: &RatFunc, v: &VertexElement) -> VertexElement {
        self.0.star(f, v)
    }
    fn bracket(&self, a: &VertexElement, b: &VertexElement) -> Result<VertexElement> {
        self.0.eva_bracket(a, b)
    }
    fn pairing(&self, a: &VertexElement, b: &VertexElement) -> Result<RatFunc> {
        Ok(self.0.eva_pairing(a, b)?.scale_int(2))
    }
    fn anchor(&self, a: &VertexElement) -> VectorField {
        self.0.anchor(a)
    }
    fn deriv(&self, f: &RatFunc) -> VertexElement {
        self.0.deriv(f)
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

#[test]
fn corrupted_pairing_is_detected() {
    let n = 2;
    let eva = Corrupted(FrameEVA::coordinate(ctx(n)));
    let x = VertexElement::tensor(n, f(n, "x2"), 0);
    let y = VertexElement::tensor(n, RatFunc::one(), 0);
    let rep = check_vertex_axioms(&eva, &[x, y], &[f(n, "x1^2")]).unwrap();
    let res = rep.get(VertexAxiom::Pairing);
    assert!(!res.passed());
    assert!(matches!(res.witnesses[0].residual, Residual::Function(ref r) if !r.is_zero()));
}

#[test]
fn omega_v_is_an_ideal_for_brackets() {
    let mut smp = sampler(19, 3);
    let eva = sheared3();
    for _ in 0..4 {
        let x = random_element(&mut smp, 3);
        let a = VertexElement::form(smp.form(1));
        assert!(eva.eva_bracket(&x, &a).unwrap().is_form());
        assert!(eva.eva_bracket(&a, &x).unwrap().is_form());
        assert!(eva.star(&smp.poly(), &a).is_form());
    }
}

#[test]
fn truncated_examples() {
    let n = 2;
    let eva = sheared2();
    let view = TruncatedView::new(&eva);
    let v = VertexElement::new(form(n, "x1*d(x2)"), vec![f(n, "x2"), f(n, "x1^2")]).unwrap();
    let gv = Graded::One(v.clone());
    assert_eq!(truncated_ops(&view, OpKind::MinusOne, &view.vacuum(), &gv).unwrap(), gv);
    let w = Graded::One(VertexElement::tensor(n, f(n, "x1 + x2"), 1));
    let lhs = view.op(OpKind::Zero, &gv, &w).unwrap();
    let rhs = view.op(OpKind::Zero, &w, &gv).unwrap();
    let p = view.partial(&view.op(OpKind::One, &w, &gv).unwrap()).unwrap();
    match (lhs, rhs, p) {
        (Graded::One(l), Graded::One(r), Graded::One(p)) => assert_eq!(l.add(&r), p),
        _ => panic!("wrong degrees"),
    }
    assert!(matches!(
        view.op(OpKind::One, &view.vacuum(), &gv),
        Err(courant_core::Error::DegreeError(_))
    ));
    assert!(matches!(view.op(OpKind::MinusOne, &gv, &w), Err(courant_core::Error::DegreeError(_))));
    assert!(matches!(view.partial(&gv), Err(courant_core::Error::DegreeError(_))));
}

#[test]
fn truncated_axioms_sweep() {
    let n = 2;
    let mut smp = sampler(23, n);
    let elems: Vec<_> = (0..4).map(|_| random_element(&mut smp, n)).collect();
    let funcs: Vec<_> = (0..4).map(|_| smp.poly()).collect();
    for eva in [FrameEVA::coordinate(ctx(n)), sheared2()] {
        let rep = check_truncated_axioms(&TruncatedView::new(&eva), &funcs, &elems).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
        assert_eq!(rep.checked.len(), TruncatedAxiom::ALL.len());
    }
}

#[test]
fn minus_sign_in_v_minus_one_f_breaks_commutativity() {
    let n = 2;
    let eva = FrameEVA::coordinate(ctx(n));
    let view = TruncatedView::new(&eva);
    let v = VertexElement::tensor(n, f(n, "x2"), 0);
    let a = f(n, "x1^2");
    let literal = eva.star(&a, &v).sub(&eva.deriv(&eva.anchor(&v).apply(&a)));
    let x0a = eva.anchor(&v).apply(&a);
    let comm = literal.sub(&eva.deriv(&x0a));
    assert_ne!(eva.star(&a, &v), comm);
    let implemented = match view.op(OpKind::MinusOne, &Graded::One(v.clone()), &Graded::Zero(a.clone())).unwrap() {
        Graded::One(w) => w,
        _ => unreachable!(),
    };
    assert_eq!(eva.star(&a, &v), implemented.sub(&eva.deriv(&x0a)));
}

#[test]
fn difference_of_equal_algebroids_is_trivial() {
    for eva in [FrameEVA::coordinate(ctx(3)), sheared3()] {
        let diff = eva_difference(&eva, &eva).unwrap();
        assert!(diff.structure.is_exact());
        assert!(diff.structure.h().is_zero());
    }
}

#[test]
fn difference_is_exact_courant_and_embeds() {
    let n = 3;
    let v1 = FrameEVA::coordinate(ctx(n));
    assert!(eva_difference(&v1, &sheared3()).unwrap().structure.h().is_zero());
    let v2 = composite3();
    let diff = eva_difference(&v1, &v2).unwrap();
    let q = &diff.structure;
    assert_eq!(q.h(), &form(n, "4*d(x1)^d(x2)^d(x3)"));
    for (i, s) in diff.splitting.iter().enumerate() {
        assert_eq!(diff.anchor(s), VectorField::coordinate(n, i));
        for t in &diff.splitting {
            assert!(diff.pairing(s, t).unwrap().is_zero());
        }
    }
    let mut smp = sampler(29, n);
    let elems: Vec<_> = (0..4).map(|_| CourantElement::new(smp.form(1), courant_core::cartan::MatrixForm::zero(n, 0, 0), smp.vector()).unwrap()).collect();
    let funcs: Vec<_> = (0..4).map(|_| smp.poly()).collect();
    assert!(check_courant_axioms(q, &elems, &funcs).unwrap().passed());
    for k in 0..elems.len() {
        let (x, y) = (&elems[k], &elems[(k + 1) % elems.len()]);
        let (ex, ey) = (diff.embed(x), diff.embed(y));
        assert_eq!(diff.bracket(&ex, &ey).unwrap(), diff.embed(&q.bracket(x, y).unwrap()));
        assert_eq!(diff.pairing(&ex, &ey).unwrap(), q.pairing(x, y).unwrap());
        assert_eq!(diff.star(&funcs[k], &ex), diff.embed(&x.scale(&funcs[k])));
        assert_eq!(diff.anchor(&ex), x.xi);
    }
    let g = &funcs[0];
    assert_eq!(diff.embed(&q.deriv(g)), diff.form(&d(n, g)));

    let back = eva_difference(&v2, &v1).unwrap();
    assert_eq!(back.structure.h(), &-q.h());

    let mismatch = FrameEVA::coordinate(ctx(2));
    assert!(matches!(eva_difference(&v1, &mismatch), Err(courant_core::Error::ContextMismatch { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn sheared_frames_satisfy_axioms(seed in any::<u64>(), c in -2i64..=2) {
        let n = 2;
        let shift = format!("x2 + {}*x1^2", c);
        let back = format!("x2 - {}*x1^2", c);
        let eva = FrameEVA::from_automorphism(ctx(n), &chart(n, &["x1", &shift]), &chart(n, &["x1", &back])).unwrap();
        let mut smp = sampler(seed, n);
        let elems: Vec<_> = (0..3).map(|_| random_element(&mut smp, n)).collect();
        let funcs: Vec<_> = (0..3).map(|_| smp.poly()).collect();
        prop_assert!(check_vertex_axioms(&eva, &elems, &funcs).unwrap().passed());
        prop_assert!(check_truncated_axioms(&TruncatedView::new(&eva), &funcs, &elems).unwrap().passed());
    }
}
