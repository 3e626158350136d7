use courant_core::cartan::*;
use courant_core::ring::{Context, RatFunc};
use courant_core::sample::Sampler;
use proptest::prelude::*;

fn ctx(n: usize) -> std::sync::Arc<Context> {
    Context::standard(n)
}

fn form(n: usize, s: &str) -> DiffForm {
    ctx(n).parse_form(s).unwrap()
}

fn f(n: usize, s: &str) -> RatFunc {
    ctx(n).parse(s).unwrap()
}

fn vf(n: usize, comps: &[&str]) -> VectorField {
    parse_vector(&ctx(n), comps).unwrap()
}

fn d(n: usize, i: usize) -> VectorField {
    VectorField::coordinate(n, i)
}

fn e(r: usize, i: usize, j: usize, n: usize) -> MatrixForm {
    MatrixForm::elementary(n, r, i, j)
}

#[test]
fn wedge_examples() {
    assert_eq!(form(2, "d(x1)").wedge(&form(2, "d(x2)")), form(2, "d(x1)^d(x2)"));
    assert!(form(2, "d(x1)").wedge(&form(2, "d(x1)")).is_zero());
    assert_eq!(form(2, "x1*d(x2)").wedge(&form(2, "x2*d(x1)")), form(2, "-x1*x2*d(x1)^d(x2)"));
    assert!(matches!(
        wedge(&form(2, "d(x1)"), &form(3, "d(x2)")),
        Err(courant_core::Error::ContextMismatch { .. })
    ));
}

#[test]
fn ext_d_examples() {
    assert_eq!(form(2, "x1").ext_d(), form(2, "d(x1)"));
    assert!(form(2, "x1*d(x2) + x2*d(x1)").ext_d().is_zero());
    assert_eq!(form(4, "x1*d(x2)^d(x3)^d(x4)").ext_d(), form(4, "d(x1)^d(x2)^d(x3)^d(x4)"));
}

#[test]
fn interior_examples() {
    let a = form(3, "d(x1)^d(x2)");
    assert_eq!(a.interior(&d(3, 0)), form(3, "d(x2)"));
    assert_eq!(a.interior(&d(3, 1)), form(3, "-d(x1)"));
    assert!(a.interior(&d(3, 2)).is_zero());
    assert_eq!(a.eval(&[d(3, 0), d(3, 1)]), RatFunc::one());
}

#[test]
fn lie_derivative_examples() {
    assert_eq!(form(2, "x1*d(x2)").lie_derivative(&d(2, 0)), form(2, "d(x2)"));
    let xi = vf(2, &["x1^2", "x2"]);
    let g = form(2, "x1*x2");
    assert_eq!(g.lie_derivative(&xi).as_function(), xi.apply(&g.as_function()));
    // (dι+ιd) by hand: ι(dx1) = x1, d(x1) = dx1, d(dx1) = 0
    assert_eq!(form(2, "d(x1)").lie_derivative(&vf(2, &["x1", "0"])), form(2, "d(x1)"));
}

#[test]
fn vf_bracket_examples() {
    assert!(d(2, 0).bracket(&d(2, 1)).is_zero());
    assert_eq!(d(2, 0).bracket(&vf(2, &["0", "x1"])), d(2, 1));
    let got = vf(2, &["0", "x1"]).bracket(&vf(2, &["x2", "0"]));
    assert_eq!(got, vf(2, &["x1", "-x2"]));
    // action on test functions
    let (a, b) = (vf(2, &["0", "x1"]), vf(2, &["x2", "0"]));
    for t in ["x1^2*x2", "x2^3 + x1", "1/(x1 + x2)"] {
        let t = f(2, t);
        assert_eq!(got.apply(&t), &a.apply(&b.apply(&t)) - &b.apply(&a.apply(&t)));
    }
}

#[test]
fn pullback_examples() {
    let c = ctx(2);
    let phi = ChartMap::new(2, vec![f(2, "x1"), f(2, "x2 + x1^2")]);
    assert_eq!(phi.pullback(&form(2, "d(x2)")).unwrap(), form(2, "d(x2) + 2*x1*d(x1)"));
    let psi = ChartMap::new(2, vec![f(2, "x1*x2"), f(2, "x2")]);
    let got = psi.pullback(&form(2, "d(x1)/x1")).unwrap();
    // d of the substituted function, divided by it
    let sub = f(2, "x1*x2");
    let oracle = DiffForm::function(2, sub.clone()).ext_d().scale(&sub.recip().unwrap());
    assert_eq!(got, oracle);
    assert_eq!(c.print_form(&got), "1/x1*d(x1) + 1/x2*d(x2)");
    let a = form(2, "x1*x2*d(x1) + x2^2*d(x1)^d(x2)");
    assert_eq!(ChartMap::identity(2).pullback(&a).unwrap(), a);
}

#[test]
fn pullback_denominator_vanishes() {
    let phi = ChartMap::new(2, vec![f(2, "0"), f(2, "x2")]);
    assert!(matches!(phi.pullback(&form(2, "d(x2)/x1")), Err(courant_core::Error::DenominatorVanishes)));
}

#[test]
fn matrix_pairing_examples() {
    let n = 2;
    let a = MatrixForm::tensor(&form(n, "d(x1)"), &e(2, 0, 1, n)).unwrap();
    let b = MatrixForm::tensor(&form(n, "d(x2)"), &e(2, 1, 0, n)).unwrap();
    assert_eq!(mat_wedge_pair(&a, &b).unwrap(), form(n, "d(x1)^d(x2)"));
    let a = MatrixForm::tensor(&form(n, "d(x1)"), &MatrixForm::identity(n, 2)).unwrap();
    let b = MatrixForm::tensor(&form(n, "d(x2)"), &MatrixForm::identity(n, 2)).unwrap();
    assert_eq!(mat_wedge_pair(&a, &b).unwrap(), form(n, "2*d(x1)^d(x2)"));
    assert!(matches!(
        mat_wedge_pair(&a, &MatrixForm::identity(n, 3)),
        Err(courant_core::Error::RankMismatch { .. })
    ));
}

#[test]
fn matrix_self_pairing_of_one_form_vanishes() {
    let mut s = Sampler::new(11, 3);
    for _ in 0..10 {
        let a = s.matrix_form(2, 1);
        // expand Σ_ij a_ij ∧ a_ji and cancel (ij) against (ji)
        let mut acc = DiffForm::zero(3);
        for i in 0..2 {
            for j in 0..2 {
                acc = &acc + &a.entry(i, j).wedge(a.entry(j, i));
            }
        }
        assert!(acc.is_zero());
        assert!(mat_wedge_pair(&a, &a).unwrap().is_zero());
    }
}

#[test]
fn matrix_bracket_examples() {
    let n = 2;
    let m = MatrixForm::from_functions(n, vec![vec![f(n, "1"), f(n, "x2")], vec![f(n, "3"), f(n, "x1")]]);
    let a = MatrixForm::tensor(&form(n, "d(x1)"), &m).unwrap();
    assert!(a.bracket(&a).is_zero());

    let a = MatrixForm::tensor(&form(n, "d(x1)"), &e(2, 0, 1, n)).unwrap();
    let b = MatrixForm::tensor(&form(n, "d(x2)"), &e(2, 1, 0, n)).unwrap();
    let br = mat_bracket(&a, &b).unwrap();
    let (x, y) = (d(n, 0), d(n, 1));
    // [A,B](ξ,η) = [A(ξ),B(η)] − [A(η),B(ξ)] for 1-forms
    let comm = |p: &MatrixForm, q: &MatrixForm| p.mul(q).sub(&q.mul(p));
    let oracle = comm(&a.eval(&[x.clone()]), &b.eval(&[y.clone()])).sub(&comm(&a.eval(&[y.clone()]), &b.eval(&[x.clone()])));
    assert_eq!(br.eval(&[x, y]), oracle);
    assert_eq!(oracle, e(2, 0, 0, n).sub(&e(2, 1, 1, n)));

    let a = MatrixForm::from_rows(n, vec![vec![form(n, "x1*d(x2)")]]).unwrap();
    let b = MatrixForm::from_rows(n, vec![vec![form(n, "d(x1) + x2*d(x2)")]]).unwrap();
    // scalar entries commute, so the graded commutator of odd forms cancels
    let (x, y) = (a.entry(0, 0), b.entry(0, 0));
    assert_eq!(&x.wedge(y) + &y.wedge(x), DiffForm::zero(n));
    assert!(a.bracket(&b).is_zero());
}

#[test]
fn covariant_d_examples() {
    let n = 2;
    let a = MatrixForm::from_rows(n, vec![vec![form(n, "x1*x2"), form(n, "x2")], vec![form(n, "0"), form(n, "x1^2")]]).unwrap();
    assert_eq!(covariant_d(&MatrixForm::zero(n, 2, 1), &a).unwrap(), a.ext_d());
    let m = e(2, 0, 1, n);
    let omega = MatrixForm::tensor(&form(n, "d(x1)"), &m).unwrap();
    let c = MatrixForm::from_functions(n, vec![vec![f(n, "1"), f(n, "2")], vec![f(n, "3"), f(n, "5")]]);
    let comm = m.mul(&c).sub(&c.mul(&m));
    assert_eq!(covariant_d(&omega, &c).unwrap(), MatrixForm::tensor(&form(n, "d(x1)"), &comm).unwrap());
}

#[test]
fn bianchi_identity() {
    let mut s = Sampler::new(5, 4);
    for _ in 0..5 {
        let omega = s.matrix_form(2, 1);
        let curv = omega.ext_d().add(&omega.mul(&omega));
        assert!(covariant_d(&omega, &curv).unwrap().is_zero());
    }
}

#[test]
fn form_literal_round_trip() {
    let c = ctx(3);
    for s in ["0", "x1*d(x2)", "-d(x1)^d(x3)", "(x1 + x2)*d(x1) - 3/2*x2*d(x1)^d(x2)", "x1/x2*d(x3)", "x1^2 + d(x2)"] {
        let a = c.parse_form(s).unwrap();
        assert_eq!(c.parse_form(&c.print_form(&a)).unwrap(), a, "{}", s);
    }
    assert_eq!(c.print_form(&form(3, "d(x3)*d(x1)")), "-d(x1)^d(x3)");
    assert!(c.parse_form("d(x1)^2").is_err());
    assert!(c.parse_form("x1/d(x2)").is_err());
}

fn cfg() -> ProptestConfig {
    ProptestConfig { cases: 24, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn d_squared_and_leibniz(seed in any::<u64>(), p in 0usize..3, q in 0usize..2) {
        let mut s = Sampler::new(seed, 4);
        let a = s.form(p);
        let b = s.form(q);
        prop_assert!(a.ext_d().ext_d().is_zero());
        let lhs = a.wedge(&b).ext_d();
        let sign = if p % 2 == 0 { 1 } else { -1 };
        let rhs = &a.ext_d().wedge(&b) + &a.wedge(&b.ext_d()).scale_int(sign);
        prop_assert_eq!(lhs, rhs);
        let sign = if (p * q) % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(a.wedge(&b), b.wedge(&a).scale_int(sign));
    }

    #[test]
    fn interior_anticommutes(seed in any::<u64>(), p in 1usize..4) {
        let mut s = Sampler::new(seed, 4);
        let a = s.form(p);
        let (xi, eta) = (s.vector(), s.vector());
        prop_assert!(a.interior(&xi).interior(&xi).is_zero());
        prop_assert_eq!(a.interior(&xi).interior(&eta), -a.interior(&eta).interior(&xi));
    }

    #[test]
    fn lie_derivative_matches_components(seed in any::<u64>()) {
        let mut s = Sampler::new(seed, 3);
        let a = s.form(1);
        let xi = s.vector();
        let got = a.lie_derivative(&xi);
        for i in 0..3 {
            let mut want = RatFunc::zero();
            for j in 0..3 {
                want = &want + &(xi.component(j) * &a.coefficient(1 << i).partial(j));
                want = &want + &(&a.coefficient(1 << j) * &xi.component(j).partial(i));
            }
            prop_assert_eq!(got.coefficient(1 << i), want);
        }
    }

    #[test]
    fn vf_bracket_is_lie(seed in any::<u64>()) {
        let mut s = Sampler::new(seed, 3);
        let (a, b, c) = (s.vector(), s.vector(), s.vector());
        prop_assert_eq!(a.bracket(&b), b.bracket(&a).neg());
        let jac = a.bracket(&b.bracket(&c)).add(&b.bracket(&c.bracket(&a))).add(&c.bracket(&a.bracket(&b)));
        prop_assert!(jac.is_zero());
        let t = s.poly();
        prop_assert_eq!(a.bracket(&b).apply(&t), &a.apply(&b.apply(&t)) - &b.apply(&a.apply(&t)));
    }

    #[test]
    fn pullback_is_functorial(seed in any::<u64>(), p in 0usize..3) {
        let mut s = Sampler::new(seed, 3);
        let x = |i| RatFunc::var(i);
        let phi = ChartMap::new(3, vec![x(0), &x(1) + &(&x(0) * &x(0)), x(2)]);
        let q = s.poly();
        let psi = ChartMap::new(3, vec![x(0), x(1), &x(2) + &q.substitute(&[x(0), x(1), RatFunc::zero()]).unwrap()]);
        let a = s.form(p);
        let b = s.form(1);
        let lhs = phi.compose(&psi).unwrap().pullback(&a).unwrap();
        let rhs = psi.pullback(&phi.pullback(&a).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(phi.pullback(&a.ext_d()).unwrap(), phi.pullback(&a).unwrap().ext_d());
        prop_assert_eq!(phi.pullback(&a.wedge(&b)).unwrap(), phi.pullback(&a).unwrap().wedge(&phi.pullback(&b).unwrap()));
    }

    #[test]
    fn trace_pairing_is_invariant(seed in any::<u64>(), p in 0usize..2, q in 0usize..3) {
        let mut s = Sampler::new(seed, 4);
        let omega = s.matrix_form(2, 1);
        let a = s.matrix_form(2, p);
        let b = s.matrix_form(2, q);
        let lhs = a.pair(&b).ext_d();
        let sign = if p % 2 == 0 { 1 } else { -1 };
        let rhs = &covariant_d(&omega, &a).unwrap().pair(&b) + &a.pair(&covariant_d(&omega, &b).unwrap()).scale_int(sign);
        prop_assert_eq!(lhs, rhs);
        let c = s.matrix_form(2, 1);
        let sign = if (p % 2) == 1 { -1 } else { 1 };
        let ad = &c.bracket(&a).pair(&b) + &a.pair(&c.bracket(&b)).scale_int(sign);
        prop_assert!(ad.is_zero());
        let sign = if (p * q) % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(a.pair(&b), b.pair(&a).scale_int(sign));
    }

    #[test]
    fn form_print_parse(seed in any::<u64>(), p in 0usize..4) {
        let c = ctx(4);
        let mut s = Sampler::new(seed, 4);
        let a = &s.form(p) + &s.form(1);
        prop_assert_eq!(c.parse_form(&c.print_form(&a)).unwrap(), a);
    }
}
