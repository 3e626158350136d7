use courant_core::ring::{ring_arith, ArithOp, Context, RatFunc};
use courant_core::Error;
use proptest::prelude::*;

fn ctx() -> std::sync::Arc<Context> {
    Context::standard(3)
}

fn p(s: &str) -> RatFunc {
    ctx().parse(s).unwrap()
}

#[test]
fn arith_examples() {
    assert_eq!(ring_arith(&p("x1"), &p("x1"), ArithOp::Div).unwrap(), RatFunc::one());
    assert_eq!(ring_arith(&p("x1+x2"), &p("x1-x2"), ArithOp::Mul).unwrap(), p("x1^2-x2^2"));
    let s = ring_arith(&p("1/x1"), &p("1/x2"), ArithOp::Add).unwrap();
    assert_eq!(s.numer(), p("x1+x2").numer());
    assert_eq!(s.denom(), p("x1*x2").numer());
    assert_eq!(ring_arith(&p("x1"), &RatFunc::zero(), ArithOp::Div), Err(Error::DivisionByZero));
}

#[test]
fn partial_examples() {
    let c = ctx();
    assert_eq!(c.partial(&p("x1^2*x2"), "x1").unwrap(), p("2*x1*x2"));
    assert_eq!(c.partial(&p("1/x1"), "x1").unwrap(), p("-1/x1^2"));
    assert_eq!(c.partial(&p("x2"), "x1").unwrap(), RatFunc::zero());
    assert_eq!(c.partial(&p("x2"), "y"), Err(Error::UnknownVariable("y".into())));
}

#[test]
fn substitute_examples() {
    let c = Context::standard(2);
    let m = |a: &str, b: &str| vec![("x1".to_string(), c.parse(a).unwrap()), ("x2".to_string(), c.parse(b).unwrap())];
    assert_eq!(c.substitute(&c.parse("x2").unwrap(), &m("x1", "x2+x1^2")).unwrap(), c.parse("x2+x1^2").unwrap());
    assert_eq!(c.substitute(&c.parse("1/x1").unwrap(), &m("x1*x2", "x2")).unwrap(), c.parse("1/(x1*x2)").unwrap());
    assert_eq!(c.substitute(&c.parse("1/x1").unwrap(), &m("0", "x2")), Err(Error::DenominatorVanishes));
}

#[test]
fn gcd_reduction_is_canonical() {
    let a = p("(x1^2 - x2^2)/(x1 + x2)");
    assert_eq!(a, p("x1 - x2"));
    let b = p("(x1*x2 + x3*x2 - x1 - x3)/(x2^2 - 1)");
    assert_eq!(b, p("(x1 + x3)/(x2 + 1)"));
    let c = p("(2*x1 + 2)/(4*x1*x3 + 4*x3)");
    assert_eq!(c, p("1/(2*x3)"));
    assert_eq!(c.denom(), p("x3").numer());
}

#[test]
fn print_round_trip_examples() {
    let c = ctx();
    for s in ["x1^2 - 3/2*x1*x2 + 5", "(x1 + x2)/(x1*x2)", "-x1/x2^2", "-3/2", "1/(2*x1 + 1)", "0"] {
        let f = c.parse(s).unwrap();
        assert_eq!(c.parse(&c.print(&f)).unwrap(), f, "{}", s);
    }
    assert_eq!(c.print(&p("x2 + x1^2 - 3")), "x1^2 + x2 - 3");
}

fn poly_strategy() -> impl Strategy<Value = RatFunc> {
    prop::collection::vec((-3i64..=3, 0u16..3, 0u16..3, 0u16..2), 1..4).prop_map(|ts| {
        let c = Context::standard(3);
        let mut acc = RatFunc::zero();
        for (k, a, b, e) in ts {
            acc = acc + c.parse(&format!("{}*x1^{}*x2^{}*x3^{}", k, a, b, e)).unwrap();
        }
        acc
    })
}

fn linear_strategy() -> impl Strategy<Value = RatFunc> {
    prop::collection::vec((-3i64..=3, 0usize..4), 1..3).prop_map(|ts| {
        let mut acc = RatFunc::zero();
        for (k, v) in ts {
            let t = if v == 3 { RatFunc::one() } else { RatFunc::var(v) };
            acc = acc + t.scale_int(k);
        }
        acc
    })
}

fn ratfunc_strategy() -> impl Strategy<Value = RatFunc> {
    (poly_strategy(), poly_strategy()).prop_map(|(n, d)| if d.is_zero() { n } else { n / d })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(a in ratfunc_strategy(), b in ratfunc_strategy(), c in ratfunc_strategy()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn leibniz_rule(a in ratfunc_strategy(), b in ratfunc_strategy(), v in 0usize..3) {
        prop_assert_eq!((&a * &b).partial(v), &(&a.partial(v) * &b) + &(&a * &b.partial(v)));
    }

    #[test]
    fn substitute_is_homomorphism(a in ratfunc_strategy(), b in ratfunc_strategy(),
                                  i1 in linear_strategy(), i2 in linear_strategy(), i3 in linear_strategy()) {
        let imgs = [i1, i2, i3];
        if let (Ok(sa), Ok(sb), Ok(sab)) = (a.substitute(&imgs), b.substitute(&imgs), (&a * &b).substitute(&imgs)) {
            prop_assert_eq!(sab, &sa * &sb);
        }
    }

    #[test]
    fn canonical_form_unique(a in ratfunc_strategy(), b in ratfunc_strategy()) {
        let s = &(&a * &b) / &(if b.is_zero() { RatFunc::one() } else { b.clone() });
        let expected = if b.is_zero() { RatFunc::zero() } else { a.clone() };
        prop_assert_eq!(s, expected);
    }

    #[test]
    fn print_parse_round_trip(a in ratfunc_strategy()) {
        let c = Context::standard(3);
        prop_assert_eq!(c.parse(&c.print(&a)).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn common_factor_cancels(g in poly_strategy(), a in poly_strategy(), b in poly_strategy()) {
        prop_assume!(!g.is_zero() && !b.is_zero());
        let q = &(&g * &a) / &(&g * &b);
        prop_assert_eq!(q, &a / &b);
    }
}
