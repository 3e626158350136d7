//! The lemma suite: randomized exact checks of every identity the engine implements.

use std::collections::BTreeMap;
use std::sync::Arc;

use courant_core::algebroid::Connection;
use courant_core::cartan::{inverse, ChartMap, DiffForm, MatrixForm, VectorField};
use courant_core::cech::{
    ch2_cocycle, cotangent_bundle, eva_class_cocycle, induced_connections, pontryagin_cocycle, BundleCocycle, CoverSpec, Seed,
};
use courant_core::courant::*;
use courant_core::ring::{Context, RatFunc};
use courant_core::sample::Sampler;
use courant_core::vertex::{
    check_truncated_axioms, check_vertex_axioms, eva_difference, FrameEVA, Graded, TruncatedView, VertexElement, VertexReport,
};
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::report::Check;

/// Deliberate sign corruptions used as negative controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    ThreeConnsSign,
    TransgressionSign,
    ExpBTwistSign,
}

impl Mutation {
    pub const ALL: [Mutation; 3] = [Mutation::ThreeConnsSign, Mutation::TransgressionSign, Mutation::ExpBTwistSign];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::ThreeConnsSign => "three-conns-sign",
            Mutation::TransgressionSign => "transgression-sign",
            Mutation::ExpBTwistSign => "exp-b-twist-sign",
        }
    }

    pub fn parse(s: &str) -> Option<Mutation> {
        Mutation::ALL.into_iter().find(|m| m.name() == s)
    }

    /// The lemma this mutation is expected to break.
    pub fn target(self) -> &'static str {
        match self {
            Mutation::ThreeConnsSign => "three-conns",
            Mutation::TransgressionSign => "cs-transgression",
            Mutation::ExpBTwistSign => "exp-b-iff-closed",
        }
    }
}

pub struct LemmaEnv {
    pub seed: u64,
    pub samples: usize,
    pub mutation: Option<Mutation>,
}

impl LemmaEnv {
    fn sampler(&self, n: usize) -> Sampler {
        Sampler::new(self.seed, n)
    }

    fn mutated(&self, m: Mutation) -> bool {
        self.mutation == Some(m)
    }
}

type Outcome = Result<(), String>;
type Lemma = fn(&LemmaEnv) -> Outcome;

pub const LEMMAS: &[(&str, Lemma)] = &[
    ("courant-axioms-admissible", courant_axioms_admissible),
    ("courant-axioms-inadmissible", courant_axioms_inadmissible),
    ("jacobiator-dual-path", jacobiator_dual_path),
    ("exp-b-iff-closed", exp_b_iff_closed),
    ("phi-change-morphism", phi_change_morphism),
    ("three-conns", three_conns),
    ("cs-transgression", cs_transgression),
    ("c-rel-skew", c_rel_skew),
    ("baer-round-trip", baer_round_trip),
    ("cancellation-flat", cancellation_flat),
    ("vertex-axioms", vertex_axioms),
    ("truncated-axioms", truncated_axioms),
    ("eva-difference", eva_difference_axioms),
    ("cocycle-closures", cocycle_closures),
];

pub fn lemma_names() -> Vec<&'static str> {
    LEMMAS.iter().map(|(n, _)| *n).collect()
}

/// Runs the selected lemmas (all when `selector` is `None`), in suite order.
pub fn verify_lemmas(
    selector: Option<&[String]>,
    seed: u64,
    samples: usize,
    mutation: Option<Mutation>,
    parallel: bool,
) -> Result<Vec<Check>, CliError> {
    let chosen: Vec<(&str, Lemma)> = match selector {
        None => LEMMAS.to_vec(),
        Some(names) => names
            .iter()
            .map(|n| {
                LEMMAS
                    .iter()
                    .find(|(m, _)| m == n)
                    .copied()
                    .ok_or_else(|| CliError::Validation(format!("unknown lemma `{n}`")))
            })
            .collect::<Result<_, _>>()?,
    };
    let run = |(name, f): &(&str, Lemma)| {
        let env = LemmaEnv { seed: crate::sub_seed(seed, name), samples: samples.max(1), mutation };
        Check::from_result(*name, f(&env))
    };
    Ok(if parallel { chosen.par_iter().map(run).collect() } else { chosen.iter().map(run).collect() })
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

fn err(e: courant_core::Error) -> String {
    format!("engine error: {e}")
}

fn random_element(s: &mut Sampler, r: usize) -> CourantElement {
    CourantElement::new(s.form(1), s.matrix(r), s.vector()).expect("sampled shapes agree")
}

fn random_connection(s: &mut Sampler, r: usize) -> Connection {
    Connection::new(s.matrix_form(r, 1)).expect("sampled 1-forms")
}

fn admissible(s: &mut Sampler, r: usize) -> Result<CourantStructure, String> {
    let conn = random_connection(s, r);
    let h = admissible_h(&conn).map_err(err)?;
    CourantStructure::extension(conn, h).map_err(err)
}

fn field(r: usize, xi: VectorField) -> CourantElement {
    CourantElement::field(r, xi)
}

fn residual<E>(r: &Residual<E>, ctx: &Context, show: impl Fn(&E) -> String) -> String {
    match r {
        Residual::Element(e) => show(e),
        Residual::Function(f) => ctx.print(f),
        Residual::Field(v) => ctx.print_vector(v),
    }
}

fn vertex_lit(ctx: &Context, v: &VertexElement) -> String {
    let c: Vec<String> = v.coeffs.iter().map(|f| ctx.print(f)).collect();
    format!("({}; [{}])", ctx.print_form(&v.alpha), c.join(", "))
}

/// The first failing sample of a Courant axiom report, with its inputs.
fn courant_witness(
    ctx: &Context,
    report: &AxiomReport<CourantElement>,
    axioms: &[Axiom],
    elems: &[CourantElement],
    funcs: &[RatFunc],
) -> Outcome {
    for a in axioms {
        if let Some(w) = report.get(*a).witnesses.first() {
            let k = w.sample;
            let l = elems.len();
            return Err(format!(
                "axiom {} on q={} q1={} q2={} f={}: residual {}",
                a.name(),
                elems[k % l].display(ctx),
                elems[(k + 1) % l].display(ctx),
                elems[(k + 2) % l].display(ctx),
                ctx.print(&funcs[k % funcs.len()]),
                residual(&w.residual, ctx, |e| e.display(ctx))
            ));
        }
    }
    Ok(())
}

fn vertex_witness(ctx: &Context, report: &VertexReport<VertexElement>, elems: &[VertexElement], funcs: &[RatFunc]) -> Outcome {
    for r in &report.results {
        if let Some(w) = r.witnesses.first() {
            let k = w.sample;
            let l = elems.len();
            return Err(format!(
                "axiom {} on v={} v1={} v2={} f={} g={}: residual {}",
                r.axiom.name(),
                vertex_lit(ctx, &elems[k % l]),
                vertex_lit(ctx, &elems[(k + 1) % l]),
                vertex_lit(ctx, &elems[(k + 2) % l]),
                ctx.print(&funcs[k % funcs.len()]),
                ctx.print(&funcs[(k + 1) % funcs.len()]),
                residual(&w.residual, ctx, |e| vertex_lit(ctx, e))
            ));
        }
    }
    Ok(())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn courant_axioms_admissible(env: &LemmaEnv) -> Outcome {
    let n = 4;
    let ctx = Context::standard(n);
    let mut smp = env.sampler(n);
    let s = admissible(&mut smp, 2)?;
    let elems: Vec<_> = (0..env.samples).map(|_| random_element(&mut smp, 2)).collect();
    let funcs: Vec<_> = (0..env.samples).map(|_| smp.poly()).collect();
    let report = check_courant_axioms(&s, &elems, &funcs).map_err(err)?;
    courant_witness(&ctx, &report, &Axiom::ALL, &elems, &funcs)
}

/// `H` plus a non-closed 3-form.
fn inadmissible(smp: &mut Sampler, n: usize) -> Result<CourantStructure, String> {
    let s = admissible(smp, 2)?;
    let ctx = Context::standard(n);
    let bump = ctx.parse_form("x1*d(x2)^d(x3)^d(x4)").map_err(err)?;
    let h = &(s.h() + &smp.form(3)) + &bump;
    CourantStructure::extension(s.connection_or_flat(), h).map_err(err)
}

fn courant_axioms_inadmissible(env: &LemmaEnv) -> Outcome {
    let n = 4;
    let ctx = Context::standard(n);
    let mut smp = env.sampler(n);
    let s = inadmissible(&mut smp, n)?;
    ensure(!s.is_admissible(), || "perturbed structure is still admissible".into())?;
    let elems: Vec<_> = (0..env.samples).map(|_| random_element(&mut smp, 2)).collect();
    let funcs: Vec<_> = (0..env.samples).map(|_| smp.poly()).collect();
    let report = check_courant_axioms(&s, &elems, &funcs).map_err(err)?;
    let compat: Vec<Axiom> = Axiom::ALL.into_iter().filter(|a| a.is_compatibility()).collect();
    courant_witness(&ctx, &report, &compat, &elems, &funcs)?;
    let coords = VectorField::coordinates(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let jac = jacobiator(&s, &field(2, coords[i].clone()), &field(2, coords[j].clone()), &field(2, coords[k].clone()))
                    .map_err(err)?;
                let pred = CourantElement::form(2, s.jacobiator_predicted(&coords[i], &coords[j], &coords[k]));
                ensure(jac == pred, || {
                    format!("jacobiator on (d/d{}, d/d{}, d/d{}) is {}, predicted {}", ctx.vars()[i], ctx.vars()[j], ctx.vars()[k], jac.display(&ctx), pred.display(&ctx))
                })?;
            }
        }
    }
    Ok(())
}

fn jacobiator_dual_path(env: &LemmaEnv) -> Outcome {
    let n = 4;
    let ctx = Context::standard(n);
    let mut smp = env.sampler(n);
    let s = inadmissible(&mut smp, n)?;
    for _ in 0..env.samples.min(5) {
        let (x, y, z) = (smp.vector(), smp.vector(), smp.vector());
        let jac = jacobiator(&s, &field(2, x.clone()), &field(2, y.clone()), &field(2, z.clone())).map_err(err)?;
        let pred = CourantElement::form(2, s.jacobiator_predicted(&x, &y, &z));
        ensure(jac == pred, || {
            format!(
                "fields {} {} {}: bracket path {} vs closed form {}",
                ctx.print_vector(&x),
                ctx.print_vector(&y),
                ctx.print_vector(&z),
                jac.display(&ctx),
                pred.display(&ctx)
            )
        })?;
    }
    Ok(())
}

fn exp_b_iff_closed(env: &LemmaEnv) -> Outcome {
    let n = 3;
    let ctx = Context::standard(n);
    let mut smp = env.sampler(n);
    let s = admissible(&mut smp, 2)?;
    let coords = VectorField::coordinates(n);
    for t in 0..env.samples {
        let b = if t % 2 == 0 { smp.form(1).ext_d() } else { smp.form(2) };
        let db = b.ext_d();
        let (x, y) = (random_element(&mut smp, 2), random_element(&mut smp, 2));
        let show = || format!("B={} x={} y={}", ctx.print_form(&b), x.display(&ctx), y.display(&ctx));
        ensure(s.pairing(&exp_b(&b, &x), &exp_b(&b, &y)).map_err(err)? == s.pairing(&x, &y).map_err(err)?, || {
            format!("pairing not preserved: {}", show())
        })?;
        let defect = exp_b_bracket_defect(&s, &b, &x, &y).map_err(err)?;
        let mut twist = db.interior(&x.xi).interior(&y.xi);
        if env.mutated(Mutation::ExpBTwistSign) {
            twist = -twist;
        }
        ensure(defect == CourantElement::form(2, twist.clone()), || {
            format!("defect {} differs from the dB-twist {}: {}", defect.display(&ctx), ctx.print_form(&twist), show())
        })?;
        let mut some_defect = false;
        for i in 0..n {
            for j in 0..n {
                let d = exp_b_bracket_defect(&s, &b, &field(2, coords[i].clone()), &field(2, coords[j].clone())).map_err(err)?;
                some_defect |= !d.is_zero();
            }
        }
        ensure(some_defect != db.is_zero(), || format!("bracket preserved iff closed fails for B={}", ctx.print_form(&b)))?;
    }
    Ok(())
}

fn phi_change_morphism(env: &LemmaEnv) -> Outcome {
    let n = 3;
    let ctx = Context::standard(n);
    let mut smp = env.sampler(n);
    for _ in 0..env.samples.min(5) {
        let conn = random_connection(&mut smp, 2);
        let conn2 = random_connection(&mut smp, 2);
        let s = CourantStructure::extension(conn.clone(), smp.form(3)).map_err(err)?;
        let s2 = change_of_connection(&s, &conn2).map_err(err)?;
        let (x, y) = (random_element(&mut smp, 2), random_element(&mut smp, 2));
        let px = phi_change(&s, &conn2, &x).map_err(err)?;
        let py = phi_change(&s, &conn2, &y).map_err(err)?;
        let show = || format!("x={} y={}", x.display(&ctx), y.display(&ctx));
        ensure(px.xi == x.xi, || format!("anchor not preserved: {}", show()))?;
        ensure(s.pairing(&px, &py).map_err(err)? == s2.pairing(&x, &y).map_err(err)?, || format!("pairing: {}", show()))?;
        let lhs = s.bracket(&px, &py).map_err(err)?;
        let rhs = phi_change(&s, &conn2, &s2.bracket(&x, &y).map_err(err)?).map_err(err)?;
        ensure(lhs == rhs, || format!("bracket: {} residual {}", show(), lhs.sub(&rhs).display(&ctx)))?;
        ensure(phi_map(&conn2, &conn, &px).map_err(err)? == x, || format!("inverse: {}", show()))?;
    }
    Ok(())
}

fn three_conns(env: &LemmaEnv) -> Outcome {
    let n = 3;
    let ctx = Context::standard(n);
    let mut smp = env.sampler(n);
    let coef = if env.mutated(Mutation::ThreeConnsSign) { -half() } else { half() };
    for _ in 0..env.samples {
        let (c0, c1, c2) = (random_connection(&mut smp, 2), random_connection(&mut smp, 2), random_connection(&mut smp, 2));
        let a = c0.difference(&c1).map_err(err)?;
        let a2 = c1.difference(&c2).map_err(err)?;
        let expected = a.pair(&a2).scale_q(&coef);
        let b = triple_composition(&c0, &c1, &c2).map_err(err)?;
        ensure(b.b == expected, || {
            format!(
                "A={} A'={}: composite B={} expected {}",
                ctx.print_form(&a.trace()),
                ctx.print_form(&a2.trace()),
                ctx.print_form(&b.b),
                ctx.print_form(&expected)
            )
        })?;
        let back = triple_composition(&c0, &c1, &c0).map_err(err)?;
        ensure(back.b.is_zero(), || format!("degenerate composite is exp({})", ctx.print_form(&back.b)))?;
    }
    Ok(())
}

fn cs_transgression(env: &LemmaEnv) -> Outcome {
    let n = 4;
    let ctx = Context::standard(n);
    let mut smp = env.sampler(n);
    for _ in 0..env.samples {
        let c1 = random_connection(&mut smp, 2);
        let c2 = random_connection(&mut smp, 2);
        let lhs = cs_form(&c1, &c2).map_err(err)?.ext_d();
        let (p1, p2) = (pontryagin_form(&c1), pontryagin_form(&c2));
        let rhs = if env.mutated(Mutation::TransgressionSign) { &p1 - &p2 } else { &p2 - &p1 };
        ensure(lhs == rhs, || format!("dP = {} but P(c2) - P(c1) = {}", ctx.print_form(&lhs), ctx.print_form(&rhs)))?;
    }
    Ok(())
}

fn c_rel_skew(env: &LemmaEnv) -> Outcome {
    let n = 3;
    let ctx = Context::standard(n);
    let mut smp = env.sampler(n);
    for _ in 0..env.samples.min(5) {
        let conn = random_connection(&mut smp, 2);
        let h = smp.form(3);
        let s = CourantStructure::extension(conn.clone(), h.clone()).map_err(err)?;
        let alpha = smp.form(2);
        let (g, rel) = curvature_courant(&s, &Lift::canonical(&s).shifted(&alpha)).map_err(err)?;
        ensure(g == conn.curvature(), || "curvature of the lift differs from c(∇)".into())?;
        let expected = &h + &alpha.ext_d();
        ensure(rel == expected, || format!("relative curvature {} expected {}", ctx.print_form(&rel), ctx.print_form(&expected)))?;
        let q = CourantStructure::exact(n, h.clone()).map_err(err)?;
        let bent = Lift::from_fn(n, |xi| {
            let mut a = DiffForm::zero(n);
            a.add_term(1, xi.component(1).clone());
            a.add_term(2, xi.component(0).clone());
            CourantElement { alpha: a, a: MatrixForm::zero(n, 0, 0), xi: xi.clone() }
        })
        .map_err(err)?;
        let fixed = isotropize(&q, &bent).map_err(err)?;
        ensure(fixed.is_isotropic(&q).map_err(err)?, || "isotropized lift is not isotropic".into())?;
        curvature_courant(&q, &fixed).map_err(err)?;
    }
    Ok(())
}

fn baer_round_trip(env: &LemmaEnv) -> Outcome {
    let n = 3;
    let ctx = Context::standard(n);
    let mut smp = env.sampler(n);
    let s = admissible(&mut smp, 2)?;
    for _ in 0..env.samples.min(5) {
        let (h1, h2) = (smp.form(3), smp.form(3));
        let q1 = CourantStructure::exact(n, h1.clone()).map_err(err)?;
        let q2 = CourantStructure::exact(n, h2.clone()).map_err(err)?;
        let sum = baer_sum(&q1, &q2).map_err(err)?;
        ensure(sum == CourantStructure::exact(n, &h1 + &h2).map_err(err)?, || {
            format!("Q_H1 + Q_H2 differs from Q_(H1+H2) for H1={} H2={}", ctx.print_form(&h1), ctx.print_form(&h2))
        })?;
        let back = courant_difference(&baer_sum(&q1, &s).map_err(err)?, &s).map_err(err)?;
        ensure(back == q1, || format!("difference after sum returns H={} for H={}", ctx.print_form(back.h()), ctx.print_form(&h1)))?;
        let twisted = courant_difference(&s.twist_by_h(&h2).map_err(err)?, &s).map_err(err)?;
        ensure(twisted.h() == &h2, || format!("twist by {} differs by {}", ctx.print_form(&h2), ctx.print_form(twisted.h())))?;
    }
    Ok(())
}

fn cancellation_flat(env: &LemmaEnv) -> Outcome {
    let n = 3;
    let ctx = Context::standard(n);
    let mut smp = env.sampler(n);
    for _ in 0..env.samples.min(5) {
        let s = admissible(&mut smp, 2)?;
        let d = courant_difference(&s, &s).map_err(err)?;
        ensure(d.is_exact() && d.h().is_zero(), || format!("A - A has H={}", ctx.print_form(d.h())))?;
        let moved = change_of_connection(&s, &random_connection(&mut smp, 2)).map_err(err)?;
        let d = courant_difference(&moved, &s).map_err(err)?;
        ensure(d.h().is_zero(), || format!("difference across a change of connection has H={}", ctx.print_form(d.h())))?;
    }
    Ok(())
}

fn chart(ctx: &Context, images: &[&str]) -> ChartMap {
    ChartMap::new(ctx.dim(), images.iter().map(|s| ctx.parse(s).expect("fixture literal")).collect())
}

fn sheared(n: usize) -> FrameEVA {
    let ctx = Context::standard(n);
    let (phi, psi) = match n {
        2 => (chart(&ctx, &["x1", "x2 + x1^2"]), chart(&ctx, &["x1", "x2 - x1^2"])),
        _ => (
            chart(&ctx, &["x1", "x2 + x1^2", "x3 + x1*x2"]),
            chart(&ctx, &["x1", "x2 - x1^2", "x3 - x1*x2 + x1^3"]),
        ),
    };
    FrameEVA::from_automorphism(ctx, &phi, &psi).expect("fixture automorphism")
}

fn composite3() -> FrameEVA {
    let ctx = Context::standard(3);
    let m = |v: &[&str]| chart(&ctx, v);
    let phi = m(&["x1", "x2 + x1^2", "x3"]).compose(&m(&["x1 + x3^2", "x2", "x3"])).and_then(|p| p.compose(&m(&["x1", "x2", "x3 + x2^2"])));
    let psi = m(&["x1", "x2", "x3 - x2^2"]).compose(&m(&["x1 - x3^2", "x2", "x3"])).and_then(|p| p.compose(&m(&["x1", "x2 - x1^2", "x3"])));
    FrameEVA::from_automorphism(ctx.clone(), &phi.expect("fixture"), &psi.expect("fixture")).expect("fixture automorphism")
}

fn vertex_samples(env: &LemmaEnv, n: usize) -> (Vec<VertexElement>, Vec<RatFunc>) {
    let mut smp = env.sampler(n);
    let elems = (0..env.samples)
        .map(|_| VertexElement::new(smp.form(1), (0..n).map(|_| smp.poly()).collect()).expect("sampled shapes agree"))
        .collect();
    let funcs = (0..env.samples).map(|_| smp.poly()).collect();
    (elems, funcs)
}

fn vertex_axioms(env: &LemmaEnv) -> Outcome {
    let n = 2;
    let ctx = Context::standard(n);
    let (elems, funcs) = vertex_samples(env, n);
    for eva in [FrameEVA::coordinate(ctx.clone()), sheared(2)] {
        let report = check_vertex_axioms(&eva, &elems, &funcs).map_err(err)?;
        vertex_witness(&ctx, &report, &elems, &funcs)?;
    }
    Ok(())
}

fn graded_lit(ctx: &Context, g: &Graded) -> String {
    match g {
        Graded::Zero(f) => ctx.print(f),
        Graded::One(v) => vertex_lit(ctx, v),
    }
}

fn truncated_axioms(env: &LemmaEnv) -> Outcome {
    let n = 2;
    let ctx = Context::standard(n);
    let (elems, funcs) = vertex_samples(env, n);
    for eva in [FrameEVA::coordinate(ctx.clone()), sheared(2)] {
        let report = check_truncated_axioms(&TruncatedView::new(&eva), &funcs, &elems).map_err(err)?;
        if let Some(f) = report.failures.first() {
            let k = f.sample;
            return Err(format!(
                "axiom {} on a={} x={} y={}: residual {}",
                f.axiom.name(),
                ctx.print(&funcs[k % funcs.len()]),
                vertex_lit(&ctx, &elems[k % elems.len()]),
                vertex_lit(&ctx, &elems[(k + 1) % elems.len()]),
                graded_lit(&ctx, &f.residual)
            ));
        }
    }
    Ok(())
}

fn eva_difference_axioms(env: &LemmaEnv) -> Outcome {
    let n = 3;
    let ctx = Context::standard(n);
    let diff = eva_difference(&FrameEVA::coordinate(ctx.clone()), &composite3()).map_err(err)?;
    let q = &diff.structure;
    let mut smp = env.sampler(n);
    let elems: Vec<_> =
        (0..env.samples.min(6)).map(|_| CourantElement::new(smp.form(1), MatrixForm::zero(n, 0, 0), smp.vector()).expect("shapes")).collect();
    let funcs: Vec<_> = elems.iter().map(|_| smp.poly()).collect();
    let report = check_courant_axioms(q, &elems, &funcs).map_err(err)?;
    courant_witness(&ctx, &report, &Axiom::ALL, &elems, &funcs)?;
    for k in 0..elems.len() {
        let (x, y) = (&elems[k], &elems[(k + 1) % elems.len()]);
        let (ex, ey) = (diff.embed(x), diff.embed(y));
        let show = || format!("x={} y={}", x.display(&ctx), y.display(&ctx));
        ensure(diff.bracket(&ex, &ey).map_err(err)? == diff.embed(&q.bracket(x, y).map_err(err)?), || format!("bracket: {}", show()))?;
        ensure(diff.pairing(&ex, &ey).map_err(err)? == q.pairing(x, y).map_err(err)?, || format!("pairing: {}", show()))?;
        ensure(diff.star(&funcs[k], &ex) == diff.embed(&x.scale(&funcs[k])), || format!("module structure: {}", show()))?;
        ensure(diff.anchor(&ex) == x.xi, || format!("anchor: {}", show()))?;
    }
    Ok(())
}

fn mat(ctx: &Context, rows: &[&[&str]]) -> Vec<Vec<RatFunc>> {
    rows.iter().map(|r| r.iter().map(|s| ctx.parse(s).expect("fixture literal")).collect()).collect()
}

fn dlog_fixture() -> (CoverSpec, BundleCocycle) {
    let ctx = Context::standard(2);
    let cover = CoverSpec::trivial(ctx.clone(), 3, CoverSpec::full_nerve(3, 2)).expect("fixture cover");
    let mut g = BTreeMap::new();
    g.insert((0, 1), mat(&ctx, &[&["x1"]]));
    g.insert((1, 2), mat(&ctx, &[&["x2"]]));
    g.insert((0, 2), mat(&ctx, &[&["x1*x2"]]));
    let bundle = BundleCocycle::new(&cover, 1, g).expect("fixture cocycle");
    (cover, bundle)
}

/// `g_{ij} = h_i⁻¹ h_j` on a cover with identity transitions.
fn rank2_fixture(ctx: &Arc<Context>) -> Result<(CoverSpec, BundleCocycle), String> {
    let cover = CoverSpec::trivial(ctx.clone(), 3, CoverSpec::full_nerve(3, 2)).map_err(err)?;
    let n = ctx.dim();
    let h = [
        mat(ctx, &[&["1", "0"], &["0", "1"]]),
        mat(ctx, &[&["1", "x1"], &["0", "1"]]),
        mat(ctx, &[&["1", "0"], &["x2*x3", "1"]]),
    ];
    let mut g = BTreeMap::new();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let hi = MatrixForm::from_functions(n, inverse(&h[i]).map_err(err)?);
        g.insert((i, j), hi.mul(&MatrixForm::from_functions(n, h[j].clone())).functions());
    }
    let bundle = BundleCocycle::new(&cover, 2, g).map_err(err)?;
    Ok((cover, bundle))
}

fn cocycle_closures(env: &LemmaEnv) -> Outcome {
    let (cover, bundle) = dlog_fixture();
    let ctx = cover.context().clone();
    let conns = induced_connections(&cover, &bundle, &Seed::Flat).map_err(err)?;
    let pi = pontryagin_cocycle(&cover, &bundle, &conns).map_err(err)?;
    let expected = ctx.parse_form("-1/(x1*x2)*d(x1)^d(x2)").map_err(err)?;
    let got = pi.p22.get(&[0, 1, 2]).map_err(err)?;
    ensure(*got == expected, || format!("d log fixture: Pi22 = {}", ctx.print_form(got)))?;
    ensure(pi.total().total_d(&cover).map_err(err)?.is_zero(), || "d log fixture: Pi is not closed".into())?;

    let ctx3 = Context::standard(3);
    let (cover, bundle) = rank2_fixture(&ctx3)?;
    let mut smp = env.sampler(3);
    let seeds: Vec<_> = (0..3).map(|_| random_connection(&mut smp, 2)).collect();
    let conns = induced_connections(&cover, &bundle, &Seed::PerChart(seeds)).map_err(err)?;
    conns.check_gauge(&cover, &bundle).map_err(err)?;
    let pi = pontryagin_cocycle(&cover, &bundle, &conns).map_err(err)?;
    ensure(pi.total().total_d(&cover).map_err(err)?.is_zero(), || "rank-2 fixture: Pi is not closed".into())?;
    let ch2 = ch2_cocycle(&cover, &bundle, &conns).map_err(err)?;
    ensure(ch2.total_d(&cover).map_err(err)?.is_zero(), || "rank-2 fixture: ch2 is not closed".into())?;

    let frames = vec![VectorField::coordinates(3), sheared(3).frame().to_vec(), composite3().frame().to_vec()];
    let e = eva_class_cocycle(&cover, &frames).map_err(err)?;
    ensure(e.total().total_d(&cover).map_err(err)?.is_zero(), || "EVA class is not closed".into())?;
    let tb = cotangent_bundle(&cover, &frames).map_err(err)?;
    let tc = induced_connections(&cover, &tb, &Seed::Flat).map_err(err)?;
    ensure(ch2_cocycle(&cover, &tb, &tc).map_err(err)?.total_d(&cover).map_err(err)?.is_zero(), || {
        "ch2 of the cotangent bundle is not closed".into()
    })
}
