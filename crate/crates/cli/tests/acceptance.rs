//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use courant_cli::{run, run_text, RunOptions};
use courant_core::algebroid::Connection;
use courant_core::cartan::{ChartMap, DiffForm, MatrixForm, VectorField};
use courant_core::cech::*;
use courant_core::courant::*;
use courant_core::ring::{Context, RatFunc};
use courant_core::sample::{Bounds, Sampler};
use courant_core::vertex::*;
use num_rational::BigRational;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn manifest(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../manifests").join(name)
}

fn sampler(seed: u64, n: usize) -> Sampler {
    Sampler::new(seed, n).with_bounds(Bounds { degree: 2, terms: 3, coeff: 3 })
}

fn random_connection(s: &mut Sampler, r: usize) -> Connection {
    Connection::new(s.matrix_form(r, 1)).unwrap()
}

fn random_element(s: &mut Sampler, r: usize) -> CourantElement {
    CourantElement::new(s.form(1), s.matrix(r), s.vector()).unwrap()
}

/// `Σ a_ij ∧ b_ji`, from the entries.
fn wedge_trace(a: &MatrixForm, b: &MatrixForm) -> DiffForm {
    let r = a.rank();
    let mut acc = DiffForm::zero(a.dim());
    for i in 0..r {
        for j in 0..r {
            acc = &acc + &a.entry(i, j).wedge(b.entry(j, i));
        }
    }
    acc
}

/// `dω + ω∧ω`, from the entries.
fn curvature_entries(conn: &Connection) -> MatrixForm {
    let (n, r) = (conn.dim(), conn.rank());
    let w = &conn.omega;
    let mut rows = Vec::new();
    for i in 0..r {
        let mut row = Vec::new();
        for j in 0..r {
            let mut c = w.entry(i, j).ext_d();
            for k in 0..r {
                c = &c + &w.entry(i, k).wedge(w.entry(k, j));
            }
            row.push(c);
        }
        rows.push(row);
    }
    MatrixForm::from_rows(n, rows).unwrap()
}

fn half_cc(conn: &Connection) -> DiffForm {
    let c = curvature_entries(conn);
    wedge_trace(&c, &c).scale_q(&q(1, 2))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (n, r) = (4, 2);
    let mut smp = sampler(1001, n);
    let conn = random_connection(&mut smp, r);
    check(conn.omega.entries().iter().all(|e| e.coefficient_degree() <= 2), || "connection degree exceeds 2".into())?;
    let h = admissible_h(&conn).map_err(|e| e.to_string())?;
    check(h.ext_d() == half_cc(&conn), || "dH differs from ½⟨c∧c⟩".into())?;
    let s = CourantStructure::extension(conn.clone(), h.clone()).unwrap();
    let elems: Vec<_> = (0..50).map(|_| random_element(&mut smp, r)).collect();
    let funcs: Vec<_> = (0..50).map(|_| smp.poly()).collect();
    let report = check_courant_axioms(&s, &elems, &funcs).unwrap();
    let six = [Axiom::Complex, Axiom::Leibniz, Axiom::IpInvar, Axiom::BracketO, Axiom::IpO, Axiom::IpSymm];
    for a in six {
        let res = report.get(a);
        check(res.checked >= 50, || format!("{} checked on {} triples", a.name(), res.checked))?;
        check(res.passed(), || format!("{} fails on sample {}", a.name(), res.witnesses[0].sample))?;
    }

    let bump = Context::standard(n).parse_form("x1*d(x2)^d(x3)^d(x4)").unwrap();
    let hp = &(&h + &smp.form(3)) + &bump;
    check(!hp.ext_d().is_zero() && hp.ext_d() != half_cc(&conn), || "perturbation is not off admissibility".into())?;
    let sp = CourantStructure::extension(conn.clone(), hp.clone()).unwrap();
    let four = &hp.ext_d() - &half_cc(&conn);
    let coords = VectorField::coordinates(n);
    let mut nonzero = 0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let fld = |m: usize| CourantElement::field(r, coords[m].clone());
                let jac = jacobiator(&sp, &fld(i), &fld(j), &fld(k)).unwrap();
                let want = four.interior(&coords[i]).interior(&coords[j]).interior(&coords[k]);
                check(jac == CourantElement::form(r, want.clone()), || format!("Jacobiator on (∂{i}, ∂{j}, ∂{k})"))?;
                nonzero += usize::from(!want.is_zero());
            }
        }
    }
    check(nonzero > 0, || "perturbed Jacobiator vanishes on all coordinate triples".into())?;
    let t = start.elapsed();
    check(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("50 triples, 64 coordinate triples, {:.1} s", t.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let mut smp = sampler(1002, 3);
    let mut nonzero = 0;
    for _ in 0..20 {
        let (c0, c1, c2) = (random_connection(&mut smp, 2), random_connection(&mut smp, 2), random_connection(&mut smp, 2));
        let a = c1.omega.sub(&c0.omega);
        let a2 = c2.omega.sub(&c1.omega);
        let aa = wedge_trace(&a, &a2);
        let b = triple_composition(&c0, &c1, &c2).map_err(|e| e.to_string())?;
        check(b.b == aa.scale_q(&q(1, 2)), || "composite is not exp(+½⟨A∧A′⟩)".into())?;
        if !aa.is_zero() {
            nonzero += 1;
            check(b.b != aa.scale_q(&q(-1, 2)), || "composite also equals exp(−½⟨A∧A′⟩)".into())?;
        }
        check(triple_composition(&c0, &c1, &c0).unwrap().b.is_zero(), || "∇″ = ∇ does not give the identity".into())?;
    }
    check(nonzero > 0, || "all ⟨A∧A′⟩ vanish".into())?;
    Ok(format!("20 triples, corrected sign: exp(+½⟨A∧A′⟩), {nonzero} with ⟨A∧A′⟩ ≠ 0"))
}

fn criterion_3() -> Outcome {
    let mut smp = sampler(1003, 4);
    for _ in 0..20 {
        let c1 = random_connection(&mut smp, 2);
        let c2 = random_connection(&mut smp, 2);
        let lhs = cs_form(&c1, &c2).map_err(|e| e.to_string())?.ext_d();
        check(lhs == &half_cc(&c2) - &half_cc(&c1), || "dP(∇,∇′) ≠ ½⟨c′∧c′⟩ − ½⟨c∧c⟩".into())?;
    }
    Ok("20 pairs".into())
}

fn criterion_4() -> Outcome {
    let ctx = Context::standard(2);
    let cover = CoverSpec::trivial(ctx.clone(), 3, CoverSpec::full_nerve(3, 2)).unwrap();
    let mut g = BTreeMap::new();
    for (k, s) in [((0, 1), "x1"), ((1, 2), "x2"), ((0, 2), "x1*x2")] {
        g.insert(k, vec![vec![ctx.parse(s).unwrap()]]);
    }
    let bundle = BundleCocycle::new(&cover, 1, g).unwrap();
    let conns = induced_connections(&cover, &bundle, &Seed::Flat).unwrap();
    let pi = pontryagin_cocycle(&cover, &bundle, &conns).unwrap();
    check(pi.p40.is_zero() && pi.p31.is_zero(), || "Π⁴⁰ or Π³¹ nonzero".into())?;
    let dlog = |i: usize| DiffForm::dx(2, i).scale(&RatFunc::var(i).recip().unwrap());
    let want = -dlog(0).wedge(&dlog(1));
    check(pi.p22.get(&[0, 1, 2]).unwrap() == &want, || "Π²²_012 ≠ −(dx₁/x₁)∧(dx₂/x₂)".into())?;
    check(pi.total().total_d(&cover).unwrap().is_zero(), || "(d±δ̌)Π ≠ 0".into())?;

    let out = run(&manifest("dlog.manifest"), &RunOptions::default()).map_err(|e| e.to_string())?;
    check(out.report.passed, || "dlog manifest fails".into())?;
    let lit = &out.report.tasks[0].payload["Pi22"]["U0,U1,U2"];
    check(ctx.parse_form(lit).unwrap() == want, || format!("CLI payload {lit}"))?;

    let out = run(&manifest("rank2.manifest"), &RunOptions::default()).map_err(|e| e.to_string())?;
    let mut closures = 0;
    for t in out.report.tasks.iter().filter(|t| t.kind == "pontryagin" || t.kind == "ch2") {
        check(t.passed, || format!("rank-2 task {} fails", t.name))?;
        closures += t.checks.iter().filter(|c| c.name == "closed").count();
        check(t.payload.values().any(|s| s.values().any(|v| v != "0")), || "rank-2 cocycle is identically zero".into())?;
    }
    check(closures == 2, || "rank-2 closure checks missing".into())?;
    Ok("d log fixture exact; rank-2 fixture on 4 variables closed".into())
}

fn criterion_5() -> Outcome {
    let n = 3;
    let mut smp = sampler(1005, n);
    let conn = random_connection(&mut smp, 2);
    let s = CourantStructure::extension(conn.clone(), admissible_h(&conn).unwrap()).unwrap();
    let coords = VectorField::coordinates(n);
    let (mut closed, mut open) = (0, 0);
    for t in 0..24 {
        let b = if t % 2 == 0 { smp.form(1).ext_d() } else { smp.form(2) };
        let db = b.ext_d();
        let mut elems: Vec<_> = (0..2).map(|_| random_element(&mut smp, 2)).collect();
        elems.extend(coords.iter().map(|c| CourantElement::field(2, c.clone())));
        let mut endo = true;
        for x in &elems {
            for y in &elems {
                check(s.pairing(&exp_b(&b, x), &exp_b(&b, y)).unwrap() == s.pairing(x, y).unwrap(), || "pairing not preserved".into())?;
                let defect = s.bracket(&exp_b(&b, x), &exp_b(&b, y)).unwrap().sub(&exp_b(&b, &s.bracket(x, y).unwrap()));
                let twist = CourantElement::form(2, db.interior(&x.xi).interior(&y.xi));
                check(defect == twist, || "bracket defect differs from the dB-twist".into())?;
                endo &= defect.is_zero();
            }
        }
        check(endo == db.is_zero(), || format!("endomorphism = {endo} but dB = 0 is {}", db.is_zero()))?;
        if db.is_zero() {
            closed += 1
        } else {
            open += 1
        }
    }
    check(closed > 0 && open > 0, || "sample lacks closed or non-closed B".into())?;
    Ok(format!("24 B ({closed} closed, {open} not)"))
}

fn chart(ctx: &Context, images: &[&str]) -> ChartMap {
    ChartMap::new(ctx.dim(), images.iter().map(|s| ctx.parse(s).unwrap()).collect())
}

fn criterion_6() -> Outcome {
    let n = 2;
    let ctx = Context::standard(n);
    let sheared = FrameEVA::from_automorphism(ctx.clone(), &chart(&ctx, &["x1", "x2 + x1^2"]), &chart(&ctx, &["x1", "x2 - x1^2"])).unwrap();
    let mut smp = sampler(1006, n);
    let elems: Vec<_> = (0..50).map(|_| VertexElement::new(smp.form(1), (0..n).map(|_| smp.poly()).collect()).unwrap()).collect();
    let funcs: Vec<_> = (0..50).map(|_| smp.poly()).collect();
    for (name, eva) in [("coordinate", FrameEVA::coordinate(ctx.clone())), ("sheared", sheared)] {
        let rep = check_vertex_axioms(&eva, &elems, &funcs).unwrap();
        check(rep.results.len() == 9, || "not nine identities".into())?;
        for r in &rep.results {
            check(r.checked >= 50 && r.passed(), || format!("{name} frame: {} fails", r.axiom.name()))?;
        }
        let tr = check_truncated_axioms(&TruncatedView::new(&eva), &funcs, &elems).unwrap();
        for a in TruncatedAxiom::ALL {
            let count = tr.checked.iter().find(|(b, _)| *b == a).map_or(0, |(_, c)| *c);
            check(count >= 50 && !tr.failed(a), || format!("{name} frame: truncated {} fails or unchecked", a.name()))?;
        }
    }
    Ok("coordinate and sheared frames, 50 samples, 9 + 11 identities".into())
}

fn criterion_7() -> Outcome {
    let n = 3;
    let mut smp = sampler(1007, n);
    let conn = random_connection(&mut smp, 2);
    let s = CourantStructure::extension(conn.clone(), admissible_h(&conn).unwrap()).unwrap();
    let d = courant_difference(&s, &s).map_err(|e| e.to_string())?;
    check(d.is_exact() && d.h().is_zero(), || "Â − Â has nonzero H".into())?;
    for _ in 0..5 {
        let (h1, h2) = (smp.form(3), smp.form(3));
        let qh = |h: &DiffForm| CourantStructure::exact(n, h.clone()).unwrap();
        check(baer_sum(&qh(&h1), &qh(&h2)).unwrap() == qh(&(&h1 + &h2)), || "Q_H₁ + Q_H₂ ≠ Q_{H₁+H₂}".into())?;
        let round = courant_difference(&baer_sum(&qh(&h1), &s).unwrap(), &s).unwrap();
        check(round == qh(&h1), || "courant_difference ∘ baer_sum is not the identity".into())?;
    }
    Ok("cancellation, Baer sums and round trips".into())
}

fn shear_frames(ctx: &Arc<Context>) -> Vec<Vec<VectorField>> {
    let eva = |phi: &[&str], psi: &[&str]| {
        FrameEVA::from_automorphism(ctx.clone(), &chart(ctx, phi), &chart(ctx, psi)).unwrap().frame().to_vec()
    };
    vec![
        VectorField::coordinates(3),
        eva(&["x1", "x2 + x1^2", "x3 + x1*x2"], &["x1", "x2 - x1^2", "x3 - x1*x2 + x1^3"]),
        eva(
            &[
                "x1 + x2^4 + 2*x2^2*x3 + x3^2",
                "x1^2 + 2*x1*x2^4 + 4*x1*x2^2*x3 + 2*x1*x3^2 + x2^8 + 4*x2^6*x3 + 6*x2^4*x3^2 + 4*x2^2*x3^3 + x2 + x3^4",
                "x2^2 + x3",
            ],
            &["x1 - x3^2", "x2 - x1^2", "x3 - x2^2 + 2*x1^2*x2 - x1^4"],
        ),
    ]
}

fn desk_instance(cover: &CoverSpec, frames: &[Vec<VectorField>], bound: usize) -> Result<(TotalCochain, TotalCochain), String> {
    let e = eva_class_cocycle(cover, frames).map_err(|e| e.to_string())?.total();
    check(e.total_d(cover).unwrap().is_zero(), || "EVA class not closed".into())?;
    let tb = cotangent_bundle(cover, frames).map_err(|e| e.to_string())?;
    let conns = induced_connections(cover, &tb, &Seed::Flat).map_err(|e| e.to_string())?;
    let ch = ch2_cocycle(cover, &tb, &conns).map_err(|e| e.to_string())?;
    check(ch.total_d(cover).unwrap().is_zero(), || "ch2 not closed".into())?;
    let diff = e.sub(&ch).unwrap();
    let x = coboundary_solve(cover, &diff, bound).map_err(|e| e.to_string())?;
    check(x.total_d(cover).unwrap() == diff, || "solution does not reproduce the difference".into())?;
    Ok((e, ch))
}

fn criterion_8() -> Outcome {
    let bound = DEFAULT_DEGREE_BOUND;
    check(bound <= 8, || "degree bound exceeds 8".into())?;
    let ctx = Context::standard(3);
    let frames = shear_frames(&ctx);

    let flat = CoverSpec::trivial(ctx.clone(), 3, CoverSpec::full_nerve(3, 2)).unwrap();
    let (e, _) = desk_instance(&flat, &frames, bound)?;
    check(!e.is_zero(), || "EVA class vanishes on sheared frames".into())?;

    let psis = [
        (ChartMap::identity(3), ChartMap::identity(3)),
        (chart(&ctx, &["x1", "x2 + x1^2", "x3"]), chart(&ctx, &["x1", "x2 - x1^2", "x3"])),
        (chart(&ctx, &["x1 + x2*x3", "x2", "x3"]), chart(&ctx, &["x1 - x2*x3", "x2", "x3"])),
    ];
    let mut transitions = Vec::new();
    for i in 0..3 {
        for j in i + 1..3 {
            transitions.push((i, j, psis[i].0.compose(&psis[j].1).unwrap(), psis[j].0.compose(&psis[i].1).unwrap()));
        }
    }
    let names = (0..3).map(|i| format!("U{i}")).collect();
    let bent = CoverSpec::new(ctx.clone(), names, transitions, CoverSpec::full_nerve(3, 2)).unwrap();
    let moved: Vec<Vec<VectorField>> =
        (0..3).map(|i| frames[i].iter().map(|v| psis[i].0.pushforward(v, &psis[i].1).unwrap()).collect()).collect();
    desk_instance(&bent, &moved, bound)?;

    let ident = vec![VectorField::coordinates(3); 3];
    let (e, ch) = desk_instance(&flat, &ident, bound)?;
    check(e.is_zero() && ch.is_zero(), || "identity frames give a nonzero cocycle".into())?;

    let out = run(&manifest("eva.manifest"), &RunOptions::default()).map_err(|e| e.to_string())?;
    check(out.report.passed, || "eva manifest fails".into())?;
    Ok(format!("sheared frames with and without transitions, degree bound {bound}; identity frames vanish"))
}

fn criterion_9() -> Outcome {
    let mut n = 0;
    for m in ["dlog.manifest", "verify-lemmas.manifest", "eva.manifest"] {
        let text = std::fs::read_to_string(manifest(m)).unwrap();
        let opts = RunOptions { seed: Some(7), ..RunOptions::default() };
        let a = run_text(&text, &opts).map_err(|e| e.to_string())?.report.to_machine();
        let b = run_text(&text, &opts).map_err(|e| e.to_string())?.report.to_machine();
        check(a == b, || format!("{m}: machine reports differ"))?;
        let par = RunOptions { parallel: true, ..opts.clone() };
        let c = run_text(&text, &par).map_err(|e| e.to_string())?.report.to_machine();
        check(a == c, || format!("{m}: parallel report differs"))?;
        n += 1;
    }
    Ok(format!("{n} manifests, sequential and parallel"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 Courant axiom suite", criterion_1),
        ("2 three connections", criterion_2),
        ("3 Chern-Simons transgression", criterion_3),
        ("4 Cech closure", criterion_4),
        ("5 exp(B) classification", criterion_5),
        ("6 vertex axioms", criterion_6),
        ("7 cancellation and Baer arithmetic", criterion_7),
        ("8 EVA class against ch2", criterion_8),
        ("9 determinism", criterion_9),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {name}: PASS ({detail}; {secs:.1} s)"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({why})");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 9 criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
