//! Execution of individual manifest tasks.

use std::collections::BTreeMap;

use courant_core::cartan::{DiffForm, VectorField};
use courant_core::cech::{
    ch2_cocycle, coboundary_solve, cotangent_bundle, eva_class_cocycle, hat_p_assembly, induced_connections, pontryagin_cocycle,
    CechCochain, Seed, TotalCochain,
};
use courant_core::courant::{admissible_h, check_courant_axioms, jacobiator, Axiom, CourantElement, CourantStructure};
use courant_core::sample::Sampler;
use courant_core::vertex::{check_truncated_axioms, check_vertex_axioms, FrameEVA, TruncatedView, VertexElement};

use crate::error::CliError;
use crate::lemmas::{verify_lemmas, Mutation};
use crate::manifest::{Model, StructureKind, TaskDecl, TaskKind};
use crate::report::{Check, Payload, TaskReport};

pub struct TaskOptions {
    pub seed: u64,
    pub samples: usize,
    pub degree_bound: usize,
    pub parallel: bool,
    pub mutation: Option<Mutation>,
}

/// Runs one task. `Err` is reserved for manifest problems; engine failures
/// while checking become failed checks.
pub fn run_task(model: &Model, task: &TaskDecl, opts: &TaskOptions) -> Result<TaskReport, CliError> {
    let mut payload = Payload::new();
    let mut checks = match task.kind {
        TaskKind::CheckAxioms => check_axioms(model, task, opts)?,
        TaskKind::Pontryagin => guard(pontryagin(model, &mut payload)),
        TaskKind::Ch2 => guard(ch2(model, &mut payload)),
        TaskKind::EvaClass => guard(eva_class(model, &mut payload)),
        TaskKind::CompareClasses => guard(compare_classes(model, opts.degree_bound, &mut payload)),
        TaskKind::VerifyLemmas => verify_lemmas(task.lemmas.as_deref(), opts.seed, opts.samples, opts.mutation, opts.parallel)?,
    };
    checks.extend(expectations(model, task, &payload)?);
    Ok(TaskReport::new(task.label(), task.kind.name(), checks, payload))
}

fn guard(r: Result<Vec<Check>, String>) -> Vec<Check> {
    r.unwrap_or_else(|e| vec![Check::fail("evaluate", e)])
}

fn expectations(model: &Model, task: &TaskDecl, payload: &Payload) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    for (key, lit) in &task.expect {
        let (section, entry) = key
            .strip_suffix(']')
            .and_then(|k| k.split_once('['))
            .ok_or_else(|| CliError::Validation(format!("expectation key `{key}` is not of the form Section[charts]")))?;
        let want = model.ctx.parse_form(lit).map_err(|e| CliError::Parse(format!("expectation `{key}`: {e}")))?;
        let name = format!("expect {key}");
        let got = payload.get(section).and_then(|s| s.get(entry));
        out.push(match got {
            None => Check::fail(name, "no such payload entry"),
            Some(g) => {
                let parsed = model.ctx.parse_form(g).map_err(|e| CliError::Parse(format!("payload `{key}`: {e}")))?;
                if parsed == want {
                    Check::pass(name)
                } else {
                    Check::fail(name, format!("got {g}"))
                }
            }
        });
    }
    Ok(out)
}

fn err(model: &Model) -> impl Fn(courant_core::Error) -> String + '_ {
    move |e| match e {
        courant_core::Error::CocycleViolation { simplex, msg } => format!("cocycle violation on ({}): {msg}", model.simplex(&simplex)),
        courant_core::Error::PrimitiveInvalid { chart, msg } => {
            format!("invalid primitive on {}: {msg}", model.names.get(chart).cloned().unwrap_or_default())
        }
        other => other.to_string(),
    }
}

fn cochain_section(model: &Model, c: &CechCochain) -> BTreeMap<String, String> {
    c.values.iter().map(|(s, a)| (model.simplex(s), model.ctx.print_form(a))).collect()
}

fn total_section(model: &Model, t: &TotalCochain, prefix: &str, payload: &mut Payload) {
    for (p, c) in &t.parts {
        payload.insert(format!("{prefix}{}{}", c.q, p), cochain_section(model, c));
    }
}

fn closed(model: &Model, name: &str, t: &TotalCochain) -> Result<Check, String> {
    let dt = t.total_d(&model.cover).map_err(err(model))?;
    if dt.is_zero() {
        return Ok(Check::pass(name));
    }
    let (p, c) = dt.parts.iter().find(|(_, c)| !c.is_zero()).expect("nonzero part");
    let (s, a) = c.values.iter().find(|(_, a)| !a.is_zero()).expect("nonzero value");
    Ok(Check::fail(name, format!("(d±δ) has component ({},{p}) on ({}) = {}", c.q, model.simplex(s), model.ctx.print_form(a))))
}

fn bundle(model: &Model) -> Result<&courant_core::cech::BundleCocycle, String> {
    model.bundle.as_ref().ok_or_else(|| "the manifest declares no bundle".to_string())
}

fn pontryagin(model: &Model, payload: &mut Payload) -> Result<Vec<Check>, String> {
    let b = bundle(model)?;
    let conns = induced_connections(&model.cover, b, &model.seed).map_err(err(model))?;
    let gauge = Check::from_result("gauge", conns.check_gauge(&model.cover, b).map_err(err(model)));
    let pi = pontryagin_cocycle(&model.cover, b, &conns).map_err(err(model))?;
    for (name, c) in [("Pi40", &pi.p40), ("Pi31", &pi.p31), ("Pi22", &pi.p22)] {
        payload.insert(name.into(), cochain_section(model, c));
    }
    Ok(vec![gauge, closed(model, "closed", &pi.total())?])
}

fn ch2(model: &Model, payload: &mut Payload) -> Result<Vec<Check>, String> {
    let b = bundle(model)?;
    let conns = induced_connections(&model.cover, b, &model.seed).map_err(err(model))?;
    let c = ch2_cocycle(&model.cover, b, &conns).map_err(err(model))?;
    total_section(model, &c, "Ch", payload);
    let mut checks = vec![closed(model, "closed", &c)?];
    if model.primitives.iter().any(Option::is_some) {
        let prims: Option<Vec<DiffForm>> = model.primitives.iter().cloned().collect();
        let Some(prims) = prims else {
            checks.push(Check::fail("hat-p", "primitives must be given on every chart"));
            return Ok(checks);
        };
        match hat_p_assembly(&model.cover, b, &conns, &prims) {
            Ok(hp) => {
                payload.insert("HatP31".into(), cochain_section(model, &hp.p31));
                payload.insert("HatP22".into(), cochain_section(model, &hp.p22));
                checks.push(Check::pass("hat-p"));
                checks.push(closed(model, "hat-p closed", &hp.total())?);
            }
            Err(e) => checks.push(Check::fail("hat-p", err(model)(e))),
        }
    }
    Ok(checks)
}

fn eva_class(model: &Model, payload: &mut Payload) -> Result<Vec<Check>, String> {
    let e = eva_class_cocycle(&model.cover, &model.frames).map_err(err(model))?;
    payload.insert("H31".into(), cochain_section(model, &e.h31));
    payload.insert("B22".into(), cochain_section(model, &e.b22));
    Ok(vec![closed(model, "closed", &e.total())?])
}

fn compare_classes(model: &Model, bound: usize, payload: &mut Payload) -> Result<Vec<Check>, String> {
    let e = eva_class_cocycle(&model.cover, &model.frames).map_err(err(model))?.total();
    let tb = cotangent_bundle(&model.cover, &model.frames).map_err(err(model))?;
    let conns = induced_connections(&model.cover, &tb, &Seed::Flat).map_err(err(model))?;
    let ch = ch2_cocycle(&model.cover, &tb, &conns).map_err(err(model))?;
    total_section(model, &e, "Eva", payload);
    total_section(model, &ch, "Ch", payload);
    let mut checks = vec![closed(model, "eva closed", &e)?, closed(model, "ch2 closed", &ch)?];
    let diff = e.sub(&ch).map_err(err(model))?;
    match coboundary_solve(&model.cover, &diff, bound) {
        Ok(x) => {
            total_section(model, &x, "Primitive", payload);
            checks.push(Check::pass(format!("difference is a coboundary (degree <= {bound})")));
        }
        Err(e) => checks.push(Check::fail(format!("difference is a coboundary (degree <= {bound})"), err(model)(e))),
    }
    Ok(checks)
}

fn check_axioms(model: &Model, task: &TaskDecl, opts: &TaskOptions) -> Result<Vec<Check>, CliError> {
    let k = match &task.chart {
        Some(c) => model.chart_index(c)?,
        None => 0,
    };
    let n = model.ctx.dim();
    let ctx = &model.ctx;
    let mut smp = Sampler::new(opts.seed, n);
    match task.structure.unwrap_or_default() {
        StructureKind::Courant => {
            let perturb = match &task.perturb {
                Some(p) => Some(ctx.parse_form(p).map_err(|e| CliError::Parse(format!("perturb: {e}")))?),
                None => None,
            };
            Ok(guard(courant_axioms(model, k, perturb, opts.samples, &mut smp)))
        }
        kind => {
            let eva = FrameEVA::new(ctx.clone(), model.frames[k].clone()).map_err(|e| CliError::Validation(e.to_string()))?;
            let elems: Vec<_> = (0..opts.samples)
                .map(|_| VertexElement::new(smp.form(1), (0..n).map(|_| smp.poly()).collect()).expect("sampled shapes agree"))
                .collect();
            let funcs: Vec<_> = (0..opts.samples).map(|_| smp.poly()).collect();
            let show = |v: &VertexElement| {
                let c: Vec<String> = v.coeffs.iter().map(|f| ctx.print(f)).collect();
                format!("({}; [{}])", ctx.print_form(&v.alpha), c.join(", "))
            };
            if kind == StructureKind::Vertex {
                let rep = match check_vertex_axioms(&eva, &elems, &funcs) {
                    Ok(r) => r,
                    Err(e) => return Ok(vec![Check::fail("evaluate", e.to_string())]),
                };
                Ok(rep
                    .results
                    .iter()
                    .map(|r| match r.witnesses.first() {
                        None => Check::pass(r.axiom.name()),
                        Some(w) => Check::fail(r.axiom.name(), format!("sample {} v={}", w.sample, show(&elems[w.sample % elems.len()]))),
                    })
                    .collect())
            } else {
                let rep = match check_truncated_axioms(&TruncatedView::new(&eva), &funcs, &elems) {
                    Ok(r) => r,
                    Err(e) => return Ok(vec![Check::fail("evaluate", e.to_string())]),
                };
                Ok(rep
                    .checked
                    .iter()
                    .map(|(a, _)| match rep.failures.iter().find(|f| f.axiom == *a) {
                        None => Check::pass(a.name()),
                        Some(f) => Check::fail(a.name(), format!("sample {} x={}", f.sample, show(&elems[f.sample % elems.len()]))),
                    })
                    .collect())
            }
        }
    }
}

fn courant_axioms(model: &Model, k: usize, perturb: Option<DiffForm>, samples: usize, smp: &mut Sampler) -> Result<Vec<Check>, String> {
    let ctx = &model.ctx;
    let n = ctx.dim();
    let conn = model.connection(k);
    let r = conn.rank();
    let h = match &model.primitives[k] {
        Some(h) => h.clone(),
        None => admissible_h(&conn).map_err(|e| e.to_string())?,
    };
    let h = match &perturb {
        Some(p) => &h + p,
        None => h,
    };
    let s = CourantStructure::extension(conn, h).map_err(|e| e.to_string())?;
    let elems: Vec<_> =
        (0..samples).map(|_| CourantElement::new(smp.form(1), smp.matrix(r), smp.vector()).expect("sampled shapes agree")).collect();
    let funcs: Vec<_> = (0..samples).map(|_| smp.poly()).collect();
    let report = check_courant_axioms(&s, &elems, &funcs).map_err(|e| e.to_string())?;
    let mut checks = Vec::new();
    for a in Axiom::ALL {
        if perturb.is_some() && !a.is_compatibility() {
            continue;
        }
        let res = report.get(a);
        checks.push(match res.witnesses.first() {
            None => Check::pass(a.name()),
            Some(w) => {
                let l = elems.len();
                Check::fail(
                    a.name(),
                    format!(
                        "q={} q1={} q2={} f={}",
                        elems[w.sample % l].display(ctx),
                        elems[(w.sample + 1) % l].display(ctx),
                        elems[(w.sample + 2) % l].display(ctx),
                        ctx.print(&funcs[w.sample % funcs.len()])
                    ),
                )
            }
        });
    }
    if perturb.is_some() {
        let coords = VectorField::coordinates(n);
        let field = |i: usize| CourantElement::field(r, coords[i].clone());
        let mut bad = None;
        'outer: for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let jac = jacobiator(&s, &field(i), &field(j), &field(l)).map_err(|e| e.to_string())?;
                    let pred = CourantElement::form(r, s.jacobiator_predicted(&coords[i], &coords[j], &coords[l]));
                    if jac != pred {
                        bad = Some(format!("({}, {}, {}): {}", ctx.vars()[i], ctx.vars()[j], ctx.vars()[l], jac.display(ctx)));
                        break 'outer;
                    }
                }
            }
        }
        checks.push(match bad {
            None => Check::pass("jacobiator prediction"),
            Some(w) => Check::fail("jacobiator prediction", w),
        });
    }
    Ok(checks)
}
