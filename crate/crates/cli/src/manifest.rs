//! Manifest schema and its resolution into engine objects.

use std::collections::BTreeMap;
use std::sync::Arc;

use courant_core::algebroid::Connection;
use courant_core::cartan::{ChartMap, DiffForm, MatrixForm, VectorField};
use courant_core::cech::{BundleCocycle, CoverSpec, Seed};
use courant_core::ring::{Context, RatFunc};
use courant_core::vertex::FrameEVA;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub version: u32,
    pub variables: Vec<String>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub degree_bound: Option<usize>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub charts: Vec<ChartDecl>,
    #[serde(default)]
    pub transitions: Vec<TransitionDecl>,
    #[serde(default)]
    pub nerve: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub bundle: Option<BundleDecl>,
    #[serde(default)]
    pub connections: Option<ConnectionsDecl>,
    #[serde(default)]
    pub primitives: Vec<PrimitiveDecl>,
    #[serde(default)]
    pub tasks: Vec<TaskDecl>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartDecl {
    pub name: String,
    /// Frame vector fields, each a list of components.
    #[serde(default)]
    pub frame: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub automorphism: Option<AutomorphismDecl>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomorphismDecl {
    pub map: Vec<String>,
    pub inverse: Vec<String>,
}

/// `map` lists the coordinates of chart `to` as functions on chart `from`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDecl {
    pub from: String,
    pub to: String,
    pub map: Vec<String>,
    pub inverse: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleDecl {
    pub rank: usize,
    #[serde(default)]
    pub cocycle: Vec<CocycleEntry>,
}

/// `g` for the pair `[Ui, Uj]` (in declaration order), written in chart `Uj`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleEntry {
    pub pair: [String; 2],
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConnectionsDecl {
    Keyword(String),
    PerChart(Vec<ChartConnection>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartConnection {
    pub chart: String,
    pub omega: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimitiveDecl {
    pub chart: String,
    pub h: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskKind {
    CheckAxioms,
    Pontryagin,
    Ch2,
    EvaClass,
    CompareClasses,
    VerifyLemmas,
}

impl TaskKind {
    pub fn name(self) -> &'static str {
        match self {
            TaskKind::CheckAxioms => "check-axioms",
            TaskKind::Pontryagin => "pontryagin",
            TaskKind::Ch2 => "ch2",
            TaskKind::EvaClass => "eva-class",
            TaskKind::CompareClasses => "compare-classes",
            TaskKind::VerifyLemmas => "verify-lemmas",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureKind {
    #[default]
    Courant,
    Vertex,
    Truncated,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskDecl {
    pub kind: TaskKind,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub chart: Option<String>,
    #[serde(default)]
    pub structure: Option<StructureKind>,
    /// 3-form added to `H` for check-axioms.
    #[serde(default)]
    pub perturb: Option<String>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub degree_bound: Option<usize>,
    /// Lemma names for verify-lemmas; all when absent.
    #[serde(default)]
    pub lemmas: Option<Vec<String>>,
    /// Expected payload entries, compared as parsed forms.
    #[serde(default)]
    pub expect: BTreeMap<String, String>,
}

impl TaskDecl {
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.kind.name().to_string())
    }
}

pub fn parse_manifest(text: &str) -> Result<Manifest, CliError> {
    let m: Manifest = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    if m.version != MANIFEST_VERSION {
        return Err(CliError::Validation(format!("unsupported manifest version {} (expected {MANIFEST_VERSION})", m.version)));
    }
    Ok(m)
}

/// A manifest resolved against the engine.
pub struct Model {
    pub ctx: Arc<Context>,
    pub names: Vec<String>,
    pub cover: CoverSpec,
    pub frames: Vec<Vec<VectorField>>,
    pub bundle: Option<BundleCocycle>,
    pub seed: Seed,
    pub primitives: Vec<Option<DiffForm>>,
}

fn literal<T>(what: &str, r: courant_core::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Parse(format!("{what}: {e}")))
}

fn chart_map(ctx: &Context, what: &str, images: &[String]) -> Result<ChartMap, CliError> {
    if images.len() != ctx.dim() {
        return Err(CliError::Validation(format!("{what}: {} images for {} variables", images.len(), ctx.dim())));
    }
    let imgs = images.iter().map(|s| literal(what, ctx.parse(s))).collect::<Result<_, _>>()?;
    Ok(ChartMap::new(ctx.dim(), imgs))
}

impl Model {
    pub fn chart_index(&self, name: &str) -> Result<usize, CliError> {
        index_of(&self.names, name)
    }

    /// Renders a simplex with chart names.
    pub fn simplex(&self, s: &[usize]) -> String {
        s.iter().map(|&i| self.names.get(i).cloned().unwrap_or_else(|| format!("#{i}"))).collect::<Vec<_>>().join(",")
    }

    pub fn engine_error(&self, e: courant_core::Error) -> CliError {
        engine_error(&self.names, e)
    }

    pub fn build(m: &Manifest) -> Result<Model, CliError> {
        let ctx = Context::new(&m.variables).map_err(|e| CliError::Validation(format!("variables: {e}")))?;
        let n = ctx.dim();
        let names: Vec<String> = if m.charts.is_empty() {
            vec!["U0".to_string()]
        } else {
            m.charts.iter().map(|c| c.name.clone()).collect()
        };
        for (k, a) in names.iter().enumerate() {
            if names[..k].contains(a) {
                return Err(CliError::Validation(format!("duplicate chart `{a}`")));
            }
        }

        let mut frames = vec![VectorField::coordinates(n); names.len()];
        for (k, c) in m.charts.iter().enumerate() {
            frames[k] = match (&c.frame, &c.automorphism) {
                (Some(_), Some(_)) => {
                    return Err(CliError::Validation(format!("chart `{}` declares both a frame and an automorphism", c.name)))
                }
                (Some(f), None) => {
                    let fr = f
                        .iter()
                        .map(|v| literal(&format!("frame of `{}`", c.name), courant_core::cartan::parse_vector(&ctx, v)))
                        .collect::<Result<Vec<_>, _>>()?;
                    FrameEVA::new(ctx.clone(), fr.clone()).map_err(|e| CliError::Validation(format!("chart `{}`: {e}", c.name)))?;
                    fr
                }
                (None, Some(a)) => {
                    let what = format!("automorphism of `{}`", c.name);
                    let phi = chart_map(&ctx, &what, &a.map)?;
                    let psi = chart_map(&ctx, &what, &a.inverse)?;
                    FrameEVA::from_automorphism(ctx.clone(), &phi, &psi)
                        .map_err(|e| CliError::Validation(format!("chart `{}`: {e}", c.name)))?
                        .frame()
                        .to_vec()
                }
                (None, None) => VectorField::coordinates(n),
            };
        }

        let mut transitions = Vec::new();
        for t in &m.transitions {
            let what = format!("transition {} -> {}", t.from, t.to);
            let (from, to) = (index_of(&names, &t.from)?, index_of(&names, &t.to)?);
            if from == to {
                return Err(CliError::Validation(format!("{what}: a chart has no transition to itself")));
            }
            transitions.push((to, from, chart_map(&ctx, &what, &t.map)?, chart_map(&ctx, &what, &t.inverse)?));
        }
        let nerve = match &m.nerve {
            Some(list) => list.iter().map(|s| s.iter().map(|c| index_of(&names, c)).collect()).collect::<Result<Vec<_>, _>>()?,
            None => CoverSpec::full_nerve(names.len(), names.len().saturating_sub(1).min(2)),
        };
        let cover = CoverSpec::new(ctx.clone(), names.clone(), transitions, nerve).map_err(|e| engine_error(&names, e))?;

        let bundle = match &m.bundle {
            None => None,
            Some(b) => {
                let mut g = BTreeMap::new();
                for e in &b.cocycle {
                    let (i, j) = (index_of(&names, &e.pair[0])?, index_of(&names, &e.pair[1])?);
                    if i >= j {
                        return Err(CliError::Validation(format!(
                            "cocycle pair [{}, {}] must follow chart declaration order",
                            e.pair[0], e.pair[1]
                        )));
                    }
                    let what = format!("cocycle [{}, {}]", e.pair[0], e.pair[1]);
                    let mat = e
                        .matrix
                        .iter()
                        .map(|row| row.iter().map(|s| literal(&what, ctx.parse(s))).collect::<Result<Vec<RatFunc>, _>>())
                        .collect::<Result<Vec<_>, _>>()?;
                    g.insert((i, j), mat);
                }
                Some(BundleCocycle::new(&cover, b.rank, g).map_err(|e| engine_error(&names, e))?)
            }
        };

        let seed = match &m.connections {
            None => Seed::Flat,
            Some(ConnectionsDecl::Keyword(k)) if k == "flat" => Seed::Flat,
            Some(ConnectionsDecl::Keyword(k)) => return Err(CliError::Validation(format!("unknown connections keyword `{k}`"))),
            Some(ConnectionsDecl::PerChart(list)) => {
                let r = bundle.as_ref().map(|b| b.rank).ok_or_else(|| CliError::Validation("connections need a bundle".into()))?;
                let mut conns = vec![None; names.len()];
                for c in list {
                    let k = index_of(&names, &c.chart)?;
                    let what = format!("connection on `{}`", c.chart);
                    if c.omega.len() != r || c.omega.iter().any(|row| row.len() != r) {
                        return Err(CliError::Validation(format!("{what}: expected a {r}x{r} matrix")));
                    }
                    let rows = c
                        .omega
                        .iter()
                        .map(|row| row.iter().map(|s| literal(&what, ctx.parse_form(s))).collect::<Result<Vec<_>, _>>())
                        .collect::<Result<Vec<_>, _>>()?;
                    let omega = MatrixForm::from_rows(n, rows).map_err(|e| CliError::Validation(format!("{what}: {e}")))?;
                    conns[k] = Some(Connection::new(omega).map_err(|e| CliError::Validation(format!("{what}: {e}")))?);
                }
                Seed::PerChart(conns.into_iter().map(|c| c.unwrap_or_else(|| Connection::flat(n, r))).collect())
            }
        };

        let mut primitives = vec![None; names.len()];
        for p in &m.primitives {
            let k = index_of(&names, &p.chart)?;
            primitives[k] = Some(literal(&format!("primitive on `{}`", p.chart), ctx.parse_form(&p.h))?);
        }
        for t in &m.tasks {
            if let Some(c) = &t.chart {
                index_of(&names, c)?;
            }
        }
        Ok(Model { ctx, names, cover, frames, bundle, seed, primitives })
    }

    /// The connection declared on chart `k`, flat when none is given.
    pub fn connection(&self, k: usize) -> Connection {
        let r = self.bundle.as_ref().map_or(0, |b| b.rank);
        match &self.seed {
            Seed::PerChart(c) => c[k].clone(),
            Seed::Flat => Connection::flat(self.ctx.dim(), r),
        }
    }
}

fn index_of(names: &[String], name: &str) -> Result<usize, CliError> {
    names.iter().position(|c| c == name).ok_or_else(|| CliError::Validation(format!("unknown chart `{name}`")))
}

pub fn engine_error(names: &[String], e: courant_core::Error) -> CliError {
    let render = |s: &[usize]| s.iter().map(|&i| names.get(i).cloned().unwrap_or_else(|| format!("#{i}"))).collect::<Vec<_>>().join(",");
    match e {
        courant_core::Error::CocycleViolation { simplex, msg } => {
            CliError::Validation(format!("cocycle violation on ({}): {msg}", render(&simplex)))
        }
        courant_core::Error::MissingSimplex(s) => CliError::Validation(format!("missing simplex ({})", render(&s))),
        other => CliError::Validation(other.to_string()),
    }
}
