//! Manifest-driven front end for the `courant-core` engine.

pub mod cache;
pub mod error;
pub mod lemmas;
pub mod manifest;
pub mod report;
pub mod tasks;

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::Serialize;

pub use error::CliError;
pub use lemmas::Mutation;
pub use report::{Check, Report, TaskReport};

use cache::Cache;
use manifest::{Manifest, Model, TaskDecl};
use tasks::TaskOptions;

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_SAMPLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Machine,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub degree_bound: Option<usize>,
    pub samples: Option<usize>,
    pub parallel: bool,
    /// `None` disables caching.
    pub cache_dir: Option<PathBuf>,
    pub mutation: Option<Mutation>,
}

pub struct Outcome {
    pub report: Report,
    pub timings: Vec<Duration>,
    pub cached: Vec<bool>,
}

impl Outcome {
    /// 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.report.passed {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.report.to_text(&self.timings, &self.cached),
            Format::Machine => self.report.to_machine(),
        }
    }
}

/// A seed for a named piece of work, derived from the run seed.
pub fn sub_seed(seed: u64, label: &str) -> u64 {
    let h = cache::sha256_hex(format!("{seed}:{label}").as_bytes());
    u64::from_str_radix(&h[..16], 16).expect("hex digits")
}

#[derive(Serialize)]
struct CacheKey<'a> {
    manifest: &'a Manifest,
    task: &'a TaskDecl,
    seed: u64,
    samples: usize,
    degree_bound: usize,
    mutation: Option<Mutation>,
}

pub fn run(path: &Path, opts: &RunOptions) -> Result<Outcome, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    run_text(&text, opts)
}

pub fn run_text(text: &str, opts: &RunOptions) -> Result<Outcome, CliError> {
    let manifest = manifest::parse_manifest(text)?;
    let model = Model::build(&manifest)?;
    let seed = opts.seed.or(manifest.seed).unwrap_or(DEFAULT_SEED);
    let samples = opts.samples.or(manifest.samples).unwrap_or(DEFAULT_SAMPLES);
    let degree_bound = opts.degree_bound.or(manifest.degree_bound).unwrap_or(courant_core::cech::DEFAULT_DEGREE_BOUND);
    let cache = opts.cache_dir.as_ref().map(Cache::new);
    let mut context = manifest.clone();
    context.tasks.clear();

    let mut reports = Vec::new();
    let mut timings = Vec::new();
    let mut cached = Vec::new();
    for (k, task) in manifest.tasks.iter().enumerate() {
        let start = Instant::now();
        let topts = TaskOptions {
            seed: sub_seed(seed, &format!("{k}:{}", task.label())),
            samples: task.samples.unwrap_or(samples),
            degree_bound: task.degree_bound.unwrap_or(degree_bound),
            parallel: opts.parallel,
            mutation: opts.mutation,
        };
        let key = cache::key(&CacheKey {
            manifest: &context,
            task,
            seed: topts.seed,
            samples: topts.samples,
            degree_bound: topts.degree_bound,
            mutation: opts.mutation,
        });
        let hit = cache.as_ref().and_then(|c| c.load(&key));
        cached.push(hit.is_some());
        let report = match hit {
            Some(r) => r,
            None => {
                let r = tasks::run_task(&model, task, &topts)?;
                if let Some(c) = &cache {
                    if let Err(e) = c.store(&key, &r) {
                        eprintln!("warning: cannot write cache entry in {}: {e}", c.dir().display());
                    }
                }
                r
            }
        };
        reports.push(report);
        timings.push(start.elapsed());
    }
    let passed = reports.iter().all(|t| t.passed);
    let report = Report {
        tool: report::TOOL.into(),
        version: report::VERSION.into(),
        manifest_sha256: cache::sha256_hex(text.as_bytes()),
        seed,
        samples,
        degree_bound,
        passed,
        tasks: reports,
    };
    Ok(Outcome { report, timings, cached })
}
