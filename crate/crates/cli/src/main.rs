use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use courant_cli::cache::{CACHE_ENV, DEFAULT_CACHE_DIR};
use courant_cli::{run, Format, Mutation, RunOptions};

/// Run the checks declared in a manifest and report the results.
#[derive(Parser, Debug)]
#[command(name = "courant", version)]
struct Args {
    /// Manifest file.
    manifest: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    degree_bound: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    /// Run independent lemma checks in parallel.
    #[arg(long)]
    parallel: bool,
    #[arg(long, env = CACHE_ENV, default_value = DEFAULT_CACHE_DIR)]
    cache_dir: PathBuf,
    #[arg(long)]
    no_cache: bool,
    /// Write the machine-readable report here.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Corrupt one sign in the lemma suite (negative control).
    #[arg(long, value_parser = parse_mutation)]
    mutate: Option<Mutation>,
}

fn parse_mutation(s: &str) -> Result<Mutation, String> {
    Mutation::parse(s).ok_or_else(|| {
        let names: Vec<_> = Mutation::ALL.iter().map(|m| m.name()).collect();
        format!("unknown mutation `{s}` (expected one of {})", names.join(", "))
    })
}

fn main() -> ExitCode {
    let args = Args::parse();
    let opts = RunOptions {
        seed: args.seed,
        degree_bound: args.degree_bound,
        samples: args.samples,
        parallel: args.parallel,
        cache_dir: (!args.no_cache).then_some(args.cache_dir),
        mutation: args.mutate,
    };
    match run(&args.manifest, &opts) {
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Ok(outcome) => {
            print!("{}", outcome.render(args.format));
            if let Some(path) = &args.out {
                if let Err(e) = std::fs::write(path, outcome.report.to_machine()) {
                    eprintln!("IoError: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            for (t, c) in outcome.report.failures() {
                eprintln!("AssertionFailure: {} / {}: {}", t.name, c.name, c.witness.as_deref().unwrap_or("-"));
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
    }
}
