use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use courant_cli::{run_text, Mutation, RunOptions};

fn manifest(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../manifests").join(name)
}

fn courant(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_courant"))
        .args(args)
        .current_dir(cwd)
        .env_remove("COURANT_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn dlog_exits_zero_with_fixture_payload() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = courant(&[path(&manifest("dlog.manifest")), "--no-cache", "--out", path(&out)], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["tasks"][0]["payload"]["Pi22"]["U0,U1,U2"], "-1/(x1*x2)*d(x1)^d(x2)");
    assert_eq!(report["passed"], true);
    assert!(String::from_utf8_lossy(&o.stdout).contains("[PASS] dlog-pontryagin"));
}

#[test]
fn bad_cocycle_names_the_triple() {
    let dir = tempfile::tempdir().unwrap();
    let o = courant(&[path(&manifest("bad-cocycle.manifest")), "--no-cache"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.starts_with("ValidationError"), "{err}");
    assert!(err.contains("(U0,U1,U2)"), "{err}");
}

#[test]
fn parse_and_validation_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("garbage.manifest", "version = [", "ParseError"),
        ("noversion.manifest", "variables = [\"x1\"]\n", "ParseError"),
        ("badversion.manifest", "version = 9\nvariables = [\"x1\"]\n", "ValidationError"),
        ("badlit.manifest", "version = 1\nvariables = [\"x1\"]\n[[primitives]]\nchart = \"U0\"\nh = \"x1*d(\"\n", "ParseError"),
        (
            "unknown.manifest",
            "version = 1\nvariables = [\"x1\"]\n[[tasks]]\nkind = \"check-axioms\"\nchart = \"V9\"\n",
            "ValidationError",
        ),
        ("field.manifest", "version = 1\nvariables = [\"x1\"]\ncolour = 3\n", "ParseError"),
    ];
    for (name, text, kind) in cases {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        let o = courant(&[path(&p), "--no-cache"], dir.path());
        assert_eq!(o.status.code(), Some(2), "{name}");
        assert!(stderr(&o).starts_with(kind), "{name}: {}", stderr(&o));
    }
    let o = courant(&[path(&dir.path().join("missing.manifest"))], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failed_expectation_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(manifest("dlog.manifest")).unwrap().replace(
        "\"Pi22[U0,U1,U2]\" = \"-1/(x1*x2)*d(x1)^d(x2)\"",
        "\"Pi22[U0,U1,U2]\" = \"1/(x1*x2)*d(x1)^d(x2)\"",
    );
    let p = dir.path().join("wrong.manifest");
    std::fs::write(&p, text).unwrap();
    let o = courant(&[path(&p), "--no-cache"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("AssertionFailure: dlog-pontryagin / expect Pi22[U0,U1,U2]: got -1/(x1*x2)*d(x1)^d(x2)"), "{err}");
}

#[test]
fn lemma_suite_passes_with_seed_seven() {
    let dir = tempfile::tempdir().unwrap();
    let o = courant(&[path(&manifest("verify-lemmas.manifest")), "--seed", "7", "--no-cache", "--format", "machine"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let checks = report["tasks"][0]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), courant_cli::lemmas::LEMMAS.len());
    assert!(checks.iter().all(|c| c["passed"] == true));
    assert_eq!(report["seed"], 7);
}

#[test]
fn seed_variation_keeps_status() {
    let text = std::fs::read_to_string(manifest("verify-lemmas.manifest")).unwrap();
    let status = |seed| {
        let r = run_text(&text, &RunOptions { seed: Some(seed), samples: Some(4), ..RunOptions::default() }).unwrap().report;
        r.tasks[0].checks.iter().map(|c| (c.name.clone(), c.passed)).collect::<Vec<_>>()
    };
    let base = status(7);
    for seed in [8, 9, 1234] {
        assert_eq!(status(seed), base);
    }
}

#[test]
fn mutations_break_exactly_their_lemma() {
    let text = std::fs::read_to_string(manifest("verify-lemmas.manifest")).unwrap();
    for m in Mutation::ALL {
        let out = run_text(&text, &RunOptions { samples: Some(4), mutation: Some(m), ..RunOptions::default() }).unwrap();
        assert_eq!(out.exit_code(), 1);
        let failed: Vec<_> = out.report.tasks[0].checks.iter().filter(|c| !c.passed).collect();
        assert_eq!(failed.len(), 1, "{}", m.name());
        assert_eq!(failed[0].name, m.target());
        assert!(failed[0].witness.as_ref().is_some_and(|w| !w.is_empty()));
    }
}

#[test]
fn mutation_flag_reaches_the_binary() {
    let dir = tempfile::tempdir().unwrap();
    let o = courant(
        &[path(&manifest("verify-lemmas.manifest")), "--no-cache", "--samples", "3", "--mutate", "three-conns-sign"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("AssertionFailure: lemma-suite / three-conns"), "{}", stderr(&o));
    let o = courant(&[path(&manifest("verify-lemmas.manifest")), "--mutate", "nonsense"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn identical_runs_write_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let m = manifest("dlog.manifest");
    courant(&[path(&m), "--no-cache", "--seed", "5", "--out", path(&a)], dir.path());
    courant(&[path(&m), "--no-cache", "--seed", "5", "--parallel", "--out", path(&b)], dir.path());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn cache_hits_do_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let m = manifest("eva.manifest");
    let run = |out: &str| {
        let out = dir.path().join(out);
        let o = courant(&[path(&m), "--cache-dir", path(&cache), "--out", path(&out)], dir.path());
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        (std::fs::read(out).unwrap(), String::from_utf8(o.stdout).unwrap())
    };
    let (cold, text) = run("cold.json");
    assert!(!text.contains("(cached)"));
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 4);
    let (warm, text) = run("warm.json");
    assert_eq!(text.matches("(cached)").count(), 4);
    assert_eq!(cold, warm);

    let fresh = courant(&[path(&m), "--no-cache", "--format", "machine"], dir.path());
    assert_eq!(fresh.stdout, cold);
}

#[test]
fn cache_dir_defaults_and_env_override() {
    let dir = tempfile::tempdir().unwrap();
    let m = manifest("dlog.manifest");
    courant(&[path(&m)], dir.path());
    assert!(dir.path().join(".courant-cache").is_dir());

    let env_dir = dir.path().join("from-env");
    let o = Command::new(env!("CARGO_BIN_EXE_courant"))
        .arg(path(&m))
        .current_dir(dir.path())
        .env("COURANT_CACHE_DIR", &env_dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(&env_dir).unwrap().count(), 2);
}

#[test]
fn changing_a_task_misses_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let opts = RunOptions { cache_dir: Some(dir.path().to_path_buf()), ..RunOptions::default() };
    let text = std::fs::read_to_string(manifest("dlog.manifest")).unwrap();
    let first = run_text(&text, &opts).unwrap();
    assert_eq!(first.cached, vec![false, false]);
    let edited = text.replace("name = \"dlog-ch2\"", "name = \"renamed\"");
    let second = run_text(&edited, &opts).unwrap();
    assert_eq!(second.cached, vec![true, false]);
    let reseeded = run_text(&text, &RunOptions { seed: Some(1), ..opts.clone() }).unwrap();
    assert_eq!(reseeded.cached, vec![false, false]);
}

#[test]
fn rank2_manifest_checks_axioms_and_closure() {
    let out = run_text(&std::fs::read_to_string(manifest("rank2.manifest")).unwrap(), &RunOptions { samples: Some(6), ..RunOptions::default() })
        .unwrap();
    assert!(out.report.passed, "{}", out.render(courant_cli::Format::Text));
    let names: Vec<_> = out.report.tasks[1].checks.iter().map(|c| c.name.as_str()).collect();
    assert!(names.contains(&"jacobiator prediction") && !names.contains(&"jacobi"));
}

#[test]
fn primitives_enable_hat_p() {
    let text = r#"
version = 1
variables = ["x1", "x2", "x3", "x4"]
[[charts]]
name = "U0"
[[charts]]
name = "U1"
[bundle]
rank = 1
[[bundle.cocycle]]
pair = ["U0", "U1"]
matrix = [["x1"]]
[[primitives]]
chart = "U0"
h = "0"
[[primitives]]
chart = "U1"
h = "0"
[[tasks]]
kind = "ch2"
"#;
    let out = run_text(text, &RunOptions::default()).unwrap();
    assert!(out.report.passed, "{}", out.render(courant_cli::Format::Text));
    assert!(out.report.tasks[0].checks.iter().any(|c| c.name == "hat-p"));
    assert!(out.report.tasks[0].payload.contains_key("HatP31"));

    let bad = text.replacen("h = \"0\"", "h = \"x1*d(x2)^d(x3)^d(x4)\"", 1);
    let out = run_text(&bad, &RunOptions::default()).unwrap();
    let hp = out.report.tasks[0].checks.iter().find(|c| c.name == "hat-p").unwrap();
    assert!(!hp.passed && hp.witness.as_ref().unwrap().contains("U0"));
}
