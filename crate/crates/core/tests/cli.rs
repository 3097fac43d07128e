mod common;

use common::{assert_schema, run, write_config};
use gelfand::report::CSV_HEADER;
use tempfile::TempDir;

const SMALL_SWEEP: &str = r#"
dimension = 3

[nonlinearity]
kind = "exponential"

[sweep]
min = 0.0
max = 3.0
count = 31
"#;

fn stdout(out: &std::process::Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &std::process::Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn sweep_into(cfg: &std::path::Path, dir: &std::path::Path, jobs: &str) -> std::process::Output {
    run(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        dir.to_str().unwrap(),
        "--jobs",
        jobs,
    ])
}

#[test]
fn sweep_writes_csv_with_exact_header() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "run.toml", SMALL_SWEEP);
    let out_dir = tmp.path().join("out");
    let out = sweep_into(&cfg, &out_dir, "2");
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = std::fs::read_to_string(out_dir.join("curve.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("a,lambda,morse_index,pohozaev_residual,energy_residual,grad_mass_0.25,decay_fit")
    );
    assert_eq!(CSV_HEADER, csv.lines().next().unwrap());
    assert_eq!(lines.count(), 31);
    for name in ["lambda_vs_a.dat", "index_vs_a.dat", "summary.txt"] {
        assert!(out_dir.join(name).exists(), "{name}");
    }
    assert_schema("events", &std::fs::read_to_string(out_dir.join("events.json")).unwrap());
    assert_schema("points", &std::fs::read_to_string(out_dir.join("points.json")).unwrap());
}

#[test]
fn sweep_artifacts_are_byte_stable() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "run.toml", SMALL_SWEEP);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert_eq!(sweep_into(&cfg, &a, "1").status.code(), Some(0));
    assert_eq!(sweep_into(&cfg, &b, "3").status.code(), Some(0));
    for name in ["curve.csv", "events.json", "points.json", "lambda_vs_a.dat", "index_vs_a.dat"] {
        let x = std::fs::read(a.join(name)).unwrap();
        let y = std::fs::read(b.join(name)).unwrap();
        assert!(x == y, "{name} differs between runs");
    }
}

#[test]
fn sweep_rejects_dimension_one() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "bad.toml",
        &SMALL_SWEEP.replace("dimension = 3", "dimension = 1"),
    );
    let out = sweep_into(&cfg, &tmp.path().join("out"), "1");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_reports_parse_location() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "bad.toml", "dimension = 3\n[nonlinearity\n");
    let out = sweep_into(&cfg, &tmp.path().join("out"), "1");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));

    let cfg = write_config(
        tmp.path(),
        "typo.toml",
        &SMALL_SWEEP.replace("count = 31", "count = 31\ncuont = 4"),
    );
    let out = sweep_into(&cfg, &tmp.path().join("out"), "1");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cuont"), "{}", stderr(&out));

    let out = run(&["sweep", "--config", "/nonexistent/run.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_aborts_when_half_the_shoots_fail() {
    // the table ends at t = 1, so every center value above 1 fails
    let tmp = TempDir::new().unwrap();
    let table: String = (0..=20)
        .map(|i| {
            let t = i as f64 / 20.0;
            format!("{t},{}\n", t.exp())
        })
        .collect();
    std::fs::write(tmp.path().join("exp.csv"), format!("t,f\n{table}")).unwrap();
    let cfg = write_config(
        tmp.path(),
        "half.toml",
        r#"
dimension = 3
[nonlinearity]
kind = "table"
path = "exp.csv"
[sweep]
values = [0.2, 0.4, 0.6, 0.8, 1.2, 1.4, 1.6, 1.8]
"#,
    );
    let out = sweep_into(&cfg, &tmp.path().join("out"), "2");
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn verify_critical_exit_codes() {
    let tmp = TempDir::new().unwrap();
    let out = run(&["verify-critical", "--n", "3", "--mu", "0.5,0.25"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_schema("critical", &stdout(&out));

    // On the unit ball the μ = 1 member has a kernel instead of a negative
    // direction (the Jacobi field ∂_μU vanishes at r = μ = 1).
    let out = run(&[
        "verify-critical",
        "--n",
        "3",
        "--mu",
        "1,0.5,0.25",
        "--out-dir",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("Morse index"));
    assert_schema(
        "critical",
        &std::fs::read_to_string(tmp.path().join("critical.json")).unwrap(),
    );

    assert_eq!(run(&["verify-critical", "--n", "10", "--mu", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["verify-critical", "--n", "3"]).status.code(), Some(2));
}

fn certificate(tmp: &TempDir, nonlinearity: &str) -> (Option<i32>, String) {
    let cfg = write_config(
        tmp.path(),
        "f.toml",
        &format!("dimension = 3\n[nonlinearity]\n{nonlinearity}\n"),
    );
    let out = run(&["check-nonlinearity", "--config", cfg.to_str().unwrap()]);
    (out.status.code(), stdout(&out))
}

fn holds(json: &str) -> bool {
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    v["certificate"]["holds"].as_bool().unwrap()
}

#[test]
fn check_nonlinearity_certificates() {
    let tmp = TempDir::new().unwrap();
    let (code, json) = certificate(&tmp, "kind = \"exponential\"");
    assert_eq!(code, Some(0));
    assert_schema("certificate", &json);
    assert!(holds(&json));

    let (code, json) = certificate(&tmp, "kind = \"shifted_power\"\nalpha = 1.0\np = 5.0");
    assert_eq!(code, Some(0));
    assert_schema("certificate", &json);
    assert!(!holds(&json));

    std::fs::write(tmp.path().join("const.csv"), "0,1\n10,1\n2000,1\n").unwrap();
    let (code, json) = certificate(&tmp, "kind = \"table\"\npath = \"const.csv\"");
    assert_eq!(code, Some(0));
    assert!(!holds(&json));

    let (code, _) = certificate(&tmp, "kind = \"shifted_power\"\nalpha = 1.0\np = 1.0");
    assert_eq!(code, Some(2));
    let (code, _) = certificate(&tmp, "kind = \"cubic\"");
    assert_eq!(code, Some(2));
}

#[test]
fn single_point_commands_emit_valid_records() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "run.toml", SMALL_SWEEP);
    for (cmd, a) in [("morse", "3.0"), ("diagnose", "0.5")] {
        let out = run(&[cmd, "--config", cfg.to_str().unwrap(), "--a", a, "--grid-points", "512"]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        assert_schema("point", &stdout(&out));
    }
    let out = run(&["morse", "--config", cfg.to_str().unwrap(), "--a", "3.0"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["morse"]["total"], 1);
}

#[test]
fn published_schemas_use_only_validated_keywords() {
    let v = common::schema::Validator::load(&common::schema_dir());
    assert_eq!(v.names().count(), 5);
    assert!(v.unknown_keywords().is_empty(), "{:?}", v.unknown_keywords());
}
