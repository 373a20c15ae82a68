use std::path::Path;
use std::process::{Command, Output};

use kspectra::number::{parse_rational, ratio};
use serde_json::Value as Json;

fn kspectra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kspectra")).args(args).env_remove("KSPECTRA_OUT_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Json {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn invariants_examples() {
    for (domain, r, a, b, d) in [("I:2,2", 2, 2.0, 0, 4), ("IV:6", 2, 4.0, 0, 6), ("II:1", 1, 1.0, 0, 1), ("III:5", 2, 4.0, 2, 10)] {
        let o = kspectra(&["invariants", "--domain", domain]);
        assert!(o.status.success());
        let v = json(&o);
        assert_eq!(v["r"], r);
        assert_eq!(v["a"]["value"].as_f64().unwrap(), a);
        assert_eq!(v["b"], b);
        assert_eq!(v["d"], d);
        assert_eq!(v["coordinates"].as_array().unwrap().len(), d);
    }
    let pretty = stdout(&kspectra(&["invariants", "--domain", "II:2", "--format", "pretty"]));
    assert!(pretty.contains("z11 √2·z12 z22"));
}

#[test]
fn invariants_reports_parse_position() {
    let o = kspectra(&["invariants", "--domain", "I:2,x"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position"));
}

#[test]
fn hardy_table_delta_is_rank() {
    let o = kspectra(&["table", "--domain", "I:2,2", "--weights", "hardy", "--max-weight", "6", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s1,s2,tau,delta,delta_source,eta_derived,eta_printed"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0][..3], ["0", "0", "0"]);
    assert!(rows.iter().all(|r| r[3] == "2"));
}

#[test]
fn ball_tau_column() {
    let v = json(&kspectra(&["table", "--domain", "I:1,2", "--weights", "bergman:3", "--max-weight", "5"]));
    for row in v["rows"].as_array().unwrap() {
        let n: i64 = row["s"].as_str().unwrap().trim_matches(['[', ']']).parse().unwrap();
        let tau = parse_rational(row["tau"]["exact"].as_str().unwrap()).unwrap();
        assert_eq!(tau, ratio(n, n + 2));
    }
}

#[test]
fn csv_and_json_agree() {
    let args = ["table", "--domain", "III:5", "--weights", "bergman:29/4", "--max-weight", "5"];
    let j = json(&kspectra(&args));
    let c = stdout(&kspectra(&[&args[..], &["--format", "csv"]].concat()));
    let rows = j["rows"].as_array().unwrap();
    for (line, row) in c.lines().skip(1).zip(rows) {
        let cols: Vec<&str> = line.split(',').collect();
        for (k, key) in [(2, "tau"), (3, "delta")] {
            assert_eq!(cols[k].parse::<f64>().unwrap(), row[key]["value"].as_f64().unwrap());
        }
        if !cols[5].is_empty() {
            assert_eq!(cols[5].parse::<f64>().unwrap(), row["eta_derived"]["value"].as_f64().unwrap());
        }
    }
    assert_eq!(c.lines().count(), rows.len() + 1);
}

#[test]
fn check_exit_codes() {
    let code = |args: &[&str]| kspectra(args).status.code().unwrap();
    assert_eq!(code(&["check", "bounded", "--domain", "I:2,2", "--weights", "bergman:3"]), 0);
    assert_eq!(code(&["check", "similar", "--domain", "I:2,2", "--weights", "bergman:3", "--weights2", "bergman:4"]), 1);
    assert_eq!(code(&["check", "ess-normal", "--domain", "I:1,3", "--weights", "bergman:5"]), 0);
    assert_eq!(code(&["check", "ess-normal", "--domain", "I:2,2", "--weights", "bergman:3"]), 1);
    assert_eq!(code(&["check", "hardy-identity", "--domain", "III:4", "--max-weight", "6"]), 0);
    assert_eq!(code(&["check", "unitary-equiv", "--domain", "I:2,2", "--weights", "hardy", "--weights2", "bergman:2"]), 0);
    assert_eq!(code(&["check", "nonsense", "--domain", "I:2,2"]), 3);

    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("w.csv");
    let mut text = String::from("s1,s2,a_s\n");
    for n in 0..=6u32 {
        for k in 0..=n / 2 {
            text += &format!("{},{},{}\n", n - k, k, 1 + n * n);
        }
    }
    std::fs::write(&table, text).unwrap();
    let spec = format!("table:{}", table.display());
    let o = kspectra(&["check", "bounded", "--domain", "I:2,2", "--weights", &spec, "--max-weight", "5"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["decision"], "EvidenceOnly");
}

#[test]
fn verify_runs() {
    let o = kspectra(&["verify", "--domain", "II:2", "--weights", "hardy", "--max-weight", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let o = kspectra(&["verify", "--domain", "I:2,2", "--weights", "hardy", "--max-weight", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    for row in v["per_signature"].as_array().unwrap() {
        assert!((row["delta_measured"].as_f64().unwrap() - 2.0).abs() < 1e-8);
    }
    let o = kspectra(&["verify", "--domain", "IV:5", "--weights", "hardy"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "domain = I:2,2\nweights = bergman:3\nmax_weight = 2\nformat = csv\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let base = stdout(&kspectra(&["table", "--config", cfg]));
    assert_eq!(base.lines().count(), 1 + 4);
    let over = stdout(&kspectra(&["table", "--config", cfg, "--max-weight", "3"]));
    assert_eq!(over.lines().count(), 1 + 6);
    assert!(over.starts_with(&base));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = |extra: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_kspectra"))
            .args([&["table", "--domain", "I:2,2", "--weights", "hardy", "--max-weight", "2"], extra].concat())
            .env("KSPECTRA_OUT_DIR", dir.path())
            .output()
            .unwrap()
    };
    let o = run(&[]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 1);
    assert_eq!(files[0].extension().unwrap(), "json");
    let o = run(&["--out", "sub/t.csv", "--format", "csv"]);
    assert!(o.status.success());
    assert!(Path::new(&dir.path().join("sub/t.csv")).exists());
}

#[test]
fn outputs_are_byte_identical() {
    let args = ["table", "--domain", "II:3", "--weights", "classical-bergman", "--max-weight", "6"];
    assert_eq!(kspectra(&args).stdout, kspectra(&args).stdout);
    let args = ["verify", "--domain", "I:2,2", "--weights", "bergman:4", "--max-weight", "2", "--seed", "5"];
    assert_eq!(kspectra(&args).stdout, kspectra(&args).stdout);
}
