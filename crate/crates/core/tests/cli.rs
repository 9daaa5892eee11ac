//! The `cognate` binary, driven through its documented file formats.

mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cognate::bf::{classify, nonlinearity, TruthTable};
use cognate::cognate::initial_ensemble;
use cognate::sbox::{sbox_report, SboxReport, SubstitutionTable};
use common::*;
use serde_json::Value;
use sha2::{Digest, Sha256};

fn cognate(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cognate"))
        .current_dir(dir)
        .env_remove("SOURCE_DATE_EPOCH")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn workdir(files: &[(&str, &str)]) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in files {
        fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

#[test]
fn analyze_reports_properties() {
    let dir = workdir(&[
        ("and.txt", "0001\n"),
        ("parity.txt", "hex:6996\n"),
        ("empty.txt", ""),
    ]);
    let out = cognate(dir.path(), &["analyze", "and.txt"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["nonlinearity"], 1);
    assert_eq!(v["report"]["algebraic_degree"], 2);
    assert_eq!(v["manifest"]["subcommand"], "analyze");

    let v = json(&cognate(dir.path(), &["analyze", "parity.txt"]));
    assert_eq!(v["function"], "0110100110010110");
    assert_eq!(v["report"]["nonlinearity"], 0);
    assert_eq!(v["report"]["algebraic_degree"], 1);
    assert_eq!(v["report"]["balanced"], true);

    assert_eq!(
        cognate(dir.path(), &["analyze", "empty.txt"]).status.code(),
        Some(2)
    );
}

#[test]
fn malformed_input_points_at_the_cell() {
    let dir = workdir(&[("bad.txt", "# header\n  01x1\n")]);
    let out = cognate(dir.path(), &["analyze", "bad.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("bad.txt:2:5"), "{}", stderr(&out));
}

#[test]
fn ensemble_counts_and_warnings() {
    let bent = fs::read_to_string(fixture("bent4.txt")).unwrap();
    let dir = workdir(&[
        ("bent.txt", &bent),
        ("none.txt", ""),
        ("half.txt", "min_nonlinearity = 8\n"),
        ("nl4.txt", "min_nonlinearity = 4\n"),
        ("n5.txt", "n = 5\n"),
    ]);
    let out = cognate(dir.path(), &["ensemble", "bent.txt", "none.txt"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("# kept 32 of 32"));
    assert!(stderr(&out).contains("kept 32 of 32"));

    let out = cognate(dir.path(), &["ensemble", "bent.txt", "half.txt"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("# kept 0 of 32"));
    assert!(stderr(&out).contains("warning"));

    let nominal = TruthTable::inner_product(4).unwrap();
    let expected = initial_ensemble(&nominal)
        .tables()
        .filter(|t| nonlinearity_by_distance(&bits(t)) >= 4)
        .count();
    let out = cognate(dir.path(), &["ensemble", "bent.txt", "nl4.txt"]);
    assert!(stdout(&out).contains(&format!("# kept {expected} of 32")));

    let out = cognate(dir.path(), &["ensemble", "bent.txt", "n5.txt"]);
    assert_eq!(out.status.code(), Some(2));

    let quiet = cognate(dir.path(), &["ensemble", "bent.txt", "half.txt", "--quiet"]);
    assert!(stderr(&quiet).is_empty());
}

#[test]
fn search_is_deterministic_and_reports_status() {
    let dir = workdir(&[
        (
            "c6.txt",
            "n = 6\nrequire_balanced = true\nmin_nonlinearity = 24\nmax_absolute_indicator = 32\n",
        ),
        ("c4.txt", "n = 4\nmin_nonlinearity = 8\n"),
        ("c5.txt", "n = 5\nmin_nonlinearity = 13\n"),
    ]);
    let a = cognate(dir.path(), &["search", "c6.txt", "--seed", "42"]);
    let b = cognate(dir.path(), &["--seed", "42", "search", "c6.txt"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("# status: success\n"));
    let f: TruthTable = text.parse().unwrap();
    assert!(f.is_balanced() && nonlinearity(&f) >= 24);

    let out = cognate(dir.path(), &["search", "c4.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).is_empty());

    let out = cognate(
        dir.path(),
        &[
            "search",
            "c5.txt",
            "--max-iter",
            "30",
            "--restarts",
            "2",
            "--out",
            "best.txt",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let written = fs::read_to_string(dir.path().join("best.txt")).unwrap();
    assert!(written.starts_with("# status: failed\n"));
    assert!(written.parse::<TruthTable>().is_ok());
}

#[test]
fn sbox_build_and_analyze() {
    let coords: Vec<String> = (1..=4)
        .map(|i| fs::read_to_string(fixture(&format!("x{i}.txt"))).unwrap())
        .collect();
    let searched = fs::read_to_string(fixture("searched4.txt")).unwrap();
    let dir = workdir(&[
        ("x1.txt", &coords[0]),
        ("x2.txt", &coords[1]),
        ("x3.txt", &coords[2]),
        ("x4.txt", &coords[3]),
        ("and.txt", "0001\n"),
        ("searched.txt", &searched),
    ]);
    let out = cognate(
        dir.path(),
        &[
            "sbox", "build", "x1.txt", "x2.txt", "x3.txt", "x4.txt", "--out", "id.txt",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let id =
        SubstitutionTable::parse(&fs::read_to_string(dir.path().join("id.txt")).unwrap()).unwrap();
    assert_eq!(id, SubstitutionTable::identity(4).unwrap());

    let v = json(&cognate(dir.path(), &["sbox", "analyze", "id.txt"]));
    assert_eq!(v["report"]["min_nonlinearity"], 0);
    assert_eq!(v["report"]["bijective"], true);

    let v = json(&cognate(dir.path(), &["sbox", "analyze", "searched.txt"]));
    let via_cli: SboxReport = serde_json::from_value(v["report"].clone()).unwrap();
    assert_eq!(
        via_cli,
        sbox_report(&SubstitutionTable::parse(&searched).unwrap())
    );

    let out = cognate(dir.path(), &["sbox", "build", "x1.txt", "and.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn select_ranks_by_a_measured_criterion() {
    let dir = workdir(&[
        ("a.txt", "0000\n"),
        ("b.txt", "0001\n"),
        ("c.txt", "0110\n"),
        ("nl.txt", "nl = measured benefit nonlinearity\n"),
        ("bad.txt", "x = measured benefit no_such_metric\n"),
    ]);
    for f in ["a", "b", "c"] {
        let out = cognate(
            dir.path(),
            &[
                "analyze",
                &format!("{f}.txt"),
                "--out",
                &format!("{f}.json"),
            ],
        );
        assert_eq!(out.status.code(), Some(0));
    }
    // NL: a = 0, b = 1, c = 0
    let v = json(&cognate(
        dir.path(),
        &["select", "nl.txt", "a.json", "b.json", "c.json"],
    ));
    assert_eq!(v["elected"]["label"], "b.json");
    let order: Vec<&str> = v["ranking"]["ranking"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["label"].as_str().unwrap())
        .collect();
    assert_eq!(order, ["b.json", "a.json", "c.json"]);

    let out = cognate(dir.path(), &["select", "bad.txt", "a.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn select_with_uniform_criteria_weights_them_equally() {
    let criteria = (0..4).map(|_| "1 1 1 1").collect::<Vec<_>>().join("\n");
    let dir = workdir(&[
        ("ones.txt", &criteria),
        (
            "p.txt",
            "criteria = ones.txt\na = measured benefit nonlinearity\nb = measured cost absolute_indicator\nc = measured benefit algebraic_degree\nd = measured benefit weight\n",
        ),
        ("f.txt", "00010111\n"),
        ("g.txt", "00000001\n"),
    ]);
    let out = cognate(dir.path(), &["select", "p.txt", "f.txt", "g.txt"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    for w in json(&out)["ranking"]["criteria_weights"]
        .as_array()
        .unwrap()
    {
        assert!((w.as_f64().unwrap() - 0.25).abs() < 1e-12);
    }
}

#[test]
fn select_rejects_more_than_ten_criteria() {
    let names: Vec<String> = (0..11)
        .map(|i| format!("c{i} = measured benefit weight"))
        .collect();
    let dir = workdir(&[("p.txt", &names.join("\n")), ("f.txt", "0001\n")]);
    let out = cognate(dir.path(), &["select", "p.txt", "f.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mixed_fixture_matches_library_composition() {
    let dir = fixture("mixed");
    let out = cognate(
        &dir,
        &["select", "problem.txt", "f1.txt", "f2.txt", "f3.txt"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);

    let (cw, _) = eigen_oracle(
        &cognate::ahp::ComparisonMatrix::parse(
            &fs::read_to_string(dir.join("criteria.txt")).unwrap(),
        )
        .unwrap()
        .to_f64(),
    );
    let (pref, _) = eigen_oracle(
        &cognate::ahp::ComparisonMatrix::parse(
            &fs::read_to_string(dir.join("preference.txt")).unwrap(),
        )
        .unwrap()
        .to_f64(),
    );
    let reports: Vec<_> = ["f1.txt", "f2.txt", "f3.txt"]
        .iter()
        .map(|f| classify(&fs::read_to_string(dir.join(f)).unwrap().parse().unwrap()))
        .collect();
    let nl: Vec<f64> = reports.iter().map(|r| r.nonlinearity as f64).collect();
    let ac: Vec<f64> = reports
        .iter()
        .map(|r| r.absolute_indicator as f64 + 1.0)
        .collect();
    assert!(
        reports.iter().any(|r| r.absolute_indicator == 0),
        "fixture exercises the zero shift"
    );
    let nl_sum: f64 = nl.iter().sum();
    let inv_sum: f64 = ac.iter().map(|v| 1.0 / v).sum();
    let scores = v["ranking"]["scores"].as_array().unwrap();
    for j in 0..3 {
        let expect = cw[0] * nl[j] / nl_sum + cw[1] * (1.0 / ac[j]) / inv_sum + cw[2] * pref[j];
        assert!((scores[j].as_f64().unwrap() - expect).abs() < 1e-10);
    }
}

#[test]
fn manifests_record_input_digests() {
    let dir = workdir(&[("f.txt", "0001\n")]);
    let v = json(&cognate(dir.path(), &["analyze", "f.txt"]));
    let m = &v["manifest"];
    assert_eq!(m["tool"], "cognate");
    assert_eq!(m["inputs"][0]["path"], "f.txt");
    let digest: String = Sha256::digest(b"0001\n")
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    assert_eq!(m["inputs"][0]["sha256"], digest.as_str());
    assert_eq!(m["timestamp"], Value::Null);
}

#[test]
fn usage_errors_exit_two() {
    let dir = workdir(&[]);
    assert_eq!(cognate(dir.path(), &[]).status.code(), Some(2));
    assert_eq!(
        cognate(dir.path(), &["transmogrify"]).status.code(),
        Some(2)
    );
    assert_eq!(
        cognate(dir.path(), &["analyze", "missing.txt"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(cognate(dir.path(), &["--help"]).status.code(), Some(0));
}
