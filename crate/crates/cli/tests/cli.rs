use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn scopt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scopt"))
        .args(args)
        .env_remove("SCOPT_PRESET_DIR")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = scopt(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn fails(args: &[&str]) -> String {
    let out = scopt(args);
    assert!(!out.status.success(), "{args:?} unexpectedly succeeded");
    String::from_utf8(out.stderr).unwrap()
}

/// CSV body without the leading manifest comment.
fn csv_rows(text: &str) -> Vec<BTreeMap<String, String>> {
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# manifest "));
    let body: Vec<&str> = lines.collect();
    let joined = body.join("\n");
    let mut rdr = csv::Reader::from_reader(joined.as_bytes());
    rdr.deserialize().map(|r| r.unwrap()).collect()
}

fn hashes(dir: &Path) -> BTreeMap<String, String> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "manifest.json")
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, hex::encode(Sha256::digest(fs::read(&p).unwrap())))
        })
        .collect()
}

#[test]
fn compare_reruns_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        ok(&["compare", "--network", "googlenet", "--network", "shufflenet_v2", "--out", d.path().to_str().unwrap()]);
    }
    let (ha, hb) = (hashes(a.path()), hashes(b.path()));
    assert_eq!(ha.len(), 3 + 2 * 3);
    assert_eq!(ha, hb);
    let m: Value = serde_json::from_str(&fs::read_to_string(a.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "compare");
    assert!(m["timestamp_unix"].is_u64());
}

#[test]
fn functional_reruns_are_identical() {
    let args = ["functional", "--trials", "200", "--seed", "7"];
    assert_eq!(ok(&args), ok(&args));
}

#[test]
fn unknown_preset_lists_available() {
    let err = fails(&["simulate", "--network", "resnet50", "--accelerator", "no-such-thing"]);
    for name in ["sconna-paper", "mam-holylight", "amm-deapcnn"] {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn preset_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = scopt::arch::preset("sconna-paper").unwrap();
    let custom = scopt::arch::AcceleratorConfig {
        name: "half".into(),
        total_vdpes: cfg.total_vdpes / 2,
        ..cfg
    };
    fs::write(dir.path().join("half.json"), custom.to_json_string()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_scopt"))
        .args(["simulate", "--network", "googlenet", "--accelerator", "half"])
        .env("SCOPT_PRESET_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["metrics"]["accelerator"], "half");
    assert_eq!(v["manifest"]["run"]["presets"][0], "half");
}

#[test]
fn zero_bitrate_is_rejected() {
    let err = fails(&["solve", "--B", "8", "--BR", "0"]);
    assert!(err.contains("bitrate"), "{err}");
}

#[test]
fn zero_trials_is_rejected() {
    let err = fails(&["functional", "--trials", "0"]);
    assert!(err.contains("trials"), "{err}");
}

#[test]
fn pinned_sensitivity_gives_scalability_report() {
    let v: Value = serde_json::from_str(&ok(&["solve", "--preset", "table-iii", "--pin-ppd", "-28"])).unwrap();
    let n = v["result"][0]["N_max"].as_u64().unwrap();
    assert!((130..=200).contains(&n), "{n}");
    assert!(v["result"][0]["ledger"]["total_dbm"].as_f64().unwrap() <= 10.0);
}

#[test]
fn infeasible_budget_exits_nonzero_with_ledger() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("weak.json");
    fs::write(&params, r#"{"p_laser_dbm": -40}"#).unwrap();
    let out = scopt(&["solve", "--params", params.to_str().unwrap(), "--pin-ppd", "-28"]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("il_penalty") && err.contains("infeasible"), "{err}");
}

#[test]
fn sweep_n_max_does_not_grow_with_bitrate() {
    let rows = csv_rows(&ok(&["solve", "--sweep", "--sweep-bits", "8", "--format", "csv"]));
    assert_eq!(rows.len(), 4);
    let n: Vec<u32> = rows.iter().map(|r| r["N_max"].parse().unwrap()).collect();
    assert!(n.windows(2).all(|w| w[1] <= w[0]), "{n:?}");
}

#[test]
fn stats_on_bundled_networks() {
    let rows = csv_rows(&ok(&["stats", "resnet50", "googlenet", "--format", "csv"]));
    let total = |i: usize| rows[i]["total"].parse::<u64>().unwrap();
    assert_eq!(rows[0]["network"], "resnet50");
    assert!(total(0).abs_diff(26563) * 200 <= 26563);
    assert!(total(1).abs_diff(7567) * 200 <= 7567);
    let one = csv_rows(&ok(&["stats", "mobilenet_v2", "--threshold", "1", "--format", "csv"]));
    let n = |k: &str| one[0][k].parse::<u64>().unwrap();
    assert_eq!(n("at_or_below") + n("above"), n("total"));
}

#[test]
fn stats_rejects_bad_descriptor() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    fs::write(&p, r#"{"name":"bad","layers":[{"name":"c","kind":"conv","H":4,"W":4,"D":1,"K":9,"L":1,"stride":1}]}"#).unwrap();
    fails(&["stats", p.to_str().unwrap()]);
}

#[test]
fn self_comparison_ratios_are_one() {
    let dir = tempfile::tempdir().unwrap();
    ok(&[
        "compare",
        "--network",
        "shufflenet_v2",
        "--accelerator",
        "mam-holylight",
        "--accelerator",
        "mam-holylight",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let rows = csv_rows(&fs::read_to_string(dir.path().join("ratios.csv")).unwrap());
    assert!(!rows.is_empty());
    for r in rows {
        assert_eq!(r["ratio"].parse::<f64>().unwrap(), 1.0);
    }
}

#[test]
fn outputs_parse_back_losslessly() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["compare", "--network", "googlenet", "--out", dir.path().to_str().unwrap()]);
    let doc: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("comparison.json")).unwrap()).unwrap();
    let metrics = doc["result"]["metrics"].as_array().unwrap();
    let long = csv_rows(&fs::read_to_string(dir.path().join("metrics_long.csv")).unwrap());
    for m in metrics {
        let fps = m["fps"].as_f64().unwrap();
        let row = long
            .iter()
            .find(|r| r["accelerator"] == m["accelerator"].as_str().unwrap() && r["metric"] == "fps")
            .unwrap();
        assert_eq!(row["value"].parse::<f64>().unwrap().to_bits(), fps.to_bits());
        let back: scopt::sim::SimMetrics = serde_json::from_value(m.clone()).unwrap();
        assert_eq!(serde_json::to_value(&back).unwrap(), *m);
    }
}

#[test]
fn simulate_crosscheck_stays_within_bound() {
    let v: Value = serde_json::from_str(&ok(&["simulate", "--network", "mobilenet_v2", "--crosscheck", "Conv1", "--crosscheck-points", "8"])).unwrap();
    assert_eq!(v["result"]["crosscheck"][0]["within_bound"], true);
    assert!(v["result"]["metrics"]["fps"].as_f64().unwrap() > 0.0);
}
