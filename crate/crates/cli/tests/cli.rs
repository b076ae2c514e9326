use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn nbtrace(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nbtrace"))
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .output()
        .expect("binary runs")
}

fn error_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is one JSON object")
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

const K4: &str = "4 3 simple\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";

fn k4(dir: &Path) -> String {
    let path = dir.join("k4.txt");
    fs::write(&path, K4).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn csv_headers_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let out = nbtrace(tmp.path(), &["km-curve", "--d", "3", "--grid", "11"]);
    assert!(out.status.success());
    let csv = read(tmp.path(), "km_curve.csv");
    assert_eq!(csv.lines().next(), Some("mu [eigenvalue],kesten_mckay [1/eigenvalue]"));
    assert_eq!(csv.lines().count(), 12);
    let manifest: Value = serde_json::from_str(&read(tmp.path(), "manifest.json")).unwrap();
    assert_eq!(manifest["schema"], 1);
    assert_eq!(manifest["command"], "km-curve");
    assert_eq!(manifest["config_sha256"].as_str().unwrap().len(), 64);
    assert!(manifest["wall_time_s"].is_number());
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["ensemble", "--V", "30", "--d", "3", "--samples", "6", "--observable", "spectrum", "--seed", "5"];
    assert!(nbtrace(a.path(), &args).status.success());
    assert!(nbtrace(b.path(), &args).status.success());
    assert_eq!(read(a.path(), "ensemble.csv"), read(b.path(), "ensemble.csv"));
    let hash = |d: &Path| {
        let m: Value = serde_json::from_str(&read(d, "manifest.json")).unwrap();
        m["config_sha256"].clone()
    };
    assert_eq!(hash(a.path()), hash(b.path()));
}

#[test]
fn usage_errors_exit_two_with_json() {
    let tmp = tempfile::tempdir().unwrap();
    let out = nbtrace(tmp.path(), &["ensemble", "--V", "5", "--d", "3", "--samples", "1", "--observable", "trY"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_json(&out)["error"]["kind"], "usage");

    let out = nbtrace(tmp.path(), &["unitary", "--graph", "g", "--phi", "1", "--km-branch", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_json(&out)["schema"], 1);

    let out = nbtrace(tmp.path(), &["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn module_errors_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.txt");
    fs::write(&bad, "4 3 simple\n0 1\n").unwrap();
    let out = nbtrace(tmp.path(), &["spectrum", "--graph", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_json(&out)["error"]["kind"], "module");
}

#[test]
fn walk_counts_json_shape() {
    let tmp = tempfile::tempdir().unwrap();
    let g = k4(tmp.path());
    let out = nbtrace(
        tmp.path(),
        &["walk-counts", "--graph", &g, "--tmax", "5", "--method", "enum", "--format", "json"],
    );
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&read(tmp.path(), "walk_counts.json")).unwrap();
    assert_eq!(v["counts"]["5"]["1"], "120");
    assert_eq!(v["counts"]["3"]["0"], "24");
}

#[test]
fn bartholdi_over_generated_graphs() {
    let tmp = tempfile::tempdir().unwrap();
    let gen = ["ensemble", "--V", "12", "--d", "3", "--samples", "3", "--observable", "trY", "--save-graphs", "graphs"];
    assert!(nbtrace(tmp.path(), &gen).status.success());
    let graphs = tmp.path().join("graphs");
    assert_eq!(fs::read_dir(&graphs).unwrap().count(), 3);
    let out = nbtrace(tmp.path(), &["verify-bartholdi", "--graphs", graphs.to_str().unwrap(), "--points", "4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&read(tmp.path(), "report.json")).unwrap();
    assert_eq!(report["failed"], 0);
    assert!(report["max_residual"].as_f64().unwrap() < 1e-9);
}

#[test]
fn matrix_dump_with_edge_labels() {
    let tmp = tempfile::tempdir().unwrap();
    let g = k4(tmp.path());
    assert!(nbtrace(tmp.path(), &["matrix", "--graph", &g, "--kind", "B"]).status.success());
    // 12 directed edges, each followed by 3
    assert_eq!(read(tmp.path(), "matrix_B.csv").lines().count(), 1 + 36);
    assert_eq!(read(tmp.path(), "matrix_B_edges.csv").lines().count(), 1 + 12);
    let out = nbtrace(tmp.path(), &["matrix", "--graph", &g, "--kind", "U"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn repro_fig1_and_plot_script() {
    let tmp = tempfile::tempdir().unwrap();
    assert!(nbtrace(tmp.path(), &["repro", "fig1", "--grid", "50"]).status.success());
    let csv = read(tmp.path(), "fig1.csv");
    assert!(csv.lines().next().unwrap().contains("rho_smooth_w1.7"));
    assert_eq!(csv.lines().count(), 51);
    assert!(read(tmp.path(), "plot_fig1.py").contains("fig1.csv"));
}

#[test]
fn phi_km_ratio_and_branch_agree() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let common = ["phi-km", "--d", "4", "--V", "100", "--grid", "40"];
    let mut with_ratio = common.to_vec();
    with_ratio.extend(["--ratio", "-2"]);
    let mut with_branch = common.to_vec();
    with_branch.extend(["--branch", "-100"]);
    assert!(nbtrace(a.path(), &with_ratio).status.success());
    assert!(nbtrace(b.path(), &with_branch).status.success());
    assert_eq!(read(a.path(), "phi.csv"), read(b.path(), "phi.csv"));
}

#[test]
fn unitary_density_columns() {
    let tmp = tempfile::tempdir().unwrap();
    let g = k4(tmp.path());
    let out = nbtrace(
        tmp.path(),
        &["unitary", "--graph", &g, "--phi", "-1.5708", "--mu-grid", "-2:2:0.5", "--tmax", "10"],
    );
    assert!(out.status.success());
    let csv = read(tmp.path(), "density.csv");
    assert_eq!(csv.lines().count(), 10);
    assert!(csv.starts_with("mu [eigenvalue],smooth"));
}
