use std::path::Path;
use std::process::{Command, Output};

fn cauchy_dos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cauchy-dos"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn row_at<'a>(csv: &'a str, x: &str) -> Vec<&'a str> {
    csv.lines()
        .find(|l| l.split(',').next() == Some(x))
        .unwrap_or_else(|| panic!("no row {x}"))
        .split(',')
        .collect()
}

#[test]
fn exact_lattice_matches_closed_form() {
    let o = cauchy_dos(&["exact", "--model", "lattice", "--dim", "1", "--lambda", "1", "--grid", "-6:6:0.01"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    assert_eq!(csv.lines().next(), Some("energy,density"));
    assert_eq!(csv.lines().count(), 1202);
    let v: f64 = row_at(&csv, "0")[1].parse().unwrap();
    assert!((v - 1.0 / (std::f64::consts::PI * 5f64.sqrt())).abs() < 1e-6);
}

#[test]
fn exact_bethe_and_continuum() {
    let o = cauchy_dos(&["exact", "--model", "bethe", "--k", "2", "--lambda", "0.001", "--grid", "-1:1:0.5"]);
    let v: f64 = row_at(&stdout(&o), "0")[1].parse().unwrap();
    assert!((v - 0.15005).abs() < 1e-2, "{v}");

    let o = cauchy_dos(&["exact", "--model", "continuum", "--lambda", "0.2", "--grid", "0:4:1"]);
    let csv = stdout(&o);
    assert_eq!(csv.lines().next(), Some("energy,ids"));
    let at4: f64 = row_at(&csv, "4")[1].parse().unwrap();
    assert!((at4 - 2.0 / std::f64::consts::PI).abs() < 0.05, "{at4}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cauchy_dos(&["exact", "--model", "lattice"]).status.code(), Some(2));
    assert_eq!(cauchy_dos(&["exact", "--model", "lattice", "--lambda", "-1"]).status.code(), Some(2));
    assert_eq!(cauchy_dos(&["exact", "--model", "lattice", "--lambda", "1", "--grid", "1:0:0.1"]).status.code(), Some(2));
    assert_eq!(cauchy_dos(&["check", "no-such-check"]).status.code(), Some(2));
    let o = cauchy_dos(&["sample", "--model", "lattice", "--lambda", "1", "--size", "10", "--observe", "ring:3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oversized_box_exits_3_with_hint() {
    let o = cauchy_dos(&["sample", "--model", "lattice", "--dim", "2", "--lambda", "1", "--size", "100", "--observe", "site:0", "--samples", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("charfn"));
}

#[test]
fn forced_threshold_fails_check() {
    let o = cauchy_dos(&["check", "semigroup", "--force-threshold", "0"]);
    assert_eq!(o.status.code(), Some(1));
    let reports: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(reports[0]["pass"], false);
    let o = cauchy_dos(&["check", "analytic-strip"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn single_sample_has_no_error_column() {
    let o = cauchy_dos(&["sample", "--model", "lattice", "--lambda", "1", "--size", "30", "--samples", "1", "--grid", "-1:1:1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("x,mean,mean_im,n_samples"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn sample_compare_exact_columns() {
    let o = cauchy_dos(&[
        "sample", "--model", "bethe", "--lambda", "1", "--depth", "6", "--samples", "8", "--grid", "-1:1:1", "--compare-exact",
    ]);
    assert!(o.status.success());
    let csv = stdout(&o);
    assert_eq!(csv.lines().next(), Some("x,mean,mean_im,std_error,n_samples,exact,z"));
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn charfn_exact_column_uses_offset() {
    let run = |offset: &str| {
        let o = cauchy_dos(&[
            "charfn", "--lambda", "1", "--size", "32", "--samples", "4", "--t-grid", "0:1:0.5", "--psi-offset", offset,
        ]);
        assert!(o.status.success());
        stdout(&o)
    };
    let diag = run("0");
    let off = run("1");
    assert_eq!(diag.lines().next(), Some("t,mean,mean_im,std_error,exact,exact_im"));
    assert_eq!(row_at(&diag, "0")[4], "1");
    assert_eq!(row_at(&off, "0")[4], "0");
    // e^{-1} i J_1(2)
    let im: f64 = row_at(&off, "1")[5].parse().unwrap();
    assert!((im - (-1f64).exp() * 0.576_724_807_756_873_4).abs() < 1e-9, "{im}");
}

#[test]
fn out_writes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("curve.csv");
    let o = cauchy_dos(&["exact", "--model", "lattice", "--lambda", "0.5", "--grid", "-1:1:0.5", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(Path::new(dir.path()).join("curve.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["subcommand"], "exact");
    assert_eq!(manifest["parameters"]["lambda"], 0.5);
    assert_eq!(manifest["outputs"][0], "curve.csv");
    assert!(manifest["version"].is_string());
}
