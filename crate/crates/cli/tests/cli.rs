use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_urban-density"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn num(v: &Value, key: &str) -> f64 {
    v[key]
        .as_f64()
        .unwrap_or_else(|| panic!("{key} missing in {v}"))
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn compute_three_parcel() {
    let v = json_ok(&["compute", "--input", &fixture("three_parcel.csv")]);
    assert!(close(num(&v, "pwd"), 1.5, 1e-12));
    assert!(close(num(&v, "od"), 1.0, 1e-12));
    assert_eq!(v["n_parcels"], 3);
    for key in ["dwp", "dgi", "populated_area", "zero_pop_area"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn compute_uniform_has_unit_dgi() {
    let v = json_ok(&["compute", "--input", &fixture("uniform.csv")]);
    assert!(close(num(&v, "dgi"), 1.0, 1e-12));
}

#[test]
fn compute_inner_melbourne_totals() {
    let v = json_ok(&[
        "compute",
        "--input",
        &fixture("melb_table2_inner_2011_totals.csv"),
    ]);
    assert!(close(num(&v, "od"), 28.49, 0.005));
}

#[test]
fn compute_csv_format() {
    let out = run(&[
        "compute",
        "--input",
        &fixture("uniform.csv"),
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("od,pwd,dwp,dgi,n_parcels,populated_area,zero_pop_area")
    );
    assert_eq!(lines.next(), Some("10,10,60,1,3,6,0"));
}

#[test]
fn compute_missing_file_is_usage_error() {
    let out = run(&["compute", "--input", "/no/such/parcels.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn compute_rejects_bad_rows() {
    let path = scratch("bad_area.csv");
    std::fs::write(&path, "parcel_id,population,area_ha\na,10,0\n").unwrap();
    let out = run(&["compute", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 2"));
}

#[test]
fn unknown_flag_exits_one() {
    assert_eq!(run(&["compute", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&[]).status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_fixture_refinement_holds() {
    let v = json_ok(&[
        "verify",
        "--fine",
        &fixture("fine.csv"),
        "--coarse",
        &fixture("coarse.csv"),
    ]);
    assert_eq!(v["holds"], true);
    assert_eq!(v["equality"], false);
    assert!(num(&v, "pwd_fine") > num(&v, "pwd_coarse"));
}

#[test]
fn verify_corrupted_sums_exit_two() {
    let out = run(&[
        "verify",
        "--fine",
        &fixture("fine_corrupted.csv"),
        "--coarse",
        &fixture("coarse.csv"),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("north"), "{err}");
}

#[test]
fn verify_identity_refinement_is_equality() {
    let v = json_ok(&[
        "verify",
        "--fine",
        &fixture("coarse_identity.csv"),
        "--coarse",
        &fixture("coarse.csv"),
    ]);
    assert_eq!(v["holds"], true);
    assert_eq!(v["equality"], true);
}

#[test]
fn verify_without_parent_column_is_usage_error() {
    let out = run(&[
        "verify",
        "--fine",
        &fixture("coarse.csv"),
        "--coarse",
        &fixture("coarse.csv"),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn corridor_scenario() {
    let v = json_ok(&[
        "scenario", "corridor", "--d", "15", "--big-d", "195", "--w", "0.2", "--l", "1.6",
    ]);
    assert!(close(num(&v, "k"), 2.8125, 1e-12));
    assert!(close(num(&v, "pwd_a"), 57.1875, 1e-10));
    assert!(close(num(&v, "pwd_b"), 70.881, 1e-3));
    assert!(close(num(&v, "pwd_c"), 158.852, 1e-3));
    assert!(v.get("raster").is_none());
}

#[test]
fn corridor_raster_check() {
    let v = json_ok(&[
        "scenario",
        "corridor",
        "--d",
        "15",
        "--big-d",
        "195",
        "--w",
        "0.2",
        "--l",
        "1.6",
        "--check-raster",
        "--cell",
        "0.05",
    ]);
    assert_eq!(v["raster_ok"], true);
    assert!(close(num(&v["raster"], "pwd_c"), num(&v, "pwd_c"), 1e-9));
}

#[test]
fn corridor_bad_cell_is_rejected() {
    let out = run(&[
        "scenario",
        "corridor",
        "--d",
        "15",
        "--big-d",
        "195",
        "--w",
        "0.2",
        "--l",
        "1.6",
        "--check-raster",
        "--cell",
        "0.03",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn growth_minimum() {
    let v = json_ok(&["scenario", "growth", "--u", "0.70711"]);
    assert!(close(num(&v, "pwd_over_d"), 0.82843, 1e-5));
}

#[test]
fn growth_out_of_range_names_parameter() {
    let out = run(&["scenario", "growth", "--u", "0.3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("u"));
}

#[test]
fn growth_curve_file() {
    let path = scratch("growth.csv");
    let out = run(&[
        "scenario",
        "growth",
        "--curve",
        "--n",
        "11",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("u,pwd_over_d"));
    assert_eq!(text.lines().count(), 12);
}

#[test]
fn perturb_delta() {
    let v = json_ok(&[
        "scenario", "perturb", "--p1", "100", "--a1", "10", "--p2", "120", "--a2", "10", "--p0",
        "1000", "--p", "10",
    ]);
    assert!(close(num(&v, "delta"), -0.02, 1e-12));
}

#[test]
fn perturb_overdrawn_transfer_is_rejected() {
    let out = run(&[
        "scenario", "perturb", "--p1", "100", "--a1", "10", "--p2", "120", "--a2", "10", "--p0",
        "1000", "--p", "500",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

fn sweep_cell(metric: &str, file: &str) -> f64 {
    let path = scratch(file);
    let v = json_ok(&["sweep", "--metric", metric, "--out", path.to_str().unwrap()]);
    let summary = num(&v["scenario_cell"], "value");

    let mut rdr = csv::Reader::from_path(&path).unwrap();
    let mut found = None;
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        rows += 1;
        let x: f64 = rec[0].parse().unwrap();
        let y: f64 = rec[1].parse().unwrap();
        if close(x, 0.125, 1e-9) && close(y, 13.0, 1e-9) {
            found = Some(rec[2].parse::<f64>().unwrap());
        }
    }
    assert_eq!(rows, 100 * 100);
    let cell = found.expect("scenario node present in grid");
    assert!(
        close(cell, summary, 1e-12 * cell.abs()),
        "{cell} vs {summary}"
    );
    cell
}

#[test]
fn sweep_pct_diff_scenario_cell() {
    let v = sweep_cell("pct_diff", "fig6.csv");
    assert!(close(v, 23.95, 5e-3), "{v}");
}

#[test]
fn sweep_ratio_c_scenario_cell() {
    let v = sweep_cell("ratio_c", "fig8.csv");
    assert!(close(v, 2.778, 5e-4), "{v}");
}

#[test]
fn sweep_requires_out() {
    assert_eq!(
        run(&["sweep", "--metric", "pct_diff"]).status.code(),
        Some(1)
    );
}

#[test]
fn report_table1_od_column() {
    let series = fixture("melbourne_urban_centre.csv");
    let out = run(&["report", "--series", &series]);
    assert!(out.status.success());

    let mut printed = csv::Reader::from_path(&series).unwrap();
    let printed: Vec<(String, f64)> = printed
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].to_string(), r[3].parse().unwrap())
        })
        .collect();

    let mut report = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = report.headers().unwrap().clone();
    assert_eq!(&headers[0], "year");
    assert_eq!(&headers[1], "od");
    let rows: Vec<csv::StringRecord> = report.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), printed.len());
    for (row, (year, od_printed)) in rows.iter().zip(&printed) {
        assert_eq!(&row[0], year);
        let od: f64 = row[1].parse().unwrap();
        assert!(close(od, *od_printed, 0.05), "{year}: {od} vs {od_printed}");
    }
}

#[test]
fn report_to_file() {
    let path = scratch("table2_inner.csv");
    let out = run(&[
        "report",
        "--series",
        &fixture("melbourne_inner.csv"),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 8);
}
