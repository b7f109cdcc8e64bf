use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn slicereg(dir: &Path, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_slicereg"))
        .args(args)
        .current_dir(dir)
        .env_remove("SLICEREG_SEED")
        .output()
        .unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

fn coeffs(v: &Value) -> Vec<[f64; 4]> {
    v["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            let a: Vec<f64> = c.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
            [a[0], a[1], a[2], a[3]]
        })
        .collect()
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(slicereg(dir.path(), &["series", "make", "koebe", "--degree", "32", "--out", "koebe32.json"]).code, 0);
    fs::write(dir.path().join("q2_plus_qJ.json"), r#"{"degree":2,"coeffs":[[0,0,0,0],[0,0,1,0],[1,0,0,0]]}"#).unwrap();
    dir
}

#[test]
fn make_koebe_has_integer_coefficients() {
    let dir = setup();
    let v = json(&fs::read_to_string(dir.path().join("koebe32.json")).unwrap());
    assert_eq!(v["degree"], 32);
    for (n, c) in coeffs(&v).iter().enumerate() {
        assert_eq!(*c, [n as f64, 0.0, 0.0, 0.0]);
    }
}

#[test]
fn compose_with_identity_reproduces_bytes() {
    let dir = setup();
    let run = slicereg(dir.path(), &["series", "compose", "--g", "koebe32.json", "--w", "identity"]);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout, fs::read_to_string(dir.path().join("koebe32.json")).unwrap());
}

fn round_trip_residuals(dir: &Path, degree: &str) -> (Vec<f64>, Vec<f64>) {
    let name = format!("k{degree}.json");
    assert_eq!(slicereg(dir, &["series", "make", "koebe", "--degree", degree, "--out", &name]).code, 0);
    let inv = slicereg(dir, &["series", "invert-compose", "--g", &name, "--side", "right", "--out", "inv.json"]);
    assert_eq!(inv.code, 0);
    let id = json(&slicereg(dir, &["series", "compose", "--g", &name, "--w", "inv.json"]).stdout);
    let residual = coeffs(&id)
        .iter()
        .enumerate()
        .map(|(n, c)| {
            let want = if n == 1 { 1.0 } else { 0.0 };
            ((c[0] - want).powi(2) + c[1].powi(2) + c[2].powi(2) + c[3].powi(2)).sqrt()
        })
        .collect();
    let inverse = coeffs(&json(&fs::read_to_string(dir.join("inv.json")).unwrap())).iter().map(|c| c[0].abs()).collect();
    (residual, inverse)
}

#[test]
fn inverse_round_trip_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let (res, _) = round_trip_residuals(dir.path(), "24");
    assert!(res.iter().all(|&r| r < 1e-10), "{res:?}");
    // Beyond degree 30 the inverse coefficients (Catalan numbers) exceed 2^53
    // and the residual can only be small relative to them.
    let (res, inv) = round_trip_residuals(dir.path(), "32");
    let scale = inv.iter().copied().fold(1.0, f64::max);
    assert!(res.iter().all(|&r| r < 1e-14 * scale), "{res:?}");
}

#[test]
fn koebe_is_starlike() {
    let dir = setup();
    let run = slicereg(dir.path(), &["check", "slice-starlike", "--series", "koebe32.json"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let v = json(&run.stdout);
    assert_eq!(v["report"]["passed"], true);
    assert_eq!(v["kind"], "slice-starlike");
    assert_eq!(v["series"], "koebe32");
}

#[test]
fn injectivity_negative_control() {
    let dir = setup();
    let run = slicereg(dir.path(), &["check", "injectivity", "--series", "q2_plus_qJ.json", "--unit", "J"]);
    assert_eq!(run.code, 1);
    let v = json(&run.stdout);
    assert_eq!(v["report"]["passed"], false);
    assert_eq!(v["report"]["witness_pair"].as_array().unwrap().len(), 2);
    assert_eq!(slicereg(dir.path(), &["check", "injectivity", "--series", "q2_plus_qJ.json", "--unit", "i"]).code, 0);
}

#[test]
fn spirallike_at_zero_matches_starlike() {
    let dir = setup();
    let a = json(&slicereg(dir.path(), &["check", "spirallike", "--gamma", "0", "--series", "koebe32.json"]).stdout);
    let b = json(&slicereg(dir.path(), &["check", "slice-starlike", "--series", "koebe32.json"]).stdout);
    for key in ["passed", "worst_margin", "witness", "points_checked", "skipped_singular", "skipped_truncation", "slice_margins"] {
        assert_eq!(a["report"][key], b["report"][key], "{key}");
    }
}

#[test]
fn koebe_growth_is_extremal() {
    let dir = setup();
    let run = slicereg(dir.path(), &["verify", "growth", "--series", "koebe32.json"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let r = &json(&run.stdout)["report"];
    assert_eq!(r["passed"], true);
    assert!(r["tightness"].as_f64().unwrap().abs() < 1e-8);
    assert_eq!(r["extremal"], true);
    let w = r["witness"].as_array().unwrap();
    assert!(w[0].as_f64().unwrap() < 0.0 && w[1].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn rogosinski_with_half_identity() {
    let dir = setup();
    let run = slicereg(dir.path(), &["verify", "rogosinski", "--against", "koebe32.json", "--w", "half-identity"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(json(&run.stdout)["series"], "koebe32⦁half-identity");
}

#[test]
fn area_formula_from_inline_tail() {
    let dir = tempfile::tempdir().unwrap();
    let run = slicereg(dir.path(), &["verify", "area", "--tail", r#"{"coeffs":[[0,0,0,0],[0.5,0,0,0]]}"#]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let v = json(&run.stdout);
    let formula = v["report"]["checks"][0]["lhs"].as_f64().unwrap();
    assert!((formula - std::f64::consts::PI * 1.75).abs() < 1e-12);
    assert_eq!(v["config"]["resolution"], 4096);
}

#[test]
fn exit_codes_partition_errors() {
    let dir = setup();
    let d = dir.path();
    fs::write(d.join("bad.json"), "{\"degree\": 2, \"coeffs\": [[0,0,0,0]]}").unwrap();
    fs::write(d.join("shifted.json"), r#"{"degree":1,"coeffs":[[1,0,0,0],[1,0,0,0]]}"#).unwrap();
    assert_eq!(slicereg(d, &["verify", "growth", "--series", "bad.json"]).code, 2);
    assert_eq!(slicereg(d, &["verify", "growth", "--series", "missing.json"]).code, 2);
    assert_eq!(slicereg(d, &["check", "slice-starlike", "--series", "koebe32.json", "--tol", "-1"]).code, 2);
    assert_eq!(slicereg(d, &["check", "slice-starlike", "--series", "koebe32.json", "--units", "2"]).code, 2);
    let domain = slicereg(d, &["verify", "growth", "--series", "shifted.json"]);
    assert_eq!(domain.code, 3);
    assert!(domain.stderr.contains("a_0 = 0"), "{}", domain.stderr);
    assert_eq!(slicereg(d, &["series", "star-inv", "--series", "koebe32.json"]).code, 3);
    // Koebe has Re K' < 0 near -1, so the Caratheodory prerequisite fails.
    assert_eq!(slicereg(d, &["verify", "caratheodory", "--series", "koebe32.json"]).code, 4);
    // z + 1.5 z^-2 has a self-intersecting boundary image.
    let tail = r#"{"coeffs":[[0,0,0,0],[0,0,0,0],[1.5,0,0,0]]}"#;
    assert_eq!(slicereg(d, &["verify", "area", "--tail", tail]).code, 4);
}

#[test]
fn failing_bound_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = r#"{"degree":2,"coeffs":[[0,0,0,0],[1,0,0,0],[3,0,0,0]]}"#;
    let run = slicereg(dir.path(), &["verify", "bieberbach", "--series", f]);
    assert_eq!(run.code, 1);
    assert_eq!(json(&run.stdout)["report"]["passed"], false);
}

#[test]
fn seed_flag_and_env() {
    let dir = setup();
    let v = json(&slicereg(dir.path(), &["check", "slice-starlike", "-s", "koebe32.json", "--seed", "5"]).stdout);
    assert_eq!(v["config"]["grid"]["seed"], 5);
    let out = Command::new(env!("CARGO_BIN_EXE_slicereg"))
        .args(["check", "slice-starlike", "-s", "koebe32.json"])
        .current_dir(dir.path())
        .env("SLICEREG_SEED", "77")
        .output()
        .unwrap();
    assert_eq!(json(&String::from_utf8(out.stdout).unwrap())["config"]["grid"]["seed"], 77);
}

#[test]
fn grid_file_and_overrides() {
    let dir = setup();
    fs::write(dir.path().join("grid.json"), r#"{"radii":[0.2,0.4],"angles_per_circle":16,"unit_count":4,"seed":3}"#).unwrap();
    let run = slicereg(dir.path(), &["check", "slice-starlike", "-s", "koebe32.json", "--grid", "grid.json", "--angles", "8"]);
    let v = json(&run.stdout);
    assert_eq!(v["report"]["points_checked"], 2 * 8 * 4);
    assert_eq!(v["config"]["grid"]["radii"], serde_json::json!([0.2, 0.4]));
}

#[test]
fn truncation_guard_can_be_disabled() {
    let dir = tempfile::tempdir().unwrap();
    let f = r#"{"degree":3,"coeffs":[[0,0,0,0],[1,0,0,0],[0.1,0.2,-0.1,0.05],[0,0.02,0.03,0]]}"#;
    let guarded = slicereg(dir.path(), &["check", "slice-starlike", "-s", f]);
    assert_eq!(guarded.code, 3, "{}", guarded.stderr);
    let open = json(&slicereg(dir.path(), &["check", "slice-starlike", "-s", f, "--truncation-tol", "off"]).stdout);
    assert_eq!(open["report"]["skipped_truncation"], 0);
    assert_eq!(open["config"]["truncation_tol"], Value::Null);
}

#[test]
fn csv_format_is_one_row() {
    let dir = setup();
    let run = slicereg(dir.path(), &["verify", "bieberbach", "-s", "koebe32.json", "--format", "csv"]);
    let lines: Vec<&str> = run.stdout.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("command,kind,series,passed,margin"));
    assert!(lines[1].starts_with("verify,bieberbach,koebe32,true,0"));
    let series = slicereg(dir.path(), &["series", "make", "identity", "--degree", "2", "--format", "csv"]);
    assert_eq!(series.stdout.lines().count(), 4);
}

#[test]
fn series_subcommands() {
    let dir = setup();
    let d = dir.path();
    let e = json(&slicereg(d, &["series", "evaluate", "-s", "koebe32.json", "--q", "0.5,0,0,0"]).stdout);
    assert!((e["value"][0].as_f64().unwrap() - 2.0).abs() < 1e-8);
    let c = json(&slicereg(d, &["series", "classify", "-s", "q2_plus_qJ.json"]).stdout);
    assert_eq!(c["classification"], "slice-preserving [0, 1, 0]");
    assert_eq!(c["order"], 1);
    let c = json(&slicereg(d, &["series", "classify", "-s", "koebe"]).stdout);
    assert_eq!(c["classification"], "intrinsic");
    assert_eq!(c["normalized"], true);
    let s = json(&slicereg(d, &["series", "split", "-s", "q2_plus_qJ.json", "--unit", "i", "--unit-j", "j"]).stdout);
    assert_eq!(s["f2_coeffs"][1], serde_json::json!([1.0, 0.0]));
    let dk = json(&slicereg(d, &["series", "derive", "-s", "koebe32.json"]).stdout);
    assert_eq!(coeffs(&dk)[2][0], 9.0);
    let one = json(&slicereg(d, &["series", "star-mul", "--degree", "8", "--f", "geometric", "--g", r#"{"degree":1,"coeffs":[[1,0,0,0],[-1,0,0,0]]}"#]).stdout);
    assert_eq!(coeffs(&one)[5], [0.0; 4]);
    let a = json(&slicereg(d, &["series", "make", "alexander", "--from", "koebe32.json"]).stdout);
    assert!(coeffs(&a)[1..].iter().all(|c| *c == [1.0, 0.0, 0.0, 0.0]));
    let m = slicereg(d, &["series", "make", "mobius", "--t", "1.5"]);
    assert_eq!(m.code, 3);
    assert_eq!(slicereg(d, &["series", "make", "dilation"]).code, 2);
}

#[test]
fn report_aggregates_in_stable_order() {
    let dir = setup();
    let d = dir.path();
    fs::create_dir(d.join("reports")).unwrap();
    let empty = slicereg(d, &["report", "reports"]);
    assert_eq!(empty.code, 0);
    assert_eq!(fs::read_to_string(d.join("reports/summary.csv")).unwrap().lines().count(), 1);
    fs::remove_file(d.join("reports/summary.csv")).unwrap();
    fs::remove_file(d.join("reports/margins.dat")).unwrap();

    slicereg(d, &["check", "slice-starlike", "-s", "koebe32.json", "--out", "reports/b.json"]);
    slicereg(d, &["verify", "bieberbach", "-s", "koebe32.json", "--out", "reports/a.json"]);
    assert_eq!(slicereg(d, &["report", "reports", "--out", "t1"]).code, 0);
    let table = fs::read_to_string(d.join("t1/summary.csv")).unwrap();
    let kinds: Vec<&str> = table.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(kinds, ["bieberbach", "slice-starlike"]);
    let margins = fs::read_to_string(d.join("t1/margins.dat")).unwrap();
    assert_eq!(margins.lines().count(), 3);

    slicereg(d, &["check", "slice-starlike", "-s", "koebe32.json", "--out", "reports/b.json"]);
    assert_eq!(slicereg(d, &["report", "reports", "--out", "t2"]).code, 0);
    assert_eq!(table, fs::read_to_string(d.join("t2/summary.csv")).unwrap());

    fs::write(d.join("reports/c.json"), r#"{"tool":"x"}"#).unwrap();
    assert_eq!(slicereg(d, &["report", "reports", "--out", "t3"]).code, 2);
}
