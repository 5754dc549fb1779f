use std::path::Path;
use std::process::{Command, Output};

fn bsm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bsm")).args(args).env_remove("BSM_OUTPUT_DIR").output().expect("run bsm")
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

fn value(csv: &str, key: &str) -> String {
    rows(csv).into_iter().find(|r| r[0] == key).unwrap_or_else(|| panic!("no {key}"))[1].clone()
}

#[test]
fn mub_verify_exit_codes() {
    assert_eq!(bsm(&["mub", "verify", "--d", "5"]).status.code(), Some(0));
    let out = bsm(&["mub", "verify", "--d", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unsupported dimension"));
    assert_eq!(bsm(&["mub", "verify", "--d", "7", "--tol", "1e-20"]).status.code(), Some(2));
}

#[test]
fn wse_run_is_deterministic() {
    let mut texts = Vec::new();
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for dir in &dirs {
        let args = ["wse", "run", "--d", "3", "--n", "1000", "--trials", "100", "--seed", "7", "--out", "s.csv", "--transcripts", "t.json"];
        let status = Command::new(env!("CARGO_BIN_EXE_bsm")).args(args).current_dir(dir.path()).env_remove("BSM_OUTPUT_DIR").status().unwrap();
        assert_eq!(status.code(), Some(0));
        texts.push((read(&dir.path().join("s.csv")), read(&dir.path().join("t.json"))));
    }
    assert_eq!(texts[0], texts[1]);
    let (csv, _) = &texts[0];
    assert!(csv.starts_with("# bsm wse-run config="));
    assert!(csv.lines().next().unwrap().ends_with("seed=7"));
    assert_eq!(csv.lines().nth(1).unwrap(), "trial,|I|,empirical_rate,analytic_rate");
    assert_eq!(rows(csv).len(), 100);
}

#[test]
fn wse_attack_rate_and_validation() {
    let out = bsm(&["wse", "attack", "--strategy", "store-subset", "--nu", "0.3", "--r", "1", "--d", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    let analytic: f64 = rows(&csv)[0][3].parse().unwrap();
    assert!((analytic - 0.7 * (6f64.log2() - 1.0)).abs() < 1e-9);
    assert!((analytic - 1.1095).abs() < 1e-4);

    let out = bsm(&["wse", "attack", "--strategy", "store-subset", "--nu", "1.5", "--d", "5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn region_endpoints_and_ordering() {
    for (d, want) in [("4", 0.660964), ("5", 0.6826062)] {
        let out = bsm(&["region", "--d", d, "--grid", "100"]);
        assert_eq!(out.status.code(), Some(0));
        let csv = String::from_utf8(out.stdout).unwrap();
        assert_eq!(csv.lines().nth(1).unwrap(), "r,capacity,nu_star_new,nu_star_old");
        let rows = rows(&csv);
        assert_eq!(rows.len(), 100);
        let last = rows.last().unwrap();
        assert_eq!(last[0].parse::<f64>().unwrap(), 1.0);
        assert!((last[2].parse::<f64>().unwrap() - want).abs() < 1e-6);
        for r in &rows {
            assert!(r[2].parse::<f64>().unwrap() >= r[3].parse::<f64>().unwrap());
        }
    }
}

#[test]
fn json_and_csv_carry_the_same_numbers() {
    let csv = String::from_utf8(bsm(&["region", "--d", "5", "--grid", "7"]).stdout).unwrap();
    let json = String::from_utf8(bsm(&["region", "--d", "5", "--grid", "7", "--format", "json"]).stdout).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["config"]["args"]["d"], 5);
    let json_rows = doc["rows"].as_array().unwrap();
    for (c, j) in rows(&csv).iter().zip(json_rows) {
        for (k, name) in ["r", "capacity", "nu_star_new", "nu_star_old"].iter().enumerate() {
            assert_eq!(c[k].parse::<f64>().unwrap(), j[name].as_f64().unwrap());
        }
    }
}

#[test]
fn ot_demo_run_is_correct() {
    let out = bsm(&["ot", "run", "--d", "2", "--m", "6", "--beta", "4", "--trials", "10000", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(value(&csv, "correctness_rate").parse::<f64>().unwrap(), 1.0);
    assert_eq!(value(&csv, "ell"), "2");
    assert_eq!(value(&csv, "ot_error"), "non-binding");
}

#[test]
fn ot_strict_rejects_small_beta() {
    let out = bsm(&["ot", "run", "--d", "2", "--m", "6", "--beta", "100", "--omega", "3", "--lambda", "0.5", "--mode", "strict"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("β"));
}

#[test]
fn ot_check_passes() {
    let out = bsm(&["ot", "check", "--d", "2", "--m", "6", "--beta", "4", "--trials", "10000", "--seed", "1"]);
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{csv}");
    assert_eq!(value(&csv, "pass"), "true");
}

#[test]
fn params_and_hoeffding() {
    let csv = String::from_utf8(bsm(&["params", "--d", "5", "--nu", "0.3", "--delta", "0.05"]).stdout).unwrap();
    assert!((value(&csv, "lambda").parse::<f64>().unwrap() - 0.83838).abs() < 1e-5);
    let out = bsm(&["hoeffding", "--d", "2", "--n", "72", "--trials", "2000"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(bsm(&["hoeffding", "--d", "4", "--n", "72"]).status.code(), Some(1));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_bsm"))
        .args(["region", "--d", "4", "--grid", "3", "--format", "json"])
        .env("BSM_OUTPUT_DIR", dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let doc: serde_json::Value = serde_json::from_str(&read(&dir.path().join("region.json"))).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 3);
}
