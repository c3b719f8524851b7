//! End-to-end tests of the binary: frozen output shapes, exit codes, config
//! layering, and report reproducibility.

use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kc-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn tau_file() -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().expect("temp file");
    write!(
        f,
        r#"{{"segments":[
            {{"cuspidal":{{"name":"sigma","rank":2,"dual_name":"sigma","unitary":true}},
              "length":1,"exponent":"1/2"}},
            {{"cuspidal":{{"name":"chi_1","rank":1,"dual_name":"chi_1","unitary":true}},
              "length":1,"exponent":"-1/2"}}
        ]}}"#
    )
    .expect("write tau");
    f
}

#[test]
fn orbit_data_output_is_frozen() {
    let out = run(&["compute", "orbit-data", "3,1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "{\"lambda\":[2,0,0,-2],\"p\":[2,0,0,-2]}\n"
    );
}

#[test]
fn kappa_images_are_the_shuffle() {
    let out = run(&["compute", "kappa", "3", "2", "1"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["n"], 6);
    assert_eq!(v["images"], serde_json::json!([1, 3, 5, 2, 4, 6]));
    // dense matrix agrees with the images (1-based image i ↔ column i-1)
    let images: Vec<usize> = serde_json::from_value(v["images"].clone()).unwrap();
    let matrix: Vec<Vec<i64>> = serde_json::from_value(v["matrix"].clone()).unwrap();
    for (r, row) in matrix.iter().enumerate() {
        for (c, &entry) in row.iter().enumerate() {
            assert_eq!(entry, i64::from(images[r] - 1 == c), "entry ({r},{c})");
        }
    }
}

#[test]
fn w_beta_is_the_block_antidiagonal() {
    let out = run(&["compute", "w-beta", "2,1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["images"], serde_json::json!([2, 3, 1]));
}

#[test]
fn gk_constant_reports_factors_and_regularity() {
    let out = run(&["compute", "gk-constant", "2", "2", "1"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["count"], 1);
    assert_eq!(v["regular"], true);
    assert_eq!(v["factors"][0]["slot_pair"], serde_json::json!([2, 3]));
    assert!(!v["product"].is_null(), "small products are expanded");

    // moduli difference of exactly 1 crosses the regularity threshold
    let out = run(&["compute", "gk-constant", "2", "2", "1", "--moduli", "1/2,-1/2"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["regular"], false);
}

#[test]
fn delta_applies_the_rational_power() {
    let out = run(&["compute", "delta", "2,3,1", "--power", "1/2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout_json(&out)["exponents"],
        serde_json::json!(["2", "-1/2", "-5/2"])
    );
}

#[test]
fn rho_round_trips_and_checks_support() {
    let tau = tau_file();
    let path = tau.path().to_str().unwrap();

    let out = run(&["compute", "rho", "--tau", path, "--c", "2", "--check-kc"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["kc_supported"], true);
    assert_eq!(v["expr"]["n"], 6);

    let out = run(&["compute", "derivative-trace", "--tau", path, "--c", "3"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["orders"], serde_json::json!([3, 3, 3]));

    // archimedean mode rejects inducing data with a rank-2 factor
    let out = run(&[
        "compute", "rho", "--tau", path, "--c", "2", "--mode", "archimedean",
    ]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("character"));
}

#[test]
fn dual_reports_canonical_and_central_data() {
    let tau = tau_file();
    let path = tau.path().to_str().unwrap();
    let out = run(&["compute", "dual", "--tau", path, "--c", "2"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    for key in ["dual", "canonical", "central_character", "dual_central_character"] {
        assert!(v.get(key).is_some(), "missing key {key}");
    }
    // σ|·|^(1/2) ⊗ χ|·|^(-1/2) at c=2: exponent 2·2·(1/2) + 1·2·(-1/2) = 1,
    // each symbol repeated c·d = 2 times, and dualising negates the exponent
    assert_eq!(v["central_character"]["exponent"], "1");
    assert_eq!(
        v["central_character"]["symbols"],
        serde_json::json!({"chi_1": 2, "sigma": 2})
    );
    assert_eq!(v["dual_central_character"]["exponent"], "-1");
}

#[test]
fn usage_errors_exit_2() {
    let out = run(&["suite", "--suite", "nope"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));

    let out = run(&["compute", "orbit-data", "1,3"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("weakly decreasing"));

    let out = run(&["compute", "orbit-data", "2,frog"]);
    assert_eq!(code(&out), 2);

    let out = run(&["compute", "rho", "--tau", "/nonexistent/tau.json", "--c", "2"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn suite_runs_exit_cleanly_and_reports_every_case() {
    let out = run(&["suite", "--suite", "kappa", "--k", "2", "--c", "2"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["suite"], "kappa");
    assert_eq!(v["failed"], 0);
    let cases = v["cases"].as_array().unwrap();
    assert!(!cases.is_empty());
    assert!(cases.iter().all(|c| c["status"] == "pass"));
}

#[test]
fn suite_reports_are_reproducible_modulo_wall_time() {
    let args = ["suite", "--suite", "dual", "--trials", "5"];
    let strip = |out: &Output| {
        let mut v = stdout_json(out);
        v.as_object_mut().unwrap().remove("wall_time_ms");
        serde_json::to_string(&v).unwrap()
    };
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn config_file_is_layered_under_flags() {
    let mut config = tempfile::NamedTempFile::new().unwrap();
    write!(
        config,
        r#"{{"k_max":2,"c_max":2,"orbit_max":3,"max_size":4,"trials":3,"dominance_triples":5}}"#
    )
    .unwrap();
    let path = config.path().to_str().unwrap();

    let out = run(&["suite", "--suite", "derivative", "--config", path]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["params"]["k_max"], 2);
    assert_eq!(v["params"]["trials"], 3);

    // flags override the file
    let out = run(&["suite", "--suite", "derivative", "--config", path, "--k", "3"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["params"]["k_max"], 3);
    assert_eq!(v["params"]["trials"], 3);

    // unknown keys in the config are rejected
    let mut bad = tempfile::NamedTempFile::new().unwrap();
    write!(bad, r#"{{"bogus":1}}"#).unwrap();
    let out = run(&["suite", "--suite", "derivative", "--config", bad.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn out_flag_writes_the_same_json_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("orbit.json");
    let out = run(&[
        "compute",
        "orbit-data",
        "3,1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty(), "JSON goes to the file, not stdout");
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, "{\"lambda\":[2,0,0,-2],\"p\":[2,0,0,-2]}\n");
}

#[test]
fn pretty_flag_changes_layout_not_content() {
    let canonical = run(&["compute", "kappa", "2", "2", "1"]);
    let pretty = run(&["compute", "kappa", "2", "2", "1", "--pretty"]);
    assert_eq!(code(&pretty), 0);
    assert!(pretty.stdout.len() > canonical.stdout.len());
    assert_eq!(stdout_json(&canonical), stdout_json(&pretty));
}
