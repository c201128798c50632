//! End-to-end tests of the command-line binary: JSON schema, determinism,
//! exit codes, and file-based inputs.

use std::process::{Command, Output};

use rhostar::report::validate_report;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rhostar"))
        .args(args)
        .output()
        .expect("spawn rhostar")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn eval_reproduces_the_l1_example() {
    let out = run(&["eval", "--norm", "l1", "--dim", "3", "--x", "1,0,0", "--y", "1,1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    validate_report(&v).unwrap();
    let results = &v["results"];
    assert_eq!(results["rho_minus"]["value"].as_f64().unwrap(), -1.0);
    assert_eq!(results["rho_plus"]["value"].as_f64().unwrap(), 3.0);
    assert_eq!(results["rho"].as_f64().unwrap(), 1.0);
    assert_eq!(results["rho_star"].as_f64().unwrap(), -3.0);
}

#[test]
fn orth_exit_codes_follow_the_verdict() {
    let holds = run(&[
        "orth", "--norm", "linf", "--dim", "2", "--x", "1,1", "--y", "1,-1", "--flavor", "rho",
    ]);
    assert_eq!(holds.status.code(), Some(0));
    let v = stdout_json(&holds);
    validate_report(&v).unwrap();
    assert_eq!(v["results"]["holds"].as_bool(), Some(true));

    let fails = run(&[
        "orth", "--norm", "linf", "--dim", "2", "--x", "1,1", "--y", "1,-1", "--flavor",
        "rho_star",
    ]);
    assert_eq!(fails.status.code(), Some(1));
    let v = stdout_json(&fails);
    assert_eq!(v["results"]["holds"].as_bool(), Some(false));
}

#[test]
fn decompose_meets_the_residual_contract() {
    let out = run(&[
        "decompose", "--norm", "l1", "--dim", "3", "--x", "1,0,0", "--lambda", "1", "--seed", "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    validate_report(&v).unwrap();
    assert_eq!(v["results"]["holds"].as_bool(), Some(true));
    let r1 = v["residuals"]["first"].as_f64().unwrap();
    let s1 = v["residuals"]["scale_first"].as_f64().unwrap();
    assert!(r1 <= 1e-9 * s1.max(1.0));
    assert!(v["results"]["y"].as_array().unwrap().len() == 3);
}

#[test]
fn usage_errors_exit_2_and_name_the_flag() {
    let bad_vector = run(&["eval", "--norm", "l1", "--dim", "3", "--x", "1,zz,0", "--y", "1,1,1"]);
    assert_eq!(bad_vector.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&bad_vector.stderr);
    assert!(msg.contains("--x"), "stderr: {msg}");

    let bad_norm = run(&["eval", "--norm", "l7", "--dim", "3", "--x", "1,0,0", "--y", "1,1,1"]);
    assert_eq!(bad_norm.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_norm.stderr).contains("--norm"));

    let wrong_dim = run(&["eval", "--norm", "l1", "--dim", "3", "--x", "1,0", "--y", "1,1,1"]);
    assert_eq!(wrong_dim.status.code(), Some(2));

    let unknown_flag = run(&["eval", "--norm", "l1", "--dim", "3", "--x", "1", "--y", "1", "--bogus"]);
    assert_eq!(unknown_flag.status.code(), Some(2));
}

#[test]
fn vectors_and_matrices_load_from_files() {
    let dir = std::env::temp_dir().join("rhostar-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let xfile = dir.join("x.txt");
    std::fs::write(&xfile, "1, 0, 0").unwrap();

    let out = run(&[
        "eval",
        "--norm",
        "l1",
        "--dim",
        "3",
        "--x",
        &format!("@{}", xfile.display()),
        "--y",
        "1,1,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["results"]["rho_star"].as_f64().unwrap(), -3.0);
}

#[test]
fn polyhedral_norm_reads_csv() {
    let dir = std::env::temp_dir().join("rhostar-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("hexagon.csv");
    std::fs::write(&csv, "1,0\n0,1\n0.75,0.75\n").unwrap();

    let out = run(&[
        "eval",
        "--norm",
        &format!("poly:{}", csv.display()),
        "--dim",
        "2",
        "--x",
        "1,1",
        "--y",
        "0,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    // ||(1,1)|| = max(1, 1, 1.5) = 1.5
    assert_eq!(v["results"]["norm_x"].as_f64().unwrap(), 1.5);

    // rank-deficient rows are rejected as a usage error
    let bad = dir.join("bad.csv");
    std::fs::write(&bad, "1,0\n2,0\n").unwrap();
    let out = run(&[
        "eval",
        "--norm",
        &format!("poly:{}", bad.display()),
        "--dim",
        "2",
        "--x",
        "1,1",
        "--y",
        "0,1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn map_analyze_flags_non_similarities() {
    let out = run(&[
        "map-analyze", "--norm", "lp:2", "--dim", "2", "--matrix", "1,0,0,2", "--samples", "300",
        "--seed", "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    validate_report(&v).unwrap();
    assert_eq!(
        v["results"]["analysis"]["preserves_rho_star"]["holds"].as_bool(),
        Some(false)
    );
    assert_eq!(
        v["results"]["isosceles_bound"]["outcome"].as_str(),
        Some("hypothesis_violated")
    );

    let rot = run(&[
        "map-analyze", "--norm", "lp:2", "--dim", "2", "--matrix",
        "0.9553364891256061,-0.29552020666133955,0.29552020666133955,0.9553364891256061",
        "--samples", "300", "--seed", "1",
    ]);
    assert_eq!(rot.status.code(), Some(0));
}

#[test]
fn smoothness_and_geometry_report() {
    let out = run(&["smoothness", "--norm", "l1", "--dim", "3", "--samples", "100", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    validate_report(&v).unwrap();
    assert_eq!(v["results"]["smooth"]["holds"].as_bool(), Some(false));

    let geo = run(&["geometry", "--norm", "l1", "--dim", "2", "--samples", "100", "--seed", "1"]);
    assert_eq!(geo.status.code(), Some(0));
    let v = stdout_json(&geo);
    assert!(v["results"]["delta"]["delta_min_feasible"].as_f64().unwrap() >= 1.0);
}

#[test]
fn compare_norms_documents_the_discrepancy() {
    let out = run(&[
        "compare-norms", "--norm1", "lp:2", "--norm2", "wlp:2:4,4", "--dim", "2", "--samples",
        "300", "--seed", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    validate_report(&v).unwrap();
    assert_eq!(v["results"]["proportional"]["holds"].as_bool(), Some(true));
    assert_eq!(v["results"]["printed_alpha_holds"].as_bool(), Some(false));
}

#[test]
fn suite_is_deterministic_and_passes_on_the_shipped_table() {
    let a = run(&["suite", "--seed", "2", "--profile", "quick"]);
    let b = run(&["suite", "--seed", "2", "--profile", "quick"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let mut va = stdout_json(&a);
    let mut vb = stdout_json(&b);
    validate_report(&va).unwrap();
    // byte-identical up to the wall-time field
    va.as_object_mut().unwrap().remove("wall_time_ms");
    vb.as_object_mut().unwrap().remove("wall_time_ms");
    assert_eq!(
        rhostar::report::to_json_string(&va),
        rhostar::report::to_json_string(&vb)
    );
}

#[test]
fn suite_on_a_broken_norm_table_exits_1_with_named_property() {
    let dir = std::env::temp_dir().join("rhostar-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let table = dir.join("broken.json");
    // declares l1 smooth, which is wrong
    std::fs::write(
        &table,
        r#"[{"name":"broken_l1","norm":"l1","dim":3,"smooth":true,"thalesian_total":false}]"#,
    )
    .unwrap();

    let out = run(&["suite", "--seed", "1", "--profile", "quick", "--table",
        table.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    let failing: Vec<String> = v["results"]["properties"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|p| p["pass"].as_bool() == Some(false))
        .map(|p| p["name"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(failing, vec!["broken_l1/smoothness_matches_table"]);

    // the failing property is also named on stderr
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("FAIL broken_l1/smoothness_matches_table"), "{err}");
}

#[test]
fn reports_parse_back_with_identical_float_bits() {
    let out = run(&["eval", "--norm", "lp:3", "--dim", "2", "--x", "1,1", "--y", "1,0"]);
    let v = stdout_json(&out);
    // rho values survive the 17-digit round trip bit-exactly
    let rho_plus = v["results"]["rho_plus"]["value"].as_f64().unwrap();
    let direct = 2f64.powf(-1.0 / 3.0);
    assert!((rho_plus - direct).abs() < 1e-15);
}
