use supervol::cli::{run, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE};
use supervol::report::{VerificationReport, VolumeReport};

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["supervol"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn cp11_volume_is_radius_independent() {
    let (code, out, _) = run_cli(&["volume", "cp", "--n", "1", "--m", "1", "--radius", "3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("value=6.28318530717959"), "{out}");
    assert!(out.contains("exact_zero=false") && out.contains("index=0"));
}

#[test]
fn u11_stiefel_is_exact_zero() {
    let (code, out, _) = run_cli(&[
        "volume", "stiefel", "--n", "1", "--m", "1", "--r", "1", "--s", "1",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(
        out.contains("value=0 ") && out.contains("exact_zero=true"),
        "{out}"
    );
}

#[test]
fn two_sphere() {
    let (code, out, _) = run_cli(&["volume", "sphere", "--n", "2", "--m", "0", "--radius", "1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("value=12.5663706143592"));
}

#[test]
fn json_reproduces_text_to_full_precision() {
    for args in [
        vec![
            "volume", "sphere", "--n", "3", "--m", "1", "--radius", "0.7",
        ],
        vec![
            "volume",
            "grassmannian",
            "--n",
            "3",
            "--m",
            "1",
            "--r",
            "1",
            "--s",
            "0",
        ],
        vec!["volume", "unitary_group", "--n", "2"],
    ] {
        let (_, text, _) = run_cli(&args);
        let mut json_args = args.clone();
        json_args.extend(["--format", "json"]);
        let (code, json, _) = run_cli(&json_args);
        assert_eq!(code, EXIT_OK);
        let report: VolumeReport = serde_json::from_str(json.trim()).unwrap();
        assert_eq!(report.to_text(), text.trim());
        let again: VolumeReport =
            serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
        assert_eq!(again, report);
    }
}

#[test]
fn bad_parameters_exit_two_and_name_the_bound() {
    let (code, _, err) = run_cli(&["volume", "stiefel", "--n", "1", "--m", "1", "--r", "2"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("2|0") && err.contains("1|1"), "{err}");
    let (code, _, err) = run_cli(&["volume", "sphere", "--radius", "-1"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("radius"));
    let (code, _, _) = run_cli(&["volume", "torus"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = run_cli(&["volume", "sphere", "--r", "1"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn verify_examples_pass() {
    for args in [
        vec!["verify", "--case", "u11"],
        vec!["verify", "--case", "sphere", "--n", "2", "--m", "1"],
        vec!["verify", "--case", "hopf", "--n", "1", "--m", "1"],
        vec![
            "verify", "--case", "cp", "--n", "1", "--m", "1", "--radius", "2",
        ],
        vec!["verify", "--case", "sphere-delta", "--n", "3", "--m", "2"],
        vec!["verify", "--case", "gaussian", "--n", "2", "--m", "1"],
        vec!["verify", "--case", "cavalieri", "--radius", "0.5"],
    ] {
        let (code, out, err) = run_cli(&args);
        assert_eq!(code, EXIT_OK, "{args:?}: {out} {err}");
        assert!(out.starts_with("PASS"));
    }
    let (_, out, _) = run_cli(&["verify", "--case", "u11"]);
    assert!(out.contains("density = (0-2i)"), "{out}");
}

#[test]
fn verify_json_schema() {
    let (code, out, _) = run_cli(&[
        "verify", "--case", "sphere", "--n", "1", "--m", "0", "--radius", "2", "--format", "json",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for k in [
        "case",
        "closed_form",
        "oracle",
        "abs_err",
        "rel_err",
        "nodes",
        "elapsed_ms",
        "pass",
    ] {
        assert!(keys.contains(&k), "missing {k}");
    }
    let r: VerificationReport = serde_json::from_value(v).unwrap();
    assert!(r.pass && (r.closed_form - 4.0 * std::f64::consts::PI).abs() < 1e-13);
}

#[test]
fn starved_quadrature_is_a_mismatch() {
    // two nodes per axis cannot resolve the angular integrals of S³
    let (code, out, _) = run_cli(&[
        "verify", "--case", "sphere", "--n", "3", "--m", "1", "--nodes", "2", "--tol", "1e-12",
    ]);
    assert_eq!(code, EXIT_MISMATCH, "{out}");
    assert!(out.starts_with("FAIL"));
}

#[test]
fn verify_rejects_unsupported_grid() {
    let (code, _, err) = run_cli(&["verify", "--case", "cp", "--n", "5"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("n ≤ 2"));
}

#[test]
fn sphere_table_has_eighteen_cells_and_odd_row_zeros() {
    let (code, out, _) = run_cli(&[
        "table", "sphere", "--n", "0..5", "--m", "0..2", "--format", "json",
    ]);
    assert_eq!(code, EXIT_OK);
    let rows: Vec<VolumeReport> = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(rows.len(), 18);
    for r in &rows {
        // zeros on odd n exactly where m > (n−1)/2, i.e. Γ((n+1)/2 − m) has a pole
        let expect_zero = r.n % 2 == 1 && r.m > (r.n - 1) / 2;
        assert_eq!(r.exact_zero, expect_zero, "n={} m={}", r.n, r.m);
    }
    let (_, text, _) = run_cli(&["table", "sphere", "--n", "0..5", "--m", "0..2"]);
    assert_eq!(text.lines().count(), 19);
}

#[test]
fn cp_table_vanishes_below_diagonal() {
    let (code, out, _) = run_cli(&[
        "table", "cp", "--n", "0..3", "--m", "0..3", "--format", "json",
    ]);
    assert_eq!(code, EXIT_OK);
    let rows: Vec<VolumeReport> = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(rows.len(), 16);
    for r in rows {
        assert_eq!(r.exact_zero, r.m > r.n);
    }
}

#[test]
fn table_limits() {
    let (code, _, _) = run_cli(&["table", "sphere", "--n", "4..2"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, err) = run_cli(&[
        "table", "stiefel", "--n", "0..99", "--m", "0..9", "--r", "0..9", "--s", "0..1",
    ]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("cells"));
    let (code, out, _) = run_cli(&[
        "table", "stiefel", "--n", "1..3", "--m", "1..3", "--r", "1..3", "--s", "1..3",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().skip(1).all(|l| l.ends_with("exact")));
}

#[test]
fn normalized_prints_complex() {
    let (code, out, _) = run_cli(&["normalized", "cp", "--z", "0.5+2i", "--radius", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("value=") && out.contains('i'));
    let (code, _, _) = run_cli(&["normalized", "stiefel", "--z", "2"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, out, _) = run_cli(&[
        "normalized",
        "stiefel",
        "--z",
        "2",
        "--w",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("\"w_re\":1.0"));
}
