use std::process::Command as Proc;

use swapkit::catalog::{family_u4, fourier_unitary};
use swapkit::io::write_json;
use swapkit_cli::{parse_args, run, BasisSpec, CliError, Command};

fn bin() -> Proc {
    Proc::new(env!("CARGO_BIN_EXE_swapkit"))
}

#[test]
fn parses_documented_invocations() {
    let cfg = parse_args(["census", "--dim", "5"]).unwrap();
    assert_eq!(cfg.command, Command::Census { dim: 5, emit_reps: None });

    let cfg = parse_args(["swap", "--dim", "2", "--a", "0.5,0.5", "--b", "0.5,0.5", "--basis", "gour:fourier"]).unwrap();
    match cfg.command {
        Command::Swap { dim, basis, oracle, .. } => {
            assert_eq!(dim, 2);
            assert_eq!(basis, BasisSpec::GourFourier);
            assert!(!oracle);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn rejects_bad_arguments() {
    for argv in [
        vec!["swap", "--dim", "0"],
        vec!["swap", "--dim", "0", "--a", "1", "--b", "1"],
        vec!["swap", "--dim", "2", "--a", "0.5,-0.5", "--b", "0.5,0.5"],
        vec!["swap", "--dim", "2", "--a", "0.5,x", "--b", "0.5,0.5"],
        vec!["swap", "--dim", "3", "--a", "0.5,0.5", "--b", "0.5,0.5"],
        vec!["census", "--dim", "5", "--bogus"],
        vec!["chain-sweep", "--dim", "3", "--links", "9"],
        vec!["noise", "--dim", "2", "--a", "1,1", "--b", "1,1", "--p", "1.5", "--q", "0"],
        vec!["census", "--dim", "3", "--tolerance", "-1"],
    ] {
        let err = parse_args(argv.clone()).unwrap_err();
        assert!(matches!(err, CliError::Usage(_)), "{argv:?}");
        assert_eq!(err.exit_code(), 1);
    }
}

#[test]
fn census_report_embeds_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let reps = dir.path().join("reps.json");
    let cfg = parse_args(["census", "--dim", "5", "--emit-reps", reps.to_str().unwrap(), "--tolerance", "1e-8"]).unwrap();
    let out = run(&cfg).unwrap();
    assert_eq!(out.exit_code(), 0);
    let r = &out.report;
    assert_eq!(r["result"]["class_count"], 72);
    assert_eq!(r["version"], swapkit::VERSION);
    assert_eq!(r["tolerance"], 1e-8);
    assert_eq!(r["config"]["command"]["name"], "census");
    assert!(r["seed"].is_u64());
    let written: Vec<serde_json::Value> = serde_json::from_str(&std::fs::read_to_string(reps).unwrap()).unwrap();
    assert_eq!(written.len(), 72);
}

#[test]
fn swap_with_oracle_agrees() {
    let cfg =
        parse_args(["swap", "--dim", "3", "--a", "0.5,0.3,0.2", "--b", "0.6,0.3,0.1", "--basis", "gour:fourier", "--oracle"])
            .unwrap();
    let out = run(&cfg).unwrap();
    assert_eq!(out.exit_code(), 0);
    assert_eq!(out.report["result"]["agreement"]["agree"], true);
    assert_eq!(out.report["result"]["analytic"]["lu_deterministic"], true);
}

#[test]
fn u4_basis_and_file_basis() {
    let cfg = parse_args(["swap", "--dim", "4", "--a", "4,3,2,1", "--b", "1,1,1,1", "--basis", "gour:u4:0.3"]).unwrap();
    assert_eq!(run(&cfg).unwrap().report["result"]["basis_class"]["mem"], true);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("basis.json");
    write_json(&path, &swapkit::measurements::gour_basis(&fourier_unitary::<f64>(2)).unwrap()).unwrap();
    let cfg = parse_args(["noise", "--dim", "2", "--a", "0.7,0.3", "--b", "0.6,0.4", "--p", "0.1", "--q", "0.2", "--basis"])
        .map(|_| ())
        .unwrap_err();
    assert_eq!(cfg.exit_code(), 1);
    let cfg = parse_args([
        "noise", "--dim", "2", "--a", "0.7,0.3", "--b", "0.6,0.4", "--p", "0.1", "--q", "0.2", "--basis",
        path.to_str().unwrap(),
    ])
    .unwrap();
    let out = run(&cfg).unwrap();
    assert_eq!(out.report["result"]["report"]["spectra_equal"], true);
}

#[test]
fn chain_reports_computed_spectrum() {
    let cfg = parse_args(["chain", "--dim", "4", "--links", "9,9,8,1;9,9,9,3;8,5,5,1", "--raw-diag", "--order", "((0.1).2)"])
        .unwrap();
    let out = run(&cfg).unwrap();
    let fin: Vec<f64> = serde_json::from_value(out.report["result"]["final"].clone()).unwrap();
    for (x, y) in fin.iter().zip([0.8030, 0.5385, 0.2548, 0.0152]) {
        assert!((x - y).abs() < 5e-5, "{fin:?}");
    }
    assert_eq!(out.report["result"]["order"], "((0.1).2)");
}

#[test]
fn classify_matrix_files() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    write_json(&a, &family_u4(0.3f64).matrix).unwrap();
    write_json(&b, &family_u4(std::f64::consts::PI - 0.3).matrix).unwrap();
    let cfg = parse_args(["classify", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap()]).unwrap();
    let out = run(&cfg).unwrap();
    assert_eq!(out.report["result"]["branch"], "conjugate");
}

#[test]
fn reports_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for threads in ["1", "4"] {
        let path = dir.path().join("sweep.json");
        let status = bin()
            .args(["chain-sweep", "--dim", "3", "--links", "4", "--trials", "40", "--seed", "9", "--threads", threads])
            .arg("--output")
            .arg(&path)
            .status()
            .unwrap();
        assert!(status.success());
        texts.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
}

#[test]
fn exit_codes() {
    assert_eq!(bin().args(["swap", "--dim", "0"]).output().unwrap().status.code(), Some(1));
    assert_eq!(bin().args(["census", "--dim", "9"]).output().unwrap().status.code(), Some(1));
    let sweep = bin().args(["chain-sweep", "--dim", "2", "--links", "3", "--trials", "10"]).output().unwrap();
    assert_eq!(sweep.status.code(), Some(0));
    let help = bin().arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}

#[test]
fn tolerance_from_environment() {
    let out = bin().args(["census", "--dim", "3"]).env("SWAPKIT_TOLERANCE", "1e-7").output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tolerance"], 1e-7);
    let bad = bin().args(["census", "--dim", "3"]).env("SWAPKIT_TOLERANCE", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
