use std::path::PathBuf;
use std::process::{Command, Output};

fn soi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_soi"))
        .current_dir(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../.."))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn infer_prints_the_worked_outputs() {
    let o = soi(&["infer", "data/example43.problem"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim_end(), "0.2000 0.5000 0.9000 0.9000");
    let o = soi(&["infer", "data/example48.problem"]);
    assert_eq!(stdout(&o).lines().last(), Some("0.3000 0.8000 1.0000"));
}

#[test]
fn verify_exit_codes() {
    let o = soi(&["verify", "t1_min"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("semi-overlap"));
    // The known erratum is reported, not treated as a failure.
    let o = soi(&["verify", "t1_arith_mean"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("S2"));
    assert_eq!(soi(&["verify", "nosuch"]).status.code(), Some(2));
}

#[test]
fn classify_reports_one_summary_line() {
    let o = soi(&[
        "classify",
        "--rules",
        "data/banana_farc.rules",
        "--data",
        "data/banana.dat",
        "--kernels",
        "o_a",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let last = text.lines().last().unwrap();
    assert!(
        last.starts_with("acc=") && last.contains("total=5300"),
        "{last}"
    );
}

#[test]
fn bad_input_is_a_usage_error() {
    let o = soi(&["infer", "data/banana.dat"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("banana.dat"));
    let o = soi(&[
        "classify",
        "--rules",
        "data/banana_so5i.rules",
        "--data",
        "data/banana.dat",
        "--kernels",
        "nope",
    ]);
    assert_eq!(o.status.code(), Some(2));
}
