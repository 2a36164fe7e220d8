use std::path::Path;
use std::process::{Command, Output};

fn dioph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dioph")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn bounds_table_as_csv() {
    let o = dioph(&["bounds", "--n", "2..3"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("n,R1_floor"));
    assert!(lines[1].contains("2.6180339887"));
    assert!(lines[2].contains("4.5615528128"));
    let named = dioph(&["bounds", "--name", "R16-star3"]);
    assert!(stdout(&named).contains("3.9270509831"));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"degrees": {"3": {"w_hat": 4.5}}}"#);
    let o = dioph(&["verify", "--profile", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("\"violated\""));

    let fine = write(dir.path(), "fine.json", r#"{"degrees": {"2": {"w": 3, "w_hat": 2.2}}}"#);
    assert_eq!(dioph(&["verify", "--profile", &fine]).status.code(), Some(0));

    let broken = write(dir.path(), "broken.json", r#"{"degrees": {"2": {"w": {"lo": 3, "hi": 1}}}}"#);
    assert_eq!(dioph(&["verify", "--profile", &broken]).status.code(), Some(1));
}

#[test]
fn estimate_then_compare_and_export() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for (out, workers) in [(&a, "1"), (&b, "3")] {
        let o = dioph(&[
            "--workers",
            workers,
            "--out",
            out.to_str().unwrap(),
            "estimate",
            "--target",
            "algroot:[-2,0,1]:1",
            "--degrees",
            "1,2",
            "--h-max",
            "40",
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        for f in ["bundle.json", "config.toml", "psi_n1.csv", "records_n2.csv", "bounds.csv"] {
            assert!(out.join(f).exists(), "missing {f}");
        }
    }
    let cmp = dioph(&["compare", a.join("bundle.json").to_str().unwrap(), b.join("bundle.json").to_str().unwrap()]);
    assert_eq!(cmp.status.code(), Some(0));

    let csv = dioph(&["export", a.join("bundle.json").to_str().unwrap(), "--table", "psi:1"]);
    let text = stdout(&csv);
    assert!(text.starts_with("H,psi_lo,psi_hi,witness,strategy"));
    assert!(text.lines().nth(1).unwrap().starts_with("5,"));
}

#[test]
fn budget_overrun_keeps_partial_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("partial");
    let o = dioph(&[
        "--budget",
        "100",
        "--out",
        out.to_str().unwrap(),
        "estimate",
        "--target",
        "digits:seed=1",
        "--degrees",
        "1,3",
        "--h-max",
        "30",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let bundle = std::fs::read_to_string(out.join("bundle.json")).unwrap();
    assert!(bundle.contains("\"partial\": true"));
}

#[test]
fn resultant_check_and_fuzz() {
    let o = dioph(&["resultant-check", "--p", "[-1,2]", "--q", "[1,1]", "--target", "rational:1/3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let f = dioph(&["resultant-check", "--fuzz", "50", "--degree", "2", "--height", "5"]);
    assert!(f.status.success());
}

#[test]
fn bad_target_is_an_error() {
    let o = dioph(&["psi", "--target", "nonsense", "--n", "1", "--h", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}
