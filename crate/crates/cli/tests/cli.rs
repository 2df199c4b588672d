use std::path::PathBuf;
use std::process::{Command, Output};

use gasket_core::verifier::Sabotage;

fn gasket(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gasket")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("gasket-cli-{}-{name}", std::process::id()))
}

#[test]
fn verify_passes_and_writes_certificate() {
    let cert = scratch("cert.json");
    let o = gasket(&["--cert-out", cert.to_str().unwrap(), "verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("verdict: pass"));
    assert!(stdout(&o).contains("m=1 candidates=936 admissible=12 violations=0 inconclusive=0"));
    let text = std::fs::read_to_string(&cert).unwrap();
    std::fs::remove_file(&cert).unwrap();
    assert!(text.contains("\"schema\": \"gasket-cert/1\""));
    assert!(text.contains("\"verdict\": \"pass\""));
}

#[test]
fn every_sabotage_fails_with_status_one() {
    for s in Sabotage::ALL {
        let cert = scratch(&format!("sabotage-{s}.json"));
        let o = gasket(&["--cert-out", cert.to_str().unwrap(), "verify", "--sabotage", &s.to_string()]);
        assert_eq!(o.status.code(), Some(1), "sabotage {s}");
        let text = std::fs::read_to_string(&cert).unwrap();
        std::fs::remove_file(&cert).unwrap();
        assert!(text.contains("\"verdict\": \"fail\""), "sabotage {s}");
        assert!(text.contains("\"first_failure\": \""), "sabotage {s}");
    }
}

#[test]
fn constants_report_and_sabotage() {
    let o = gasket(&["constants"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("3/256"));
    assert_eq!(gasket(&["constants", "--sabotage", "gap"]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["base-case", "--m", "9"][..],
        &["frobnicate"],
        &["verify", "--sabotage", "p7"],
        &["render", "--figure", "Z"],
        &["render", "--figure", "1", "--depth", "13"],
    ] {
        assert_eq!(gasket(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn base_case_one() {
    let o = gasket(&["base-case", "--m", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("candidates=936 recount=936 admissible=12"), "{out}");
    assert!(out.contains("violations=0 inconclusive=0"), "{out}");
}

#[test]
fn enumerate_counts() {
    let o = gasket(&["enumerate", "--m", "1", "--count-only"]);
    assert_eq!(stdout(&o).trim(), "m=1 candidates=936 recount=936");
    let listed = gasket(&["enumerate", "--m", "1"]);
    assert_eq!(stdout(&listed).lines().count(), 936);
    assert!(stdout(&listed).lines().all(|l| l.contains("scale=2^-1")));
}

#[test]
fn ifs_search() {
    let o = gasket(&["ifs", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("attractor: holds"), "{}", stdout(&o));
    let none = gasket(&["ifs", "--n", "5"]);
    assert_eq!(none.status.code(), Some(0));
    assert!(stdout(&none).contains("non-conclusive"));
}

#[test]
fn render_is_deterministic() {
    let path = scratch("fig.svg");
    let o = gasket(&["render", "--figure", "5", "--depth", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let file = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    let piped = stdout(&gasket(&["render", "--figure", "5", "--depth", "3"]));
    assert_eq!(file, piped);
    assert!(file.starts_with("<svg"));
    assert_eq!(file.matches("<polygon").count(), 27 + 5 * 27);
}
