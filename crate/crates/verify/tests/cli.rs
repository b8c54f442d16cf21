// SPDX-License-Identifier: Apache-2.0

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn manifest() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn twistlat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistlat"))
        .args(args)
        .current_dir(manifest())
        .env_remove("TWISTLAT_BOUND")
        .output()
        .expect("binary runs")
}

fn golden(name: &str, args: &[&str], code: i32) {
    let out = twistlat(args);
    assert_eq!(
        out.status.code(),
        Some(code),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let path: PathBuf = manifest().join("tests/golden").join(format!("{name}.txt"));
    let got = String::from_utf8(out.stdout).unwrap();
    if std::env::var_os("TWISTLAT_BLESS").is_some() {
        std::fs::write(&path, &got).unwrap();
    }
    let want =
        std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(got, want, "{name}");
}

#[test]
fn golden_lattice_info() {
    golden(
        "lattice_info",
        &["lattice-info", "tests/data/hyperbolic.spec"],
        0,
    );
}

#[test]
fn golden_disc() {
    golden("disc", &["disc", "tests/data/hyperbolic.spec"], 0);
}

#[test]
fn golden_transcendental() {
    golden(
        "transcendental",
        &["transcendental", "tests/data/a3_twisted.spec"],
        0,
    );
}

#[test]
fn golden_twist() {
    golden("twist", &["twist", "tests/data/a3_twisted.spec"], 0);
}

#[test]
fn golden_kernel() {
    golden("kernel", &["kernel", "tests/data/a3_twisted.spec"], 0);
}

#[test]
fn golden_theta() {
    golden("theta", &["theta", "tests/data/a3_twisted.spec"], 0);
}

#[test]
fn golden_tequiv() {
    golden(
        "tequiv",
        &["tequiv", "tests/data/a2.spec", "tests/data/e1xf2.spec"],
        0,
    );
    golden(
        "tequiv_refuted",
        &["tequiv", "tests/data/a2.spec", "tests/data/a3_twisted.spec"],
        1,
    );
}

#[test]
fn golden_example43() {
    golden("example43_n1", &["example43", "--n", "1"], 0);
    golden("example43_n2", &["example43", "--n", "2"], 1);
}

#[test]
fn malformed_input_exits_3() {
    let out = twistlat(&["disc", "tests/data/bad.spec"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(
        twistlat(&["disc", "tests/data/missing.spec"]).status.code(),
        Some(3)
    );
    assert_eq!(twistlat(&["example43", "--n", "0"]).status.code(), Some(3));
    assert_eq!(twistlat(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(
        twistlat(&["theta", "tests/data/hyperbolic.spec"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(twistlat(&["--help"]).status.code(), Some(0));
}

#[test]
fn reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_twistlat"))
        .args(["disc", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"[lattice U2]\ngram = 0 2; 2 0\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("U2 group: Z/2 + Z/2"));
}

#[test]
fn json_report_and_quiet() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = twistlat(&[
        "example43",
        "--n",
        "3",
        "--quiet",
        "--report",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "overall: refuted\n");
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["overall"], "refuted");
    assert_eq!(v["matches_expected"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 10);
    assert_eq!(v["checks"][4]["expected"], "refuted");
}

#[test]
fn bound_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_twistlat"))
        .args(["example43", "--n", "1"])
        .env("TWISTLAT_BOUND", "2")
        .output()
        .unwrap();
    assert!(
        String::from_utf8_lossy(&out.stdout).starts_with("command: example43 --n 1 --bound 2\n")
    );
    let out = Command::new(env!("CARGO_BIN_EXE_twistlat"))
        .args(["example43", "--n", "1", "--bound", "4"])
        .env("TWISTLAT_BOUND", "2")
        .output()
        .unwrap();
    assert!(
        String::from_utf8_lossy(&out.stdout).starts_with("command: example43 --n 1 --bound 4\n")
    );
}

#[test]
fn exported_documents_round_trip() {
    for (n, (a, e)) in (1..=4).map(|n| (n, twistlat_verify::example43::example43_documents(n))) {
        for d in [&a, &e] {
            assert_eq!(
                &twistlat_verify::parse_spec(&d.render()).unwrap(),
                d,
                "n = {n}"
            );
        }
        let r = twistlat_verify::commands::t_equiv_report(&a, &e, (None, None), 3).unwrap();
        let ex = twistlat_verify::example43::run_example43(n, 3);
        assert_eq!(
            r.checks[0].verdict,
            ex.check("t-equivalence").unwrap().verdict
        );
        assert_eq!(
            r.checks[0].certificate,
            ex.check("t-equivalence").unwrap().certificate
        );
    }
}
