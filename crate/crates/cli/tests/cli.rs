use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use spectight::fixtures::{c20_single_peak, c20_two_peaks};

fn spectight(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectight"))
        .args(args)
        .env_remove("SPECTRAL_TIGHT_SEED")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: {}\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn write_function(dir: &Path, name: &str, u: &[f64]) -> String {
    let path = dir.join(name);
    let text: String = u.iter().map(|x| format!("{x}\n")).collect();
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn spectrum_reports_multiplicities() {
    let out = spectight(&["spectrum", "--family", "complete:7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["spectrum"]["m"], 6);
    let out = spectight(&["spectrum", "--family", "cycle:20"]);
    let v = json(&out);
    assert_eq!(v["spectrum"]["m"], 2);
    assert_eq!(v["spectrum"]["groups"][1]["indices"], serde_json::json!([1, 2]));
}

#[test]
fn missing_edge_file_is_an_io_error() {
    let out = spectight(&["spectrum", "--edges", "missing.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.txt"));
}

#[test]
fn edge_list_parse_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    std::fs::write(&path, "n 3\n0 1\n1 x\n").unwrap();
    let out = spectight(&["spectrum", "--edges", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn disconnected_graph_fails_the_spectrum_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    std::fs::write(&path, "n 4\n0 1\n2 3 2.5\n").unwrap();
    let out = spectight(&["spectrum", "--edges", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["connected"], false);
}

#[test]
fn analyze_torus_and_path() {
    let out = spectight(&["analyze", "--family", "triangular_torus:5", "--genus", "family"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["bound"]["m"], 6);
    assert_eq!(v["bound"]["chr"], 7);
    assert_eq!(v["bound"]["satisfied"], true);
    // not tight, but outside the classes where tightness is guaranteed
    assert_eq!(v["tightness"]["status"], "finding");

    let v = json(&spectight(&["analyze", "--family", "path:20"]));
    assert_eq!(v["m"], 1);
    assert_eq!(v["tightness"]["status"], "pass");
    assert_eq!(v["bound"]["satisfied"], true);
    assert_eq!(v["pass"], true);
}

#[test]
fn analyze_rejects_function_input() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_function(dir.path(), "lower.txt", &c20_two_peaks());
    let out = spectight(&["analyze", "--family", "cycle:20", "--function", &f]);
    assert_eq!(out.status.code(), Some(2));
    let out = spectight(&["analyze", "--edges", &f]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tight_on_cycle_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let upper = write_function(dir.path(), "upper.txt", &c20_single_peak());
    let lower = write_function(dir.path(), "lower.txt", &c20_two_peaks());
    let out = spectight(&["tight", "--family", "cycle:20", "--function", &upper]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["tightness"]["tight"], true);

    let out = spectight(&["tight", "--family", "cycle:20", "--function", &lower]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["tightness"]["witness"]["level"], 0.5);
    assert_eq!(v["weak_sign_graphs"], 2);

    let five = write_function(dir.path(), "five.txt", &[3.0, -1.0, 0.5, 2.0, -4.0]);
    let out = spectight(&["tight", "--family", "complete:5", "--function", &five]);
    assert_eq!(out.status.code(), Some(0));
    let out = spectight(&["tight", "--family", "complete:4", "--function", &five]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_suites() {
    let out = spectight(&["verify", "--suite", "lemma2", "--trials", "100", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["suites"][0]["violations"], 0);
    assert_eq!(v["suites"][0]["seed"], 7);

    let out = spectight(&["verify", "--suite", "courant", "--trials", "200"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["suites"][0]["violations"], 0);

    let out = spectight(&["verify", "--suite", "nosuch"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("lemma2") && err.contains("product_spectra"));
}

#[test]
fn verify_is_deterministic_and_honours_the_seed_variable() {
    let args = ["verify", "--suite", "morse", "--suite", "fiedler", "--trials", "15"];
    let a = spectight(&args);
    let b = spectight(&args);
    assert_eq!(a.stdout, b.stdout);
    let c = Command::new(env!("CARGO_BIN_EXE_spectight"))
        .args(args)
        .env("SPECTRAL_TIGHT_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(json(&c)["suites"][0]["seed"], 9);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn embed_k7_and_path() {
    let dir = tempfile::tempdir().unwrap();
    let off = dir.path().join("k7.off");
    let out = spectight(&[
        "embed",
        "--family",
        "complete:7",
        "--rotation",
        "builtin-k7-torus",
        "--project",
        "0,1,2",
        "-o",
        off.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["certificate"]["m"], 6);
    assert_eq!(v["certificate"]["chr"], 7);
    assert!(std::fs::read_to_string(&off).unwrap().starts_with("OFF\n7 14 0\n"));

    let out = spectight(&["embed", "--family", "path:5", "--project", "0,1,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("m = 1"));
}

#[test]
fn embed_with_rotation_file() {
    let dir = tempfile::tempdir().unwrap();
    let rot = dir.path().join("rot.txt");
    let text: String = (0..7)
        .map(|i| {
            let order: Vec<String> = [1, 3, 2, 6, 4, 5].iter().map(|s| ((i + s) % 7).to_string()).collect();
            format!("{i}: {}\n", order.join(" "))
        })
        .collect();
    std::fs::write(&rot, text).unwrap();
    let out = spectight(&["embed", "--family", "complete:7", "--rotation", rot.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("OFF\n7 14 0\n"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(spectight(&["spectrum"]).status.code(), Some(2));
    assert_eq!(spectight(&["spectrum", "--family", "torus:5"]).status.code(), Some(2));
    assert_eq!(
        spectight(&["spectrum", "--family", "path:5", "--rel-tol", "-1"])
            .status
            .code(),
        Some(2)
    );
}
