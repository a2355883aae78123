use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace { dir: tempfile::tempdir().unwrap() }
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, contents).unwrap();
        path
    }
}

fn modelkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modelkit")).args(args).env_remove("MODELKIT_MAX_TERMS").output().unwrap()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = modelkit(args);
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, stdout, stderr) = run(&full);
    assert!(code == 0 || code == 1 || code == 3, "{stderr}");
    serde_json::from_str(&stdout).unwrap()
}

#[test]
fn analyze_sphere() {
    let ws = Workspace::new();
    let f = ws.file("sphere.mk", "P = z1*cz1 + z2*cz2\n");
    let (code, stdout, _) = run(&["analyze", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("extremely balanced: yes"));
    assert!(stdout.contains("torus rank 2"));
    let v = json(&["analyze", f.to_str().unwrap()]);
    assert_eq!(v["extremely_balanced"], true);
    assert_eq!(v["torus"]["rank"], 2);
}

#[test]
fn analyze_reports_degenerate_domains() {
    let ws = Workspace::new();
    let f = ws.file("deg.mk", "P = z1*cz1\n");
    let (code, _, stderr) = run(&["analyze", f.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(stderr.contains("P2 = 0"), "{stderr}");
}

#[test]
fn parse_errors_report_the_position() {
    let ws = Workspace::new();
    let f = ws.file("bad.mk", "# header\nP = z1*cz1 + $\n");
    let (code, stdout, stderr) = run(&["analyze", f.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
    assert!(stderr.contains("line 2, column 14"), "{stderr}");
}

#[test]
fn invalid_inputs_are_rejected() {
    let ws = Workspace::new();
    let nonreal = ws.file("nonreal.mk", "P = z1*cz2\n");
    assert_eq!(run(&["classify", nonreal.to_str().unwrap()]).0, 2);
    let constant = ws.file("constant.mk", "P = z1*cz1 + z2*cz2 + 1\n");
    assert_eq!(run(&["classify", constant.to_str().unwrap()]).0, 2);
    assert_eq!(run(&["classify", "/nonexistent/file.mk"]).0, 2);
    let sphere = ws.file("sphere.mk", "P = z1*cz1 + z2*cz2\n");
    assert_eq!(run(&["analyze", sphere.to_str().unwrap(), "--weight", "1;2"]).0, 2);
}

#[test]
fn term_limit_comes_from_the_environment() {
    let ws = Workspace::new();
    let f = ws.file("big.mk", "P = (z1*cz1 + z2*cz2 + z1 + cz1)^6\n");
    let out = Command::new(env!("CARGO_BIN_EXE_modelkit"))
        .args(["decompose", f.to_str().unwrap()])
        .env("MODELKIT_MAX_TERMS", "20")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("more than 20 terms"));
    let out = Command::new(env!("CARGO_BIN_EXE_modelkit"))
        .args(["decompose", f.to_str().unwrap()])
        .env("MODELKIT_MAX_TERMS", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn decompose_cross_term() {
    let ws = Workspace::new();
    let f = ws.file("cross.mk", "P = z1*cz2 + z2*cz1 + z1^2*cz1^2 + z2^2*cz2^2\n");
    let v = json(&["decompose", f.to_str().unwrap()]);
    assert_eq!(v["reconstructed"], true);
    assert_eq!(v["inertia"], serde_json::json!([3, 1]));
}

#[test]
fn symmetries_of_the_sphere() {
    let ws = Workspace::new();
    let f = ws.file("sphere.mk", "P = z1*cz1 + z2*cz2\n");
    let v = json(&["symmetries", f.to_str().unwrap(), "--max-degree", "1"]);
    assert_eq!(v["max_degree"], 1);
    assert!(v["tangent_fields"].as_array().unwrap().len() >= 3);
    let t5 = v["flow_types"].as_array().unwrap().iter().find(|k| k["kind"] == "type5").unwrap();
    assert_eq!(t5["admissible"], false);
    assert_eq!(t5["certificate"]["reason"], "pure_monomial");
    let deg = ws.file("deg.mk", "P = z1*cz1\n");
    assert_eq!(run(&["symmetries", deg.to_str().unwrap()]).0, 3);
}

#[test]
fn classify_reports_forms() {
    let ws = Workspace::new();
    let f = ws.file("tube.mk", "P = im(z1)^4 + im(z2)^4\n");
    let v = json(&["classify", f.to_str().unwrap()]);
    assert_eq!(v["three_dim_form"], "tube");
    assert_eq!(v["three_dim_matches"], serde_json::json!(["tube"]));
    let none = ws.file("none.mk", "P = z1^2*cz1^2 + z2^2*cz2^2 + z1^3*cz2 + cz1^3*z2 + z1*cz2^2 + cz1*z2^2\n");
    let (code, stdout, _) = run(&["classify", none.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("three-dimensional symmetry form: none"), "{stdout}");
}

#[test]
fn verify_maps() {
    let ws = Workspace::new();
    let shift = ws.file("shift.mk", "P = re(z1)^2 + z2^2*cz2^2\nmap { g1 = z1 + 1; phi = -z1 - 1/2 }\n");
    assert_eq!(run(&["verify", shift.to_str().unwrap()]).0, 0);
    let wrong = ws.file("wrong.mk", "map { g1 = z1 + 1 }\n");
    let (code, stdout, _) = run(&["verify", shift.to_str().unwrap(), "--map", wrong.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stdout.contains("FAILED"));
    let flip = ws.file("flip.mk", "P = z1^2*cz1^2 + z2^2*cz2^2 + z1*cz2 + z2*cz1\nmap { g1 = z2; g2 = z1 }\n");
    assert_eq!(run(&["verify", flip.to_str().unwrap()]).0, 0);
    let nothing = ws.file("nothing.mk", "P = z1*cz1 + z2*cz2\n");
    assert_eq!(run(&["verify", nothing.to_str().unwrap()]).0, 2);
}

#[test]
fn verify_flows() {
    let ws = Workspace::new();
    let sphere = ws.file("sphere.mk", "P = z1*cz1 + z2*cz2\n");
    let good = ws.file("good.mk", "flow { kind = type4; a = i; b = i }\nflow { kind = type1; b = i }\n");
    let v = json(&["verify", sphere.to_str().unwrap(), "--flow", good.to_str().unwrap()]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["pairs"][0]["verdict"]["commuting"], true);
    let dilation = ws.file("dilation.mk", "flow { kind = type4; a = 1; b = 1 }\n");
    assert_eq!(run(&["verify", sphere.to_str().unwrap(), "--flow", dilation.to_str().unwrap()]).0, 1);
    let type5 = ws.file("type5.mk", "flow { kind = type5; a = i; d = 1 }\n");
    assert_eq!(run(&["verify", sphere.to_str().unwrap(), "--flow", type5.to_str().unwrap()]).0, 1);
}

#[test]
fn json_output_is_deterministic() {
    let ws = Workspace::new();
    let f = ws.file("p.mk", "P = im(z1)^2 + z2^2*cz2^2 + im(z1)*z2*cz2\n");
    for cmd in ["analyze", "decompose", "symmetries", "classify"] {
        let a = modelkit(&["--json", cmd, f.to_str().unwrap()]);
        let b = modelkit(&["--json", cmd, f.to_str().unwrap()]);
        assert_eq!(a.status.code(), Some(0), "{cmd}");
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
}

#[test]
fn quiet_suppresses_output() {
    let ws = Workspace::new();
    let f = ws.file("sphere.mk", "P = z1*cz1 + z2*cz2\n");
    let (code, stdout, stderr) = run(&["--quiet", "classify", f.to_str().unwrap()]);
    assert_eq!((code, stdout.as_str(), stderr.as_str()), (0, "", ""));
}
