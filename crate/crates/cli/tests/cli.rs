use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn wdm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wdm"))
        .args(args)
        .env_remove("WDM_EXACT_CAP")
        .env_remove("WDM_PATH_CAP")
        .env_remove("WDM_REDUCE_CAP")
        .output()
        .expect("binary runs")
}

fn wdm_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_wdm"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const C5: &str = "5 5\n0 1\n1 2\n2 3\n3 4\n0 4\n";

#[test]
fn gen_torus_pipes_into_verify() {
    let gen = wdm(&["gen", "torus", "8"]);
    assert!(gen.status.success());
    let v = wdm_stdin(&["verify", "-"], &gen.stdout);
    assert_eq!(v.status.code(), Some(0), "{}", String::from_utf8_lossy(&v.stderr));
    assert!(stdout(&v).contains("size 24"));
}

#[test]
fn solve_strict_majority_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "c5.txt", C5);
    for kind in ["wdm", "dyn", "mono"] {
        let o = wdm(&["solve", kind, &g]);
        assert!(o.status.success());
        assert_eq!(stdout(&o).lines().next(), Some("3"), "{kind}");
    }
    let o = wdm(&["--json", "solve", "wdm", &g]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["size"], 3);
    assert_eq!(v["kind"], "wdm");
}

#[test]
fn bounds_exact_on_tight_cubic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tc3.txt");
    let p = path.to_string_lossy();
    assert!(wdm(&["gen", "tight-cubic", "3", "-o", &p]).status.success());
    let o = wdm(&["bounds", &p, "--exact"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("all applicable bounds satisfied"));
    assert!(text.contains("tight: cubic_lower, odd_degree_lower@t_min"));

    let o = wdm(&["--json", "bounds", &p, "--exact"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["facts"]["size"], 3);
    assert!(v["tight"].as_array().unwrap().iter().any(|x| x == "cubic_lower"));
}

#[test]
fn tampered_bundle_fails_verification() {
    let gen = wdm(&["gen", "torus", "4"]);
    let text = stdout(&gen).replacen("\"seed\": [\n    2,", "\"seed\": [\n    3,", 1);
    let v = wdm_stdin(&["verify", "-"], text.as_bytes());
    assert_eq!(v.status.code(), Some(1));
}

#[test]
fn verify_graph_and_certificate_files() {
    let dir = tempfile::tempdir().unwrap();
    let gen = stdout(&wdm(&["gen", "triangles", "2"]));
    let (graph, cert) = gen.split_once("%% certificate\n").unwrap();
    let g = write(dir.path(), "g.txt", graph);
    let c = write(dir.path(), "c.json", cert);
    assert_eq!(wdm(&["verify", &g, &c]).status.code(), Some(0));
    // a graph file alone is not a bundle
    assert_eq!(wdm(&["verify", &g]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(wdm(&["solve"]).status.code(), Some(2));
    assert_eq!(wdm(&["gen", "torus"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "bad.txt", "2 1\n0 0\n");
    let o = wdm(&["solve", "wdm", &g]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let g = write(dir.path(), "c5.txt", C5);
    assert_eq!(wdm(&["solve", "fast", &g]).status.code(), Some(2));
}

#[test]
fn caps_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t8.txt");
    let p = path.to_string_lossy();
    assert!(wdm(&["gen", "torus", "8", "-o", &p]).status.success());
    assert_eq!(wdm(&["solve", "wdm", &p]).status.code(), Some(3));
    let c5 = write(dir.path(), "c5.txt", C5);
    let o = Command::new(env!("CARGO_BIN_EXE_wdm"))
        .args(["solve", "wdm", &c5])
        .env("WDM_EXACT_CAP", "4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));

    let minrep = write(dir.path(), "big.txt", "5 1\n0 1\nA 0 0\nB 0 1 2 3 4\n");
    let o = wdm(&["reduce", &minrep]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("projected vertex count"));
}

#[test]
fn reduce_and_minrep_solve() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.txt", "2 1\n0 1\nA 0 0\nB 0 1\n");
    let o = wdm(&["--json", "reduce", &m]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["thresholds"], serde_json::json!([4, 64, 256, 4, 128]));
    assert_eq!(v["structural_audit"], "pass");
    assert_eq!(v["proof_grade"], true);

    let o = wdm(&["--json", "minrep-solve", &m, "--lift"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["size"], 2);
    assert_eq!(v["lift"]["schedule"]["v3_last"], 4);
    assert_eq!(v["extracted"]["size"], 2);

    let out = dir.path().join("g.txt");
    let o = wdm(&["reduce", &m, "--graph-out", &out.to_string_lossy()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.lines().any(|l| l.starts_with("t ")));
}

#[test]
fn corpus_is_deterministic() {
    let a = wdm(&["corpus", "--seed", "7", "--count", "5"]);
    let b = wdm(&["corpus", "--seed", "7", "--count", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let o = wdm(&["--json", "corpus", "--seed", "7", "--count", "3", "-o", &dir.path().to_string_lossy()]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    for entry in v.as_array().unwrap() {
        let path = entry["path"].as_str().unwrap();
        let o = wdm(&["solve", "dyn", path]);
        assert!(o.status.success());
    }
}

#[test]
fn gen_is_byte_identical_across_runs() {
    for args in [["gen", "figure4"].as_slice(), &["gen", "tight-cubic", "5"], &["gen", "wheel", "8"]] {
        assert_eq!(wdm(args).stdout, wdm(args).stdout);
    }
    let text = stdout(&wdm(&["gen", "figure4"]));
    assert!(text.contains("\"seed\": [\n    8,\n    9,"));
}
