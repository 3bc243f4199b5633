use std::process::Command;

fn advwb(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_advwb"))
        .args(args)
        .env_remove("ADVWB_THREADS")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn measures_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = advwb::BooleanFunction::base_f();
    let path = write(&dir, "f.txt", &f.to_text());
    let (code, out, _) = advwb(&["measures", &path]);
    assert_eq!(code, 0);
    for line in ["deg            2", "d_depth        3", "s              2", "bs             3"] {
        assert!(out.contains(line), "{out}");
    }
    let (code, out, _) = advwb(&["measures", &path, "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["deg"], 2);
}

#[test]
fn malformed_table_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "bad.txt", "3\n0110\n");
    let (code, _, err) = advwb(&["measures", &path]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn skip_on_sixteen_variables() {
    let dir = tempfile::tempdir().unwrap();
    let f = advwb::BooleanFunction::base_f().iterate(2).unwrap();
    let path = write(&dir, "f2.txt", &f.to_text());
    let (code, out, _) = advwb(&["measures", &path, "--skip", "D"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("d_depth        absent"));
    assert!(out.contains("deg            4"));
}

#[test]
fn certificate_cap_needs_override() {
    let dir = tempfile::tempdir().unwrap();
    let f = advwb::BooleanFunction::builtin("or(10)").unwrap();
    let path = write(&dir, "or10.txt", &f.to_text());
    assert_eq!(advwb(&["measures", &path]).0, 1);
    assert_eq!(advwb(&["measures", &path, "--allow-large"]).0, 0);
}

#[test]
fn exported_schemes_verify() {
    let dir = tempfile::tempdir().unwrap();
    let p3 = dir.path().join("f.json");
    let (code, _, _) = advwb(&["verify-scheme", "--builtin", "scheme_f", "--export", p3.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, out, _) = advwb(&["verify-scheme", p3.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("valid, bound = 5/2"), "{out}");

    let p7 = dir.path().join("h.json");
    advwb(&["verify-scheme", "--builtin", "scheme_h", "--export", p7.to_str().unwrap()]);
    let (code, out, _) = advwb(&["verify-scheme", p7.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("bound = 1/2*sqrt(39)"), "{out}");

    // w'(x,y,i) w'(y,x,i) < w^2 on one pair
    let text = std::fs::read_to_string(&p3).unwrap();
    let broken = text.replacen("\"1/3\"", "\"1/4\"", 1);
    let pb = write(&dir, "broken.json", &broken);
    let (code, out, _) = advwb(&["verify-scheme", &pb]);
    assert_eq!(code, 1);
    assert!(out.contains("invalid: 1 violations"), "{out}");
}

#[test]
fn compose_reports() {
    let (code, out, _) = advwb(&["compose", "--base", "g", "--depth", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("measured bound   9/2"));
    assert!(out.contains("predicted bound  9/2"));
    let (code, out, _) = advwb(&["compose", "--base", "f", "--depth", "5"]);
    assert_eq!(code, 0);
    assert!(out.contains("notice"));
}

#[test]
fn matchings_export() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("m.txt");
    let (code, out, _) = advwb(&["matchings", "--depth", "1", "--set", "2", "--export", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("m = 3, m' = 3, l = 2, l' = 1"));
    let text = std::fs::read_to_string(p).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 24);
}

#[test]
fn simulate_is_deterministic() {
    let args = ["simulate", "--seed", "11", "--scheme", "scheme_f", "--balance"];
    let (code, a, _) = advwb(&args);
    assert_eq!(code, 0);
    assert!(a.contains("seed 11"));
    assert!(a.contains("drop bound holds"));
    assert_eq!(a, advwb(&args).1);
    let (code, out, _) = advwb(&["simulate", "--identity", "--arity", "2", "--queries", "0", "--scheme", "unit:parity(2)", "--eps", "0.25"]);
    assert_eq!(code, 1);
    assert!(out.contains("precondition failed"));
}

#[test]
fn simulate_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let json = advwb::qsim::AlgorithmFile::from_algorithm(&advwb::qsim::QueryAlgorithm::parity2()).to_json();
    let path = write(&dir, "parity.json", &json);
    let (code, out, _) = advwb(&["simulate", "--algorithm", &path, "--scheme", "unit:parity(2)", "--eps", "0"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("T >= 1.000000000"));
}

#[test]
fn iterate_and_threads() {
    let (code, out, _) = advwb(&["iterate", "--base", "f", "--depth", "2", "--threads", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("bs = D = 9"));
    assert!(out.contains("deg        4"));
    let out = Command::new(env!("CARGO_BIN_EXE_advwb"))
        .args(["iterate", "--depth", "3"])
        .env("ADVWB_THREADS", "1")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("product rule"));
}
