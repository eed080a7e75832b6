use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sokg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sokg"))
        .args(args)
        .output()
        .expect("spawn sokg")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn figure1_writes_one_file_per_a() {
    let dir = tempfile::tempdir().unwrap();
    let o = sokg(&["evolve", "--preset", "figure1", "--out", p(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for a in ["1.5", "2", "4"] {
        let text = fs::read_to_string(dir.path().join(format!("figure1_a{a}.csv"))).unwrap();
        assert!(text.contains(&format!("# a={a}\n")));
        let lines = data_lines(&text);
        assert_eq!(lines[0], "x,t,re,im");
        assert_eq!(lines.len(), 1 + 2001);
        assert!(lines[1].starts_with("-10,0,"));
        assert!(lines[2001].starts_with("10,0,"));
    }
}

#[test]
fn figure2_is_byte_stable_and_reproducible_from_its_preamble() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    assert!(sokg(&["evolve", "--preset", "figure2", "--out", p(&a)]).status.success());
    assert!(sokg(&["evolve", "--preset", "figure2", "--out", p(&b)]).status.success());
    assert!(sokg(&["evolve", "--config", p(&a), "--out", p(&c)]).status.success());
    let fa = fs::read(&a).unwrap();
    assert_eq!(fa, fs::read(&b).unwrap());
    assert_eq!(fa, fs::read(&c).unwrap());
    let text = String::from_utf8(fa).unwrap();
    assert_eq!(data_lines(&text).len(), 1 + 401 * 51);
}

#[test]
fn flags_override_config_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "n = 4\na = 2.0\nm = 1.0\nx = \"0:1:2\"\nt = \"0\"\n").unwrap();
    let o = sokg(&["evolve", "--config", p(&cfg), "--a", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("# n=4\n") && text.contains("# a=3\n") && text.contains("# m=1\n"));
    // F_4(0, a) = 1
    assert!(data_lines(&text)[1].starts_with("0,0,1,0"), "{text}");
}

#[test]
fn evolve_rejects_inconsistent_parameters() {
    assert_eq!(sokg(&["evolve", "--case", "p2"]).status.code(), Some(2));
    assert_eq!(sokg(&["evolve", "--b", "1"]).status.code(), Some(2));
    assert_eq!(sokg(&["evolve", "--t", "-1:1:3"]).status.code(), Some(2));
    assert_eq!(sokg(&["evolve", "--m", "-1"]).status.code(), Some(2));
    assert_eq!(
        sokg(&["evolve", "--case", "p2", "--b", "2", "--source", "dirac-spacetime"]).status.code(),
        Some(2)
    );
}

#[test]
fn bad_config_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "n = 4\nbogus = 1\n").unwrap();
    assert_eq!(sokg(&["coeffs", "--config", p(&cfg)]).status.code(), Some(2));
    fs::write(&cfg, "n = \"many\"\n").unwrap();
    assert_eq!(sokg(&["coeffs", "--config", p(&cfg)]).status.code(), Some(2));
    assert_eq!(sokg(&["coeffs", "--config", "/nonexistent/run.toml"]).status.code(), Some(2));
}

#[test]
fn verify_only_passes_and_exits_zero() {
    let o = sokg(&["verify", "--only", "1,2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_with_tiny_tolerances_exits_with_one() {
    let o = sokg(&["verify", "--only", "10", "--tol-scale", "0.001"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], false);
}

#[test]
fn verify_rejects_unknown_check() {
    assert_eq!(sokg(&["verify", "--only", "no-such-check"]).status.code(), Some(2));
}

#[test]
fn massless_kernel_at_origin_is_min() {
    let o = sokg(&["kernel", "--m", "0", "--xpos", "0", "--s", "0:3:4", "--t", "0:3:4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines = data_lines(&text);
    assert_eq!(lines[0], "s,t,K");
    for l in &lines[1..] {
        let v: Vec<f64> = l.split(',').map(|s| s.parse().unwrap()).collect();
        assert!((v[2] - v[0].min(v[1])).abs() < 1e-12, "{l}");
    }
}

#[test]
fn kernel_report_lists_gram_eigenvalues() {
    let o = sokg(&["kernel", "--m", "3", "--xpos", "0.2", "--s", "0.5:3:6", "--format", "report"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["gram_eigenvalues_on_s"].as_array().unwrap().len(), 6);
}

#[test]
fn coeffs_table_matches_small_case() {
    // n = 2, a = 3: C_j = binom(2,j) ((1+a)/2)^{2-j} ((1-a)/2)^j = 4, -4, 1
    let o = sokg(&["coeffs", "--n", "2", "--a", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines = data_lines(&text);
    assert_eq!(lines[0], "j,lambda,value,log_magnitude,sign");
    let vals: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(vals, vec![4.0, -4.0, 1.0]);
}

#[test]
fn bargmann_guards_large_n() {
    assert_eq!(sokg(&["bargmann", "--n", "13"]).status.code(), Some(2));
}

#[test]
fn bargmann_roundtrip_report_is_accurate() {
    let o = sokg(&["bargmann", "--n", "6", "--t", "0:1:3", "--format", "report"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in [
        "max_roundtrip_error",
        "max_fn_representation_error",
        "max_derivative_representation_error",
        "max_xi_self_consistency",
    ] {
        let e = v[key].as_f64().unwrap();
        assert!(e < 1e-6, "{key} = {e}");
    }
}

#[test]
fn bargmann_xi_table_has_expected_columns() {
    let o = sokg(&["bargmann", "--table", "xi", "--zre", "0:1:2", "--zim", "0", "--t", "0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines = data_lines(&text);
    assert_eq!(lines[0], "re_z,im_z,t,xi_re,xi_im,self_consistency");
    assert_eq!(lines.len(), 3);
}
