use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn hypersv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypersv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn state(dir: &TempDir, name: &str, coeffs: &[(f64, f64)]) -> PathBuf {
    let pairs: Vec<String> = coeffs
        .iter()
        .map(|(re, im)| format!("[{re:?},{im:?}]"))
        .collect();
    write(
        dir,
        name,
        &format!(r#"{{"shape":[2,2,2],"coeffs":[{}]}}"#, pairs.join(",")),
    )
}

fn basis(i: usize) -> Vec<(f64, f64)> {
    (0..8)
        .map(|k| if k == i { (1.0, 0.0) } else { (0.0, 0.0) })
        .collect()
}

fn ghz(dir: &TempDir) -> PathBuf {
    let mut c = basis(0);
    c[0] = (H, 0.0);
    c[7] = (H, 0.0);
    state(dir, "ghz.json", &c)
}

/// `a|000> + b|011> + c|101> + d|110>`.
fn schmidt(dir: &TempDir, [a, b, c, d]: [f64; 4]) -> PathBuf {
    let mut v = basis(0);
    v[0] = (a, 0.0);
    v[3] = (b, 0.0);
    v[5] = (c, 0.0);
    v[6] = (d, 0.0);
    state(dir, "schmidt.json", &v)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn num(v: &Value, key: &str) -> f64 {
    v[key]
        .as_f64()
        .unwrap_or_else(|| panic!("missing {key} in {v}"))
}

#[test]
fn gme_of_ghz() {
    let dir = TempDir::new().unwrap();
    let g = ghz(&dir);
    let v = json_of(&hypersv(&["gme", path(&g)]));
    assert!((num(&v, "lambda_max") - H).abs() < 1e-9);
    assert!((num(&v, "gme_squared_overlap") - 0.5).abs() < 1e-9);
    assert!((num(&v, "normalized_lambda") - H).abs() < 1e-9);
    assert!(num(&v, "residual") < 1e-10);
    assert_eq!(v["restarts_used"], 64);
    assert_eq!(v["factors"].as_array().unwrap().len(), 3);
}

#[test]
fn unnormalized_input_reports_both_values() {
    let dir = TempDir::new().unwrap();
    let mut c = basis(0);
    c[0] = (2.0, 0.0);
    c[7] = (0.0, 2.0);
    let s = state(&dir, "big.json", &c);
    let v = json_of(&hypersv(&["gme", path(&s), "--restarts", "8"]));
    assert!((num(&v, "lambda_max") - 2.0).abs() < 1e-9);
    assert!((num(&v, "normalized_lambda") - H).abs() < 1e-9);
    assert!((num(&v, "norm") - 8f64.sqrt()).abs() < 1e-12);
}

#[test]
fn same_seed_gives_identical_bytes() {
    let dir = TempDir::new().unwrap();
    let s = state(
        &dir,
        "gen.json",
        &[
            (0.3, 0.1),
            (0.5, -0.2),
            (0.1, 0.4),
            (-0.6, 0.2),
            (0.2, 0.2),
            (0.1, -0.3),
            (0.4, 0.0),
            (-0.1, 0.5),
        ],
    );
    for cmd in ["gme", "spectrum"] {
        let x = hypersv(&[cmd, path(&s), "--seed", "17", "--restarts", "16"]);
        let y = hypersv(&[cmd, path(&s), "--seed", "17", "--restarts", "16"]);
        assert!(x.status.success());
        assert_eq!(x.stdout, y.stdout, "{cmd}");
    }
}

#[test]
fn closed_form_w_state() {
    let v = json_of(&hypersv(&[
        "closed-form",
        "--coeffs",
        "0.577350,0.577350,0.577350,0",
    ]));
    assert!((v["gme"]["normalized_lambda"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-6);
    assert_eq!(v["gme"]["branch"], "D");
    for key in [
        "input",
        "canonical",
        "moves",
        "invariants",
        "candidates",
        "vectors",
    ] {
        assert!(v.get(key).is_some(), "{key}");
    }
    // the zero coefficient is moved to the end
    assert_eq!(v["canonical"]["d"], 0.0);
}

#[test]
fn gme_agrees_with_closed_form() {
    let dir = TempDir::new().unwrap();
    for k in [
        [0.7, 0.5, 0.4, 0.3],
        [0.9, 0.2, 0.2, 0.1],
        [0.55, 0.5, 0.45, 0.4],
    ] {
        let s = schmidt(&dir, k);
        let g = json_of(&hypersv(&["gme", path(&s)]));
        let coeffs = k.map(|x| x.to_string()).join(",");
        let c = json_of(&hypersv(&["closed-form", "--coeffs", &coeffs]));
        let want = c["gme"]["lambda_max"].as_f64().unwrap();
        assert!((num(&g, "lambda_max") - want).abs() < 1e-8, "{k:?}");
    }
}

#[test]
fn charpoly_roots_and_degeneracy() {
    let v = json_of(&hypersv(&["charpoly", "--coeffs", "0.7,0.5,0.4,0.3,0"]));
    assert_eq!(v["status"], "ok");
    let roots: Vec<f64> = v["roots"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| num(r, "mu"))
        .collect();
    for want in [0.0, 0.09, 0.16, 0.25, 0.49, 0.515065] {
        assert!(
            roots.iter().any(|r| (r - want).abs() < 1e-5),
            "{want} not in {roots:?}"
        );
    }
    assert_eq!(v["roots"][0]["multiplicity"], 4);
    assert!(v["delta"].as_array().is_some());

    let v = json_of(&hypersv(&["charpoly", "--coeffs", "0.5,0.5,0.5,0.5"]));
    assert_eq!(v["status"], "degenerate");
    assert!(v["roots"].is_null());

    // f is accepted here
    let v = json_of(&hypersv(&["charpoly", "--coeffs", "0.5,0.4,0.3,0.2,0.1"]));
    assert!(!v["quartic"]["beta"].as_array().unwrap().is_empty());
}

#[test]
fn hyperdet_values() {
    let dir = TempDir::new().unwrap();
    let e = state(&dir, "e000.json", &basis(0));
    let v = json_of(&hypersv(&["hyperdet", path(&e)]));
    assert_eq!((num(&v, "re"), num(&v, "im")), (0.0, 0.0));
    let v = json_of(&hypersv(&["hyperdet", path(&ghz(&dir))]));
    assert!((num(&v, "re") - 0.25).abs() < 1e-15);
}

#[test]
fn oracle_methods() {
    let dir = TempDir::new().unwrap();
    let g = ghz(&dir);
    let v = json_of(&hypersv(&["oracle", path(&g), "--grid", "32"]));
    assert_eq!(v["method"], "grid");
    assert!((num(&v, "value") - H).abs() < 1e-9);
    let v = json_of(&hypersv(&["oracle", path(&g), "--grid", "16", "--naive"]));
    assert!(num(&v, "value") <= H + 1e-12);
    let m = write(
        &dir,
        "m.json",
        r#"{"shape":[2,2],"coeffs":[[0.8,0],[0,0],[0,0],[0.6,0]]}"#,
    );
    let v = json_of(&hypersv(&["oracle", path(&m)]));
    assert_eq!(v["method"], "svd");
    assert!((num(&v, "value") - 0.8).abs() < 1e-12);
}

#[test]
fn verify_reports_residuals() {
    let dir = TempDir::new().unwrap();
    let e = state(&dir, "e000.json", &basis(0));
    let p = write(
        &dir,
        "p.json",
        r#"{"factors":[[[1,0],[0,0]],[[1,0],[0,0]],[[1,0],[0,0]]]}"#,
    );
    let v = json_of(&hypersv(&[
        "verify",
        path(&e),
        "--lambda",
        "1",
        "--vectors",
        path(&p),
    ]));
    assert_eq!(num(&v, "residual"), 0.0);
    assert_eq!(v["is_solution"], true);
    let v = json_of(&hypersv(&[
        "verify",
        path(&e),
        "--lambda",
        "0.5",
        "--vectors",
        path(&p),
    ]));
    assert_eq!(num(&v, "residual"), 0.5);
    assert_eq!(v["is_solution"], false);
}

#[test]
fn text_format() {
    let dir = TempDir::new().unwrap();
    let out = hypersv(&["hyperdet", path(&ghz(&dir)), "--format", "text"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("re: 0.25")), "{text}");
}

fn fails_with(args: &[&str], code: i32, needle: &str) {
    let out = hypersv(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}");
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(needle), "{err}");
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let short = write(&dir, "short.json", r#"{"shape":[2,2],"coeffs":[[1,0]]}"#);
    fails_with(&["gme", path(&short)], 2, "coeffs");
    let noshape = write(&dir, "noshape.json", r#"{"coeffs":[[1,0]]}"#);
    fails_with(&["gme", path(&noshape)], 2, "shape");
    fails_with(&["gme", "/nonexistent/state.json"], 2, "state.json");
    fails_with(
        &["closed-form", "--coeffs", "0.5,0.4,0.3,0.2,0.1"],
        2,
        "f = 0",
    );
    fails_with(&["closed-form", "--coeffs", "0.5,0.4"], 2, "coeffs");
    fails_with(
        &["closed-form", "--coeffs", "0.5,-0.4,0.3,0.2"],
        2,
        "coeffs",
    );
    let g = ghz(&dir);
    fails_with(&["gme", path(&g), "--restarts", "0"], 2, "restarts");
    let m = write(
        &dir,
        "m.json",
        r#"{"shape":[2,3],"coeffs":[[1,0],[0,0],[0,0],[0,0],[1,0],[0,0]]}"#,
    );
    fails_with(&["hyperdet", path(&m)], 2, "shape");
    let bad = write(&dir, "bad.json", "[[[0,0]]]");
    fails_with(
        &["verify", path(&g), "--lambda", "1", "--vectors", path(&bad)],
        2,
        "factors[0]",
    );
    fails_with(
        &[
            "verify",
            path(&g),
            "--lambda",
            "-1",
            "--vectors",
            path(&bad),
        ],
        2,
        "lambda",
    );
    fails_with(&["frobnicate"], 2, "unrecognized");
}

#[test]
fn non_convergence_exits_with_three() {
    let dir = TempDir::new().unwrap();
    let s = state(
        &dir,
        "gen.json",
        &[
            (0.3, 0.1),
            (0.5, -0.2),
            (0.1, 0.4),
            (-0.6, 0.2),
            (0.2, 0.2),
            (0.1, -0.3),
            (0.4, 0.0),
            (-0.1, 0.5),
        ],
    );
    let out = hypersv(&["gme", path(&s), "--tol", "1e-30", "--restarts", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let best: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(best["converged"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("converge"));
}
