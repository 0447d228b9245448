use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(dir: &Path, config: &str, out: &str) -> Output {
    let path = dir.join("run.toml");
    fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_tscale"))
        .arg("--config")
        .arg(&path)
        .arg("--out")
        .arg(dir.join(out))
        .arg("--quiet")
        .output()
        .unwrap()
}

fn report(dir: &Path, name: &str) -> Vec<(String, String)> {
    fs::read_to_string(dir.join(name))
        .unwrap()
        .lines()
        .map(|l| {
            let (k, v) = l.split_once('=').unwrap();
            (k.to_string(), v.to_string())
        })
        .collect()
}

fn get<'a>(r: &'a [(String, String)], key: &str) -> &'a str {
    &r.iter().find(|(k, _)| k == key).unwrap_or_else(|| panic!("no key {key}")).1
}

const SOLVE: &str = r#"
command = "solve"
[scale]
segments = [[0.0, 1.0], [2.0, 3.0]]
[solve]
h = 0.01
u0 = [0.0]
beta = 10.0
m = 1.0
window = "whole"
rhs = { kind = "constant", value = [1.0] }
"#;

#[test]
fn solve_unit_rhs_gives_identity() {
    let tmp = TempDir::new().unwrap();
    let out = run(tmp.path(), SOLVE, "out");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(tmp.path().join("out/solve.csv")).unwrap();
    let mut rows = 0;
    for line in csv.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((v[1] - v[0]).abs() <= 1e-12, "u({}) = {}", v[0], v[1]);
        rows += 1;
    }
    assert!(rows > 100);
    let r = report(&tmp.path().join("out"), "solve.report");
    assert_eq!(get(&r, "window_end"), "3.0");
}

#[test]
fn rdcheck_point_function_reports_violation() {
    let tmp = TempDir::new().unwrap();
    let cfg = r#"
command = "rdcheck"
interval = [0.0, 1.0]
[scale]
segments = [[0.0, 1.0], [2.0, 3.0]]
[rdcheck]
h = 0.01
eps = 0.5
function = [{ kind = "point", at = 1.0 }]
"#;
    let out = run(tmp.path(), cfg, "out");
    assert!(out.status.success());
    let r = report(&tmp.path().join("out"), "rdcheck.report");
    assert_eq!(get(&r, "verdict"), "violation");
    assert_eq!(get(&r, "center"), "1.0");
}

#[test]
fn rdcheck_point_function_is_continuous_on_full_scale() {
    let tmp = TempDir::new().unwrap();
    let cfg = r#"
command = "rdcheck"
[scale]
segments = [[0.0, 1.0], [2.0, 3.0]]
[rdcheck]
h = 0.01
eps = 0.5
function = [{ kind = "point", at = 1.0 }]
"#;
    let out = run(tmp.path(), cfg, "out");
    assert!(out.status.success());
    let r = report(&tmp.path().join("out"), "rdcheck.report");
    assert_eq!(get(&r, "verdict"), "rd-continuous");
}

#[test]
fn empty_scale_is_a_validation_error() {
    let tmp = TempDir::new().unwrap();
    let cfg = "command = \"classify\"\n[scale]\nsegments = []\n[classify]\n";
    let out = run(tmp.path(), cfg, "out");
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error kind=validation reason="), "{err}");
    assert!(err.contains("non-empty"), "{err}");
}

#[test]
fn unknown_key_is_rejected() {
    let tmp = TempDir::new().unwrap();
    let out = run(tmp.path(), &format!("{SOLVE}\nbogus = 1\n"), "out");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
}

#[test]
fn foreign_section_is_rejected() {
    let tmp = TempDir::new().unwrap();
    let cfg = format!("{SOLVE}\n[mnc]\nfamily = [\"{{prefix: [1], tail: zero}}\"]\n");
    let out = run(tmp.path(), &cfg, "out");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let cfg = r#"
command = "picard"
seed = 7
[scale]
segments = [[0.0, 0.125]]
[picard]
h = 0.001
u0 = [1.0]
beta = 1.0
rhs = { kind = "linear", matrix = [[1.0]] }
xk_samples = 8
"#;
    assert!(run(tmp.path(), cfg, "a").status.success());
    assert!(run(tmp.path(), cfg, "b").status.success());
    let mut names: Vec<_> = fs::read_dir(tmp.path().join("a"))
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .filter(|n| n != "run.meta")
        .collect();
    names.sort();
    assert!(names.len() >= 4);
    for n in names {
        let a = fs::read(tmp.path().join("a").join(&n)).unwrap();
        let b = fs::read(tmp.path().join("b").join(&n)).unwrap();
        assert_eq!(a, b, "{n:?} differs");
    }
    let meta = report(&tmp.path().join("a"), "run.meta");
    assert_eq!(get(&meta, "seed"), "7");
    assert_eq!(get(&meta, "config_sha256").len(), 64);
}

fn plot_columns(path: &Path) -> Vec<usize> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split_whitespace().count())
        .collect()
}

#[test]
fn plot_data_has_one_column_per_component() {
    let tmp = TempDir::new().unwrap();
    let cfg = r#"
command = "solve"
[scale]
segments = [[0.0, 1.0]]
[solve]
h = 0.01
u0 = [1.0, 0.0]
beta = 1.0
rhs = { kind = "linear", matrix = [[0.0, 1.0], [-1.0, 0.0]] }
"#;
    assert!(run(tmp.path(), cfg, "out").status.success());
    let cols = plot_columns(&tmp.path().join("out/solve.dat"));
    assert!(!cols.is_empty() && cols.iter().all(|&c| c == 3));

    let cfg = r#"
command = "parabolic"
[scale]
segments = [[0.0, 1.0]]
[parabolic]
n = 8
beta = 1.0
h = 0.001
phi = { kind = "geometric", amplitude = 1.0, ratio = 0.5 }
"#;
    assert!(run(tmp.path(), cfg, "par").status.success());
    let cols = plot_columns(&tmp.path().join("par/parabolic.dat"));
    assert!(!cols.is_empty() && cols.iter().all(|&c| c == 9));
}

#[test]
fn seed_flag_overrides_config() {
    let tmp = TempDir::new().unwrap();
    let path = tmp.path().join("run.toml");
    fs::write(&path, SOLVE).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_tscale"))
        .args(["--seed", "42", "--quiet", "--out"])
        .arg(tmp.path().join("out"))
        .arg("--config")
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(get(&report(&tmp.path().join("out"), "run.meta"), "seed"), "42");
}

#[test]
fn overflow_is_a_numerical_error() {
    let tmp = TempDir::new().unwrap();
    let cfg = r#"
command = "solve"
[scale]
segments = [[0.0, 1.0]]
[solve]
h = 0.01
u0 = [0.0]
beta = 1.0
m = 1.0
window = "whole"
rhs = { kind = "forcing", components = [{ kind = "exp", rate = 1000.0 }] }
"#;
    let out = run(tmp.path(), cfg, "out");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error kind=numerical"));
}
