use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn magnetoflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magnetoflow"))
        .args(args)
        .output()
        .expect("spawn magnetoflow")
}

/// Writes `spec` and runs `command --spec <file> --out <dir>/out`.
fn run_spec(dir: &Path, command: &str, spec: &str, extra: &[&str]) -> (Output, PathBuf) {
    let spec_path = dir.join(format!("{command}.toml"));
    fs::write(&spec_path, spec).unwrap();
    let out = dir.join("out");
    let mut args = vec![command, "--spec", spec_path.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    (magnetoflow(&args), out)
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn error_record(out: &Output) -> Value {
    let stderr = String::from_utf8_lossy(&out.stderr);
    let line = stderr.lines().last().expect("stderr has an error record");
    serde_json::from_str(line).unwrap()
}

const TORUS_PARALLELS: &str = r#"
schema = "magnetoflow/1"

[surface]
kind = "torus"
r = 1.0
R = 2.0

[field]
kind = "uniform"
mu = 0.3

[task]
kind = "parallels"
"#;

#[test]
fn torus_parallels_report_two_roots() {
    let tmp = TempDir::new().unwrap();
    let (out, dir) = run_spec(tmp.path(), "parallels", TORUS_PARALLELS, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read_json(&dir.join("roots.json"));
    assert_eq!(report["surface"], "torus");
    assert_eq!(report["regime"], "TwoRoots");
    assert_eq!(report["roots"].as_array().unwrap().len(), 2);
}

#[test]
fn parallels_csv_output() {
    let tmp = TempDir::new().unwrap();
    let spec = format!("{TORUS_PARALLELS}\n[output]\nformat = \"csv\"\nname = \"torus\"\n");
    let (out, dir) = run_spec(tmp.path(), "parallels", &spec, &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.join("torus.csv")).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("t,residual,bracket_lo,bracket_hi,tangent\n"));
}

#[test]
fn hyperbolic_classification_is_horocycle() {
    let tmp = TempDir::new().unwrap();
    let spec = r#"
schema = "magnetoflow/1"
surface = { kind = "hyperbolic", curvature = 1.0 }
field = { kind = "uniform", mu = 1.0 }
task = { kind = "classify" }
"#;
    let (out, dir) = run_spec(tmp.path(), "classify", spec, &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(read_json(&dir.join("classification.json"))["tag"], "Horocycle");
}

#[test]
fn sphere_classification_reports_radius() {
    let tmp = TempDir::new().unwrap();
    let spec = r#"
schema = "magnetoflow/1"
surface = { kind = "sphere", radius = 1.0 }
field = { kind = "uniform", mu = 1.0 }
task = { kind = "classify", energy = 1.0 }
"#;
    let (out, dir) = run_spec(tmp.path(), "classify", spec, &[]);
    assert_eq!(out.status.code(), Some(0));
    let report = read_json(&dir.join("classification.json"));
    assert_eq!(report["tag"], "ClosedCircle");
    let radius = report["radius"].as_f64().unwrap();
    assert!((radius - 0.5f64.sqrt()).abs() < 1e-15);
}

const SPHERE_INTEGRATE: &str = r#"
schema = "magnetoflow/1"
surface = { kind = "sphere", radius = 1 }
field = { kind = "uniform", mu = 1 }
task = { kind = "integrate", e = 1, span = 10 }
"#;

#[test]
fn integrate_is_byte_identical_across_runs() {
    let tmp = TempDir::new().unwrap();
    let (a, dir) = run_spec(tmp.path(), "integrate", SPHERE_INTEGRATE, &[]);
    assert_eq!(a.status.code(), Some(0));
    let first = fs::read(dir.join("trajectory.json")).unwrap();
    let summary = read_json(&dir.join("summary.json"));
    assert_eq!(summary["termination"]["reason"], "completed");
    assert!(summary["energy_drift"].as_f64().unwrap() < 1e-10);
    let (b, _) = run_spec(tmp.path(), "integrate", SPHERE_INTEGRATE, &[]);
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(first, fs::read(dir.join("trajectory.json")).unwrap());
}

#[test]
fn integrate_csv_has_curvature_columns() {
    let tmp = TempDir::new().unwrap();
    let spec = format!("{SPHERE_INTEGRATE}output = {{ format = \"csv\" }}\n");
    let (out, dir) = run_spec(tmp.path(), "integrate", &spec, &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.join("trajectory.csv")).unwrap();
    assert_eq!(text.lines().next().unwrap(), "t,u,v,du,dv,energy,kappa,gauss_curvature");
    assert_eq!(text.lines().count(), 10_002);
}

#[test]
fn tolerance_flag_switches_to_adaptive() {
    let tmp = TempDir::new().unwrap();
    let (out, dir) = run_spec(tmp.path(), "integrate", SPHERE_INTEGRATE, &["--tolerance", "1e-9"]);
    assert_eq!(out.status.code(), Some(0));
    let summary = read_json(&dir.join("summary.json"));
    // adaptive steps are much longer than the default fixed step
    assert!(summary["samples"].as_u64().unwrap() < 10_001);
}

#[test]
fn backward_blowup_reports_divergence() {
    let tmp = TempDir::new().unwrap();
    let spec = r#"
schema = "magnetoflow/1"
surface = { kind = "plane" }
field = { kind = "tensor", du = [[-2.0, 0.0], [0.0, 0.0]] }
task = { kind = "integrate", start = [1.0, 1.0], velocity = [-1.0, 1.0], span = 2.0, method = "adaptive", tolerance = 1e-10, direction = "backward" }
"#;
    let (out, dir) = run_spec(tmp.path(), "integrate", spec, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = read_json(&dir.join("summary.json"));
    assert_eq!(summary["termination"]["reason"], "norm_blowup");
    assert_eq!(summary["extendibility"], "VelocityDiverges");
}

#[test]
fn gmf_with_zero_mass_is_a_validation_error() {
    let tmp = TempDir::new().unwrap();
    let spec = TORUS_PARALLELS.replace("kind = \"uniform\"\nmu = 0.3", "kind = \"gmf\"\nm = 0.0");
    let (out, dir) = run_spec(tmp.path(), "parallels", &spec, &[]);
    assert_eq!(out.status.code(), Some(2));
    let rec = error_record(&out);
    assert_eq!(rec["error"], "validation");
    assert_eq!(rec["key"], "field.m");
    assert!(!dir.exists());
}

#[test]
fn fat_torus_is_a_validation_error() {
    let tmp = TempDir::new().unwrap();
    let spec = TORUS_PARALLELS.replace("r = 1.0\nR = 2.0", "r = 2.0\nR = 1.0");
    let (out, _) = run_spec(tmp.path(), "parallels", &spec, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["key"], "surface");
}

#[test]
fn stability_with_zero_mass_is_a_validation_error() {
    let tmp = TempDir::new().unwrap();
    let spec = r#"
schema = "magnetoflow/1"
surface = { kind = "sphere", radius = 1.0 }
task = { kind = "stability", m = 0.0, curve = { kind = "parallel", t = 1.0 } }
"#;
    let (out, _) = run_spec(tmp.path(), "stability", spec, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["key"], "task.m");
}

#[test]
fn unknown_key_is_a_parse_error_with_line() {
    let tmp = TempDir::new().unwrap();
    let spec = format!("{TORUS_PARALLELS}resolutoin = 100\n");
    let (out, _) = run_spec(tmp.path(), "parallels", &spec, &[]);
    assert_eq!(out.status.code(), Some(2));
    let rec = error_record(&out);
    assert_eq!(rec["error"], "parse");
    assert!(rec["message"].as_str().unwrap().contains("resolutoin"));
    assert!(rec["line"].as_u64().unwrap() > 0);
}

#[test]
fn command_must_match_task() {
    let tmp = TempDir::new().unwrap();
    let (out, _) = run_spec(tmp.path(), "stability", TORUS_PARALLELS, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["key"], "task.kind");
}

#[test]
fn tolerance_on_task_without_one_is_rejected() {
    let tmp = TempDir::new().unwrap();
    let (out, _) = run_spec(tmp.path(), "parallels", TORUS_PARALLELS, &["--tolerance", "1e-6"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["key"], "--tolerance");
}

#[test]
fn missing_spec_file_is_a_validation_error() {
    let tmp = TempDir::new().unwrap();
    let out = magnetoflow(&["integrate", "--spec", "/nonexistent/run.toml", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["key"], "--spec");
}

fn sphere_stability(t: f64) -> String {
    format!(
        r#"
schema = "magnetoflow/1"
surface = {{ kind = "sphere", radius = 1.0 }}
field = {{ kind = "gmf", m = 1.0 }}

[task]
kind = "stability"

[task.curve]
kind = "parallel"
t = {t:?}
nodes = 128
"#
    )
}

#[test]
fn critical_sphere_circle_is_all_negative() {
    let tmp = TempDir::new().unwrap();
    let (out, dir) = run_spec(tmp.path(), "stability", &sphere_stability(1f64.atan()), &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read_json(&dir.join("stability.json"));
    assert_eq!(report["sign"], "AllNegative");
    for v in report["values"].as_array().unwrap() {
        assert!((v.as_f64().unwrap() + 2.0).abs() <= 1e-6);
    }
}

#[test]
fn non_critical_curve_is_a_numeric_failure() {
    let tmp = TempDir::new().unwrap();
    let (out, dir) = run_spec(tmp.path(), "stability", &sphere_stability(1.3), &[]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_record(&out)["error"], "numeric");
    assert!(!dir.join("stability.json").exists());
}

#[test]
fn variational_first_variation_matches_pairing() {
    let tmp = TempDir::new().unwrap();
    let spec = r#"
schema = "magnetoflow/1"
surface = { kind = "sphere", radius = 1.0 }

[task]
kind = "variational"
m = 1.0
tolerance = 1e-3
curve = { kind = "parallel", t = 1.2, nodes = 256 }
perturbation = { amplitude = 0.5, mode = 0 }
"#;
    let (out, dir) = run_spec(tmp.path(), "variational", spec, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read_json(&dir.join("variational.json"));
    assert_eq!(report["critical"], false);
    assert!(report["stability_sign"].is_null());
    let fd = report["first_variation"].as_f64().unwrap();
    let pairing = report["first_variation_pairing"].as_f64().unwrap();
    assert!((fd - pairing).abs() <= 1e-3 * pairing.abs(), "{fd} vs {pairing}");
}

#[test]
fn torus_flowline_is_critical() {
    let tmp = TempDir::new().unwrap();
    let spec = r#"
schema = "magnetoflow/1"
surface = { kind = "torus", r = 1.0, R = 2.0 }
field = { kind = "gmf", m = 0.5 }

[task]
kind = "variational"
tolerance = 1e-3
curve = { kind = "flowline", start = [1.0, 0.0], heading = 0.7, span = 3.0 }
"#;
    let (out, dir) = run_spec(tmp.path(), "variational", spec, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read_json(&dir.join("variational.json"));
    assert_eq!(report["critical"], true);
    assert_eq!(report["m"].as_f64(), Some(0.5));
}

#[test]
fn oracle_torus_closed_form() {
    let tmp = TempDir::new().unwrap();
    let spec = r#"
schema = "magnetoflow/1"

[task]
kind = "oracle"
formula = { name = "torus-parallels", r = 1.0, R = 2.0, mu = 0.8 }
"#;
    let (out, dir) = run_spec(tmp.path(), "oracle", spec, &[]);
    assert_eq!(out.status.code(), Some(0));
    let report = read_json(&dir.join("oracle.json"));
    assert_eq!(report["regime"], "Empty");
    assert!(report["roots"].as_array().unwrap().is_empty());
}

#[test]
fn oracle_with_bad_parameters_is_a_validation_error() {
    let tmp = TempDir::new().unwrap();
    let spec = r#"
schema = "magnetoflow/1"
task = { kind = "oracle", formula = { name = "hyperbolic-class", curvature = -1.0, mu = 1.0 } }
"#;
    let (out, _) = run_spec(tmp.path(), "oracle", spec, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["key"], "task.formula");
}

#[test]
fn reproduce_paper_writes_identical_goldens() {
    let tmp = TempDir::new().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for dir in [&a, &b] {
        let out = magnetoflow(&["reproduce-paper", "--out", dir.to_str().unwrap(), "--seed", "7"]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let stdout = String::from_utf8_lossy(&out.stdout);
        assert_eq!(stdout.lines().filter(|l| l.contains(" PASS ")).count(), 15);
    }
    let index = read_json(&a.join("index.json"));
    assert_eq!(index["seed"], 7);
    let criteria = index["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 15);
    for entry in criteria {
        let file = entry["file"].as_str().unwrap();
        assert_eq!(fs::read(a.join(file)).unwrap(), fs::read(b.join(file)).unwrap(), "{file}");
        for art in entry["artifacts"].as_array().unwrap() {
            let art = art.as_str().unwrap();
            assert_eq!(fs::read(a.join(art)).unwrap(), fs::read(b.join(art)).unwrap(), "{art}");
        }
    }
    let ac04 = read_json(&a.join("ac04.json"));
    assert_eq!(ac04["passed"], true);
}
