use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_rfi-coexist");

fn cmd() -> Command {
    let mut c = Command::new(BIN);
    c.env_remove("RFI_COEXIST_SCENARIO");
    c
}

fn run(args: &[&str]) -> Output {
    cmd().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn manifest_path(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn schema(name: &str) -> jsonschema::Validator {
    let text = std::fs::read_to_string(manifest_path(&format!("schemas/{name}.schema.json"))).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    jsonschema::validator_for(&value).unwrap()
}

fn assert_valid(name: &str, doc: &[u8]) -> serde_json::Value {
    let value: serde_json::Value = serde_json::from_slice(doc).unwrap();
    let validator = schema(name);
    let errors: Vec<String> = validator.iter_errors(&value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
    value
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn geometry_output_matches_schema() {
    let out = run(&["geometry"]);
    assert_eq!(code(&out), 0);
    let v = assert_valid("geometry", &out.stdout);
    assert_eq!(v["d_min"].as_f64().unwrap(), 685_000.0);
}

#[test]
fn analytic_output_matches_schema() {
    for lobe in ["main", "side", "both"] {
        let out = run(&["analytic", "--lobe", lobe, "--max-order", "6"]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        let v = assert_valid("analytic", &out.stdout);
        assert_eq!(v["results"][0]["cumulant_set"]["cumulants"].as_array().unwrap().len(), 6);
    }
}

#[test]
fn analytic_reference_values() {
    let out = run(&["analytic"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let main = &v["results"][0];
    let side = &v["results"][1];
    assert_eq!(main["cumulant_set"]["lobe"], "main");
    let main_mean = main["cumulant_set"]["mean"].as_f64().unwrap();
    assert!((55.0..=56.0).contains(&main_mean), "{main_mean}");
    assert_eq!(main["verdict"]["mean_exceeds"], true);
    let side_mean = side["cumulant_set"]["mean"].as_f64().unwrap();
    assert!((side_mean - 0.80).abs() < 0.01, "{side_mean}");
    assert_eq!(side["verdict"]["mean_exceeds"], false);
}

#[test]
fn simulate_output_matches_schema() {
    let out = run(&["simulate", "--trials", "2000", "--seed", "3"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v = assert_valid("simulate", &out.stdout);
    assert_eq!(v["results"].as_array().unwrap().len(), 2);
}

#[test]
fn simulate_is_byte_identical_across_runs_and_workers() {
    let args = ["simulate", "--trials", "3000", "--seed", "42"];
    let a = cmd().args(args).args(["--workers", "1"]).output().unwrap();
    let b = cmd().args(args).args(["--workers", "1"]).output().unwrap();
    let c = cmd().args(args).args(["--workers", "4"]).output().unwrap();
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let d = cmd().args(["simulate", "--trials", "3000", "--seed", "43"]).output().unwrap();
    assert_ne!(a.stdout, d.stdout);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    let out = run(&["--scenario", "/definitely/not/here.toml", "analytic"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("io_error"));

    let alpha2 = write(dir.path(), "alpha2.toml", "[network]\npath_loss_exponent = 2.0\n");
    for sub in ["analytic", "simulate", "validate", "geometry"] {
        let out = run(&["--scenario", alpha2.to_str().unwrap(), sub]);
        assert_eq!(code(&out), 3, "{sub}");
        assert!(stderr(&out).contains("alpha_out_of_range"));
    }

    let gain = write(dir.path(), "gain.toml", "[gain]\nside_lobe_gain_linear = -3.16e-6\n");
    let out = run(&["--scenario", gain.to_str().unwrap(), "validate"]);
    assert_eq!(code(&out), 2);

    let garbled = write(dir.path(), "bad.toml", "[network\n");
    assert_eq!(code(&run(&["--scenario", garbled.to_str().unwrap(), "geometry"])), 2);

    let out = run(&["simulate", "--trials", "1"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("insufficient_trials_for_variance"));
    assert!(out.stdout.is_empty());

    assert_eq!(code(&run(&["simulate", "--trials", "0"])), 2);
    assert_eq!(code(&run(&["analytic", "--lobe", "back"])), 2);
    assert_eq!(code(&run(&["analytic", "--max-order", "21"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["--help"])), 0);

    let empty = write(dir.path(), "empty.toml", "alpha_grid = []\n");
    let csv = dir.path().join("never.csv");
    let out = run(&["sweep", "--sweep", empty.to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("empty_grid"));
    assert!(!csv.exists());

    let wide = write(dir.path(), "wide.toml", "alpha_grid = [2.5]\n");
    let out = run(&["sweep", "--sweep", wide.to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(!csv.exists());
}

#[test]
fn validation_failure_exits_one() {
    // two trials cannot form the standard error of a variance
    let out = run(&["validate", "--trials", "2", "--seed", "1"]);
    assert_eq!(code(&out), 1, "{}", String::from_utf8_lossy(&out.stdout));
    assert!(stderr(&out).contains("FAIL oracle"));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn scenario_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "s.toml", "[network]\npath_loss_exponent = 2.1\nbs_intensity = 50\n");
    let out = cmd()
        .env("RFI_COEXIST_SCENARIO", &p)
        .args(["analytic", "--lobe", "side"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["path_loss_exponent"].as_f64(), Some(2.1));
    assert_eq!(v["bs_intensity"].as_f64(), Some(50.0));

    // an explicit flag wins over the environment
    let out = cmd()
        .env("RFI_COEXIST_SCENARIO", "/not/here.toml")
        .args(["--scenario", p.to_str().unwrap(), "geometry"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
}

#[test]
fn bundled_reference_scenario_equals_builtin() {
    let path = manifest_path("scenarios/reference.toml");
    let a = run(&["--scenario", path.to_str().unwrap(), "analytic"]);
    let b = run(&["analytic"]);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sweep_csv_matches_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "small.toml",
        "alpha_grid = [2.01, 2.1, 2.2]\nbs_intensities = [50.0, 200.0]\n",
    );
    let csv = dir.path().join("small.csv");
    let out = run(&["sweep", "--sweep", spec.to_str().unwrap(), "--out", csv.to_str().unwrap(), "--workers", "2"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let got = std::fs::read_to_string(&csv).unwrap();
    let golden = std::fs::read_to_string(manifest_path("tests/data/sweep_small.csv")).unwrap();
    assert_eq!(got, golden);
    assert_eq!(
        got.lines().next().unwrap(),
        "alpha,lambda_bs,lobe,mean_K,std_K,skewness,excess_kurtosis,exceeds_tau,mc_mean_K,mc_se_mean_K,mc_std_K"
    );
    let summary = std::fs::read(dir.path().join("small.summary.json")).unwrap();
    assert_valid("sweep_summary", &summary);
    assert_eq!(summary, out.stdout);
}

#[test]
fn sweep_with_mc_columns_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "mc.toml",
        "alpha_grid = [2.05, 2.2]\nbs_intensities = [100.0]\nlobes = [\"main\"]\nwith_mc = true\n[mc]\ntrials = 4000\nseed = 9\n",
    );
    let csv = dir.path().join("mc.csv");
    let out = run(&["sweep", "--sweep", spec.to_str().unwrap(), "--out", csv.to_str().unwrap(), "--svg"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = std::fs::read_to_string(&csv).unwrap();
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 11);
        assert!(cols[8..].iter().all(|c| !c.is_empty()), "{line}");
    }
    for stat in ["mean", "std"] {
        let svg = std::fs::read_to_string(dir.path().join(format!("mc_main_{stat}.svg"))).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }
    assert!(!dir.path().join("mc_side_mean.svg").exists());
}

#[test]
fn bundled_sweep_spec_runs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fig4.csv");
    let spec = manifest_path("scenarios/fig4_sweep.toml");
    let out = run(&["sweep", "--sweep", spec.to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v = assert_valid("sweep_summary", &out.stdout);
    assert_eq!(v["rows"], 240);
    for curve in v["curves"].as_array().unwrap() {
        assert_eq!(curve["mean_decreasing"], true, "{curve}");
    }
}
