//! End-to-end tests of the `levytree-lab` binary: exit codes, artifact
//! layout, manifest hashing, and rerun determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

const BIN: &str = env!("CARGO_BIN_EXE_levytree-lab");

fn run_in(dir: &Path, args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.current_dir(dir).args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary should spawn")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const TINY_MECH_REPORT: &str = "\
experiment = \"mech-report\"
output_dir = \"out\"
[mechanism]
kind = \"stable\"
gamma = 2.0
[scales]
grid_points = 64
dyadic_depth = 10
";

#[test]
fn list_experiments_prints_all_eight() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["list-experiments"], &[]);
    assert!(out.status.success());
    let text = stdout(&out);
    for name in [
        "mech-report",
        "kernels-check",
        "doubling",
        "counterexample",
        "spine-laplace",
        "subliminf",
        "density",
        "packing-ratio",
    ] {
        assert!(text.contains(name), "missing {name} in:\n{text}");
    }
    assert_eq!(text.lines().count(), 8);
}

#[test]
fn validate_and_schema_failures() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "c.toml", TINY_MECH_REPORT);

    let ok = run_in(dir.path(), &["validate", &config], &[]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));

    // Unknown experiment through the override path.
    let bad = run_in(dir.path(), &["validate", &config, "experiment=nope"], &[]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("unknown experiment"));

    // A stochastic experiment without seeds is a schema error.
    let no_seeds = run_in(dir.path(), &["run", &config, "experiment=density"], &[]);
    assert_eq!(no_seeds.status.code(), Some(2));
    assert!(stderr(&no_seeds).contains("seeds"));

    // Unknown keys are rejected rather than ignored.
    let stray = run_in(dir.path(), &["validate", &config, "scales.warp=1"], &[]);
    assert_eq!(stray.status.code(), Some(2));

    // Missing file.
    let gone = run_in(dir.path(), &["validate", "gone.toml"], &[]);
    assert_eq!(gone.status.code(), Some(2));
}

#[test]
fn runtime_failures_exit_one() {
    // A quadratic mechanism validates, but tree sampling cannot serve it.
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "c.toml",
        "experiment = \"density\"\nseeds = [1]\n[mechanism]\nkind = \"quadratic\"\nbeta = 1.0\n[scales]\nwalk_length = 64\n",
    );
    let out = run_in(dir.path(), &["run", &config], &[]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
    assert!(stderr(&out).contains("runtime error"));
}

#[test]
fn manifest_hashes_and_summary_echo() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "c.toml", TINY_MECH_REPORT);
    let out = run_in(dir.path(), &["run", &config], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    // The manifest path is the run's one line of stdout.
    let manifest_path = dir.path().join(stdout(&out).trim());
    let manifest = read_json(&manifest_path);

    assert_eq!(manifest["experiment"], "mech-report");
    assert_eq!(manifest["tool"]["name"], "levytree-lab");
    assert!(manifest["created_unix_ms"].as_u64().unwrap() > 0);

    let files = manifest["files"].as_array().unwrap();
    let names: Vec<&str> = files.iter().map(|f| f["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"mech_tables.csv"));
    assert!(names.contains(&"gauge.csv"));
    assert!(names.contains(&"summary.json"));
    let out_dir = manifest_path.parent().unwrap();
    for f in files {
        let body = fs::read(out_dir.join(f["name"].as_str().unwrap())).unwrap();
        assert_eq!(f["bytes"].as_u64().unwrap() as usize, body.len());
        assert_eq!(f["sha256"].as_str().unwrap(), hex::encode(Sha256::digest(&body)));
    }

    let summary = read_json(&out_dir.join("summary.json"));
    assert_eq!(summary["tool"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(summary["experiment"], "mech-report");
    // The config echo round-trips the merged TOML, including defaults that
    // were spelled out in the file.
    assert_eq!(summary["config"]["mechanism"]["gamma"].as_f64(), Some(2.0));
    assert_eq!(summary["config"]["scales"]["grid_points"].as_i64(), Some(64));
    assert_eq!(summary["results"]["lambda_rows"].as_i64(), Some(64));
}

#[test]
fn density_writes_one_excursion_per_tree() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "c.toml",
        "experiment = \"density\"\noutput_dir = \"out\"\nseeds = [1, 2]\n\
         [mechanism]\nkind = \"stable\"\ngamma = 2.0\n\
         [scales]\nwalk_length = 512\nscale_p = 32\ncenters = 2\ndyadic_depth = 10\n",
    );
    let out = run_in(dir.path(), &["run", &config], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out_dir = dir.path().join("out");
    for name in ["tree_0.csv", "tree_1.csv", "density.csv", "summary.json", "manifest.json"] {
        assert!(out_dir.join(name).exists(), "missing {name}");
    }
    let summary = read_json(&out_dir.join("summary.json"));
    assert_eq!(summary["results"]["trees"].as_i64(), Some(2));
    let median = summary["results"]["median_min_ratio"].as_f64().unwrap();
    assert!(median.is_finite() && median > 0.0);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "c.toml",
        "experiment = \"subliminf\"\nseeds = [3, 4]\n\
         [mechanism]\nkind = \"stable\"\ngamma = 1.5\n\
         [scales]\ndyadic_depth = 24\n",
    );
    let run = |out_dir: &str| {
        let out = run_in(dir.path(), &["run", &config], &[("LEVYTREE_LAB_OUT", out_dir)]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    };
    run("a");
    run("b");
    let manifest_a = read_json(&dir.path().join("a/manifest.json"));
    for f in manifest_a["files"].as_array().unwrap() {
        let name = f["name"].as_str().unwrap();
        let a = fs::read(dir.path().join("a").join(name)).unwrap();
        let b = fs::read(dir.path().join("b").join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between reruns");
    }
}

#[test]
fn env_var_overrides_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "c.toml", TINY_MECH_REPORT);
    let out = run_in(
        dir.path(),
        &["run", &config],
        &[("LEVYTREE_LAB_OUT", "elsewhere")],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(dir.path().join("elsewhere/manifest.json").exists());
    assert!(!dir.path().join("out").exists());
}

#[test]
fn spine_laplace_smoke() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "c.toml",
        "experiment = \"spine-laplace\"\noutput_dir = \"out\"\nseeds = [7]\n\
         [mechanism]\nkind = \"stable\"\ngamma = 2.0\n\
         [scales]\nscale_p = 20\nreplicates = 64\nr_values = [0.5]\nlambda_values = [1.0]\n",
    );
    let out = run_in(dir.path(), &["run", &config], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let summary = read_json(&dir.path().join("out/summary.json"));
    assert_eq!(summary["results"]["rows"].as_i64(), Some(1));
    assert!(summary["results"]["max_sigmas"].as_f64().unwrap().is_finite());
    let table = fs::read_to_string(dir.path().join("out/spine_laplace.csv")).unwrap();
    assert_eq!(table.lines().count(), 2, "header plus one row:\n{table}");
    assert!(table.lines().next().unwrap().starts_with("r,lambda,seed"));
}
