use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const GAUSSIAN_BANDS: &str = r#"
[profile]
kind = "gaussian"

[grid]
h = 0.5

[sweep]
xi_min = -1.0
xi_max = 2.0
samples = 7
k_max = 3

[output]
formats = ["csv", "json", "plotdata"]
"#;

const INCONCLUSIVE: &str = r#"
[profile]
kind = "step_like"
b_minus = 0.5
b_plus = 2.0
width = 1.0

[flatband]
lambdas = [1.0]
k_max = 1

[flatband.options]
max_march = 2
flat_factor = 1e-30
nonflat_factor = 1e30
"#;

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn fiberband(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fiberband"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn without_clock_and_path(mut v: Value) -> Value {
    let m = v.as_object_mut().unwrap();
    m.remove("wall_clock_seconds");
    m["config"]["output"].as_object_mut().unwrap().remove("path");
    v
}

#[test]
fn bands_writes_every_format() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "run.toml", GAUSSIAN_BANDS);
    let out = tmp.path().join("out");
    let o = fiberband(&["bands", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let csv = fs::read_to_string(out.join("bands.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("xi,ess_threshold,lambda_1,lambda_2,lambda_3"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    // every number carries 17 significant digits
    let mantissa = first[0].split('e').next().unwrap().trim_start_matches('-');
    assert_eq!(mantissa.len(), 18, "{}", first[0]);
    assert_eq!(first[0].parse::<f64>().unwrap(), -1.0);
    assert_eq!(csv.lines().count(), 8);

    let dat = fs::read_to_string(out.join("band_1.dat")).unwrap();
    let version = env!("CARGO_PKG_VERSION");
    assert_eq!(
        dat.lines().next().unwrap(),
        format!("# fiberband bands {version}")
    );
    assert!(dat.lines().any(|l| !l.starts_with('#') && !l.is_empty()));

    let report: Value = serde_json::from_str(&fs::read_to_string(out.join("bands.json")).unwrap()).unwrap();
    assert_eq!(report["command"], "bands");
    assert_eq!(report["hash"].as_str().unwrap().len(), 64);
    assert_eq!(report["config"]["sweep"]["samples"], 7);
}

#[test]
fn reports_are_reproducible_across_runs_and_thread_counts() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "run.toml", GAUSSIAN_BANDS);
    let mut reports = Vec::new();
    for (i, jobs) in ["1", "4", "4"].iter().enumerate() {
        let out = tmp.path().join(format!("out{i}"));
        let o = fiberband(&[
            "bands",
            "--config",
            &cfg,
            "--jobs",
            jobs,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        let text = fs::read_to_string(out.join("bands.json")).unwrap();
        reports.push(without_clock_and_path(serde_json::from_str(&text).unwrap()));
        if i > 0 {
            assert_eq!(
                fs::read(tmp.path().join("out0/bands.csv")).unwrap(),
                fs::read(out.join("bands.csv")).unwrap()
            );
        }
    }
    assert_eq!(reports[0]["hash"].as_str().unwrap().len(), 64);
    assert_eq!(reports[0], reports[1]);
    assert_eq!(reports[1], reports[2]);
}

#[test]
fn format_flag_overrides_config() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "run.toml", GAUSSIAN_BANDS);
    let out = tmp.path().join("out");
    let o = fiberband(&[
        "bands",
        "--config",
        &cfg,
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(out.join("bands.csv").exists());
    assert!(!out.join("bands.json").exists());
    assert!(!out.join("band_1.dat").exists());
}

#[test]
fn json_goes_to_stdout_without_an_output_path() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "run.toml",
        "[profile]\nkind = \"constant\"\nb0 = 1.0\n\n[slice]\nxi = 0.0\nk_max = 3\n",
    );
    let o = fiberband(&["slice", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["command"], "slice");
}

#[test]
fn config_errors_exit_with_two() {
    let tmp = TempDir::new().unwrap();
    let cases = [
        ("unknown.toml", "[profile]\nkind = \"gaussian\"\n\n[sweep]\nxi_min = 0.0\nxi_max = 1.0\nsamples = 5\nbogus = 1\n"),
        ("few.toml", "[profile]\nkind = \"gaussian\"\n\n[sweep]\nxi_min = 0.0\nxi_max = 1.0\nsamples = 1\n"),
        ("badgrid.toml", "[profile]\nkind = \"gaussian\"\n\n[grid]\nnot_a_key = 3\n\n[slice]\nxi = 0.5\n"),
        ("profile.toml", "[profile]\nkind = \"step_like\"\nb_minus = 1.0\nb_plus = 2.0\nwidth = -1.0\n\n[slice]\nxi = 0.5\n"),
        ("missing.toml", "[profile]\nkind = \"gaussian\"\n"),
    ];
    for (name, text) in cases {
        let cfg = write_config(tmp.path(), name, text);
        let cmd = if name == "missing.toml" || name == "unknown.toml" || name == "few.toml" {
            "bands"
        } else {
            "slice"
        };
        let o = fiberband(&[cmd, "--config", &cfg]);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{name}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    let o = fiberband(&[
        "slice",
        "--config",
        tmp.path().join("absent.toml").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = fiberband(&["nonsense", "--config", "x.toml"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_with_three() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "run.toml",
        "[profile]\nkind = \"gaussian\"\n\n[scattering]\nxi = 0.5\nlambdas = [0.3]\n\n[scattering.options]\nmax_steps = 3\n",
    );
    let o = fiberband(&["scattering", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("step limit"));
}

#[test]
fn strict_mode_exits_with_four_on_inconclusive_verdicts() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "run.toml", INCONCLUSIVE);
    let out = tmp.path().join("out");
    let out = out.to_str().unwrap();
    let o = fiberband(&["flatband", "--config", &cfg, "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("inconclusive"));
    let o = fiberband(&["flatband", "--config", &cfg, "--out", out, "--strict"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn unwritable_output_exits_with_one() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "run.toml", GAUSSIAN_BANDS);
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "").unwrap();
    let o = fiberband(&[
        "bands",
        "--config",
        &cfg,
        "--out",
        blocker.join("sub").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}
