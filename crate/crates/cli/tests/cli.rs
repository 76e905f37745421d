use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tjchain::continuum::surface_energy_series;
use tjchain::{BoundaryParams, Regime};

fn tjchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tjchain")).args(args).env_remove("DELTA_E_SOLVER").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|c| c.trim().parse().unwrap()).collect())
        .collect()
}

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

#[test]
fn surface_energy_matches_series() {
    let o = tjchain(&["surface-energy", "--xi", "1.9", "--xi-prime", "0.5"]);
    assert!(o.status.success());
    let got: f64 = stdout(&o).trim().parse().unwrap();
    let p = BoundaryParams::new(1.9, std::f64::consts::FRAC_PI_3, 0.0, 0.5, 0.0, 0.0).unwrap();
    let want = surface_energy_series(Regime::I, &p).unwrap();
    assert!((got - want).abs() <= 1e-10, "{got} vs {want}");
}

#[test]
fn verify_small_chain_succeeds() {
    let o = tjchain(&["verify", "--L", "3", "--trials", "50"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["max_residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn energy_sweep_is_decreasing() {
    let o = tjchain(&["sweep", "--curve", "E-vs-n", "--xi", "1.9", "--xi-prime", "0.5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# tjchain "));
    assert!(text.contains("\nn,E_over_L\n"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 20);
    assert!(rows.windows(2).all(|w| w[1][1] < w[0][1]));
    assert!((rows[19][0] - 1.0).abs() < 1e-12);
    assert!((rows[19][1] + 2.0 * std::f64::consts::LN_2).abs() < 1e-9);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# regime i\nxi = 2.5\nxi_prime = 0.2\n").unwrap();
    let from_file = tjchain(&["surface-energy", "--config", cfg.to_str().unwrap()]);
    let overridden = tjchain(&["surface-energy", "--config", cfg.to_str().unwrap(), "--xi", "1.9", "--xi-prime", "0.5"]);
    let direct = tjchain(&["surface-energy", "--xi", "1.9", "--xi-prime", "0.5"]);
    assert!(from_file.status.success() && overridden.status.success());
    assert_eq!(stdout(&overridden), stdout(&direct));
    assert_ne!(stdout(&from_file), stdout(&direct));
}

#[test]
fn file_output_echoes_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nested/curve.csv");
    let o = tjchain(&["sweep", "--curve", "E_b-vs-xi", "--xi", "1.9", "--xi-prime", "0.5", "--points", "4", "-o", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("# curve = E_b-vs-xi\n"));
    assert!(text.contains("# xi-prime = 0.5\n"));
    assert!(text.contains("# regime = i\n") || text.contains("# regime = I\n"));
    assert!(text.contains("\nxi,E_b\n"));
    assert_eq!(data_rows(&text).len(), 4);

    let json = dir.path().join("e.json");
    let o = tjchain(&["ground-energy", "--xi", "0.9", "--xi-prime", "1.123", "--L", "10", "-o", json.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["command"], "ground-energy");
    assert_eq!(v["config"]["L"], "10");
    let total = v["result"]["total"].as_f64().unwrap();
    let parts = ["bulk", "boundary_string", "hole", "surface"];
    let bulk = v["result"]["bulk"].as_f64().unwrap() + v["result"]["boundary_string"].as_f64().unwrap();
    assert!(parts.iter().all(|k| v["result"][k].is_number()));
    assert!((v["result"]["boundary_string"].as_f64().unwrap() + 7.239609).abs() < 1e-6);
    assert!(total < bulk);
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["sweep", "--curve", "E-vs-n", "--xi", "-0.9", "--xi-prime", "2.9", "--points", "6", "--L", "64", "--jobs", "3"];
    let a = tjchain(&args);
    let b = tjchain(&args[..args.len() - 2]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn invalid_input_exits_with_one() {
    for args in [
        vec!["surface-energy", "--xi", "0.5", "--xi-prime", "0.5", "--regime", "iv"],
        vec!["surface-energy", "--xi", "0", "--xi-prime", "0.5"],
        vec!["ground-energy", "--n", "1.5"],
        vec!["sweep", "--curve", "nonsense"],
        vec!["density", "--lambda-max", "5"],
        vec!["ed", "--xi", "abc"],
    ] {
        let o = tjchain(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("tjchain: "));
    }
}

#[test]
fn unreachable_filling_exits_with_two() {
    let o = tjchain(&["ground-energy", "--xi", "-0.9", "--xi-prime", "2.9", "--L", "4", "--n", "0.02"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_files_exit_with_three() {
    assert_eq!(tjchain(&["fit", "--input", "/nonexistent/points.csv"]).status.code(), Some(3));
    assert_eq!(tjchain(&["verify", "--config", "/nonexistent/run.conf"]).status.code(), Some(3));
}

#[test]
fn fit_reads_delta_e_output() {
    let dir = tempfile::tempdir().unwrap();
    let points = dir.path().join("points.csv");
    std::fs::write(&points, "L,delta_e\n4,0.5\n6,0.333333333333333\n8,0.25\n10,0.2\n").unwrap();
    let o = tjchain(&["fit", "--input", points.to_str().unwrap()]);
    assert!(o.status.success());
    let rows = data_rows(&stdout(&o));
    assert!((rows[0][0] - 2.0).abs() < 1e-9 && (rows[0][1] + 1.0).abs() < 1e-9);
}

#[test]
fn solver_environment_sits_between_flag_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "solver = nonsense\nsizes = 2, 3, 4\n").unwrap();
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_tjchain"));
        c.args(["delta-e", "--config", cfg.to_str().unwrap()]).env_remove("DELTA_E_SOLVER");
        if let Some(e) = env {
            c.env("DELTA_E_SOLVER", e);
        }
        if let Some(f) = flag {
            c.args(["--solver", f]);
        }
        c.output().unwrap()
    };
    assert_eq!(run(None, None).status.code(), Some(1));
    let env = run(Some("ed"), None);
    assert!(env.status.success());
    assert!(stdout(&env).contains("# solver = ed\n"));
    assert_eq!(run(Some("nonsense"), Some("ed")).status.code(), Some(0));
}

#[test]
fn every_figure_has_one_recipe() {
    let dir = workspace_root().join("recipes");
    let mut names: Vec<String> =
        std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    let want: Vec<String> = (1..=9).map(|k| format!("fig{k}.sh")).collect();
    let mut sorted = want.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    for name in want {
        let text = std::fs::read_to_string(dir.join(&name)).unwrap();
        assert!(text.contains("tjchain") && text.contains("sweep"), "{name}");
    }
}
