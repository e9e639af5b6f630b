//! End-to-end tests of the command-line binary.

use std::path::Path;
use std::process::{Command, Output};

fn pnp1d(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pnp1d"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn run_writes_outputs_and_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("a");
    let out = pnp1d(&[
        "run",
        "--scenario",
        "triple",
        "--t-end",
        "0.01",
        "--out",
        out1.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("steps 10"), "{text}");
    assert!(text.contains("mass_3"), "{text}");
    for f in ["config.json", "snapshot.csv", "series.csv"] {
        assert!(out1.join(f).exists(), "missing {f}");
    }
    let snapshot = std::fs::read_to_string(out1.join("snapshot.csv")).unwrap();
    assert!(snapshot.lines().any(|l| l == "x,c_1,c_2,c_3,psi"), "{snapshot}");
    // the emitted config reproduces the run exactly
    let out2 = dir.path().join("b");
    let rerun = pnp1d(&[
        "run",
        "--config",
        out1.join("config.json").to_str().unwrap(),
        "--out",
        out2.to_str().unwrap(),
    ]);
    assert!(rerun.status.success(), "{}", stderr(&rerun));
    let snapshot2 = std::fs::read_to_string(out2.join("snapshot.csv")).unwrap();
    assert_eq!(snapshot, snapshot2);
}

#[test]
fn run_dirichlet_scenario_omits_energy() {
    let out = pnp1d(&[
        "run", "--scenario", "manufactured", "--n-cells", "20", "--t-end", "0.05",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("mass_2"), "{text}");
    assert!(!text.contains("E_h"), "energy is undefined under Dirichlet walls: {text}");
}

#[test]
fn robin_scenario_reports_energy() {
    let out = pnp1d(&[
        "run", "--scenario", "triple-robin", "--t-end", "0.01",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("E_h"), "{}", stdout(&out));
}

#[test]
fn unknown_scenario_is_rejected_with_the_valid_ids() {
    let out = pnp1d(&["run", "--scenario", "bogus"]);
    assert!(!out.status.success());
    let err = stderr(&out);
    assert!(err.starts_with("error:"), "{err}");
    for id in ["manufactured", "channel", "triple-robin"] {
        assert!(err.contains(id), "{err}");
    }
}

#[test]
fn missing_scenario_and_config_is_an_error() {
    let out = pnp1d(&["run"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("--config or --scenario"), "{}", stderr(&out));
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"scenario":"triple","n_cells":40,"tau":1e-3,"epsilon":0.1,"t_end":0.01,"frobnicate":1}"#,
    )
    .unwrap();
    let out = pnp1d(&["run", "--config", path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("frobnicate"), "{}", stderr(&out));
}

#[test]
fn converge_prints_and_writes_second_order_results() {
    let dir = tempfile::tempdir().unwrap();
    let out = pnp1d(&[
        "converge",
        "--ns",
        "8,16",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("N,err_c1,ord_c1"), "{text}");
    let csv = std::fs::read_to_string(dir.path().join("convergence.csv")).unwrap();
    let last = csv.lines().last().unwrap();
    let cols: Vec<&str> = last.split(',').collect();
    assert_eq!(cols[0], "16");
    let ord_c1: f64 = cols[2].parse().unwrap();
    assert!((1.0..3.0).contains(&ord_c1), "order {ord_c1}");
}

#[test]
fn iv_reports_points_and_a_linear_fit() {
    let dir = tempfile::tempdir().unwrap();
    let out = pnp1d(&[
        "iv",
        "--voltages",
        "0.5,1.0",
        "--steady-tol",
        "1e-4",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("V,J,steps"), "{text}");
    assert!(text.contains("fit: J ="), "{text}");
    let csv = std::fs::read_to_string(dir.path().join("iv.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn sweep_covers_the_requested_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = pnp1d(&[
        "sweep",
        "--q0-list",
        "0.0,0.1",
        "--r-c-list",
        "0.2",
        "--steady-tol",
        "1e-4",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert!(csv.starts_with("r_c,l_c,q0,steps"), "{csv}");
    assert_eq!(csv.lines().count(), 3);
    // rows keep the requested order
    let q0s: Vec<&str> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap())
        .collect();
    let vals: Vec<f64> = q0s.iter().map(|s| s.parse().unwrap()).collect();
    assert_eq!(vals, vec![0.0, 0.1]);
}

#[test]
fn random_init_is_limited_to_the_wide_domain_scenarios() {
    let out = pnp1d(&["run", "--scenario", "channel", "--random-init"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("random"), "{}", stderr(&out));
}

#[test]
fn help_names_all_subcommands() {
    let out = pnp1d(&["--help"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for sub in ["run", "converge", "iv", "sweep"] {
        assert!(text.contains(sub), "{text}");
    }
    assert!(!Path::new("snapshot.csv").exists());
}
