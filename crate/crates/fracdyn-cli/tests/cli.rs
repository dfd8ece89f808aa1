//! End-to-end tests of the `fracdyn` binary: flags, file formats, exit
//! codes, and determinism.

use std::path::Path;
use std::process::{Command, Output};

use fracdyn_cli::exit_code;

fn fracdyn(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracdyn"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn simulate_writes_a_well_formed_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "simulate", "--alpha", "0.9", "--h", "0.01", "--T", "1", "--out", "run.csv",
    ];
    let out = fracdyn(dir.path(), &args);
    assert_eq!(out.status.code(), Some(exit_code::SUCCESS), "{out:?}");

    let csv = read(dir.path(), "run.csv");
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with('#'));
    assert!(lines[1].starts_with("# config:"));
    assert_eq!(lines[2], "t,x,y,z");
    assert_eq!(lines.len(), 3 + 101, "N + 1 grid points");
    assert!(lines[3].starts_with("0.0000000000000000e0,5.0000000000000000e0,-2.0000000000000000e0,1.0000000000000000e0"));
    assert!(csv.ends_with('\n'));

    // Identical invocation, byte-identical output.
    let out2 = fracdyn(dir.path(), &["simulate", "--alpha", "0.9", "--h", "0.01", "--T", "1", "--out", "run2.csv"]);
    assert_eq!(out2.status.code(), Some(exit_code::SUCCESS));
    let csv2 = read(dir.path(), "run2.csv");
    // The config echo embeds the output path, so compare past the comments.
    let body = |s: &str| s.lines().skip(2).collect::<Vec<_>>().join("\n");
    assert_eq!(body(&csv), body(&csv2));
}

#[test]
fn simulate_zero_model_holds_the_state_constant() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracdyn(
        dir.path(),
        &["simulate", "--model", "zero", "--x0", "5,-2,1", "--h", "0.25", "--T", "1", "--out", "zero.csv"],
    );
    assert_eq!(out.status.code(), Some(exit_code::SUCCESS));
    let csv = read(dir.path(), "zero.csv");
    for line in csv.lines().skip(3) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(&fields[1..], &["5.0000000000000000e0", "-2.0000000000000000e0", "1.0000000000000000e0"]);
    }
}

#[test]
fn simulate_emit_plot_writes_a_gnuplot_script() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracdyn(
        dir.path(),
        &["simulate", "--h", "0.01", "--T", "1", "--out", "p.csv", "--emit-plot"],
    );
    assert_eq!(out.status.code(), Some(exit_code::SUCCESS), "{out:?}");
    let script = read(dir.path(), "p.csv.gnuplot");
    assert!(script.contains("splot 'p.csv'"));
}

#[test]
fn simulate_incommensurate_orders_flag() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracdyn(
        dir.path(),
        &["simulate", "--orders", "0.98,9/10,1", "--h", "0.01", "--T", "0.5", "--out", "inc.csv"],
    );
    assert_eq!(out.status.code(), Some(exit_code::SUCCESS), "{out:?}");
    let csv = read(dir.path(), "inc.csv");
    assert!(csv.lines().nth(1).unwrap().contains("\"orders\":[\"49/50\",\"9/10\",\"1/1\"]"));
}

#[test]
fn simulate_config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["simulate", "--x0", "1,2"],
        vec!["simulate", "--x0", "a,b,c"],
        vec!["simulate", "--alpha", "1.5"],
        vec!["simulate", "--params", "1,2,3"],
        vec!["simulate", "--alpha", "0.9", "--orders", "1,1,1"],
        vec!["simulate", "--h", "0"],
    ] {
        let out = fracdyn(dir.path(), &args);
        assert_eq!(out.status.code(), Some(exit_code::CONFIG), "args {args:?}: {out:?}");
    }
}

#[test]
fn simulate_divergence_exits_3_and_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracdyn(
        dir.path(),
        &["simulate", "--x0", "900000000,900000000,900000000", "--h", "0.01", "--T", "1", "--out", "d.csv"],
    );
    assert_eq!(out.status.code(), Some(exit_code::DIVERGED), "{out:?}");
    assert!(!dir.path().join("d.csv").exists(), "partial file left behind");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("diverged"), "stderr: {stderr}");
}

#[test]
fn analyze_report_is_canonical_and_reparse_stable() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracdyn(dir.path(), &["analyze", "--out", "report.json"]);
    assert_eq!(out.status.code(), Some(exit_code::SUCCESS), "{out:?}");
    let text = read(dir.path(), "report.json");
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();

    // Re-parsing and re-rendering reproduces the bytes exactly.
    let rerendered = format!("{}\n", serde_json::to_string_pretty(&value).unwrap());
    assert_eq!(rerendered, text);

    let eq = value["equilibria"].as_object().unwrap();
    assert_eq!(eq.len(), 5);
    let threshold = value["system_chaos_threshold"].as_f64().unwrap();
    assert!((threshold - 0.8270).abs() < 1e-3);
    let ix2 = eq
        .values()
        .filter(|v| v["saddle_index"] == "index-2")
        .count();
    assert_eq!(ix2, 4);
    assert_eq!(value["degenerate"].as_array().unwrap().len(), 0);
    assert_eq!(value["meta"]["command"], "analyze");

    // Same document on stdout, up to the config echo recording a different
    // output destination.
    let out = fracdyn(dir.path(), &["analyze"]);
    let mut on_stdout: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    let mut from_file = value;
    on_stdout["meta"]["out"] = serde_json::Value::Null;
    from_file["meta"]["out"] = serde_json::Value::Null;
    assert_eq!(on_stdout, from_file);
}

#[test]
fn design_certificate_for_the_reference_gain() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracdyn(
        dir.path(),
        &["design", "--target", "Q2", "--k1", "16.96", "--resolution", "0.05", "--out", "cert.json"],
    );
    assert_eq!(out.status.code(), Some(exit_code::SUCCESS), "{out:?}");
    let v: serde_json::Value = serde_json::from_str(&read(dir.path(), "cert.json")).unwrap();
    assert_eq!(v["stable_all_orders"], true);
    assert_eq!(v["verdict"], "asymptotically-stable");
    assert!((v["cubic"]["a1"].as_f64().unwrap() - 24.26).abs() < 1e-9);
    let lo = v["admissible_interval"]["lower"].as_f64().unwrap();
    let hi = v["admissible_interval"]["upper"].as_f64().unwrap();
    assert!(lo <= 16.96 && 16.96 <= hi);
    assert_eq!(v["meta"]["command"], "design");
}

#[test]
fn design_with_simulation_converges_to_the_target() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracdyn(
        dir.path(),
        &[
            "design", "--target", "Q2", "--k1", "16.96", "--simulate", "--alpha", "0.90",
            "--x0", "5,2,2", "--h", "0.01", "--T", "10", "--resolution", "0.5",
            "--out", "cert.json", "--traj-out", "closed.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(exit_code::SUCCESS), "{out:?}");
    let csv = read(dir.path(), "closed.csv");
    let last = csv.lines().last().unwrap();
    let fields: Vec<f64> = last.split(',').map(|f| f.parse().unwrap()).collect();
    let q2 = [5.1260, 2.0794, 2.3687];
    let dist: f64 = fields[1..]
        .iter()
        .zip(q2.iter())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    assert!(dist < 0.05, "final state {fields:?} is {dist:.4} from the target");
}

#[test]
fn design_empty_interval_exits_4_but_writes_the_certificate() {
    let dir = tempfile::tempdir().unwrap();
    // The origin has an unreachable unstable eigenvalue under k1-only
    // feedback, so the sweep comes back empty.
    let out = fracdyn(
        dir.path(),
        &["design", "--target", "Q1", "--resolution", "0.5", "--out", "cert.json"],
    );
    assert_eq!(out.status.code(), Some(exit_code::EMPTY_INTERVAL), "{out:?}");
    let v: serde_json::Value = serde_json::from_str(&read(dir.path(), "cert.json")).unwrap();
    assert_eq!(v["admissible_interval"], serde_json::Value::Null);
    assert!(!v["sweep_diagnostics"].as_array().unwrap().is_empty());
    // The open-loop certificate still reflects the origin's spectrum.
    assert_eq!(v["target"]["label"], "Q1");
    assert_eq!(v["stable_all_orders"], false);
}

#[test]
fn design_multi_gain_skips_the_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracdyn(
        dir.path(),
        &["design", "--target", "Q2", "--k1", "5", "--k2", "3", "--k3", "2", "--out", "cert.json"],
    );
    assert_eq!(out.status.code(), Some(exit_code::SUCCESS), "{out:?}");
    let v: serde_json::Value = serde_json::from_str(&read(dir.path(), "cert.json")).unwrap();
    assert_eq!(v["admissible_interval"], serde_json::Value::Null);
    assert_eq!(v["stable_all_orders"], true);
    assert!(v["sweep_diagnostics"].as_array().unwrap().is_empty());
}

#[test]
fn design_unknown_target_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracdyn(dir.path(), &["design", "--target", "Q9"]);
    assert_eq!(out.status.code(), Some(exit_code::CONFIG), "{out:?}");
}
