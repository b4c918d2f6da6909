// Copyright 2026 Spinflop Contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

fn spinflop(args: &[&str]) -> Output {
    spinflop_env(args, &[])
}

fn spinflop_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_spinflop"));
    cmd.args(args).env_remove("SPINFLOP_THREADS").env_remove("SOURCE_DATE_EPOCH");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn field(report: &str, key: &str) -> String {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key))
        .map(|rest| rest.split_whitespace().next().unwrap_or("").to_string())
        .unwrap_or_else(|| panic!("no `{key}` in report:\n{report}"))
}

fn num(report: &str, key: &str) -> f64 {
    field(report, key).parse().unwrap()
}

#[test]
fn critical_field_reference_values() {
    let o = spinflop(&["critical-field", "--ba", "0.10", "--mj", "40", "--m", "6", "--s", "0.5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "2.83019 T");
    let o = spinflop(&["critical-field", "--ba", "0.15"]);
    assert_eq!(stdout(&o).trim(), "3.46735 T");
}

#[test]
fn critical_field_rejects_zero_anisotropy() {
    let o = spinflop(&["critical-field", "--ba", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("anisotropy_ba"));
    assert!(stdout(&o).is_empty());
}

#[test]
fn gp_isolated_examples() {
    let o = spinflop(&["gp", "--theta0", "1.5707963", "--j0", "0", "--b", "0.5"]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "phase/pi"), "1.000000");
    let o = spinflop(&["gp", "--theta0", "1.3", "--j0", "0", "--b", "1.0"]);
    assert_eq!(field(&stdout(&o), "phase/pi"), "0.732501");
}

#[test]
fn gp_report_lists_all_quantities() {
    let report = stdout(&spinflop(&["gp"]));
    for key in ["method", "phase ", "phase/pi", "tau0", "tau ", "quad_error"] {
        field(&report, key);
    }
    assert!(num(&report, "tau0") > 0.0);
}

#[test]
fn gp_both_methods_agree() {
    let o = spinflop(&["gp", "--method", "both", "--b", "0.5"]);
    assert!(o.status.success());
    let report = stdout(&o);
    assert!(report.contains("closed_form") && report.contains("trajectory_oracle"));
    assert!(num(&report, "difference") < 1e-4);
}

#[test]
fn gp_domain_violations() {
    let o = spinflop(&["gp", "--b", "2.9"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("beyond spin-flop critical field"));
    assert!(stdout(&o).is_empty());

    let o = spinflop(&["gp", "--b", "2.9", "--clamp"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("clamped"));

    assert_eq!(spinflop(&["gp", "--b", "0"]).status.code(), Some(3));
    assert_eq!(spinflop(&["gp", "--b", "-0.5"]).status.code(), Some(2));
    assert_eq!(spinflop(&["gp", "--theta0", "4"]).status.code(), Some(2));
    assert_eq!(spinflop(&["gp", "--mj", "40", "--j", "6"]).status.code(), Some(2));
}

#[test]
fn uncoupled_qubit_ignores_critical_field() {
    let o = spinflop(&["gp", "--j0", "0", "--b", "5"]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "phase/pi"), "0.732501");
}

#[test]
fn high_temperature_warns() {
    let o = spinflop(&["gp", "--t", "3"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("warning"));
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn fig2_sweep_has_three_curves_and_flat_solid_curve() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig2.csv");
    let o = spinflop(&["sweep", "--figure", "fig2", "-o", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = read(&out);
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let (ci, pi) = (
        header.iter().position(|&c| c == "curve").unwrap(),
        header.iter().position(|&c| c == "phase_over_pi").unwrap(),
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 600);
    let mut curves: Vec<&str> = rows.iter().map(|r| r[ci]).collect();
    curves.dedup();
    assert_eq!(curves, ["0.0", "1.0", "2.0"]);
    for r in rows.iter().filter(|r| r[ci] == "0.0") {
        let v: f64 = r[pi].parse().unwrap();
        assert!((v - 0.7325).abs() < 1e-3);
    }
}

#[test]
fn sweep_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let env = [("SOURCE_DATE_EPOCH", "1700000000"), ("SPINFLOP_THREADS", "3")];
    for p in [&a, &b] {
        let o = spinflop_env(&["sweep", "--figure", "fig1", "--resolution", "40", "-o", p.to_str().unwrap()], &env);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(read(&a).contains("\"timestamp\": 1700000000"));
}

#[test]
fn fig3_json_surface() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig3.json");
    let o = spinflop(&["sweep", "--figure", "fig3", "-o", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = read(&out);
    assert!(text.contains("\"timestamp\": 0"));
    let rows = text.matches("\"clamped\"").count() + text.matches("\"ok\"").count();
    assert_eq!(rows, 6400);
}

#[test]
fn axis_sweep_with_plot_script() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("surface.csv");
    let o = spinflop(&[
        "sweep",
        "--axis1",
        "field_b:0.1:3:4",
        "--axis2",
        "temperature_t:0.5:1.5:3",
        "--plot-script",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(read(&out).lines().count(), 13);
    assert!(read(&out).contains("error:beyond_critical"));
    let script = read(&dir.path().join("surface.gp"));
    assert!(script.contains("'surface.csv'"));
    assert!(script.contains("splot"));
}

#[test]
fn sweep_validation_happens_before_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let p = out.to_str().unwrap();
    for args in [
        vec!["sweep", "--axis1", "field_b:0.1:1:1", "-o", p],
        vec!["sweep", "--axis1", "field_b:1:0.1:4", "-o", p],
        vec!["sweep", "--axis1", "field_b:0.1:1:4", "--axis2", "field_b:0.1:1:4", "-o", p],
        vec!["sweep", "--figure", "fig5", "-o", p],
        vec!["sweep", "--figure", "fig2", "--b", "1", "-o", p],
        vec!["sweep", "--figure", "fig2", "--format", "json", "--plot-script", "-o", p],
        vec!["sweep", "--axis1", "field_b:0.1:1:4"],
    ] {
        let o = spinflop(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!out.exists());
    }
}

#[test]
fn unwritable_output_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing").join("x.csv");
    let o = spinflop(&["sweep", "--figure", "fig1", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn config_file_drives_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cfg.csv");
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        format!(
            "[params]\nt = 1.2\ntheta0 = 2.0\n\n[sweep]\naxis1 = \"field_b:0.5:1.5:3\"\n\n[output]\npath = \"{}\"\nemit_plot_script = true\n",
            out.display()
        ),
    )
    .unwrap();
    let o = spinflop(&["sweep", "--config", cfg.to_str().unwrap(), "--t", "0.4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(read(&out).lines().count(), 4);
    assert!(dir.path().join("cfg.gp").exists());

    std::fs::write(&cfg, "[params]\nfield = 1.0\n").unwrap();
    let o = spinflop(&["gp", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown field"));

    let o = spinflop(&["gp", "--config", dir.path().join("nope.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn scaling_zero_field_exponent() {
    let o = spinflop(&["scaling", "--regime", "zero-field"]);
    assert!(o.status.success());
    let report = stdout(&o);
    assert!((num(&report, "exponent") - 1.0).abs() < 0.05);
    assert_eq!(num(&report, "points"), 20.0);
    field(&report, "prefactor");
    field(&report, "r_squared");
    field(&report, "window");
}

#[test]
fn scaling_critical_exponent() {
    let o = spinflop(&["scaling", "--regime", "critical"]);
    assert!(o.status.success());
    let exponent = num(&stdout(&o), "exponent");
    assert!((exponent - 0.25).abs() < 0.03, "critical exponent {exponent}");
}

#[test]
fn scaling_selftest_and_failures() {
    let o = spinflop(&["scaling", "--selftest"]);
    assert!(o.status.success());
    assert!(num(&stdout(&o), "exponent error") < 1e-10);

    assert_eq!(spinflop(&["scaling"]).status.code(), Some(2));
    assert_eq!(spinflop(&["scaling", "--regime", "critical", "--points", "3"]).status.code(), Some(2));
    let o = spinflop(&["scaling", "--regime", "zero-field", "--theta0", "0"]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stderr(&o).contains("fit"));
    assert_eq!(spinflop(&["scaling", "--regime", "critical", "--hi", "5"]).status.code(), Some(2));
}

#[test]
fn thread_cap_must_be_positive() {
    let o = spinflop_env(&["critical-field"], &[("SPINFLOP_THREADS", "0")]);
    assert_eq!(o.status.code(), Some(2));
    let o = spinflop_env(&["critical-field"], &[("SPINFLOP_THREADS", "2")]);
    assert!(o.status.success());
}

#[test]
fn help_lists_units() {
    for sub in ["critical-field", "gp", "sweep", "scaling"] {
        let help = stdout(&spinflop(&[sub, "--help"]));
        assert!(help.contains("Tesla"), "{sub}");
        assert!(help.contains("radians"), "{sub}");
        assert!(help.contains("--config"), "{sub}");
    }
    assert!(stdout(&spinflop(&["gp", "--help"])).contains("inverse Tesla"));
}
