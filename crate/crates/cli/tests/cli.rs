use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use h2cruise_cli::output::{self, from_csv, kmh_of_printed, sci};
use h2cruise_testkit::rel_err;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

/// Runs the binary from a scratch directory so config-relative output
/// directories never land in the source tree.
fn h2cruise(args: &[&str]) -> Output {
    let cwd = tempfile::tempdir().unwrap();
    Command::new(env!("CARGO_BIN_EXE_h2cruise"))
        .current_dir(cwd.path())
        .args(args)
        .env_remove("H2CRUISE_LOG")
        .output()
        .expect("binary runs")
}

fn hy4() -> String {
    configs().join("hy4.json").display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// hy4.json with one JSON pointer replaced, written to `dir`.
fn patched(dir: &Path, pointer: &str, value: serde_json::Value) -> String {
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(hy4()).unwrap()).unwrap();
    *v.pointer_mut(pointer).unwrap() = value;
    let path = dir.join("cfg.json");
    std::fs::write(&path, v.to_string()).unwrap();
    path.display().to_string()
}

#[test]
fn solve_prints_minimum_fuel_speed() {
    let o = h2cruise(&["solve", "--config", &hy4(), "--ci", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let v: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("v_mps: "))
        .unwrap()
        .parse()
        .unwrap();
    // About 142 km/h for the shipped airframe.
    assert!((v * 3.6 - 142.4).abs() < 0.1, "{v}");
}

#[test]
fn solve_csv_row_series_is_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let mut last = 0.0;
    for ci in ["0", "0.005", "0.02", "0.08"] {
        let out = dir.path().join(ci);
        let o = h2cruise(&["solve", "--config", &hy4(), "--ci", ci, "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        let csv = std::fs::read_to_string(out.join("solve.csv")).unwrap();
        let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        let v: f64 = row[1].parse().unwrap();
        assert!(v > last);
        last = v;
    }
}

#[test]
fn infeasible_stack_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = patched(dir.path(), "/fuelcell/n_cells", 1.into());
    let o = h2cruise(&["solve", "--config", &cfg, "--ci", "0.01"]);
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    assert!(err.starts_with("h2cruise: error kind=infeasible code=3: "), "{err}");
    assert!(err.contains("exceeds the stack envelope"));
}

#[test]
fn config_errors_exit_4_with_field_names() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = patched(dir.path(), "/aircraft/fuel_weight", 20000.0.into());
    let o = h2cruise(&["validate", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("kind=config code=4: aircraft.fuel_weight:"), "{}", stderr(&o));

    let cfg = patched(dir.path(), "/environment", serde_json::json!({"altitude_m": 1000, "air_density": 1.1}));
    let o = h2cruise(&["validate", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("exactly one of altitude_m or air_density"));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"aircraft\": [\n").unwrap();
    let o = h2cruise(&["validate", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("bad.json:3:"), "{}", stderr(&o));
}

#[test]
fn missing_file_and_bad_arguments() {
    let o = h2cruise(&["solve", "--config", "/nonexistent/h2cruise.json", "--ci", "0"]);
    assert_eq!(o.status.code(), Some(7));
    assert!(stderr(&o).starts_with("h2cruise: error kind=io code=7: "));
    let o = h2cruise(&["solve", "--ci", "0"]);
    assert_eq!(o.status.code(), Some(64));
    assert!(stderr(&o).starts_with("h2cruise: error kind=usage code=64: "));
    let o = h2cruise(&["simulate", "--config", &hy4(), "--mode", "fast"]);
    assert_eq!(o.status.code(), Some(64));
    assert_eq!(h2cruise(&["--help"]).status.code(), Some(0));
}

#[test]
fn range_exceeded_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = patched(dir.path(), "/mission/x_d", 2.0e6.into());
    let o = h2cruise(&["simulate", "--config", &cfg, "--ci", "0"]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stderr(&o).contains("kind=range-exceeded"));
}

#[test]
fn simulate_writes_decimated_trajectories() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    for mode in ["suboptimal", "optimal"] {
        let o = h2cruise(&["simulate", "--config", &hy4(), "--ci", "0.01", "--mode", mode, "--out", out]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(stdout(&o).contains(&format!("mode: {mode}")));
        let csv = std::fs::read_to_string(dir.path().join(format!("trajectory_{mode}.csv"))).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t_s,x_m,w_n,v_mps,v_kmh,j_w");
        assert!(lines.len() - 1 <= 2000);
        let last_x: f64 = lines.last().unwrap().split(',').nth(1).unwrap().parse().unwrap();
        assert!((last_x - 200_000.0).abs() < 1e-3);
    }
    assert!(stdout(&h2cruise(&["simulate", "--config", &hy4(), "--mode", "optimal"])).contains("shooting_j_w0"));
}

#[test]
fn sweep_and_pareto_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = h2cruise(&["sweep", "--config", &hy4(), "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = h2cruise(&["pareto", "--config", &hy4(), "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    for name in ["velocity_vs_ci", "pareto"] {
        let text = std::fs::read_to_string(dir.path().join(format!("{name}.csv"))).unwrap();
        assert!(text.starts_with("cost_index,v_mps,v_kmh,t_f_s,fuel_kg,doc\n"));
        assert!(!text.contains('\r'));
        let rows = from_csv(&text).unwrap();
        assert_eq!(rows.len(), 50);
        // km/h is 3.6 × the printed m/s value, to the last printed digit.
        for line in text.lines().skip(1) {
            let cells: Vec<&str> = line.split(',').collect();
            assert_eq!(cells[2], sci(kmh_of_printed(cells[1].parse().unwrap())));
        }
        // Re-sorting by any column and back loses nothing.
        for col in 0..6 {
            let mut lines: Vec<&str> = text.lines().skip(1).collect();
            let key = |l: &str| l.split(',').nth(col).unwrap().parse::<f64>().unwrap();
            lines.sort_by(|a, b| key(a).total_cmp(&key(b)));
            lines.sort_by(|a, b| key(a).total_cmp(&key(b)));
            lines.sort_by(|a, b| {
                let k = |l: &str| l.split(',').next().unwrap().parse::<f64>().unwrap();
                k(a).total_cmp(&k(b))
            });
            let resorted = format!("{}\n{}\n", text.lines().next().unwrap(), lines.join("\n"));
            assert_eq!(resorted, text);
        }
        assert_eq!(output::to_csv(&rows), text);
        let svg = std::fs::read_to_string(dir.path().join(format!("{name}.svg"))).unwrap();
        assert_eq!(svg.matches("<circle").count(), 50);
    }

    // Post-hoc frontier check on the emitted pareto.csv.
    let rows = from_csv(&std::fs::read_to_string(dir.path().join("pareto.csv")).unwrap()).unwrap();
    for p in rows.windows(2) {
        assert!(p[1].t_f.unwrap() < p[0].t_f.unwrap());
        assert!(p[1].fuel_kg.unwrap() > p[0].fuel_kg.unwrap());
    }
    let report = std::fs::read_to_string(dir.path().join("pareto_report.txt")).unwrap();
    assert!(!report.contains("FAIL"), "{report}");
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = h2cruise(&["sweep", "--config", &hy4(), "--out", d.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    for name in ["velocity_vs_ci.csv", "velocity_vs_ci.svg", "sweep_report.txt"] {
        assert_eq!(
            std::fs::read(a.path().join(name)).unwrap(),
            std::fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn partial_sweep_failure_exits_1_with_error_column() {
    let dir = tempfile::tempdir().unwrap();
    // 6 kg of hydrogen: slow points reach 200 km, fast ones run dry.
    let cfg = patched(dir.path(), "/aircraft/fuel_weight", (6.0 * 9.80665).into());
    let cfg_text = std::fs::read_to_string(&cfg).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&cfg_text).unwrap();
    v["ci_grid"] = serde_json::json!([0.0, 0.05]);
    std::fs::write(&cfg, v.to_string()).unwrap();
    let out = dir.path().join("out");
    let o = h2cruise(&["pareto", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let text = std::fs::read_to_string(out.join("pareto.csv")).unwrap();
    assert!(text.starts_with("cost_index,v_mps,v_kmh,t_f_s,fuel_kg,doc,error\n"));
    let rows = from_csv(&text).unwrap();
    assert_eq!(rows[0].error, None);
    assert_eq!(rows[1].error.as_deref(), Some("range-exceeded"));
}

#[test]
fn validate_reports_envelope() {
    let o = h2cruise(&["validate", "--config", &hy4()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("PASS  power envelope"));
    assert!(text.contains("I*r/U_c < 0.5"));
    assert!(text.contains("estimated inputs: aircraft.wing_area, fuelcell.n_cells"));

    let o = h2cruise(&["validate", "--config", configs().join("hy4_n440.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let text = stdout(&o);
    assert!(text.contains("FAIL  power envelope"));
    let p_max: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("max net power: "))
        .and_then(|s| s.strip_suffix(" W"))
        .unwrap()
        .parse()
        .unwrap();
    assert!(rel_err(p_max, 1.1f64.powi(2) * 0.44 * 440.0 / (4.0 * 0.005)) < 1e-4);
}

#[test]
fn logging_goes_to_stderr_only() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_h2cruise"))
        .current_dir(dir.path())
        .args(["solve", "--config", &hy4(), "--ci", "0", "--out", dir.path().to_str().unwrap()])
        .env("H2CRUISE_LOG", "info")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("solve.csv"));
    assert!(!stdout(&o).contains("INFO"));
}
