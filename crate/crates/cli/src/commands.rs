//! Subcommands. Each returns the process exit code on success paths and a
//! [`CliError`] otherwise.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use h2cruise::mission::{self, MissionMode, MissionOptions, MissionResult, SweepPoint};
use h2cruise::optimizer;

use crate::config::{load_config, Format, RunConfig};
use crate::output::{self, kmh_of_printed, sci, sweep_rows, SpeedColumn};
use crate::report::{self, FlownPoint};
use crate::svg::LineChart;
use crate::{exit, CliError};

/// Largest number of trajectory rows written per mission.
pub const MAX_TRAJECTORY_ROWS: usize = 2000;

#[derive(Debug, Parser)]
#[command(name = "h2cruise", version, about = "Cost-index optimal cruise for hydrogen fuel-cell aircraft")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal cruise speed at take-off weight for one cost index.
    Solve {
        #[arg(long)]
        config: PathBuf,
        /// Cost index C_I (N/s); defaults to the config's cost section.
        #[arg(long)]
        ci: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Velocity against cost index over the config's ci_grid.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Flight time against fuel burned over the config's ci_grid.
    Pareto {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fly one mission and write its trajectory.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        ci: Option<f64>,
        /// suboptimal or optimal; defaults to the config's mission mode.
        #[arg(long)]
        mode: Option<MissionMode>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stack feasibility and model-assumption report.
    Validate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<u8, CliError> {
    match cli.command {
        Command::Solve { config, ci, out } => {
            let cfg = load_config(&config)?;
            cmd_solve(&cfg, ci, out_dir(&cfg, out.as_deref()).as_deref(), stdout)
        }
        Command::Sweep { config, out } => {
            let cfg = load_config(&config)?;
            cmd_sweep(&cfg, &out_dir(&cfg, out.as_deref()).unwrap_or_else(|| ".".into()), stdout)
        }
        Command::Pareto { config, out } => {
            let cfg = load_config(&config)?;
            cmd_pareto(&cfg, &out_dir(&cfg, out.as_deref()).unwrap_or_else(|| ".".into()), stdout)
        }
        Command::Simulate { config, ci, mode, out } => {
            let cfg = load_config(&config)?;
            cmd_simulate(&cfg, ci, mode, out_dir(&cfg, out.as_deref()).as_deref(), stdout)
        }
        Command::Validate { config, out } => {
            let cfg = load_config(&config)?;
            cmd_validate(&cfg, out_dir(&cfg, out.as_deref()).as_deref(), stdout)
        }
    }
}

fn out_dir(cfg: &RunConfig, flag: Option<&Path>) -> Option<PathBuf> {
    flag.map(Path::to_path_buf).or_else(|| cfg.output.directory.clone())
}

fn emit(stdout: &mut dyn Write, text: &str) -> Result<(), CliError> {
    stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io {
        path: "<stdout>".into(),
        source,
    })
}

pub fn cmd_solve(cfg: &RunConfig, ci: Option<f64>, out: Option<&Path>, stdout: &mut dyn Write) -> Result<u8, CliError> {
    let model = cfg.model()?;
    let cost = cfg.cost(ci)?;
    let w = model.aircraft.initial_weight;
    let sol = optimizer::solve_speed(&model, &cost, w, 0.0)?;
    let mut s = String::new();
    let _ = writeln!(s, "cost_index: {}", cost.cost_index);
    let _ = writeln!(s, "weight_n: {w}");
    let _ = writeln!(s, "v_mps: {}", sci(sol.v_opt));
    let _ = writeln!(s, "v_kmh: {}", sci(kmh_of_printed(sol.v_opt)));
    let _ = writeln!(s, "residual: {:e}", sol.residual);
    let _ = writeln!(s, "j_x: {:e}", sol.j_x);
    let _ = writeln!(s, "hamiltonian: {:e}", sol.hamiltonian_value);
    let roots: Vec<String> = sol.all_real_roots.iter().map(|v| format!("{v:.6}")).collect();
    let _ = writeln!(s, "real_roots_mps: [{}]", roots.join(", "));
    for (v, why) in &sol.rejected_roots {
        let _ = writeln!(s, "rejected: {v:.6} ({why})");
    }
    emit(stdout, &s)?;
    if let Some(dir) = out {
        let csv = format!(
            "cost_index,v_mps,v_kmh,residual,j_x,hamiltonian\n{},{},{},{},{},{}\n",
            sci(cost.cost_index),
            sci(sol.v_opt),
            sci(kmh_of_printed(sol.v_opt)),
            sci(sol.residual),
            sci(sol.j_x),
            sci(sol.hamiltonian_value)
        );
        output::write_file(dir, "solve.csv", &csv)?;
    }
    Ok(exit::OK)
}

fn sweep(cfg: &RunConfig) -> Result<Vec<SweepPoint>, CliError> {
    let model = cfg.model()?;
    let grid = cfg.grid()?;
    Ok(mission::sweep_cost_index(&model, &grid, cfg.mission.x_d, cfg.mission.mode)?)
}

fn failed(points: &[SweepPoint]) -> usize {
    points.iter().filter(|p| p.outcome.is_err()).count()
}

fn flown(points: &[SweepPoint]) -> Vec<FlownPoint> {
    points
        .iter()
        .filter_map(|p| {
            let q = p.outcome.as_ref().ok()?;
            Some(FlownPoint {
                cost_index: p.cost_index,
                v_avg: q.v_avg,
                t_f: q.t_f,
                fuel_kg: q.fuel_burned,
            })
        })
        .collect()
}

pub fn cmd_sweep(cfg: &RunConfig, dir: &Path, stdout: &mut dyn Write) -> Result<u8, CliError> {
    let points = sweep(cfg)?;
    let rows = sweep_rows(&points, SpeedColumn::Initial);
    if cfg.wants(Format::Csv) {
        output::write_file(dir, "velocity_vs_ci.csv", &output::to_csv(&rows))?;
    }
    if cfg.wants(Format::Svg) {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter_map(|r| Some((r.cost_index, kmh_of_printed(r.v_mps?))))
            .collect();
        let chart = LineChart {
            title: "Optimal cruise speed against cost index",
            x_label: "cost index C_I (N/s)",
            y_label: "speed at take-off weight (km/h)",
            points: &pts,
        };
        output::write_file(dir, "velocity_vs_ci.svg", &chart.render())?;
    }
    let speeds: Vec<f64> = rows.iter().filter_map(|r| r.v_mps).collect();
    let mut s = String::new();
    let _ = writeln!(s, "sweep: {} points, {} failed, mode {}", points.len(), failed(&points), cfg.mission.mode);
    if let (Some(lo), Some(hi)) = (speeds.first(), speeds.last()) {
        let _ = writeln!(s, "speed range: {:.2} to {:.2} km/h", lo * 3.6, hi * 3.6);
    }
    let _ = writeln!(
        s,
        "speed nondecreasing in C_I: {}",
        if speeds.windows(2).all(|p| p[1] >= p[0]) { "PASS" } else { "FAIL" }
    );
    s.push_str(&report::render_speed_change(report::speed_change(&flown(&points), cfg.mission.x_d).as_ref()));
    output::write_file(dir, "sweep_report.txt", &s)?;
    emit(stdout, &s)?;
    Ok(if failed(&points) > 0 { exit::PARTIAL } else { exit::OK })
}

pub fn cmd_pareto(cfg: &RunConfig, dir: &Path, stdout: &mut dyn Write) -> Result<u8, CliError> {
    let points = sweep(cfg)?;
    let rows = sweep_rows(&points, SpeedColumn::Average);
    let csv = output::to_csv(&rows);
    if cfg.wants(Format::Csv) {
        output::write_file(dir, "pareto.csv", &csv)?;
    }
    if cfg.wants(Format::Svg) {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter_map(|r| Some((r.t_f? / 60.0, r.fuel_kg?)))
            .collect();
        let chart = LineChart {
            title: "Flight time against hydrogen burned",
            x_label: "flight time (min)",
            y_label: "hydrogen burned (kg)",
            points: &pts,
        };
        output::write_file(dir, "pareto.svg", &chart.render())?;
    }
    // Validate what was emitted, not the in-memory results.
    let emitted = output::from_csv(&csv).map_err(|e| CliError::Config(format!("pareto.csv: {e}")))?;
    let flown = FlownPoint::from_rows(&emitted);
    let frontier = report::check_frontier(&flown);
    let mut s = String::new();
    let _ = writeln!(s, "pareto: {} points, mode {}", points.len(), cfg.mission.mode);
    s.push_str(&report::render_frontier(&frontier, failed(&points)));
    s.push_str(&report::render_speed_change(report::speed_change(&flown, cfg.mission.x_d).as_ref()));
    output::write_file(dir, "pareto_report.txt", &s)?;
    emit(stdout, &s)?;
    Ok(if failed(&points) > 0 || !frontier.passed() {
        exit::PARTIAL
    } else {
        exit::OK
    })
}

pub fn trajectory_csv(result: &MissionResult) -> String {
    let mut s = String::from("t_s,x_m,w_n,v_mps,v_kmh,j_w\n");
    for p in result.decimated(MAX_TRAJECTORY_ROWS) {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            sci(p.t),
            sci(p.x),
            sci(p.w),
            sci(p.v),
            sci(kmh_of_printed(p.v)),
            sci(p.j_w)
        );
    }
    s
}

pub fn cmd_simulate(
    cfg: &RunConfig,
    ci: Option<f64>,
    mode: Option<MissionMode>,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<u8, CliError> {
    let model = cfg.model()?;
    let cost = cfg.cost(ci)?;
    let mode = mode.unwrap_or(cfg.mission.mode);
    let r = mission::simulate_with(&model, &cost, cfg.mission.x_d, mode, &MissionOptions::default())?;
    let mut s = String::new();
    let _ = writeln!(s, "mode: {mode}");
    let _ = writeln!(s, "cost_index: {}", cost.cost_index);
    let _ = writeln!(s, "x_d_m: {}", r.x_d);
    let _ = writeln!(s, "t_f_s: {} ({:.2} min)", sci(r.t_f), r.t_f / 60.0);
    let _ = writeln!(s, "fuel_kg: {}", sci(r.fuel_burned_kg));
    let _ = writeln!(s, "doc: {}", sci(r.doc));
    let _ = writeln!(s, "v_initial_kmh: {:.3}", r.initial_speed() * 3.6);
    let _ = writeln!(s, "v_avg_kmh: {:.3}", r.average_speed() * 3.6);
    if let Some(d) = &r.shooting {
        let _ = writeln!(s, "shooting_j_w0: {:e}", d.j_w0);
        let _ = writeln!(s, "shooting_terminal_j_w: {:e}", d.terminal_jw);
        let _ = writeln!(s, "shooting_iterations: {}", d.iterations);
        let _ = writeln!(s, "hamiltonian_drift: {:e}", d.hamiltonian_drift);
    }
    emit(stdout, &s)?;
    if let Some(dir) = out {
        output::write_file(dir, &format!("trajectory_{mode}.csv"), &trajectory_csv(&r))?;
    }
    Ok(exit::OK)
}

pub fn cmd_validate(cfg: &RunConfig, out: Option<&Path>, stdout: &mut dyn Write) -> Result<u8, CliError> {
    let model = cfg.model()?;
    let r = report::validate_model(&model, cfg.reference_speed());
    let text = report::render_validate(&r, &cfg.estimates);
    emit(stdout, &text)?;
    if let Some(dir) = out {
        output::write_file(dir, "validate_report.txt", &text)?;
    }
    Ok(r.exit_code())
}
