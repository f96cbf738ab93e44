//! Batch front-end: run uniform/adaptive convergence studies from a config
//! file and emit the data tables, rate summaries, and mesh SVGs; compare two
//! result tables against each other.
//!
//! Exit codes: 0 success, 1 runtime failure (a partial table is still
//! flushed), 2 invalid configuration or usage.

mod config;
mod table;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;
use lsfem::{fit_log_slope, mesh, run_study, RunRecord, StudyError};
use table::{fmt_sci, Table, COLUMNS};

#[derive(Parser)]
#[command(name = "lsfem", about = "Adaptive least-squares space-time FEM studies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the study described by a key=value config file
    Run { config: PathBuf },
    /// Compare two .dat study tables (rates and DOF counts at matched error)
    Compare { a: PathBuf, b: PathBuf },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { config } => match cmd_run(&config) {
            Ok(()) => ExitCode::SUCCESS,
            Err(CliError::Config(msg)) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
            Err(CliError::Runtime(msg)) => {
                eprintln!("error: {msg}");
                ExitCode::from(1)
            }
        },
        Command::Compare { a, b } => match cmd_compare(&a, &b) {
            Ok(()) => ExitCode::SUCCESS,
            Err(CliError::Config(msg)) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
            Err(CliError::Runtime(msg)) => {
                eprintln!("error: {msg}");
                ExitCode::from(1)
            }
        },
    }
}

enum CliError {
    /// Invalid configuration: exit code 2.
    Config(String),
    /// Failure while running or reading results: exit code 1.
    Runtime(String),
}

fn out_dir() -> PathBuf {
    std::env::var_os("LSFEM_OUT_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn cmd_run(config_path: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(config_path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", config_path.display())))?;
    let cfg = RunConfig::parse(&text).map_err(CliError::Config)?;
    let stem = config_path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("run")
        .to_string();
    let dir = out_dir();
    std::fs::create_dir_all(&dir)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", dir.display())))?;

    let problem = &cfg.problem;
    let initial = lsfem::problems::initial_mesh(problem, cfg.initial_mesh)
        .map_err(|e| CliError::Config(format!("initial_mesh: {e}")))?;

    let mut svg_error: Option<String> = None;
    let mut svg_hook = |level: usize, m: &mesh::TriMesh| {
        let path = dir.join(format!("{stem}_L{level:02}.svg"));
        if let Err(e) = std::fs::write(&path, mesh::to_svg(m)) {
            svg_error.get_or_insert(format!("cannot write {}: {e}", path.display()));
        }
    };
    let hook: Option<&mut dyn FnMut(usize, &mesh::TriMesh)> = if cfg.svg_meshes {
        Some(&mut svg_hook)
    } else {
        None
    };

    let outcome = run_study(problem, &initial, &cfg.adaptive, cfg.mode, hook);
    let (records, failure) = match outcome {
        Ok(records) => (records, None),
        Err(StudyError { records, source }) => (records, Some(source)),
    };

    if cfg.table {
        let path = dir.join(format!("{stem}.dat"));
        std::fs::write(&path, render_table(&records))
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    }
    print_rate_summary(&records);

    if let Some(msg) = svg_error {
        return Err(CliError::Runtime(msg));
    }
    match failure {
        Some(e) => Err(CliError::Runtime(format!(
            "study aborted after {} levels: {e}",
            records.len()
        ))),
        None => Ok(()),
    }
}

fn render_table(records: &[RunRecord]) -> String {
    let mut out = String::from("L\tnv\tndof\terrL2_u\terrH1_u\tL2_dxph\tinfsup\n");
    for r in records {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            r.level,
            r.total_dofs_coarse,
            r.free_dofs_coarse,
            fmt_sci(r.error_l2.unwrap_or(f64::NAN)),
            fmt_sci(r.error_energy.unwrap_or(f64::NAN)),
            fmt_sci(r.estimator),
            fmt_sci(r.infsup.unwrap_or(f64::NAN)),
        ));
    }
    out
}

/// Least-squares slope of log-error against log-DOF over the last three
/// levels, per error column.
fn print_rate_summary(records: &[RunRecord]) {
    let column = |f: &dyn Fn(&RunRecord) -> Option<f64>| -> Vec<(f64, f64)> {
        records
            .iter()
            .filter_map(|r| f(r).map(|v| (r.total_dofs_coarse as f64, v)))
            .filter(|&(_, v)| v.is_finite() && v > 0.0)
            .collect()
    };
    let fields: [(&str, &dyn Fn(&RunRecord) -> Option<f64>); 3] = [
        ("errL2_u", &|r| r.error_l2),
        ("errH1_u", &|r| r.error_energy),
        ("L2_dxph", &|r| Some(r.estimator)),
    ];
    for (name, getter) in fields {
        let points = column(getter);
        if points.len() >= 2 {
            let tail = &points[points.len().saturating_sub(3)..];
            println!("slope {name} (last {} levels): {:.4}", tail.len(), fit_log_slope(tail));
        } else {
            println!("slope {name}: n/a");
        }
    }
}

fn cmd_compare(path_a: &Path, path_b: &Path) -> Result<(), CliError> {
    let load = |path: &Path| -> Result<Table, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))?;
        Table::parse(&text).map_err(|e| {
            CliError::Runtime(format!("{}: {e}", path.display()))
        })
    };
    let ta = load(path_a)?;
    let tb = load(path_b)?;

    // prefer the true energy error, fall back to the estimator
    let pick = |t: &Table| -> usize {
        let h1 = COLUMNS.iter().position(|&c| c == "errH1_u").unwrap();
        if t.finite_points(h1).len() >= 2 {
            h1
        } else {
            COLUMNS.iter().position(|&c| c == "L2_dxph").unwrap()
        }
    };
    let col = pick(&ta);
    let col_b = pick(&tb);
    if col != col_b {
        return Err(CliError::Runtime(
            "tables expose different error columns (errH1_u vs L2_dxph)".into(),
        ));
    }
    println!("column: {}", COLUMNS[col]);

    let report = |label: &str, t: &Table, other: &Table| {
        let pts = t.finite_points(col);
        let tail = &pts[pts.len().saturating_sub(3)..];
        let slope = fit_log_slope(tail);
        let (nv_final, err_final) = *pts.last().unwrap();
        println!("table {label}:");
        println!("  slope (last {} levels): {:.12}", tail.len(), slope);
        println!("  final: nv={} err={}", nv_final as u64, fmt_sci(err_final));
        let other_final = other.finite_points(col).last().copied();
        if let Some((other_nv, other_err)) = other_final {
            match t.dofs_to_reach(col, other_err, slope) {
                Some(nv) => {
                    let ratio = nv / other_nv;
                    println!(
                        "  reaches the other table's final error {} at nv ≈ {:.0} (DOF ratio {:.4})",
                        fmt_sci(other_err),
                        nv,
                        ratio
                    );
                }
                None => println!(
                    "  never reaches the other table's final error {}",
                    fmt_sci(other_err)
                ),
            }
        }
    };
    report("A", &ta, &tb);
    report("B", &tb, &ta);
    Ok(())
}
