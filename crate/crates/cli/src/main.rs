use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use otto_core::harness::{
    counting_statistics, emit_plot_script, export_results, run_checks, run_sweep, validate_sweep,
    CheckOutcome, ExperimentConfig, Format,
};
use otto_core::{find_limit_cycle, run_cycle, OttoError};

#[derive(Parser)]
#[command(
    name = "otto",
    version,
    about = "Collisional quantum Otto engine simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML or JSON configuration file; built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long, global = true)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one cycle and print its record.
    Cycle {
        #[command(flatten)]
        common: Common,
        /// Iterate to the periodic steady state instead of a single cycle.
        #[arg(long)]
        limit: bool,
    },
    /// Sweep the cycle time and write the result table.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Also write a gnuplot script for the CSV to this path.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Dump the counting statistics of a trajectory ensemble.
    Trajectories {
        #[command(flatten)]
        common: Common,
    },
    /// Run the invariant suite on the configured cycle (and sweep).
    Check {
        #[command(flatten)]
        common: Common,
        /// Also run the configured sweep and its validators.
        #[arg(long)]
        sweep: bool,
    },
    /// Write a gnuplot script for an existing sweep CSV.
    Plot {
        /// Sweep CSV produced by `otto sweep`.
        csv: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the default configuration as TOML.
    DefaultConfig,
}

fn load_config(common: &Common) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn print_checks(checks: &[CheckOutcome]) -> bool {
    for c in checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        println!("{tag} {:<40} {}", c.name, c.detail);
    }
    checks.iter().all(|c| c.passed)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Cycle { common, limit } => {
            let cfg = load_config(&common)?;
            let spec = cfg.cycle_spec()?;
            let record = if limit {
                find_limit_cycle(&spec, cfg.limit_cycle.max_iters, cfg.limit_cycle.tol)?.record
            } else {
                run_cycle(&spec)?
            };
            let text = serde_json::to_string_pretty(&record)? + "\n";
            write_output(common.out.as_deref(), &text)
        }
        Command::Sweep { common, plot } => {
            let cfg = load_config(&common)?;
            let spec = cfg.sweep_spec()?;
            let result = run_sweep(&spec)?;
            let format = common.format.unwrap_or(Format::Csv);
            let out = common.out.clone().or(spec.output_path.clone());
            match &out {
                Some(path) => export_results(&result, path, format)?,
                None => {
                    let mut buf = Vec::new();
                    match format {
                        Format::Csv => otto_core::harness::export::write_csv(&result, &mut buf)?,
                        Format::Json => otto_core::harness::export::write_json(&result, &mut buf)?,
                    }
                    std::io::stdout().write_all(&buf)?;
                }
            }
            if let Some(row) = result.max_power_row() {
                let rec = row.record.as_ref().expect("argmax row succeeded");
                eprintln!(
                    "max power {:.3} nK/ms at tau_cycle = {:.1} ms (N_spin = {:.3})",
                    rec.power, rec.tau_cycle, rec.n_spin
                );
            }
            match result.fano_crossing {
                Some(t) => eprintln!("F_P = 1 crossing at tau_cycle = {t:.1} ms"),
                None => eprintln!("F_P = 1 crossing not bracketed"),
            }
            if let Some(script) = plot {
                let Some(csv) = out.filter(|_| format == Format::Csv) else {
                    bail!("--plot needs a CSV written with --out");
                };
                emit_plot_script(&csv, &script)?;
            }
            Ok(())
        }
        Command::Trajectories { common } => {
            let cfg = load_config(&common)?;
            let spec = cfg.cycle_spec()?;
            let t = &cfg.trajectories;
            let report = counting_statistics(
                &spec,
                t.direction,
                t.duration,
                &cfg.trajectory_start()?,
                t.n_traj,
                cfg.seed,
            )?;
            let text = match common.format.unwrap_or(Format::Json) {
                Format::Json => serde_json::to_string_pretty(&report)? + "\n",
                Format::Csv => {
                    let mut s =
                        String::from("quanta,count,final_level,final_count,master_probability\n");
                    for n in 0..report.quanta_histogram.len() {
                        s += &format!(
                            "{n},{},{n},{},{:.11e}\n",
                            report.quanta_histogram[n],
                            report.ensemble.final_counts[n],
                            report.master_distribution.get(n)
                        );
                    }
                    s
                }
            };
            write_output(common.out.as_deref(), &text)
        }
        Command::Check { common, sweep } => {
            let cfg = load_config(&common)?;
            let spec = cfg.cycle_spec()?;
            let mut checks = run_checks(
                &spec,
                cfg.limit_cycle.max_iters,
                cfg.limit_cycle.tol,
                cfg.trajectories.n_traj,
                cfg.seed,
            )?;
            if sweep {
                checks.extend(validate_sweep(&run_sweep(&cfg.sweep_spec()?)?));
            }
            if !print_checks(&checks) {
                bail!(CheckFailed(checks.iter().filter(|c| !c.passed).count()));
            }
            Ok(())
        }
        Command::Plot { csv, out } => Ok(emit_plot_script(&csv, &out)?),
        Command::DefaultConfig => write_output(None, &ExperimentConfig::default().to_toml()),
    }
}

#[derive(Debug)]
struct CheckFailed(usize);

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} check(s) failed", self.0)
    }
}

impl std::error::Error for CheckFailed {}

/// Exit code and category for a failure.
fn classify(err: &anyhow::Error) -> (u8, &'static str) {
    if let Some(e) = err.downcast_ref::<OttoError>() {
        let code = match e {
            OttoError::Config(_) | OttoError::Parse { .. } => 2,
            OttoError::Io { .. } => 3,
            OttoError::Domain(_) => 4,
            OttoError::Integration { .. } => 5,
            OttoError::NoConvergence { .. } | OttoError::Closure(_) => 6,
        };
        (code, e.category())
    } else if err.downcast_ref::<CheckFailed>().is_some() {
        (7, "check")
    } else if err.downcast_ref::<std::io::Error>().is_some() {
        (3, "io")
    } else {
        (1, "internal")
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (code, category) = classify(&err);
            let msg = serde_json::json!({ "error": { "category": category, "message": format!("{err:#}") } });
            eprintln!("{msg}");
            ExitCode::from(code)
        }
    }
}
