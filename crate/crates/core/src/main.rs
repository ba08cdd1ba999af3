use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use satbeam::assignment::{brute_force_assignment, hungarian, read_cost_csv};
use satbeam::baselines::SchemeId;
use satbeam::harness::{self, RunOptions};
use satbeam::solver::{solve, write_trace_csv};

#[derive(Parser)]
#[command(name = "satbeam", version, about = "Joint precoding and DFT beam selection sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo sweep over all configured schemes.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        trials: Option<usize>,
        /// Comma-separated scheme names.
        #[arg(long, value_delimiter = ',')]
        schemes: Option<Vec<SchemeId>>,
        /// Record wall-clock time per scheme (makes output non-reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Optimize a single scene and print the per-iteration trace.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        dump_trace: bool,
        /// Write the trace here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check the Hungarian solver against exhaustive search.
    Oracle {
        #[arg(long)]
        cost: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> satbeam::Result<()> {
    match cli.command {
        Command::Run {
            config,
            seed,
            out,
            trials,
            schemes,
            timing,
        } => {
            let mut cfg = harness::parse_config(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(trials) = trials {
                cfg.trials = trials;
            }
            if let Some(schemes) = schemes {
                cfg.schemes = schemes;
            }
            if let Some(out) = out {
                cfg.output_path = out;
            }
            let rows = harness::run_sweep(&cfg, RunOptions { record_timing: timing })?;
            harness::emit_report(&rows, &cfg.output_path)?;
            println!(
                "wrote {} rows to {}",
                rows.len(),
                cfg.output_path.join("results.csv").display()
            );
        }
        Command::Solve {
            config,
            dump_trace,
            out,
        } => {
            let cfg = harness::parse_config(&config)?;
            let (scene, codebook, window) = harness::single_scene(&cfg)?;
            let state = solve(&scene, &codebook, &window, &cfg.solver)?;
            if dump_trace {
                match out {
                    Some(path) => write_trace_csv(&state.records, File::create(path)?)?,
                    None => write_trace_csv(&state.records, io::stdout().lock())?,
                }
            } else {
                let rate = state.records.last().map_or(0.0, |r| r.sum_rate);
                println!(
                    "iterations={} converged={} objective={} sum_rate_bps={}",
                    state.iter,
                    state.converged,
                    state.objective(),
                    rate * scene.bandwidth_hz
                );
            }
        }
        Command::Oracle { cost } => {
            let cost = read_cost_csv(&cost)?;
            let h = hungarian(&cost)?;
            let b = brute_force_assignment(&cost)?;
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "hungarian   rows={:?} total={}", h.rows(), cost.total(&h))?;
            writeln!(stdout, "brute_force rows={:?} total={}", b.rows(), cost.total(&b))?;
            writeln!(stdout, "match={}", cost.total(&h) == cost.total(&b))?;
        }
    }
    Ok(())
}
