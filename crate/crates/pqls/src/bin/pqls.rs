//! Command-line harness: instance generation, single runs, the tabu
//! baseline, config-driven sweeps, and CSV validation.
//!
//! Exit codes: 0 success, 1 validation error, 2 partial sweep failure.
//! `PQLS_CONCURRENCY` caps worker threads (0 = all cores, 1 = serial);
//! a sweep config's `concurrency` key takes precedence when nonzero.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use pqls::engine::{run_pqls, AcceptRule, PqlsParams};
use pqls::experiment::{run_sweep, validate_csv, ExperimentConfig};
use pqls::io::{read_instance, write_instance};
use pqls::ising::generate_instance;
use pqls::subsolver::{tabu_baseline, AnnealingSpec, SubsolverSpec, TabuSpec};
use pqls::vqe::VqeSpec;

#[derive(Parser)]
#[command(name = "pqls", about = "Parallel quantum local search for Ising problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random dense Ising instance and write it to a file.
    Gen {
        /// Number of spin variables.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run QLS or PQLS on an instance file; prints a JSON summary.
    Solve(SolveArgs),
    /// Run the tabu baseline on an instance file; prints the energy.
    Baseline {
        /// Instance file path.
        instance: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the energy to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a config-driven sweep and write CSV results.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path; overrides the config's `output` key.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check an emitted results CSV.
    Validate {
        #[arg(long)]
        csv: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SubsolverKind {
    Exact,
    Annealing,
    Tabu,
    Vqe,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file path.
    instance: PathBuf,
    /// Sub-problem size N_g.
    #[arg(long, default_value_t = 8)]
    sub_size: usize,
    #[arg(long, default_value_t = 16)]
    branches: usize,
    /// Iterations per branch per generation.
    #[arg(long, default_value_t = 20)]
    unit_length: usize,
    #[arg(long, default_value_t = 5)]
    generations: usize,
    #[arg(long, value_enum, default_value_t = SubsolverKind::Annealing)]
    subsolver: SubsolverKind,
    /// VQE SPSA iterations (vqe subsolver only).
    #[arg(long, default_value_t = 200)]
    vqe_iterations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Embed sub-solutions even when they worsen the energy.
    #[arg(long)]
    accept_always: bool,
}

fn concurrency_from_env() -> usize {
    std::env::var("PQLS_CONCURRENCY")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(0)
}

fn subsolver_spec(kind: SubsolverKind, vqe_iterations: usize) -> SubsolverSpec {
    match kind {
        SubsolverKind::Exact => SubsolverSpec::Exact,
        SubsolverKind::Annealing => SubsolverSpec::Annealing(AnnealingSpec::default()),
        SubsolverKind::Tabu => SubsolverSpec::Tabu(TabuSpec::default()),
        SubsolverKind::Vqe => SubsolverSpec::Vqe(VqeSpec {
            iterations: vqe_iterations,
            ..VqeSpec::default()
        }),
    }
}

fn run(cli: Cli) -> pqls::Result<ExitCode> {
    match cli.command {
        Command::Gen { n, seed, out } => {
            let problem = generate_instance(n, seed)?;
            std::fs::write(&out, write_instance(&problem))?;
            eprintln!("wrote {} ({n} variables, seed {seed})", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve(args) => {
            let text = std::fs::read_to_string(&args.instance)?;
            let problem = read_instance(&text)?;
            let params = PqlsParams {
                sub_size: args.sub_size,
                branches: args.branches,
                unit_length: args.unit_length,
                generations: args.generations,
                subsolver: subsolver_spec(args.subsolver, args.vqe_iterations),
                master_seed: args.seed,
                accept_rule: if args.accept_always {
                    AcceptRule::Always
                } else {
                    AcceptRule::ImproveOrEqual
                },
                retain_branches: false,
            };
            let result = run_pqls(&problem, None, &params, concurrency_from_env())?;
            let summary = json!({
                "n": problem.n(),
                "sub_size": params.sub_size,
                "branches": params.branches,
                "unit_length": params.unit_length,
                "generations": params.generations,
                "subsolver": params.subsolver.name(),
                "master_seed": params.master_seed,
                "best_energy": result.best_energy,
                "per_generation": result.per_generation,
                "subsolver_calls": result.subsolver_calls,
                "spins": result.best_config.spins(),
            });
            println!("{}", serde_json::to_string_pretty(&summary).expect("serializable"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Baseline { instance, seed, out } => {
            let text = std::fs::read_to_string(&instance)?;
            let problem = read_instance(&text)?;
            let outcome = tabu_baseline(&problem, seed)?;
            println!("{}", outcome.energy);
            if let Some(out) = out {
                std::fs::write(out, format!("{}\n", outcome.energy))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep { config, out } => {
            let text = std::fs::read_to_string(&config)?;
            let mut config = ExperimentConfig::from_toml(&text)?;
            if config.concurrency == 0 {
                config.concurrency = concurrency_from_env();
            }
            let out = out
                .or_else(|| config.output.clone())
                .ok_or_else(|| pqls::PqlsError::InvalidConfig(
                    "no output path: pass --out or set `output` in the config".into(),
                ))?;
            let report = run_sweep(&config, &out)?;
            eprintln!(
                "{} points, {} rows ({} errors) -> {} and {}",
                report.points,
                report.records.len(),
                report.error_rows,
                report.csv_path.display(),
                report.summary_path.display()
            );
            if report.error_rows > 0 {
                Ok(ExitCode::from(2))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Validate { csv } => {
            let text = std::fs::read_to_string(&csv)?;
            let rows = validate_csv(&text)?;
            eprintln!("{rows} rows ok");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
