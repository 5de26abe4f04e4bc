//! Build a branch-count sweep config in code, run it, and print the
//! per-point median approximation ratio from the emitted CSV rows.
//!
//! Run with: cargo run --release --example branch_sweep

use pqls::engine::AcceptRule;
use pqls::experiment::{run_sweep, validate_csv, ExperimentConfig, SweepKind};
use pqls::subsolver::{AnnealingSpec, SubsolverSpec};

fn main() -> pqls::Result<()> {
    let config = ExperimentConfig {
        experiment_id: "branch-sweep-example".into(),
        kind: SweepKind::Branches,
        n_p: vec![30],
        n_g: vec![8],
        branches: vec![1, 4, 16],
        unit_length: vec![10],
        vqe_iterations: vec![],
        generations: 5,
        total_budget: None,
        instances_per_point: 3,
        subsolver: SubsolverSpec::Annealing(AnnealingSpec {
            sweeps: 40,
            ..AnnealingSpec::default()
        }),
        master_seed: 2024,
        compare_qls: false,
        accept_rule: AcceptRule::ImproveOrEqual,
        concurrency: 0,
        output: None,
    };

    let out = std::env::temp_dir().join("pqls_branch_sweep.csv");
    let report = run_sweep(&config, &out)?;
    println!(
        "{} rows -> {} (summary: {})",
        report.records.len(),
        report.csv_path.display(),
        report.summary_path.display()
    );
    validate_csv(&std::fs::read_to_string(&out)?)?;

    for record in &report.records {
        println!(
            "B={:2} instance {:>20}: ratio {:.4}",
            record.point.branches,
            record.instance_seed,
            record.approx_ratio.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
