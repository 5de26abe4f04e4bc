//! Parallel quantum local search: branches fan out from the incumbent
//! each generation, the best branch wins, and the winner seeds the next
//! generation. Compares the final energy against a single-branch QLS run
//! with the same per-branch budget.
//!
//! Run with: cargo run --release --example run_pqls

use pqls::engine::{run_pqls, run_qls, AcceptRule, PqlsParams};
use pqls::ising::{generate_instance, SpinConfiguration};
use pqls::subsolver::{AnnealingSpec, SubsolverSpec};

fn main() -> pqls::Result<()> {
    let problem = generate_instance(30, 9)?;
    let start = SpinConfiguration::all_up(30);
    let subsolver = SubsolverSpec::Annealing(AnnealingSpec::default());

    let params = PqlsParams {
        sub_size: 8,
        branches: 16,
        unit_length: 20,
        generations: 5,
        subsolver: subsolver.clone(),
        master_seed: 5,
        accept_rule: AcceptRule::ImproveOrEqual,
        retain_branches: false,
    };
    let pqls = run_pqls(&problem, Some(&start), &params, 0)?;
    let qls = run_qls(&problem, &start, 20 * 5, 8, &subsolver, 5)?;

    for (g, e) in pqls.per_generation.iter().enumerate() {
        println!("generation {}: incumbent {e:.6}", g + 1);
    }
    println!(
        "PQLS (B=16): {:.6} over {} subsolver calls",
        pqls.best_energy, pqls.subsolver_calls
    );
    println!("QLS  (B=1):  {:.6} over {} subsolver calls", qls.best_energy, 100);
    Ok(())
}
