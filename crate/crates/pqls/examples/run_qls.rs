//! Sequential quantum local search with the exact subsolver: one branch,
//! printing the best-so-far energy trace against the true ground energy.
//!
//! Run with: cargo run --release --example run_qls

use pqls::engine::run_qls;
use pqls::ising::{generate_instance, SpinConfiguration};
use pqls::subsolver::{solve_exact, SubsolverSpec};

fn main() -> pqls::Result<()> {
    let problem = generate_instance(20, 42)?;
    let start = SpinConfiguration::all_up(20);

    let result = run_qls(&problem, &start, 60, 8, &SubsolverSpec::Exact, 1)?;
    let ground = solve_exact(&problem)?.energy;

    for (iter, e) in result.trajectory.iter().enumerate().step_by(10) {
        println!("iteration {iter:3}: best {e:.6}");
    }
    println!("final: {:.6}  (ground: {ground:.6})", result.best_energy);
    Ok(())
}
