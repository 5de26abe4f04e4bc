//! Solve a small Ising problem with the statevector VQE simulator and
//! use it as the subsolver inside PQLS.
//!
//! Run with: cargo run --release --example vqe_subsolver

use pqls::engine::{run_pqls, AcceptRule, PqlsParams};
use pqls::ising::generate_instance;
use pqls::subsolver::{solve_exact, SubsolverSpec};
use pqls::vqe::{solve_vqe, VqeSpec};

fn main() -> pqls::Result<()> {
    // standalone solve of an 8-variable problem
    let small = generate_instance(8, 3)?;
    let spec = VqeSpec::default();
    let vqe = solve_vqe(&small, &spec, 11)?;
    let exact = solve_exact(&small)?;
    println!(
        "8-variable VQE: {:.6} (exact {:.6}, {} statevector preparations)",
        vqe.energy, exact.energy, vqe.evaluations
    );

    // VQE as the PQLS subsolver
    let problem = generate_instance(16, 4)?;
    let params = PqlsParams {
        sub_size: 6,
        branches: 8,
        unit_length: 5,
        generations: 3,
        subsolver: SubsolverSpec::Vqe(VqeSpec {
            iterations: 100,
            ..VqeSpec::default()
        }),
        master_seed: 1,
        accept_rule: AcceptRule::ImproveOrEqual,
        retain_branches: false,
    };
    let result = run_pqls(&problem, None, &params, 0)?;
    println!(
        "PQLS with VQE subsolver on 16 variables: {:.6} (ground {:.6})",
        result.best_energy,
        solve_exact(&problem)?.energy
    );
    Ok(())
}
