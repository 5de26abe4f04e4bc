//! Clamp an Ising problem to a variable subset and verify the clamping
//! identity: inner energy plus offset equals the full energy of the
//! embedded configuration.
//!
//! Run with: cargo run --example clamp_subproblem

use pqls::ising::{
    embed_solution, energy, extract_subproblem, generate_instance, SpinConfiguration,
};

fn main() -> pqls::Result<()> {
    let problem = generate_instance(10, 7)?;
    let config = SpinConfiguration::all_up(10);
    let subset = [2, 5, 6, 9];

    let sub = extract_subproblem(&problem, &config, &subset)?;
    println!(
        "clamped {} variables down to {}, offset {:.4}",
        problem.n(),
        sub.inner.n(),
        sub.offset
    );

    for z in 0..(1u64 << subset.len()) {
        let t = SpinConfiguration::from_index(z, subset.len());
        let local = energy(&sub.inner, &t)? + sub.offset;
        let full = energy(&problem, &embed_solution(&config, &subset, &t)?)?;
        assert!((local - full).abs() < 1e-9);
    }
    println!("clamping identity holds for all {} sub-assignments", 1 << subset.len());
    Ok(())
}
