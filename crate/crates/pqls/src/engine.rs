//! Quantum-local-search branch loop and the parallel orchestrator.
//!
//! Each generation fans B branches out from the current incumbent, runs
//! each for L iterations, and reduces to the minimum-energy branch (ties
//! to the lowest branch index). The winner seeds the next generation
//! unless it is worse than the incumbent. Branch RNG streams are derived
//! from the master seed so the result is bit-identical whether branches
//! run serially or concurrently.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{PqlsError, Result};
use crate::ising::{embed_solution, energy, extract_subproblem, IsingProblem, SpinConfiguration};
pub use crate::seeding::derive_seed;
use crate::subsolver::{self, SubsolverSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum AcceptRule {
    /// Embed the sub-solution only when it does not worsen the energy.
    #[default]
    ImproveOrEqual,
    /// Embed unconditionally (ablation mode).
    Always,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PqlsParams {
    /// Sub-problem size drawn each iteration.
    pub sub_size: usize,
    /// Branches per generation.
    pub branches: usize,
    /// Iterations per branch per generation.
    pub unit_length: usize,
    pub generations: usize,
    pub subsolver: SubsolverSpec,
    pub master_seed: u64,
    #[serde(default)]
    pub accept_rule: AcceptRule,
    /// Keep per-branch results of every generation in the output.
    #[serde(default)]
    pub retain_branches: bool,
}

impl PqlsParams {
    pub fn validate(&self, problem_n: usize) -> Result<()> {
        if self.sub_size == 0 || self.branches == 0 || self.unit_length == 0 || self.generations == 0
        {
            return Err(PqlsError::InvalidParameter(
                "sub_size, branches, unit_length, and generations must all be >= 1".into(),
            ));
        }
        if self.sub_size > problem_n {
            return Err(PqlsError::InvalidParameter(format!(
                "sub_size {} exceeds problem size {problem_n}",
                self.sub_size
            )));
        }
        self.subsolver.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchResult {
    pub best_config: SpinConfiguration,
    pub best_energy: f64,
    /// Best-so-far energy after each of the L iterations.
    pub trajectory: Vec<f64>,
    pub branch_index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PqlsResult {
    pub best_config: SpinConfiguration,
    pub best_energy: f64,
    /// Incumbent energy after each generation; non-increasing.
    pub per_generation: Vec<f64>,
    pub per_branch: Option<Vec<BranchResult>>,
    pub subsolver_calls: u64,
}

/// One local-search iteration: draw a random subset of `sub_size`
/// variables, solve the clamped sub-problem, and embed the result subject
/// to the accept rule. Advances `rng` deterministically.
pub fn qls_step(
    problem: &IsingProblem,
    current: &SpinConfiguration,
    sub_size: usize,
    subsolver: &SubsolverSpec,
    accept_rule: AcceptRule,
    rng: &mut ChaCha8Rng,
) -> Result<SpinConfiguration> {
    let current_energy = energy(problem, current)?;
    let (next, _) = step_with_energy(problem, current, current_energy, sub_size, subsolver, accept_rule, rng)?;
    Ok(next)
}

fn step_with_energy(
    problem: &IsingProblem,
    current: &SpinConfiguration,
    current_energy: f64,
    sub_size: usize,
    subsolver: &SubsolverSpec,
    accept_rule: AcceptRule,
    rng: &mut ChaCha8Rng,
) -> Result<(SpinConfiguration, f64)> {
    let n = problem.n();
    if sub_size > n {
        return Err(PqlsError::InvalidParameter(format!(
            "sub_size {sub_size} exceeds problem size {n}"
        )));
    }
    let mut subset: Vec<usize> = rand::seq::index::sample(rng, n, sub_size)
        .into_iter()
        .map(|i| i + 1)
        .collect();
    subset.sort_unstable();
    let solver_seed: u64 = rng.random();

    let sub = extract_subproblem(problem, current, &subset)?;
    let warm_start = SpinConfiguration::new(subset.iter().map(|&i| current.spin(i)).collect())
        .expect("spins already valid");
    let outcome = subsolver::solve(subsolver, &sub.inner, solver_seed, Some(&warm_start))?;
    let candidate_energy = outcome.energy + sub.offset;

    let accept = match accept_rule {
        AcceptRule::ImproveOrEqual => candidate_energy <= current_energy,
        AcceptRule::Always => true,
    };
    if accept {
        let next = embed_solution(current, &subset, &outcome.config)?;
        Ok((next, candidate_energy))
    } else {
        Ok((current.clone(), current_energy))
    }
}

/// Run one branch: L iterations from `initial` on the RNG stream
/// `derive_seed(master_seed, generation_index, branch_index)`, tracking
/// the best-seen configuration.
pub fn run_branch(
    problem: &IsingProblem,
    initial: &SpinConfiguration,
    params: &PqlsParams,
    generation_index: usize,
    branch_index: usize,
) -> Result<BranchResult> {
    params.validate(problem.n())?;
    let seed = derive_seed(
        params.master_seed,
        generation_index as u64,
        branch_index as u64,
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut current = initial.clone();
    let mut current_energy = energy(problem, &current)?;
    let mut best = current.clone();
    let mut best_energy = current_energy;
    let mut trajectory = Vec::with_capacity(params.unit_length);

    for _ in 0..params.unit_length {
        let (next, next_energy) = step_with_energy(
            problem,
            &current,
            current_energy,
            params.sub_size,
            &params.subsolver,
            params.accept_rule,
            &mut rng,
        )?;
        current = next;
        current_energy = next_energy;
        if current_energy < best_energy {
            best_energy = current_energy;
            best = current.clone();
        }
        trajectory.push(best_energy);
    }

    Ok(BranchResult {
        best_config: best,
        best_energy,
        trajectory,
        branch_index,
    })
}

/// Parallel quantum local search. `concurrency` caps worker threads for
/// the per-generation branch fan-out; 1 is fully serial, 0 means all
/// available cores. Output is bit-identical for every concurrency degree.
pub fn run_pqls(
    problem: &IsingProblem,
    initial: Option<&SpinConfiguration>,
    params: &PqlsParams,
    concurrency: usize,
) -> Result<PqlsResult> {
    params.validate(problem.n())?;

    let mut incumbent = match initial {
        Some(c) => {
            if c.len() != problem.n() {
                return Err(PqlsError::DimensionMismatch {
                    expected: problem.n(),
                    got: c.len(),
                });
            }
            c.clone()
        }
        None => {
            // stream (g=0, b=0) is reserved for the initial configuration
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(params.master_seed, 0, 0));
            SpinConfiguration::random(problem.n(), &mut rng)
        }
    };
    let mut incumbent_energy = energy(problem, &incumbent)?;

    let mut per_generation = Vec::with_capacity(params.generations);
    let mut retained = params.retain_branches.then(Vec::new);

    for generation in 1..=params.generations {
        let branch_results: Vec<BranchResult> =
            run_generation(problem, &incumbent, params, generation, concurrency)?;

        let winner = branch_results
            .iter()
            .min_by(|a, b| {
                a.best_energy
                    .partial_cmp(&b.best_energy)
                    .expect("finite energies")
                    .then(a.branch_index.cmp(&b.branch_index))
            })
            .expect("branches >= 1")
            .clone();

        if winner.best_energy <= incumbent_energy {
            incumbent = winner.best_config.clone();
            incumbent_energy = winner.best_energy;
        }
        per_generation.push(incumbent_energy);
        if let Some(all) = retained.as_mut() {
            all.extend(branch_results);
        }
    }

    let subsolver_calls =
        (params.branches * params.unit_length * params.generations) as u64;
    Ok(PqlsResult {
        best_config: incumbent,
        best_energy: incumbent_energy,
        per_generation,
        per_branch: retained,
        subsolver_calls,
    })
}

fn run_generation(
    problem: &IsingProblem,
    incumbent: &SpinConfiguration,
    params: &PqlsParams,
    generation: usize,
    concurrency: usize,
) -> Result<Vec<BranchResult>> {
    let indices: Vec<usize> = (1..=params.branches).collect();
    if concurrency == 1 || params.branches == 1 {
        indices
            .into_iter()
            .map(|b| run_branch(problem, incumbent, params, generation, b))
            .collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(if concurrency == 0 { 0 } else { concurrency })
            .build()
            .map_err(|e| PqlsError::InvalidParameter(format!("thread pool: {e}")))?;
        pool.install(|| {
            use rayon::prelude::*;
            indices
                .into_par_iter()
                .map(|b| run_branch(problem, incumbent, params, generation, b))
                .collect()
        })
    }
}

/// Sequential QLS baseline: a single branch of `total_iterations` steps.
pub fn run_qls(
    problem: &IsingProblem,
    initial: &SpinConfiguration,
    total_iterations: usize,
    sub_size: usize,
    subsolver: &SubsolverSpec,
    seed: u64,
) -> Result<BranchResult> {
    let params = PqlsParams {
        sub_size,
        branches: 1,
        unit_length: total_iterations,
        generations: 1,
        subsolver: subsolver.clone(),
        master_seed: seed,
        accept_rule: AcceptRule::ImproveOrEqual,
        retain_branches: false,
    };
    run_branch(problem, initial, &params, 1, 1)
}
