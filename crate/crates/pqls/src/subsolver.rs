//! Sub-problem solvers behind one contract: exhaustive enumeration,
//! simulated annealing, tabu search, and the VQE simulator. All stochastic
//! solvers take explicit seeds; there is no global RNG.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{PqlsError, Result};
use crate::ising::{delta_energy_flip, energy, IsingProblem, SpinConfiguration};
use crate::seeding::mix_seeds;
use crate::vqe::{self, VqeSpec};

pub const EXACT_MAX_VARS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnealingSpec {
    pub sweeps: usize,
    pub t_initial: f64,
    pub t_final: f64,
}

impl Default for AnnealingSpec {
    fn default() -> Self {
        Self {
            sweeps: 100,
            t_initial: 2.0,
            t_final: 0.05,
        }
    }
}

impl AnnealingSpec {
    pub fn validate(&self) -> Result<()> {
        if self.sweeps == 0 {
            return Err(PqlsError::InvalidParameter("sweeps must be >= 1".into()));
        }
        if !(self.t_final > 0.0 && self.t_initial >= self.t_final) {
            return Err(PqlsError::InvalidParameter(
                "temperatures must satisfy t_initial >= t_final > 0".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TabuSpec {
    pub tenure: usize,
    pub budget: usize,
}

impl Default for TabuSpec {
    fn default() -> Self {
        Self {
            tenure: 4,
            budget: 200,
        }
    }
}

impl TabuSpec {
    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(PqlsError::InvalidParameter("budget must be >= 1".into()));
        }
        Ok(())
    }
}

/// Which solver handles each clamped sub-problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SubsolverSpec {
    Exact,
    Annealing(AnnealingSpec),
    Tabu(TabuSpec),
    Vqe(VqeSpec),
}

impl SubsolverSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            SubsolverSpec::Exact => Ok(()),
            SubsolverSpec::Annealing(s) => s.validate(),
            SubsolverSpec::Tabu(s) => s.validate(),
            SubsolverSpec::Vqe(s) => s.validate(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SubsolverSpec::Exact => "exact",
            SubsolverSpec::Annealing(_) => "annealing",
            SubsolverSpec::Tabu(_) => "tabu",
            SubsolverSpec::Vqe(_) => "vqe",
        }
    }
}

/// Result of one sub-problem solve. `energy` is the inner energy,
/// excluding any clamping offset.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub config: SpinConfiguration,
    pub energy: f64,
    pub evaluations: u64,
}

/// Dispatch on the spec. `initial` warm-starts tabu; the other solvers
/// ignore it.
pub fn solve(
    spec: &SubsolverSpec,
    inner: &IsingProblem,
    seed: u64,
    initial: Option<&SpinConfiguration>,
) -> Result<SolveOutcome> {
    match spec {
        SubsolverSpec::Exact => solve_exact(inner),
        SubsolverSpec::Annealing(s) => solve_annealing(inner, s, seed),
        SubsolverSpec::Tabu(s) => solve_tabu(inner, s, seed, initial),
        SubsolverSpec::Vqe(s) => vqe::solve_vqe(inner, s, seed),
    }
}

/// Exhaustive enumeration over all 2^n configurations. Enumeration order:
/// z from 0 to 2^n − 1, bit k−1 of z giving variable k's spin with 0 ↦ +1;
/// ties broken by smallest z.
pub fn solve_exact(inner: &IsingProblem) -> Result<SolveOutcome> {
    let n = inner.n();
    if n > EXACT_MAX_VARS {
        return Err(PqlsError::SizeOverBudget {
            n,
            limit: EXACT_MAX_VARS,
        });
    }
    let mut best_z = 0u64;
    let mut best_e = energy(inner, &SpinConfiguration::from_index(0, n))?;
    for z in 1..(1u64 << n) {
        let e = energy(inner, &SpinConfiguration::from_index(z, n))?;
        if e < best_e {
            best_e = e;
            best_z = z;
        }
    }
    Ok(SolveOutcome {
        config: SpinConfiguration::from_index(best_z, n),
        energy: best_e,
        evaluations: 1 << n,
    })
}

/// Metropolis single-flip sweeps over a geometric temperature schedule.
/// Returns the best-seen configuration; deterministic for a fixed seed.
pub fn solve_annealing(
    inner: &IsingProblem,
    spec: &AnnealingSpec,
    seed: u64,
) -> Result<SolveOutcome> {
    spec.validate()?;
    let n = inner.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = SpinConfiguration::random(n, &mut rng);
    let mut current_e = energy(inner, &current)?;
    let mut best = current.clone();
    let mut best_e = current_e;
    let mut evaluations: u64 = 1;

    let ratio = spec.t_final / spec.t_initial;
    for sweep in 0..spec.sweeps {
        let frac = if spec.sweeps > 1 {
            sweep as f64 / (spec.sweeps - 1) as f64
        } else {
            1.0
        };
        let temp = spec.t_initial * ratio.powf(frac);
        for i in 1..=n {
            let d = delta_energy_flip(inner, &current, i)?;
            evaluations += 1;
            if d <= 0.0 || rng.random::<f64>() < (-d / temp).exp() {
                current.flip(i);
                current_e += d;
                if current_e < best_e {
                    best_e = current_e;
                    best = current.clone();
                }
            }
        }
    }
    // re-evaluate to shed accumulated flip-delta rounding
    best_e = energy(inner, &best)?;
    Ok(SolveOutcome {
        config: best,
        energy: best_e,
        evaluations,
    })
}

/// Steepest-improvement single-flip tabu search. A flipped variable is
/// tabu for `tenure` iterations; a tabu move is allowed when it improves
/// the best-seen energy. Ties among equal-delta moves break to the lowest
/// variable index. Starts from `initial` when given, else a seed-derived
/// random configuration.
pub fn solve_tabu(
    problem: &IsingProblem,
    spec: &TabuSpec,
    seed: u64,
    initial: Option<&SpinConfiguration>,
) -> Result<SolveOutcome> {
    spec.validate()?;
    let n = problem.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = match initial {
        Some(c) => {
            if c.len() != n {
                return Err(PqlsError::DimensionMismatch {
                    expected: n,
                    got: c.len(),
                });
            }
            c.clone()
        }
        None => SpinConfiguration::random(n, &mut rng),
    };
    let mut current_e = energy(problem, &current)?;
    let mut best = current.clone();
    let mut best_e = current_e;
    let mut evaluations: u64 = 1;
    let mut tabu_until = vec![0usize; n];

    for iter in 1..=spec.budget {
        let mut chosen: Option<(usize, f64)> = None;
        let mut fallback: Option<(usize, f64)> = None;
        for i in 1..=n {
            let d = delta_energy_flip(problem, &current, i)?;
            evaluations += 1;
            if fallback.map_or(true, |(_, fd)| d < fd) {
                fallback = Some((i, d));
            }
            let is_tabu = tabu_until[i - 1] >= iter;
            let aspirates = current_e + d < best_e;
            if is_tabu && !aspirates {
                continue;
            }
            if chosen.map_or(true, |(_, cd)| d < cd) {
                chosen = Some((i, d));
            }
        }
        // every move tabu and none aspirates: take the steepest move anyway
        let (i, d) = chosen.or(fallback).expect("n >= 1 guarantees a move");
        current.flip(i);
        current_e += d;
        tabu_until[i - 1] = iter + spec.tenure;
        if current_e < best_e {
            best_e = current_e;
            best = current.clone();
        }
    }
    best_e = energy(problem, &best)?;
    Ok(SolveOutcome {
        config: best,
        energy: best_e,
        evaluations,
    })
}

/// The declared full-problem baseline: tabu with tenure max(4, n/4),
/// budget 200·n, over 20 random restarts keeping the best.
pub fn tabu_baseline(problem: &IsingProblem, seed: u64) -> Result<SolveOutcome> {
    let n = problem.n();
    let spec = TabuSpec {
        tenure: 4.max(n / 4),
        budget: 200 * n,
    };
    let mut best: Option<SolveOutcome> = None;
    let mut evaluations = 0u64;
    for restart in 0..20u64 {
        let out = solve_tabu(problem, &spec, mix_seeds(&[seed, restart]), None)?;
        evaluations += out.evaluations;
        if best.as_ref().map_or(true, |b| out.energy < b.energy) {
            best = Some(out);
        }
    }
    let mut best = best.expect("at least one restart");
    best.evaluations = evaluations;
    Ok(best)
}
