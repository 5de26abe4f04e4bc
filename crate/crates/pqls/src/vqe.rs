//! Exact-statevector VQE for diagonal (Ising) Hamiltonians.
//!
//! Ansatz: hardware-efficient — d+1 layers of per-qubit Y-rotations with a
//! ring of controlled-Z entanglers between consecutive rotation layers.
//! Y-rotations and CZ keep amplitudes real from |0...0>, so the state is a
//! real vector of 2^m entries. Parameters are optimized with SPSA and the
//! result is read out by sampling basis states from |psi|^2.

use rand::distr::weighted::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{PqlsError, Result};
use crate::ising::{energy, IsingProblem, SpinConfiguration};
use crate::subsolver::SolveOutcome;

pub const MAX_QUBITS: usize = 16;

/// SPSA gain sequence constants: `a_k = a/(k+1+A)^alpha`, `c_k = c/(k+1)^gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpsaGains {
    pub a: f64,
    pub c: f64,
    #[serde(rename = "big_a")]
    pub big_a: f64,
    pub alpha: f64,
    pub gamma: f64,
}

impl Default for SpsaGains {
    fn default() -> Self {
        Self {
            a: 0.2,
            c: 0.1,
            big_a: 10.0,
            alpha: 0.602,
            gamma: 0.101,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VqeSpec {
    /// Ansatz depth d; the circuit has d+1 rotation layers.
    pub layers: usize,
    /// SPSA steps.
    pub iterations: usize,
    /// Basis-state samples drawn from the optimized distribution;
    /// 0 falls back to the argmax-probability state.
    pub shots: usize,
    #[serde(default)]
    pub spsa_gains: SpsaGains,
}

impl Default for VqeSpec {
    fn default() -> Self {
        Self {
            layers: 2,
            iterations: 200,
            shots: 1024,
            spsa_gains: SpsaGains::default(),
        }
    }
}

impl VqeSpec {
    pub fn validate(&self) -> Result<()> {
        if self.layers == 0 || self.iterations == 0 {
            return Err(PqlsError::InvalidParameter(
                "vqe layers and iterations must be >= 1".into(),
            ));
        }
        let g = &self.spsa_gains;
        if g.a <= 0.0 || g.c <= 0.0 || g.big_a <= 0.0 {
            return Err(PqlsError::InvalidParameter(
                "spsa gains a, c, A must be positive".into(),
            ));
        }
        if !(0.0 < g.alpha && g.alpha <= 1.0) || !(0.0 < g.gamma && g.gamma <= 1.0) {
            return Err(PqlsError::InvalidParameter(
                "spsa alpha and gamma must lie in (0, 1]".into(),
            ));
        }
        Ok(())
    }
}

/// Real statevector over 2^m basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    amplitudes: Vec<f64>,
}

impl Statevector {
    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum()
    }
}

fn check_qubit_budget(m: usize) -> Result<()> {
    if m > MAX_QUBITS {
        return Err(PqlsError::SizeOverBudget { n: m, limit: MAX_QUBITS });
    }
    Ok(())
}

/// Z-basis diagonal of the Ising Hamiltonian: entry z is the energy of the
/// configuration with bit k−1 of z giving variable k's spin (0 ↦ +1).
pub fn hamiltonian_diagonal(inner: &IsingProblem) -> Result<Vec<f64>> {
    let m = inner.n();
    check_qubit_budget(m)?;
    (0..1u64 << m)
        .map(|z| energy(inner, &SpinConfiguration::from_index(z, m)))
        .collect()
}

fn apply_ry(amplitudes: &mut [f64], qubit: usize, theta: f64) {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let bit = 1usize << qubit;
    for z in 0..amplitudes.len() {
        if z & bit == 0 {
            let lo = amplitudes[z];
            let hi = amplitudes[z | bit];
            amplitudes[z] = c * lo - s * hi;
            amplitudes[z | bit] = s * lo + c * hi;
        }
    }
}

fn apply_cz(amplitudes: &mut [f64], q1: usize, q2: usize) {
    let mask = (1usize << q1) | (1usize << q2);
    for (z, a) in amplitudes.iter_mut().enumerate() {
        if z & mask == mask {
            *a = -*a;
        }
    }
}

/// Prepare the ansatz state for `m` qubits at depth `d` with parameters
/// `theta` (length (d+1)·m, rotation layers in order, qubits ascending).
pub fn ansatz_state(theta: &[f64], m: usize, d: usize) -> Result<Statevector> {
    check_qubit_budget(m)?;
    let expected = (d + 1) * m;
    if theta.len() != expected {
        return Err(PqlsError::DimensionMismatch {
            expected,
            got: theta.len(),
        });
    }
    let mut amplitudes = vec![0.0; 1 << m];
    amplitudes[0] = 1.0;
    for layer in 0..=d {
        for q in 0..m {
            apply_ry(&mut amplitudes, q, theta[layer * m + q]);
        }
        if layer < d {
            // ring entangler; a single CZ for m = 2, nothing for m = 1
            if m == 2 {
                apply_cz(&mut amplitudes, 0, 1);
            } else if m > 2 {
                for q in 0..m {
                    apply_cz(&mut amplitudes, q, (q + 1) % m);
                }
            }
        }
    }
    Ok(Statevector { amplitudes })
}

/// `<psi|H|psi> = sum_z |psi_z|^2 diag[z]`.
pub fn expectation(state: &Statevector, diag: &[f64]) -> Result<f64> {
    if state.amplitudes.len() != diag.len() {
        return Err(PqlsError::DimensionMismatch {
            expected: diag.len(),
            got: state.amplitudes.len(),
        });
    }
    Ok(state
        .amplitudes
        .iter()
        .zip(diag)
        .map(|(a, e)| a * a * e)
        .sum())
}

/// SPSA-optimized VQE solve. Deterministic for a fixed seed; the returned
/// `evaluations` counts statevector preparations.
pub fn solve_vqe(inner: &IsingProblem, spec: &VqeSpec, seed: u64) -> Result<SolveOutcome> {
    spec.validate()?;
    let m = inner.n();
    check_qubit_budget(m)?;
    let d = spec.layers;
    let diag = hamiltonian_diagonal(inner)?;
    let gains = spec.spsa_gains;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut theta: Vec<f64> = (0..(d + 1) * m)
        .map(|_| rng.random_range(-0.1..=0.1))
        .collect();
    let mut evaluations: u64 = 0;

    let eval = |theta: &[f64], evaluations: &mut u64| -> Result<f64> {
        *evaluations += 1;
        expectation(&ansatz_state(theta, m, d)?, &diag)
    };

    let mut best_theta = theta.clone();
    let mut best_value = eval(&theta, &mut evaluations)?;

    let mut plus = vec![0.0; theta.len()];
    let mut minus = vec![0.0; theta.len()];
    for k in 0..spec.iterations {
        let a_k = gains.a / (k as f64 + 1.0 + gains.big_a).powf(gains.alpha);
        let c_k = gains.c / (k as f64 + 1.0).powf(gains.gamma);
        let delta: Vec<f64> = (0..theta.len())
            .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
            .collect();
        for i in 0..theta.len() {
            plus[i] = theta[i] + c_k * delta[i];
            minus[i] = theta[i] - c_k * delta[i];
        }
        let y_plus = eval(&plus, &mut evaluations)?;
        let y_minus = eval(&minus, &mut evaluations)?;
        if y_plus < best_value {
            best_value = y_plus;
            best_theta.copy_from_slice(&plus);
        }
        if y_minus < best_value {
            best_value = y_minus;
            best_theta.copy_from_slice(&minus);
        }
        let scale = (y_plus - y_minus) / (2.0 * c_k);
        for i in 0..theta.len() {
            // 1/delta_i = delta_i for Rademacher perturbations
            theta[i] -= a_k * scale * delta[i];
        }
        let y = eval(&theta, &mut evaluations)?;
        if y < best_value {
            best_value = y;
            best_theta.copy_from_slice(&theta);
        }
    }

    evaluations += 1;
    let state = ansatz_state(&best_theta, m, d)?;
    let chosen = if spec.shots == 0 {
        argmax_probability(&state)
    } else {
        sample_lowest_energy(&state, &diag, spec.shots, &mut rng)
    };
    let config = SpinConfiguration::from_index(chosen as u64, m);
    Ok(SolveOutcome {
        energy: diag[chosen],
        config,
        evaluations,
    })
}

fn argmax_probability(state: &Statevector) -> usize {
    let mut best = 0;
    let mut best_p = state.amplitudes[0] * state.amplitudes[0];
    for (z, a) in state.amplitudes.iter().enumerate().skip(1) {
        let p = a * a;
        if p > best_p {
            best = z;
            best_p = p;
        }
    }
    best
}

fn sample_lowest_energy(
    state: &Statevector,
    diag: &[f64],
    shots: usize,
    rng: &mut ChaCha8Rng,
) -> usize {
    let weights: Vec<f64> = state.amplitudes.iter().map(|a| a * a).collect();
    let dist = WeightedIndex::new(&weights).expect("normalized state has positive total weight");
    let mut best = dist.sample(rng);
    for _ in 1..shots {
        let z = dist.sample(rng);
        if diag[z] < diag[best] || (diag[z] == diag[best] && z < best) {
            best = z;
        }
    }
    best
}
