//! Parallel quantum local search (PQLS) for Ising problems.
//!
//! Quantum local search (QLS) minimizes an Ising Hamiltonian by repeatedly
//! clamping all but a small subset of variables, solving the resulting
//! sub-problem with a pluggable subsolver, and embedding the result. PQLS
//! runs many QLS branches in parallel, keeps the best branch of each
//! generation, and seeds the next generation with it.
//!
//! The crate ships four subsolvers behind one contract — exhaustive
//! enumeration, simulated annealing, tabu search, and a small statevector
//! VQE simulator optimized with SPSA — plus an experiment harness that
//! sweeps problem size, branch count, unit length, and VQE iteration
//! budgets into CSV files.
//!
//! See the `examples/` directory for one runnable example per capability,
//! and the `pqls` binary for the command-line harness.

pub mod engine;
pub mod error;
pub mod experiment;
pub mod io;
pub mod ising;
pub mod seeding;
pub mod subsolver;
pub mod vqe;

pub use engine::{run_pqls, run_qls, AcceptRule, BranchResult, PqlsParams, PqlsResult};
pub use error::{PqlsError, Result};
pub use ising::{IsingProblem, SpinConfiguration, SubProblem};
pub use subsolver::{SolveOutcome, SubsolverSpec};
