//! Property tests over the core invariants.

use proptest::prelude::*;

use pqls::engine::{run_pqls, AcceptRule, PqlsParams};
use pqls::io::{read_instance, write_instance};
use pqls::ising::{
    delta_energy_flip, embed_solution, energy, extract_subproblem, generate_instance,
    IsingProblem, SpinConfiguration,
};
use pqls::subsolver::{AnnealingSpec, SubsolverSpec};
use pqls::vqe::{ansatz_state, expectation, hamiltonian_diagonal};

fn arb_problem(max_n: usize) -> impl Strategy<Value = IsingProblem> {
    (1..=max_n, any::<u64>()).prop_map(|(n, seed)| generate_instance(n, seed).unwrap())
}

proptest! {
    #[test]
    fn flip_consistency(problem in arb_problem(14), seed in any::<u64>()) {
        let n = problem.n();
        let config = SpinConfiguration::from_index(seed & ((1 << n) - 1), n);
        for i in 1..=n {
            let delta = delta_energy_flip(&problem, &config, i).unwrap();
            let mut flipped = config.clone();
            flipped.flip(i);
            let direct = energy(&problem, &flipped).unwrap() - energy(&problem, &config).unwrap();
            prop_assert!((delta - direct).abs() < 1e-9);
        }
    }

    #[test]
    fn clamping_identity(
        problem in arb_problem(12),
        config_bits in any::<u64>(),
        subset_bits in 1u32..,
        t_bits in any::<u64>(),
    ) {
        let n = problem.n();
        let config = SpinConfiguration::from_index(config_bits & ((1 << n) - 1), n);
        let subset: Vec<usize> = (1..=n).filter(|i| (subset_bits >> (i - 1)) & 1 == 1).collect();
        prop_assume!(!subset.is_empty());
        let sub = extract_subproblem(&problem, &config, &subset).unwrap();
        let t = SpinConfiguration::from_index(t_bits & ((1 << subset.len()) - 1), subset.len());
        let local = energy(&sub.inner, &t).unwrap() + sub.offset;
        let full = energy(&problem, &embed_solution(&config, &subset, &t).unwrap()).unwrap();
        prop_assert!((local - full).abs() < 1e-9);
    }

    #[test]
    fn embed_then_extract_round_trips(problem in arb_problem(10), bits in any::<u64>()) {
        let n = problem.n();
        let config = SpinConfiguration::from_index(bits & ((1 << n) - 1), n);
        let subset: Vec<usize> = (1..=n).step_by(2).collect();
        let t = SpinConfiguration::from_index(bits >> n, subset.len());
        let embedded = embed_solution(&config, &subset, &t).unwrap();
        let recovered: Vec<i8> = subset.iter().map(|&i| embedded.spin(i)).collect();
        prop_assert_eq!(recovered, t.spins().to_vec());
    }

    #[test]
    fn serialization_round_trip(problem in arb_problem(16)) {
        let text = write_instance(&problem);
        prop_assert_eq!(read_instance(&text).unwrap(), problem);
    }

    #[test]
    fn elitism_for_stochastic_subsolvers(
        n in 6usize..=14,
        instance_seed in any::<u64>(),
        master_seed in any::<u64>(),
        always in any::<bool>(),
    ) {
        let problem = generate_instance(n, instance_seed).unwrap();
        let params = PqlsParams {
            sub_size: 3,
            branches: 3,
            unit_length: 2,
            generations: 4,
            subsolver: SubsolverSpec::Annealing(AnnealingSpec {
                sweeps: 5,
                ..AnnealingSpec::default()
            }),
            master_seed,
            accept_rule: if always { AcceptRule::Always } else { AcceptRule::ImproveOrEqual },
            retain_branches: false,
        };
        let out = run_pqls(&problem, None, &params, 1).unwrap();
        prop_assert!(out.per_generation.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        prop_assert_eq!(out.best_energy, *out.per_generation.last().unwrap());
    }

    #[test]
    fn variational_bound(m in 1usize..=6, seed in any::<u64>(), theta_bits in any::<u64>()) {
        let problem = generate_instance(m, seed).unwrap();
        let diag = hamiltonian_diagonal(&problem).unwrap();
        let ground = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        let theta: Vec<f64> = (0..3 * m)
            .map(|i| {
                let frac = (theta_bits.rotate_left(i as u32) % 1000) as f64 / 1000.0;
                (2.0 * frac - 1.0) * std::f64::consts::PI
            })
            .collect();
        let state = ansatz_state(&theta, m, 2).unwrap();
        prop_assert!((state.norm_sq() - 1.0).abs() < 1e-9);
        prop_assert!(expectation(&state, &diag).unwrap() >= ground - 1e-9);
    }
}
