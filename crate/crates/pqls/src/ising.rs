//! Ising problem representation: energy evaluation, single-flip deltas,
//! sub-problem extraction by clamping, and random instance generation.
//!
//! Conventions fixed here:
//! - `E(s) = sum_{i<j} J_ij s_i s_j + sum_i h_i s_i`, each unordered pair
//!   counted once, couplings stored upper-triangular.
//! - Variable indices are 1-based on the public surface, matching the
//!   instance file format.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{PqlsError, Result};

/// An Ising Hamiltonian over `n` spin variables.
///
/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingProblem {
    n: usize,
    couplings: BTreeMap<(usize, usize), f64>,
    fields: Vec<f64>,
    // adjacency: for each variable (0-based slot), its coupled partners
    // (1-based index, J value). Built once for O(degree) flip deltas.
    neighbors: Vec<Vec<(usize, f64)>>,
}

impl IsingProblem {
    pub fn new(
        n: usize,
        couplings: BTreeMap<(usize, usize), f64>,
        fields: Vec<f64>,
    ) -> Result<Self> {
        if n < 1 {
            return Err(PqlsError::InvalidParameter("n must be >= 1".into()));
        }
        if fields.len() != n {
            return Err(PqlsError::DimensionMismatch {
                expected: n,
                got: fields.len(),
            });
        }
        for &h in &fields {
            if !h.is_finite() {
                return Err(PqlsError::InvalidParameter("non-finite field".into()));
            }
        }
        for (&(i, j), &v) in &couplings {
            if i < 1 || j > n || i >= j {
                return Err(PqlsError::InvalidParameter(format!(
                    "coupling ({i}, {j}) must satisfy 1 <= i < j <= {n}"
                )));
            }
            if !v.is_finite() {
                return Err(PqlsError::InvalidParameter("non-finite coupling".into()));
            }
        }
        let mut neighbors = vec![Vec::new(); n];
        for (&(i, j), &v) in &couplings {
            neighbors[i - 1].push((j, v));
            neighbors[j - 1].push((i, v));
        }
        Ok(Self {
            n,
            couplings,
            fields,
            neighbors,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn couplings(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.couplings
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    /// Coupling J_ij for any pair order; 0 when absent.
    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        let key = (i.min(j), i.max(j));
        self.couplings.get(&key).copied().unwrap_or(0.0)
    }
}

/// A classical spin assignment `s ∈ {−1, +1}^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinConfiguration {
    spins: Vec<i8>,
}

impl SpinConfiguration {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if spins.iter().any(|&s| s != 1 && s != -1) {
            return Err(PqlsError::InvalidParameter(
                "spins must be exactly -1 or +1".into(),
            ));
        }
        Ok(Self { spins })
    }

    pub fn all_up(n: usize) -> Self {
        Self { spins: vec![1; n] }
    }

    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        let spins = (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
        Self { spins }
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    /// Spin of 1-based variable `i`.
    pub fn spin(&self, i: usize) -> i8 {
        self.spins[i - 1]
    }

    pub fn flip(&mut self, i: usize) {
        self.spins[i - 1] = -self.spins[i - 1];
    }

    /// Configuration for enumeration index `z`: bit k−1 of `z` gives the
    /// spin of variable k, with 0 ↦ +1 and 1 ↦ −1.
    pub fn from_index(z: u64, n: usize) -> Self {
        let spins = (0..n)
            .map(|k| if (z >> k) & 1 == 0 { 1 } else { -1 })
            .collect();
        Self { spins }
    }
}

/// A clamped restriction of a parent problem to a variable subset.
///
/// `offset` carries the energy of clamped-clamped couplings and clamped
/// fields, so `energy(inner, t) + offset` equals the full energy of the
/// embedded configuration.
#[derive(Debug, Clone)]
pub struct SubProblem {
    pub inner: IsingProblem,
    pub subset: Vec<usize>,
    pub offset: f64,
}

/// Exact energy `E(s) = sum_{i<j} J_ij s_i s_j + sum_i h_i s_i`.
pub fn energy(problem: &IsingProblem, config: &SpinConfiguration) -> Result<f64> {
    if config.len() != problem.n {
        return Err(PqlsError::DimensionMismatch {
            expected: problem.n,
            got: config.len(),
        });
    }
    let s = config.spins();
    let mut e = 0.0;
    for (&(i, j), &v) in &problem.couplings {
        e += v * f64::from(s[i - 1]) * f64::from(s[j - 1]);
    }
    for (h, &si) in problem.fields.iter().zip(s) {
        e += h * f64::from(si);
    }
    Ok(e)
}

/// Energy change from flipping variable `i`:
/// `−2 s_i (h_i + sum_{j≠i} J_{min,max} s_j)`.
pub fn delta_energy_flip(
    problem: &IsingProblem,
    config: &SpinConfiguration,
    i: usize,
) -> Result<f64> {
    if i < 1 || i > problem.n {
        return Err(PqlsError::IndexOutOfRange { index: i, n: problem.n });
    }
    if config.len() != problem.n {
        return Err(PqlsError::DimensionMismatch {
            expected: problem.n,
            got: config.len(),
        });
    }
    Ok(delta_flip_unchecked(problem, config, i))
}

pub(crate) fn delta_flip_unchecked(
    problem: &IsingProblem,
    config: &SpinConfiguration,
    i: usize,
) -> f64 {
    let mut local = problem.fields[i - 1];
    for &(j, v) in &problem.neighbors[i - 1] {
        local += v * f64::from(config.spin(j));
    }
    -2.0 * f64::from(config.spin(i)) * local
}

fn validate_subset(subset: &[usize], n: usize) -> Result<()> {
    if subset.is_empty() {
        return Err(PqlsError::InvalidSubset("subset must be nonempty".into()));
    }
    for w in subset.windows(2) {
        if w[0] >= w[1] {
            return Err(PqlsError::InvalidSubset(
                "subset must be strictly ascending".into(),
            ));
        }
    }
    if subset[0] < 1 || *subset.last().unwrap() > n {
        return Err(PqlsError::InvalidSubset(format!(
            "subset indices must lie in 1..={n}"
        )));
    }
    Ok(())
}

/// Clamp every variable outside `subset` at its value in `config`.
///
/// Couplings internal to the subset survive; couplings to clamped spins
/// fold into the inner linear terms; everything else goes to the offset.
pub fn extract_subproblem(
    problem: &IsingProblem,
    config: &SpinConfiguration,
    subset: &[usize],
) -> Result<SubProblem> {
    validate_subset(subset, problem.n)?;
    if config.len() != problem.n {
        return Err(PqlsError::DimensionMismatch {
            expected: problem.n,
            got: config.len(),
        });
    }
    let m = subset.len();
    // parent index -> 1-based inner slot
    let mut slot = vec![0usize; problem.n + 1];
    for (a, &i) in subset.iter().enumerate() {
        slot[i] = a + 1;
    }

    let mut inner_couplings = BTreeMap::new();
    let mut inner_fields: Vec<f64> = subset.iter().map(|&i| problem.fields[i - 1]).collect();
    let mut offset = 0.0;

    for (&(i, j), &v) in &problem.couplings {
        match (slot[i], slot[j]) {
            (0, 0) => {
                offset += v * f64::from(config.spin(i)) * f64::from(config.spin(j));
            }
            (a, 0) if a > 0 => {
                inner_fields[a - 1] += v * f64::from(config.spin(j));
            }
            (0, b) => {
                inner_fields[b - 1] += v * f64::from(config.spin(i));
            }
            (a, b) => {
                inner_couplings.insert((a.min(b), a.max(b)), v);
            }
        }
    }
    for i in 1..=problem.n {
        if slot[i] == 0 {
            offset += problem.fields[i - 1] * f64::from(config.spin(i));
        }
    }

    Ok(SubProblem {
        inner: IsingProblem::new(m, inner_couplings, inner_fields)?,
        subset: subset.to_vec(),
        offset,
    })
}

/// Copy `config` with the spins at `subset` positions replaced by `sub`.
pub fn embed_solution(
    config: &SpinConfiguration,
    subset: &[usize],
    sub: &SpinConfiguration,
) -> Result<SpinConfiguration> {
    validate_subset(subset, config.len())?;
    if sub.len() != subset.len() {
        return Err(PqlsError::DimensionMismatch {
            expected: subset.len(),
            got: sub.len(),
        });
    }
    let mut out = config.clone();
    for (a, &i) in subset.iter().enumerate() {
        out.spins[i - 1] = sub.spins[a];
    }
    Ok(out)
}

/// Dense random instance: complete graph, `J_ij` and `h_i` i.i.d. uniform
/// on [−1, 1]. Draw order is fixed: fields for i = 1..n, then couplings in
/// (i, j) lexicographic order.
pub fn generate_instance(n: usize, seed: u64) -> Result<IsingProblem> {
    if n < 1 {
        return Err(PqlsError::InvalidParameter("n must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fields: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let mut couplings = BTreeMap::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            couplings.insert((i, j), rng.random_range(-1.0..=1.0));
        }
    }
    IsingProblem::new(n, couplings, fields)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_spin() -> IsingProblem {
        IsingProblem::new(2, BTreeMap::from([((1, 2), 1.0)]), vec![0.0, 0.0]).unwrap()
    }

    fn three_spin() -> IsingProblem {
        IsingProblem::new(
            3,
            BTreeMap::from([((1, 2), 1.0), ((2, 3), -2.0)]),
            vec![0.5, 0.0, 0.0],
        )
        .unwrap()
    }

    #[test]
    fn energy_two_spin() {
        let p = two_spin();
        let up = SpinConfiguration::new(vec![1, 1]).unwrap();
        let mixed = SpinConfiguration::new(vec![1, -1]).unwrap();
        assert_eq!(energy(&p, &up).unwrap(), 1.0);
        assert_eq!(energy(&p, &mixed).unwrap(), -1.0);
    }

    #[test]
    fn energy_three_spin() {
        let p = three_spin();
        let s = SpinConfiguration::new(vec![1, -1, 1]).unwrap();
        assert_eq!(energy(&p, &s).unwrap(), 1.5);
    }

    #[test]
    fn energy_length_mismatch() {
        let p = two_spin();
        let s = SpinConfiguration::new(vec![1]).unwrap();
        assert!(matches!(
            energy(&p, &s),
            Err(PqlsError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn delta_flip_two_spin() {
        let p = two_spin();
        let s = SpinConfiguration::new(vec![1, 1]).unwrap();
        assert_eq!(delta_energy_flip(&p, &s, 1).unwrap(), -2.0);
    }

    #[test]
    fn delta_flip_three_spin() {
        let p = three_spin();
        let s = SpinConfiguration::new(vec![1, -1, 1]).unwrap();
        assert_eq!(delta_energy_flip(&p, &s, 3).unwrap(), -4.0);
    }

    #[test]
    fn delta_flip_involution() {
        let p = generate_instance(8, 7).unwrap();
        let mut s = SpinConfiguration::all_up(8);
        for i in 1..=8 {
            let d1 = delta_energy_flip(&p, &s, i).unwrap();
            s.flip(i);
            let d2 = delta_energy_flip(&p, &s, i).unwrap();
            s.flip(i);
            assert!((d1 + d2).abs() < 1e-12);
        }
    }

    #[test]
    fn delta_flip_out_of_range() {
        let p = two_spin();
        let s = SpinConfiguration::all_up(2);
        assert!(matches!(
            delta_energy_flip(&p, &s, 3),
            Err(PqlsError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn extract_single_variable() {
        let p = three_spin();
        let s = SpinConfiguration::new(vec![1, 1, -1]).unwrap();
        let sub = extract_subproblem(&p, &s, &[2]).unwrap();
        assert_eq!(sub.inner.n(), 1);
        assert!(sub.inner.couplings().is_empty());
        assert_eq!(sub.inner.fields()[0], 3.0);
        assert_eq!(sub.offset, 0.5);
        // E(t) = 3t + 0.5 must match the full energy at both t values
        for t in [1i8, -1] {
            let tc = SpinConfiguration::new(vec![t]).unwrap();
            let embedded = embed_solution(&s, &[2], &tc).unwrap();
            let full = energy(&p, &embedded).unwrap();
            let local = energy(&sub.inner, &tc).unwrap() + sub.offset;
            assert!((full - local).abs() < 1e-12);
        }
    }

    #[test]
    fn extract_full_subset_is_identity() {
        let p = three_spin();
        let s = SpinConfiguration::all_up(3);
        let sub = extract_subproblem(&p, &s, &[1, 2, 3]).unwrap();
        assert_eq!(sub.inner, p);
        assert_eq!(sub.offset, 0.0);
    }

    #[test]
    fn clamping_identity_brute_force() {
        // random n=10 problem, subset of 4, all 2^4 sub-assignments
        let p = generate_instance(10, 42).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let s = SpinConfiguration::random(10, &mut rng);
        let subset = [2, 5, 6, 9];
        let sub = extract_subproblem(&p, &s, &subset).unwrap();
        for z in 0..16u64 {
            let t = SpinConfiguration::from_index(z, 4);
            let local = energy(&sub.inner, &t).unwrap() + sub.offset;
            let full = energy(&p, &embed_solution(&s, &subset, &t).unwrap()).unwrap();
            assert!((local - full).abs() < 1e-9);
        }
    }

    #[test]
    fn embed_basic() {
        let c = SpinConfiguration::all_up(3);
        let sub = SpinConfiguration::new(vec![-1]).unwrap();
        let out = embed_solution(&c, &[2], &sub).unwrap();
        assert_eq!(out.spins(), &[1, -1, 1]);
    }

    #[test]
    fn embed_full_subset_replaces_everything() {
        let c = SpinConfiguration::all_up(3);
        let t = SpinConfiguration::new(vec![-1, 1, -1]).unwrap();
        assert_eq!(embed_solution(&c, &[1, 2, 3], &t).unwrap(), t);
    }

    #[test]
    fn invalid_subsets_rejected() {
        let p = three_spin();
        let s = SpinConfiguration::all_up(3);
        assert!(extract_subproblem(&p, &s, &[]).is_err());
        assert!(extract_subproblem(&p, &s, &[2, 1]).is_err());
        assert!(extract_subproblem(&p, &s, &[1, 1]).is_err());
        assert!(extract_subproblem(&p, &s, &[0, 2]).is_err());
        assert!(extract_subproblem(&p, &s, &[2, 4]).is_err());
    }

    #[test]
    fn generate_is_deterministic() {
        assert_eq!(
            generate_instance(12, 5).unwrap(),
            generate_instance(12, 5).unwrap()
        );
        assert_ne!(
            generate_instance(12, 5).unwrap(),
            generate_instance(12, 6).unwrap()
        );
    }

    #[test]
    fn generate_single_variable() {
        let p = generate_instance(1, 3).unwrap();
        assert_eq!(p.n(), 1);
        assert!(p.couplings().is_empty());
        assert_eq!(p.fields().len(), 1);
    }

    #[test]
    fn generate_coefficient_mean_near_zero() {
        let mut sum = 0.0;
        let mut count = 0usize;
        for seed in 0..100 {
            let p = generate_instance(100, seed).unwrap();
            for v in p.couplings().values() {
                sum += v;
                count += 1;
            }
            for h in p.fields() {
                sum += h;
                count += 1;
            }
        }
        let mean = sum / count as f64;
        assert!((-0.05..=0.05).contains(&mean), "mean {mean}");
    }

    #[test]
    fn spin_flip_symmetry_without_fields() {
        let mut p = generate_instance(9, 11).unwrap();
        p = IsingProblem::new(p.n(), p.couplings().clone(), vec![0.0; 9]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = SpinConfiguration::random(9, &mut rng);
        let neg = SpinConfiguration::new(s.spins().iter().map(|x| -x).collect()).unwrap();
        assert_eq!(energy(&p, &s).unwrap(), energy(&p, &neg).unwrap());
    }

    #[test]
    fn duplicate_coupling_key_impossible_and_diagonal_rejected() {
        assert!(IsingProblem::new(2, BTreeMap::from([((1, 1), 1.0)]), vec![0.0; 2]).is_err());
        assert!(IsingProblem::new(2, BTreeMap::from([((2, 1), 1.0)]), vec![0.0; 2]).is_err());
    }
}
