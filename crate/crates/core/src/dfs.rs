//! Decoherence-free subspaces of diagonal dephasing noise.
//!
//! A dephasing pattern gives each rail a coefficient `c_i`; one noise event
//! multiplies rail `i` by `e^{i c_i δφ}`. Rails sharing a coefficient pick up
//! the same phase, so any state supported on such a group only acquires a
//! global phase.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::gates::{compile_gate, LogicalGate};
use crate::optics::{RailState, RailUnitary, TOL};

#[derive(Clone, Debug, PartialEq)]
pub struct DephasingPattern {
    coefficients: Vec<f64>,
}

impl DephasingPattern {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Noise("dephasing pattern has no rails".into()));
        }
        if let Some(c) = coefficients.iter().find(|c| !c.is_finite()) {
            return Err(Error::Noise(format!("coefficient {c} is not finite")));
        }
        Ok(Self { coefficients })
    }

    /// Rails 2 and 3 share the turbulent phase; rails 1 and 4 do not.
    pub fn collective() -> Self {
        Self {
            coefficients: vec![0.0, 1.0, 1.0, 0.0],
        }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn rail_count(&self) -> usize {
        self.coefficients.len()
    }

    /// Per-rail phases for one noise event of strength `delta`.
    pub fn phases(&self, delta: f64) -> Vec<f64> {
        self.coefficients.iter().map(|c| c * delta).collect()
    }

    pub fn unitary(&self, delta: f64) -> RailUnitary {
        RailUnitary::diagonal_phases(&self.phases(delta))
    }
}

/// Disjoint, nonempty rail sets (1-indexed, ascending) covering every rail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspacePartition {
    subspaces: Vec<Vec<usize>>,
}

impl SubspacePartition {
    pub fn new(mut subspaces: Vec<Vec<usize>>, rails: usize) -> Result<Self> {
        let mut seen = vec![false; rails];
        for set in &mut subspaces {
            if set.is_empty() {
                return Err(Error::config("partition", "empty subspace"));
            }
            set.sort_unstable();
            for &rail in set.iter() {
                if rail == 0 || rail > rails {
                    return Err(Error::RailOutOfRange { rail, rails });
                }
                if std::mem::replace(&mut seen[rail - 1], true) {
                    return Err(Error::config(
                        "partition",
                        format!("rail {rail} listed twice"),
                    ));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::config(
                "partition",
                format!("rail {} not covered", missing + 1),
            ));
        }
        Ok(Self { subspaces })
    }

    pub fn subspaces(&self) -> &[Vec<usize>] {
        &self.subspaces
    }
}

impl std::fmt::Display for SubspacePartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sets: Vec<String> = self
            .subspaces
            .iter()
            .map(|s| {
                let rails: Vec<String> = s.iter().map(ToString::to_string).collect();
                format!("{{{}}}", rails.join(","))
            })
            .collect();
        write!(f, "{{{}}}", sets.join(","))
    }
}

/// Groups rails whose coefficients agree within `tol`. Groups are ordered
/// by their lowest rail.
pub fn find_dfs(p: &DephasingPattern, tol: f64) -> SubspacePartition {
    let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
    for (idx, &c) in p.coefficients.iter().enumerate() {
        match groups.iter_mut().find(|(rep, _)| (rep - c).abs() <= tol) {
            Some((_, rails)) => rails.push(idx + 1),
            None => groups.push((c, vec![idx + 1])),
        }
    }
    SubspacePartition {
        subspaces: groups.into_iter().map(|(_, rails)| rails).collect(),
    }
}

fn random_state_on<R: Rng + ?Sized>(rails: &[usize], n: usize, rng: &mut R) -> RailState {
    loop {
        let mut amps = vec![Complex64::new(0.0, 0.0); n];
        for &r in rails {
            amps[r - 1] = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            let amps = amps.into_iter().map(|a| a / norm).collect();
            return RailState::new(amps).expect("normalized by construction");
        }
    }
}

/// Checks that random states on each subspace keep every pairwise amplitude
/// ratio under `trials` random noise events.
///
/// `subspaces` need not cover every rail, so a candidate family can be
/// tested before it is promoted to a [`SubspacePartition`].
pub fn verify_dfs<R: Rng + ?Sized>(
    subspaces: &[Vec<usize>],
    p: &DephasingPattern,
    trials: usize,
    rng: &mut R,
) -> bool {
    let n = p.rail_count();
    if subspaces.iter().flatten().any(|&r| r == 0 || r > n) {
        return false;
    }
    for _ in 0..trials {
        for set in subspaces {
            let before = random_state_on(set, n, rng);
            let delta = rng.gen_range(0.0..TAU);
            let after = p.unitary(delta).apply(&before).expect("pattern dimension");
            for (k, &i) in set.iter().enumerate() {
                for &j in &set[k + 1..] {
                    let lhs = after.amplitude(i) * before.amplitude(j);
                    let rhs = after.amplitude(j) * before.amplitude(i);
                    if (lhs - rhs).norm() > TOL {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// The encoding CNOT: rail swap (3, 4) placed after the oracle.
pub fn encoder_circuit() -> RailUnitary {
    compile_gate(LogicalGate::CnotQueryControlsSignal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::trial_stream;
    use crate::optics::basis_state;
    use proptest::prelude::*;

    fn pattern(c: &[f64]) -> DephasingPattern {
        DephasingPattern::new(c.to_vec()).unwrap()
    }

    #[test]
    fn finds_parity_subspaces() {
        assert_eq!(
            find_dfs(&pattern(&[0., 1., 1., 0.]), 1e-9).subspaces(),
            &[vec![1, 4], vec![2, 3]]
        );
        assert_eq!(
            find_dfs(&pattern(&[0., 0., 0., 0.]), 1e-9).subspaces(),
            &[vec![1, 2, 3, 4]]
        );
        assert_eq!(
            find_dfs(&pattern(&[1., 2., 3., 4.]), 1e-9).subspaces(),
            &[vec![1], vec![2], vec![3], vec![4]]
        );
        for tol in [0.0, 1e-9, 0.5, 0.999] {
            assert_eq!(
                find_dfs(&DephasingPattern::collective(), tol).subspaces(),
                &[vec![1, 4], vec![2, 3]]
            );
        }
    }

    #[test]
    fn verifies_parity_subspaces() {
        let mut rng = trial_stream(5, 0, 0);
        let p = DephasingPattern::collective();
        assert!(verify_dfs(&[vec![1, 4], vec![2, 3]], &p, 100, &mut rng));
        assert!(!verify_dfs(&[vec![1, 2]], &p, 100, &mut rng));
        let zero = pattern(&[0.0; 4]);
        assert!(verify_dfs(&[vec![1, 2, 3, 4]], &zero, 10, &mut rng));
        assert!(verify_dfs(
            &[vec![1, 3], vec![2], vec![4]],
            &zero,
            10,
            &mut rng
        ));
        assert!(!verify_dfs(&[vec![5]], &p, 1, &mut rng));
    }

    #[test]
    fn counterexample_at_pi() {
        let before = RailState::from_real(
            &[std::f64::consts::FRAC_1_SQRT_2; 2]
                .iter()
                .chain(&[0.0, 0.0])
                .copied()
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let after = DephasingPattern::collective()
            .unitary(std::f64::consts::PI)
            .apply(&before)
            .unwrap();
        assert!((after.amplitude(1) - before.amplitude(1)).norm() < TOL);
        assert!((after.amplitude(2) + before.amplitude(2)).norm() < TOL);
    }

    #[test]
    fn partitions_validate() {
        assert!(SubspacePartition::new(vec![vec![4, 1], vec![2, 3]], 4).is_ok());
        assert!(SubspacePartition::new(vec![vec![1, 2]], 4).is_err());
        assert!(SubspacePartition::new(vec![vec![1, 2], vec![2, 3, 4]], 4).is_err());
        assert!(SubspacePartition::new(vec![vec![1, 2, 3, 4], vec![]], 4).is_err());
        assert!(SubspacePartition::new(vec![vec![1, 2, 3, 5]], 4).is_err());
        let p = find_dfs(&DephasingPattern::collective(), 1e-9);
        assert_eq!(p.to_string(), "{{1,4},{2,3}}");
    }

    #[test]
    fn encoder() {
        let out = encoder_circuit()
            .apply(&RailState::from_real(&[0.5, -0.5, 0.5, -0.5]).unwrap())
            .unwrap();
        assert_eq!(out, RailState::from_real(&[0.5, -0.5, -0.5, 0.5]).unwrap());
        // even subspace (1,4): (½, ½); odd subspace (2,3): (−½, −½)
        assert_eq!(out.amplitude(1), out.amplitude(4));
        assert_eq!(out.amplitude(2), out.amplitude(3));

        let e = encoder_circuit();
        assert_eq!(e.then(&e).unwrap(), RailUnitary::identity(4));
        assert_eq!(
            e.apply(&basis_state(1, 4).unwrap()).unwrap(),
            basis_state(1, 4).unwrap()
        );
    }

    #[test]
    fn within_subspace_mixing_is_phase_blind() {
        // A splitter inside the odd subspace sees the collective phase on both inputs.
        let mix = RailUnitary::beam_splitter(4, 2, 3, 0.37).unwrap();
        let input = RailState::from_real(&[0.0, 0.6, -0.8, 0.0]).unwrap();
        let reference = mix.apply(&input).unwrap().detector_probabilities();
        let p = DephasingPattern::collective();
        for k in 0..=8 {
            let delta = k as f64 * std::f64::consts::FRAC_PI_4;
            let noisy = p.unitary(delta).then(&mix).unwrap().apply(&input).unwrap();
            for (a, b) in noisy.detector_probabilities().iter().zip(&reference) {
                assert!((a - b).abs() < TOL);
            }
        }
    }

    proptest! {
        #[test]
        fn discovered_subspaces_are_decoherence_free(
            labels in prop::collection::vec(0usize..3, 2..7),
            values in prop::array::uniform3(-5.0f64..5.0),
            seed in any::<u64>(),
        ) {
            let coeffs: Vec<f64> = labels.iter().map(|&l| values[l]).collect();
            let p = pattern(&coeffs);
            let part = find_dfs(&p, 1e-12);
            prop_assert!(SubspacePartition::new(part.subspaces().to_vec(), coeffs.len()).is_ok());
            let mut rng = trial_stream(seed, 0, 0);
            prop_assert!(verify_dfs(part.subspaces(), &p, 5, &mut rng));
        }
    }
}
