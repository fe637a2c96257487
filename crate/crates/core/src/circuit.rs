//! The two-qubit Deutsch-Jozsa interferometer.
//!
//! A photon enters on rail 2 (`|01⟩`), passes the preparation Hadamards,
//! the oracle's conditional rail swaps, and a readout stage of two parallel
//! Mach-Zehnder recombinations. The standard readout interferes rail pairs
//! (1,3) and (2,4); the parity-protected readout first swaps rails 3 and 4,
//! which amounts to interfering (2,3) and (1,4).

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::gates::{compile_gate, LogicalGate, OracleSetting, RAILS};
use crate::optics::{RailState, RailUnitary, TOL};

/// Port distribution over the four photodiodes.
pub type PortProbabilities = [f64; RAILS];

/// Rail the photon is injected on.
pub const INPUT_RAIL: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Encoding {
    Standard,
    Dfs,
}

impl Encoding {
    pub const ALL: [Encoding; 2] = [Encoding::Standard, Encoding::Dfs];

    pub fn label(&self) -> &'static str {
        match self {
            Encoding::Standard => "standard",
            Encoding::Dfs => "dfs",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "standard" => Some(Encoding::Standard),
            "dfs" => Some(Encoding::Dfs),
            _ => None,
        }
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Constant,
    Balanced,
}

impl Verdict {
    pub fn of(o: OracleSetting) -> Self {
        if o.is_balanced() {
            Verdict::Balanced
        } else {
            Verdict::Constant
        }
    }

    /// The algorithm's output bit `f(0) ⊕ f(1)`.
    pub fn bit(&self) -> u8 {
        match self {
            Verdict::Constant => 0,
            Verdict::Balanced => 1,
        }
    }
}

/// Verdict announced by a click on each photodiode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DetectorMap {
    verdicts: [Verdict; RAILS],
}

impl DetectorMap {
    /// Verdict for a 1-indexed port.
    pub fn verdict(&self, port: usize) -> Verdict {
        self.verdicts[port - 1]
    }

    pub fn ports_for(&self, v: Verdict) -> Vec<usize> {
        (1..=RAILS).filter(|&p| self.verdict(p) == v).collect()
    }
}

/// Port-to-verdict assignment for an encoding.
///
/// The parity-protected readout skips the decoding CNOT, so constant
/// oracles light ports 3 and 4 there instead of 1 and 2.
pub fn detector_map(e: Encoding) -> DetectorMap {
    use Verdict::{Balanced as B, Constant as C};
    let verdicts = match e {
        Encoding::Standard => [C, C, B, B],
        Encoding::Dfs => [B, B, C, C],
    };
    DetectorMap { verdicts }
}

pub fn input_state() -> RailState {
    RailState::basis(INPUT_RAIL, RAILS).expect("input rail is in range")
}

/// Signal Hadamard followed by query Hadamard.
pub fn preparation_stage() -> RailUnitary {
    compile_gate(LogicalGate::HadamardSignal)
        .then(&compile_gate(LogicalGate::HadamardQuery))
        .expect("4-rail stages")
}

pub fn oracle_stage(o: OracleSetting) -> RailUnitary {
    compile_gate(LogicalGate::Oracle(o))
}

pub fn readout_stage(e: Encoding) -> RailUnitary {
    let hadamard = compile_gate(LogicalGate::HadamardQuery);
    match e {
        Encoding::Standard => hadamard,
        Encoding::Dfs => compile_gate(LogicalGate::CnotQueryControlsSignal)
            .then(&hadamard)
            .expect("4-rail stages"),
    }
}

/// State entering the readout stage: preparation and oracle applied to the input.
pub fn oracle_output(o: OracleSetting) -> RailState {
    let u = preparation_stage()
        .then(&oracle_stage(o))
        .expect("4-rail stages");
    u.apply(&input_state()).expect("4-rail state")
}

pub(crate) fn to_ports(p: Vec<f64>) -> PortProbabilities {
    p.try_into().expect("four detector probabilities")
}

/// Noiseless detector distribution for one oracle and encoding.
pub fn run_ideal(o: OracleSetting, e: Encoding) -> PortProbabilities {
    let out = readout_stage(e)
        .apply(&oracle_output(o))
        .expect("4-rail state");
    to_ports(out.detector_probabilities())
}

/// Probability mass on ports whose verdict disagrees with the oracle's class.
pub fn error_probability(p: &[f64], o: OracleSetting, e: Encoding) -> Result<f64> {
    if p.len() != RAILS {
        return Err(Error::Dimension {
            expected: RAILS,
            found: p.len(),
        });
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-6 {
        return Err(Error::NotNormalizedProbabilities(total));
    }
    let map = detector_map(e);
    let truth = Verdict::of(o);
    Ok((1..=RAILS)
        .filter(|&port| map.verdict(port) != truth)
        .map(|port| p[port - 1])
        .sum())
}

/// One arm of a Mach-Zehnder interferometer: the rail it occupies between
/// preparation and oracle, and the rail it leaves the oracle on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arm {
    pub prepared_rail: usize,
    pub readout_rail: usize,
}

/// Two-arm interferometer closed by one readout beam splitter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MachZehnder {
    pub arms: [Arm; 2],
}

impl MachZehnder {
    /// The pair of rails recombined at the final beam splitter.
    pub fn interfered_rails(&self) -> (usize, usize) {
        (self.arms[0].readout_rail, self.arms[1].readout_rail)
    }
}

fn nonzero(u: &RailUnitary, row: usize, col: usize) -> bool {
    u.entry(row, col).norm() > TOL
}

/// Rail pairs recombined by the readout stage, read off its matrix.
pub fn interfered_pairs(e: Encoding) -> Vec<(usize, usize)> {
    let readout = readout_stage(e);
    let pairs: BTreeSet<(usize, usize)> = (1..=RAILS)
        .map(|port| {
            let inputs: Vec<usize> = (1..=RAILS)
                .filter(|&r| nonzero(&readout, port, r))
                .collect();
            assert_eq!(inputs.len(), 2, "each readout port mixes two rails");
            (inputs[0], inputs[1])
        })
        .collect();
    pairs.into_iter().collect()
}

/// The two interferometers in operation for an oracle/encoding setting.
pub fn active_interferometers(o: OracleSetting, e: Encoding) -> Vec<MachZehnder> {
    let oracle = oracle_stage(o);
    let source = |rail: usize| {
        (1..=RAILS)
            .find(|&s| nonzero(&oracle, rail, s))
            .expect("oracle is a permutation")
    };
    interfered_pairs(e)
        .into_iter()
        .map(|(a, b)| MachZehnder {
            arms: [
                Arm {
                    prepared_rail: source(a),
                    readout_rail: a,
                },
                Arm {
                    prepared_rail: source(b),
                    readout_rail: b,
                },
            ],
        })
        .collect()
}

/// Every distinct interferometer realized by some oracle/encoding setting.
pub fn enumerate_interferometers() -> BTreeSet<MachZehnder> {
    OracleSetting::ALL
        .iter()
        .flat_map(|&o| {
            Encoding::ALL
                .iter()
                .flat_map(move |&e| active_interferometers(o, e))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::equal_up_to_global_phase;

    fn o(f0: u8, f1: u8) -> OracleSetting {
        OracleSetting::new(f0 == 1, f1 == 1)
    }

    fn prepared() -> RailState {
        RailState::from_real(&[0.5, -0.5, 0.5, -0.5]).unwrap()
    }

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < TOL)
    }

    #[test]
    fn preparation_output() {
        let out = preparation_stage().apply(&input_state()).unwrap();
        assert!(equal_up_to_global_phase(&out, &prepared(), TOL));
        assert!((out.norm_squared() - 1.0).abs() < TOL);
        let twice = preparation_stage().apply(&out).unwrap();
        assert!(equal_up_to_global_phase(&twice, &input_state(), TOL));
    }

    #[test]
    fn oracle_actions() {
        assert_eq!(oracle_stage(o(0, 0)), RailUnitary::identity(4));
        let out = oracle_stage(o(1, 0)).apply(&prepared()).unwrap();
        assert_eq!(out, RailState::from_real(&[-0.5, 0.5, 0.5, -0.5]).unwrap());
        let out = oracle_stage(o(1, 1)).apply(&prepared()).unwrap();
        assert_eq!(out, RailState::from_real(&[-0.5, 0.5, -0.5, 0.5]).unwrap());
    }

    #[test]
    fn readout_actions() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let std_out = readout_stage(Encoding::Standard)
            .apply(&prepared())
            .unwrap();
        let expected = RailState::from_real(&[s, -s, 0.0, 0.0]).unwrap();
        assert!(equal_up_to_global_phase(&std_out, &expected, TOL));

        let dfs_out = readout_stage(Encoding::Dfs).apply(&prepared()).unwrap();
        let p = dfs_out.detector_probabilities();
        assert!(p[0] < TOL && p[1] < TOL);
        assert!((p[2] + p[3] - 1.0).abs() < TOL);

        for e in Encoding::ALL {
            assert!(readout_stage(e).is_unitary(TOL));
        }
    }

    #[test]
    fn readout_encodings_differ_by_cnot() {
        let via_swap = RailUnitary::rail_swap(4, 3, 4)
            .unwrap()
            .then(&readout_stage(Encoding::Standard))
            .unwrap();
        assert!(readout_stage(Encoding::Dfs).approx_eq(&via_swap, 0.0));
    }

    #[test]
    fn detector_maps() {
        let std = detector_map(Encoding::Standard);
        assert_eq!(std.verdict(1), Verdict::Constant);
        assert_eq!(std.verdict(4), Verdict::Balanced);
        for e in Encoding::ALL {
            let m = detector_map(e);
            assert_eq!(m.ports_for(Verdict::Constant).len(), 2);
            assert_eq!(m.ports_for(Verdict::Balanced).len(), 2);
        }
        for oracle in OracleSetting::ALL {
            let p = run_ideal(oracle, Encoding::Dfs);
            let map = detector_map(Encoding::Dfs);
            let lit: f64 = map
                .ports_for(Verdict::of(oracle))
                .iter()
                .map(|&port| p[port - 1])
                .sum();
            assert!((lit - 1.0).abs() < TOL, "{oracle}");
        }
    }

    #[test]
    fn ideal_runs() {
        assert!(close(
            &run_ideal(o(0, 0), Encoding::Standard),
            &[0.5, 0.5, 0.0, 0.0]
        ));
        assert!(close(
            &run_ideal(o(1, 0), Encoding::Standard),
            &[0.0, 0.0, 0.5, 0.5]
        ));
        assert!(close(
            &run_ideal(o(1, 1), Encoding::Standard),
            &[0.5, 0.5, 0.0, 0.0]
        ));
        for e in Encoding::ALL {
            assert!(close(&run_ideal(o(0, 0), e), &run_ideal(o(1, 1), e)));
            assert!(close(&run_ideal(o(0, 1), e), &run_ideal(o(1, 0), e)));
        }
    }

    #[test]
    fn noiseless_runs_never_err() {
        for oracle in OracleSetting::ALL {
            for e in Encoding::ALL {
                let p = run_ideal(oracle, e);
                assert!(error_probability(&p, oracle, e).unwrap().abs() < TOL);
                let map = detector_map(e);
                for port in map.ports_for(Verdict::of(oracle)) {
                    assert!((p[port - 1] - 0.5).abs() < TOL);
                }
            }
        }
    }

    #[test]
    fn error_probabilities() {
        let c = o(0, 0);
        let e = Encoding::Standard;
        assert_eq!(error_probability(&[0.5, 0.5, 0.0, 0.0], c, e).unwrap(), 0.0);
        assert_eq!(error_probability(&[0.0, 0.0, 0.5, 0.5], c, e).unwrap(), 1.0);
        for oracle in OracleSetting::ALL {
            for enc in Encoding::ALL {
                assert_eq!(error_probability(&[0.25; 4], oracle, enc).unwrap(), 0.5);
            }
        }
        assert!(matches!(
            error_probability(&[0.5, 0.5, 0.5, 0.0], c, e),
            Err(Error::NotNormalizedProbabilities(_))
        ));
        assert!(error_probability(&[1.0], c, e).is_err());
    }

    #[test]
    fn interferometer_census() {
        let all = enumerate_interferometers();
        assert_eq!(all.len(), 16);
        assert_eq!(active_interferometers(o(0, 0), Encoding::Standard).len(), 2);
        assert_eq!(interfered_pairs(Encoding::Standard), vec![(1, 3), (2, 4)]);
        assert_eq!(interfered_pairs(Encoding::Dfs), vec![(1, 4), (2, 3)]);

        // The f(0)=1 oracle routes the prepared rail-2 arm onto rail 1.
        let mz = active_interferometers(o(1, 0), Encoding::Standard);
        assert_eq!(
            mz[0].arms,
            [
                Arm {
                    prepared_rail: 2,
                    readout_rail: 1
                },
                Arm {
                    prepared_rail: 3,
                    readout_rail: 3
                },
            ]
        );
        for oracle in OracleSetting::ALL {
            for e in Encoding::ALL {
                let pairs: Vec<_> = active_interferometers(oracle, e)
                    .iter()
                    .map(MachZehnder::interfered_rails)
                    .collect();
                assert_eq!(pairs, interfered_pairs(e));
            }
        }
    }
}
