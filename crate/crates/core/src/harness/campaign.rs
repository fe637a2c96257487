//! Monte Carlo campaigns over oracle × encoding × noise-condition grids.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{error_probability, oracle_output, readout_stage, Encoding};
use crate::error::{Error, Result};
use crate::gates::{OracleSetting, RAILS};
use crate::noise::{self, NoiseModel};

use super::config::{ExperimentConfig, NoiseSpec};

/// A named noise setting with its resolved distributions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseCondition {
    pub name: String,
    pub spec: NoiseSpec,
    pub model: NoiseModel,
    pub expected_standard_error: f64,
    pub expected_dfs_error: f64,
}

impl NoiseCondition {
    pub fn new(name: impl Into<String>, spec: NoiseSpec) -> Result<Self> {
        let model = spec.resolve()?;
        Ok(Self {
            name: name.into(),
            spec,
            expected_standard_error: model.expected_standard_error(),
            expected_dfs_error: model.expected_dfs_error(),
            model,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialResult {
    pub oracle: OracleSetting,
    pub encoding: Encoding,
    /// Port intensities, or normalized counts in shot-noise mode.
    pub probabilities: [f64; RAILS],
    pub counts: Option<[u64; RAILS]>,
    pub error: f64,
}

/// Averages for one (oracle, encoding, noise condition) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub oracle: String,
    pub f0: u8,
    pub f1: u8,
    pub class: String,
    pub encoding: String,
    pub noise_condition: String,
    pub trials: u64,
    pub probabilities: [f64; RAILS],
    pub error_rate: f64,
    pub stderr: f64,
}

/// Settings echoed into reports. Thread count is left out on purpose so
/// reports do not depend on it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub oracles: Vec<String>,
    pub encodings: Vec<String>,
    pub trials: u64,
    pub photons_per_trial: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReproductionCheck {
    pub name: String,
    pub noise_condition: String,
    pub encodings: Vec<String>,
    pub measured: f64,
    pub stderr: f64,
    pub reference_value: f64,
    pub lower: f64,
    pub upper: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub config: ConfigEcho,
    pub conditions: Vec<NoiseCondition>,
    pub cells: Vec<CellSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdicts: Option<Vec<ReproductionCheck>>,
}

impl RunSummary {
    pub fn cell(&self, o: OracleSetting, e: Encoding, condition: &str) -> Option<&CellSummary> {
        self.cells.iter().find(|c| {
            c.oracle == o.label() && c.encoding == e.label() && c.noise_condition == condition
        })
    }

    /// Unweighted mean error over all cells of `condition` whose encoding is
    /// in `encodings`, with the standard error of that mean.
    pub fn average_error(&self, condition: &str, encodings: &[Encoding]) -> Option<(f64, f64)> {
        let cells: Vec<&CellSummary> = self
            .cells
            .iter()
            .filter(|c| {
                c.noise_condition == condition && encodings.iter().any(|e| e.label() == c.encoding)
            })
            .collect();
        if cells.is_empty() {
            return None;
        }
        let n = cells.len() as f64;
        let mean = cells.iter().map(|c| c.error_rate).sum::<f64>() / n;
        let se = cells
            .iter()
            .map(|c| c.stderr * c.stderr)
            .sum::<f64>()
            .sqrt()
            / n;
        Some((mean, se))
    }

    pub fn all_verdicts_pass(&self) -> bool {
        self.verdicts
            .as_ref()
            .is_some_and(|v| v.iter().all(|c| c.passed))
    }
}

/// Fixed per-cell data: the state entering the readout and the readout matrix.
struct CellKernel {
    oracle: OracleSetting,
    encoding: Encoding,
    incoming: [Complex64; RAILS],
    readout: [[Complex64; RAILS]; RAILS],
}

impl CellKernel {
    fn new(oracle: OracleSetting, encoding: Encoding) -> Self {
        let incoming: [Complex64; RAILS] = oracle_output(oracle)
            .amplitudes()
            .try_into()
            .expect("four rails");
        let readout = readout_stage(encoding);
        let mut m = [[Complex64::new(0.0, 0.0); RAILS]; RAILS];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, x) in row.iter_mut().enumerate() {
                *x = readout.entry(r + 1, c + 1);
            }
        }
        Self {
            oracle,
            encoding,
            incoming,
            readout: m,
        }
    }

    /// Detector probabilities after applying `phases` between oracle and readout.
    fn intensities(&self, phases: &[f64; RAILS]) -> [f64; RAILS] {
        let noisy: [Complex64; RAILS] =
            std::array::from_fn(|k| self.incoming[k] * Complex64::from_polar(1.0, phases[k]));
        std::array::from_fn(|port| {
            self.readout[port]
                .iter()
                .zip(&noisy)
                .map(|(u, a)| u * a)
                .sum::<Complex64>()
                .norm_sqr()
        })
    }

    fn trial(&self, model: &NoiseModel, photons: u64, rng: &mut impl Rng) -> TrialResult {
        let realization = noise::sample(model, rng);
        let mut p = self.intensities(&realization.phases);
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= total);
        let counts = (photons > 0).then(|| multinomial(photons, &p, rng));
        if let Some(counts) = counts {
            p = std::array::from_fn(|k| counts[k] as f64 / photons as f64);
        }
        let error = error_probability(&p, self.oracle, self.encoding)
            .expect("probabilities are normalized");
        TrialResult {
            oracle: self.oracle,
            encoding: self.encoding,
            probabilities: p,
            counts,
            error,
        }
    }
}

/// Multinomial draw by successive conditional binomials.
fn multinomial(n: u64, p: &[f64; RAILS], rng: &mut impl Rng) -> [u64; RAILS] {
    let mut counts = [0u64; RAILS];
    let mut remaining = n;
    let mut mass = 1.0;
    for k in 0..RAILS - 1 {
        if remaining == 0 {
            break;
        }
        let q = if mass > 0.0 {
            (p[k] / mass).clamp(0.0, 1.0)
        } else {
            0.0
        };
        counts[k] = Binomial::new(remaining, q)
            .expect("q in [0, 1]")
            .sample(rng);
        remaining -= counts[k];
        mass -= p[k];
    }
    counts[RAILS - 1] = remaining;
    counts
}

/// Stable stream identifier of a cell, independent of which cells are selected.
fn cell_id(condition: usize, o: OracleSetting, e: Encoding) -> u64 {
    let oi = OracleSetting::ALL
        .iter()
        .position(|x| *x == o)
        .expect("known oracle");
    let ei = Encoding::ALL
        .iter()
        .position(|x| *x == e)
        .expect("known encoding");
    (condition * OracleSetting::ALL.len() * Encoding::ALL.len() + oi * Encoding::ALL.len() + ei)
        as u64
}

fn summarize(results: &[TrialResult], condition: &str) -> CellSummary {
    let n = results.len() as f64;
    let mut probabilities = [0.0; RAILS];
    let mut error_sum = 0.0;
    for r in results {
        for (acc, p) in probabilities.iter_mut().zip(&r.probabilities) {
            *acc += p;
        }
        error_sum += r.error;
    }
    probabilities.iter_mut().for_each(|p| *p /= n);
    let mean = error_sum / n;
    let stderr = if results.len() > 1 {
        let var = results
            .iter()
            .map(|r| (r.error - mean).powi(2))
            .sum::<f64>()
            / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    let first = &results[0];
    CellSummary {
        oracle: first.oracle.label(),
        f0: u8::from(first.oracle.f0),
        f1: u8::from(first.oracle.f1),
        class: first.oracle.class_name().to_string(),
        encoding: first.encoding.label().to_string(),
        noise_condition: condition.to_string(),
        trials: results.len() as u64,
        probabilities,
        error_rate: mean,
        stderr,
    }
}

/// Runs every trial of one cell. Trials are evaluated in parallel but
/// collected in index order, so sums do not depend on scheduling.
pub fn run_cell(
    oracle: OracleSetting,
    encoding: Encoding,
    condition_index: usize,
    model: &NoiseModel,
    config: &ExperimentConfig,
) -> Vec<TrialResult> {
    let kernel = CellKernel::new(oracle, encoding);
    let cell = cell_id(condition_index, oracle, encoding);
    (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = noise::trial_stream(config.seed, cell, t);
            kernel.trial(model, config.photons_per_trial, &mut rng)
        })
        .collect()
}

/// Runs the full grid for the given noise conditions.
pub fn run_conditions(
    config: &ExperimentConfig,
    conditions: Vec<NoiseCondition>,
) -> Result<RunSummary> {
    if config.trials == 0 {
        return Err(Error::config("trials", "must be at least 1"));
    }
    let work = || {
        let mut cells = Vec::new();
        for (ci, condition) in conditions.iter().enumerate() {
            for &o in &config.oracles {
                for &e in &config.encodings {
                    let results = run_cell(o, e, ci, &condition.model, config);
                    cells.push(summarize(&results, &condition.name));
                }
            }
        }
        cells
    };
    let cells = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::config("threads", e.to_string()))?
            .install(work),
        None => work(),
    };
    Ok(RunSummary {
        config: ConfigEcho {
            oracles: config.oracles.iter().map(OracleSetting::label).collect(),
            encodings: config
                .encodings
                .iter()
                .map(|e| e.label().to_string())
                .collect(),
            trials: config.trials,
            photons_per_trial: config.photons_per_trial,
            seed: config.seed,
        },
        conditions,
        cells,
        verdicts: None,
    })
}

/// Runs the configured noise as a single condition named `configured`.
pub fn run_campaign(config: &ExperimentConfig) -> Result<RunSummary> {
    let condition = NoiseCondition::new("configured", config.noise)?;
    run_conditions(config, vec![condition])
}
