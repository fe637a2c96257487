//! Campaign configuration.
//!
//! A config file is flat TOML: every key is optional and matches a CLI flag
//! with `-` replaced by `_` (`baseline_error`, `noise_sigma`, ...). Values
//! given on the command line win over the file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::circuit::Encoding;
use crate::error::{Error, Result};
use crate::gates::OracleSetting;
use crate::noise::{calibrate_baseline, calibrate_collective_over, NoiseModel, PhaseDistribution};

/// Unvalidated settings as read from a file or the command line.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub oracle: Option<String>,
    pub encoding: Option<String>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub visibility: Option<f64>,
    pub baseline_error: Option<f64>,
    pub jitter_sigma: Option<f64>,
    pub noise_error: Option<f64>,
    pub noise_sigma: Option<f64>,
    pub noise_uniform: Option<bool>,
    pub noise_phase: Option<f64>,
    pub photons: Option<u64>,
    pub threads: Option<usize>,
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

impl RawConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config("config", e.message().to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config { field, message } => Error::Config {
                field,
                message: format!("{}: {message}", path.display()),
            },
            other => other,
        })
    }

    /// Fills every unset field of `self` from `fallback`. The collective and
    /// baseline groups are taken whole from whichever side sets them first.
    pub fn or(self, fallback: RawConfig) -> RawConfig {
        let self_sets_collective = self.noise_error.is_some()
            || self.noise_sigma.is_some()
            || self.noise_uniform.is_some()
            || self.noise_phase.is_some();
        let self_sets_baseline = self.baseline_error.is_some() || self.jitter_sigma.is_some();
        let (noise_error, noise_sigma, noise_uniform, noise_phase) = if self_sets_collective {
            (
                self.noise_error,
                self.noise_sigma,
                self.noise_uniform,
                self.noise_phase,
            )
        } else {
            (
                fallback.noise_error,
                fallback.noise_sigma,
                fallback.noise_uniform,
                fallback.noise_phase,
            )
        };
        let (baseline_error, jitter_sigma) = if self_sets_baseline {
            (self.baseline_error, self.jitter_sigma)
        } else {
            (fallback.baseline_error, fallback.jitter_sigma)
        };
        RawConfig {
            oracle: self.oracle.or(fallback.oracle),
            encoding: self.encoding.or(fallback.encoding),
            trials: self.trials.or(fallback.trials),
            seed: self.seed.or(fallback.seed),
            visibility: self.visibility.or(fallback.visibility),
            baseline_error,
            jitter_sigma,
            noise_error,
            noise_sigma,
            noise_uniform,
            noise_phase,
            photons: self.photons.or(fallback.photons),
            threads: self.threads.or(fallback.threads),
            csv: self.csv.or(fallback.csv),
            json: self.json.or(fallback.json),
        }
    }

    pub fn validate(self) -> Result<ExperimentConfig> {
        let oracles = parse_oracles(self.oracle.as_deref().unwrap_or("all"))?;
        let encodings = parse_encodings(self.encoding.as_deref().unwrap_or("both"))?;
        let trials = self.trials.unwrap_or(ExperimentConfig::DEFAULT_TRIALS);
        if trials == 0 {
            return Err(Error::config("trials", "must be at least 1"));
        }
        let visibility = self.visibility.unwrap_or(1.0);
        if !(0.0..=1.0).contains(&visibility) {
            return Err(Error::config(
                "visibility",
                format!("{visibility} outside [0, 1]"),
            ));
        }
        let baseline = match (self.baseline_error, self.jitter_sigma) {
            (Some(_), Some(_)) => {
                return Err(Error::config(
                    "baseline_error",
                    "conflicts with jitter_sigma; give one",
                ))
            }
            (Some(e), None) => BaselineSpec::TargetError(e),
            (None, Some(s)) => BaselineSpec::Sigma(s),
            (None, None) => BaselineSpec::None,
        };
        let uniform = self.noise_uniform.unwrap_or(false);
        let collective = match (
            self.noise_error,
            self.noise_sigma,
            uniform,
            self.noise_phase,
        ) {
            (None, None, false, None) => CollectiveSpec::None,
            (Some(e), None, false, None) => CollectiveSpec::TargetError(e),
            (None, Some(s), false, None) => CollectiveSpec::Sigma(s),
            (None, None, true, None) => CollectiveSpec::Uniform,
            (None, None, false, Some(phase)) => CollectiveSpec::Fixed(phase),
            _ => return Err(Error::config(
                "noise",
                "noise_error, noise_sigma, noise_uniform and noise_phase are mutually exclusive",
            )),
        };
        let noise = NoiseSpec {
            visibility,
            baseline,
            collective,
        };
        noise.resolve()?;
        if self.threads == Some(0) {
            return Err(Error::config("threads", "must be at least 1"));
        }
        Ok(ExperimentConfig {
            oracles,
            encodings,
            noise,
            trials,
            photons_per_trial: self.photons.unwrap_or(0),
            seed: self.seed.unwrap_or(ExperimentConfig::DEFAULT_SEED),
            threads: self.threads,
            csv: self.csv,
            json: self.json,
        })
    }
}

fn parse_oracles(s: &str) -> Result<Vec<OracleSetting>> {
    if s == "all" {
        return Ok(OracleSetting::ALL.to_vec());
    }
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        let o = OracleSetting::parse(part).ok_or_else(|| {
            Error::config(
                "oracle",
                format!("`{part}` is not one of 00, 01, 10, 11, all"),
            )
        })?;
        if !out.contains(&o) {
            out.push(o);
        }
    }
    out.sort();
    Ok(out)
}

fn parse_encodings(s: &str) -> Result<Vec<Encoding>> {
    if s == "both" {
        return Ok(Encoding::ALL.to_vec());
    }
    Encoding::parse(s).map(|e| vec![e]).ok_or_else(|| {
        Error::config(
            "encoding",
            format!("`{s}` is not one of standard, dfs, both"),
        )
    })
}

/// Source of the per-rail jitter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum BaselineSpec {
    None,
    /// Calibrate jitter so the baseline error hits this value.
    TargetError(f64),
    Sigma(f64),
}

/// Source of the collective dephasing on rails 2 and 3.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum CollectiveSpec {
    None,
    /// Calibrate so the standard-readout error, baseline included, hits this value.
    TargetError(f64),
    Sigma(f64),
    Uniform,
    /// The same phase, in radians, on every trial.
    Fixed(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub visibility: f64,
    pub baseline: BaselineSpec,
    pub collective: CollectiveSpec,
}

impl NoiseSpec {
    pub fn noiseless() -> Self {
        Self {
            visibility: 1.0,
            baseline: BaselineSpec::None,
            collective: CollectiveSpec::None,
        }
    }

    /// Turns targets into concrete distributions, baseline first.
    pub fn resolve(&self) -> Result<NoiseModel> {
        let with_field = |field: &'static str| {
            move |e: Error| match e {
                Error::Infeasible(m) | Error::Noise(m) => Error::config(field, m),
                other => other,
            }
        };
        let jitter = match self.baseline {
            BaselineSpec::None => PhaseDistribution::None,
            BaselineSpec::TargetError(e) => {
                calibrate_baseline(e, self.visibility).map_err(with_field("baseline_error"))?
            }
            BaselineSpec::Sigma(sigma) => PhaseDistribution::WrappedGaussian { sigma },
        };
        let partial = NoiseModel::new(PhaseDistribution::None, jitter, self.visibility)
            .map_err(with_field("jitter_sigma"))?;
        let collective = match self.collective {
            CollectiveSpec::None => PhaseDistribution::None,
            CollectiveSpec::TargetError(e) => {
                calibrate_collective_over(e, partial.baseline_factor())
                    .map_err(with_field("noise_error"))?
            }
            CollectiveSpec::Sigma(sigma) => PhaseDistribution::WrappedGaussian { sigma },
            CollectiveSpec::Uniform => PhaseDistribution::Uniform,
            CollectiveSpec::Fixed(phase) => PhaseDistribution::Fixed { phase },
        };
        NoiseModel::new(collective, jitter, self.visibility).map_err(with_field("noise_sigma"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub oracles: Vec<OracleSetting>,
    pub encodings: Vec<Encoding>,
    pub noise: NoiseSpec,
    pub trials: u64,
    /// 0 selects intensity mode; otherwise photons sampled per trial.
    pub photons_per_trial: u64,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool. Never affects results.
    pub threads: Option<usize>,
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

impl ExperimentConfig {
    pub const DEFAULT_TRIALS: u64 = 10_000;
    pub const DEFAULT_SEED: u64 = 2002;

    pub fn new(noise: NoiseSpec, trials: u64, seed: u64) -> Self {
        Self {
            oracles: OracleSetting::ALL.to_vec(),
            encodings: Encoding::ALL.to_vec(),
            noise,
            trials,
            photons_per_trial: 0,
            seed,
            threads: None,
            csv: None,
            json: None,
        }
    }
}
