//! Stochastic phase noise on the four rails.
//!
//! Three independent sources are modeled, all as per-rail phases applied
//! between the oracle and the readout stage:
//!
//! * collective parity dephasing: one random phase shared by rails 2 and 3,
//!   equivalent up to a global phase to `exp(i σz¹σz² δφ)`;
//! * per-rail jitter: independent phases on every rail (alignment drift);
//! * finite fringe visibility `V`: for each readout interferometer, with
//!   probability `1 − V` one of its arms is fully dephased, which scales the
//!   mean interference cross-term by exactly `V`.
//!
//! Rails 3 and 4 sit in different readout interferometers under both
//! encodings ((1,3)/(2,4) and (2,3)/(1,4)), so the visibility draws land on
//! those two rails regardless of readout.

use std::f64::consts::TAU;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::RAILS;
use crate::optics::RailUnitary;

/// Distribution of a single random phase, in radians.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhaseDistribution {
    None,
    Fixed { phase: f64 },
    Uniform,
    WrappedGaussian { sigma: f64 },
}

impl PhaseDistribution {
    pub fn validate(&self) -> Result<()> {
        match *self {
            PhaseDistribution::Fixed { phase } if !phase.is_finite() => {
                Err(Error::Noise(format!("fixed phase {phase} is not finite")))
            }
            PhaseDistribution::WrappedGaussian { sigma }
                if !(sigma >= 0.0 && sigma.is_finite()) =>
            {
                Err(Error::Noise(format!(
                    "sigma {sigma} must be finite and >= 0"
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            PhaseDistribution::None => 0.0,
            PhaseDistribution::Fixed { phase } => phase,
            PhaseDistribution::Uniform => rng.gen_range(0.0..TAU),
            PhaseDistribution::WrappedGaussian { sigma } => {
                if sigma == 0.0 {
                    return 0.0;
                }
                let normal = Normal::new(0.0, sigma).expect("validated sigma");
                normal.sample(rng).rem_euclid(TAU)
            }
        }
    }

    /// Smallest-parameter distribution with `E[cos φ] = factor`, for
    /// `factor ∈ [0, 1]`.
    pub fn with_interference_factor(factor: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&factor) {
            return Err(Error::Infeasible(format!(
                "interference factor {factor} outside [0, 1]"
            )));
        }
        Ok(if factor == 1.0 {
            PhaseDistribution::Fixed { phase: 0.0 }
        } else if factor == 0.0 {
            PhaseDistribution::Uniform
        } else {
            PhaseDistribution::WrappedGaussian {
                sigma: (-2.0 * factor.ln()).sqrt(),
            }
        })
    }
}

/// `E[cos φ]`.
pub fn mean_interference_factor(d: &PhaseDistribution) -> f64 {
    match *d {
        PhaseDistribution::None => 1.0,
        PhaseDistribution::Fixed { phase } => phase.cos(),
        PhaseDistribution::Uniform => 0.0,
        PhaseDistribution::WrappedGaussian { sigma } => (-sigma * sigma / 2.0).exp(),
    }
}

/// `E[cos(φ₁ − φ₂)]` for two independent draws, i.e. `|E[e^{iφ}]|²`.
pub fn difference_interference_factor(d: &PhaseDistribution) -> f64 {
    match *d {
        PhaseDistribution::None | PhaseDistribution::Fixed { .. } => 1.0,
        PhaseDistribution::Uniform => 0.0,
        PhaseDistribution::WrappedGaussian { sigma } => (-sigma * sigma).exp(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub collective: PhaseDistribution,
    pub per_rail_jitter: PhaseDistribution,
    pub visibility: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self::noiseless()
    }
}

impl NoiseModel {
    pub fn new(
        collective: PhaseDistribution,
        per_rail_jitter: PhaseDistribution,
        visibility: f64,
    ) -> Result<Self> {
        let m = Self {
            collective,
            per_rail_jitter,
            visibility,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn noiseless() -> Self {
        Self {
            collective: PhaseDistribution::None,
            per_rail_jitter: PhaseDistribution::None,
            visibility: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.collective.validate()?;
        self.per_rail_jitter.validate()?;
        if !(0.0..=1.0).contains(&self.visibility) {
            return Err(Error::Noise(format!(
                "visibility {} outside [0, 1]",
                self.visibility
            )));
        }
        Ok(())
    }

    /// Mean interference factor of one readout interferometer without the
    /// collective phase: `V · E[cos Δ_jitter]`.
    pub fn baseline_factor(&self) -> f64 {
        self.visibility * difference_interference_factor(&self.per_rail_jitter)
    }

    /// Closed-form mean error of the standard readout.
    pub fn expected_standard_error(&self) -> f64 {
        (1.0 - self.baseline_factor() * mean_interference_factor(&self.collective)) / 2.0
    }

    /// Closed-form mean error of the parity-protected readout, which does
    /// not see the collective phase.
    pub fn expected_dfs_error(&self) -> f64 {
        (1.0 - self.baseline_factor()) / 2.0
    }
}

/// Per-rail phases for one trial.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseRealization {
    pub phases: [f64; RAILS],
}

impl NoiseRealization {
    pub fn unitary(&self) -> RailUnitary {
        RailUnitary::diagonal_phases(&self.phases)
    }
}

/// Draws one realization. The draw order is fixed (collective, four jitter
/// phases, two visibility events) so a seeded stream is reproducible.
pub fn sample<R: Rng + ?Sized>(m: &NoiseModel, rng: &mut R) -> NoiseRealization {
    let mut phases = [0.0; RAILS];
    let collective = m.collective.sample(rng);
    phases[1] += collective;
    phases[2] += collective;
    for p in phases.iter_mut() {
        *p += m.per_rail_jitter.sample(rng);
    }
    for rail in [3, 4] {
        if m.visibility < 1.0 && !rng.gen_bool(m.visibility) {
            phases[rail - 1] += rng.gen_range(0.0..TAU);
        }
    }
    NoiseRealization { phases }
}

/// Diagonal unitary of a realization on `n` rails.
pub fn realization_unitary(r: &NoiseRealization, n: usize) -> Result<RailUnitary> {
    if n != RAILS {
        return Err(Error::Dimension {
            expected: RAILS,
            found: n,
        });
    }
    Ok(r.unitary())
}

/// Collective dephasing with standard-readout error `target_error` and no
/// other imperfections.
pub fn calibrate_collective(target_error: f64) -> Result<PhaseDistribution> {
    calibrate_collective_over(target_error, 1.0)
}

/// Collective dephasing that brings the standard-readout error to
/// `target_error` on top of baseline imperfections with interference factor
/// `baseline_factor` (see [`NoiseModel::baseline_factor`]).
pub fn calibrate_collective_over(
    target_error: f64,
    baseline_factor: f64,
) -> Result<PhaseDistribution> {
    if !(0.0..=0.5).contains(&target_error) {
        return Err(Error::Infeasible(format!(
            "target error {target_error} outside [0, 0.5]"
        )));
    }
    if !(baseline_factor > 0.0 && baseline_factor <= 1.0) {
        return Err(Error::Infeasible(format!(
            "baseline interference factor {baseline_factor} outside (0, 1]"
        )));
    }
    let floor = (1.0 - baseline_factor) / 2.0;
    let factor = (1.0 - 2.0 * target_error) / baseline_factor;
    if factor > 1.0 + 1e-12 {
        return Err(Error::Infeasible(format!(
            "target error {target_error} is below the baseline error {floor:.6}"
        )));
    }
    PhaseDistribution::with_interference_factor(factor.min(1.0))
}

/// Per-rail jitter that, together with visibility `visibility`, yields a
/// baseline error of `target_error` in either readout.
pub fn calibrate_baseline(target_error: f64, visibility: f64) -> Result<PhaseDistribution> {
    if !(0.0..=1.0).contains(&visibility) {
        return Err(Error::Infeasible(format!(
            "visibility {visibility} outside [0, 1]"
        )));
    }
    if !(0.0..=0.5).contains(&target_error) {
        return Err(Error::Infeasible(format!(
            "target error {target_error} outside [0, 0.5]"
        )));
    }
    let floor = (1.0 - visibility) / 2.0;
    let needed = 1.0 - 2.0 * target_error;
    if needed == 0.0 {
        return Ok(PhaseDistribution::Uniform);
    }
    let ratio = visibility / needed;
    if ratio < 1.0 - 1e-12 {
        return Err(Error::Infeasible(format!(
            "target error {target_error} is below the visibility floor (1 - V)/2 = {floor:.6}"
        )));
    }
    Ok(PhaseDistribution::WrappedGaussian {
        sigma: ratio.ln().max(0.0).sqrt(),
    })
}

/// Error caused by a static phase error `ε` on one arm of an interferometer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseSensitivity {
    /// Probability mass leaking to the wrong port, `(1 − cos ε)/2`.
    pub error_rate: f64,
    /// Drop of the bright-port normalized fringe, `1 − cos ε`.
    pub fringe_deficit: f64,
}

pub fn phase_error_sensitivity(epsilon: f64) -> PhaseSensitivity {
    let loss = 1.0 - epsilon.cos();
    PhaseSensitivity {
        error_rate: loss / 2.0,
        fringe_deficit: loss,
    }
}

/// Independent random stream for one trial of one campaign cell.
pub fn trial_stream(seed: u64, cell: u64, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&cell.to_le_bytes());
    key[16..24].copy_from_slice(&trial.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}
