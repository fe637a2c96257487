//! The three-condition reproduction: baseline imperfections, added
//! turbulence read out in the standard encoding, and the same turbulence
//! read out in the parity-protected encoding.

use crate::circuit::Encoding;
use crate::error::{Error, Result};

use super::campaign::{run_conditions, NoiseCondition, ReproductionCheck, RunSummary};
use super::config::{BaselineSpec, CollectiveSpec, ExperimentConfig, NoiseSpec};

pub const VISIBILITY: f64 = 0.95;
pub const BASELINE_ERROR: f64 = 0.08;
pub const TURBULENT_ERROR: f64 = 0.35;
pub const PROTECTED_ERROR: f64 = 0.07;
/// Half-width of the acceptance band, in absolute error rate.
pub const BAND: f64 = 0.02;
pub const MIN_TRIALS: u64 = 10_000;

pub const IDEAL: &str = "ideal";
pub const BASELINE: &str = "baseline";
pub const TURBULENT: &str = "turbulent";

pub fn conditions() -> Result<Vec<NoiseCondition>> {
    let baseline = NoiseSpec {
        visibility: VISIBILITY,
        baseline: BaselineSpec::TargetError(BASELINE_ERROR),
        collective: CollectiveSpec::None,
    };
    let turbulent = NoiseSpec {
        collective: CollectiveSpec::TargetError(TURBULENT_ERROR),
        ..baseline
    };
    Ok(vec![
        NoiseCondition::new(IDEAL, NoiseSpec::noiseless())?,
        NoiseCondition::new(BASELINE, baseline)?,
        NoiseCondition::new(TURBULENT, turbulent)?,
    ])
}

fn check(
    s: &RunSummary,
    name: &str,
    condition: &str,
    encodings: &[Encoding],
    reference_value: f64,
    (lower, upper): (f64, f64),
) -> ReproductionCheck {
    let (measured, stderr) = s
        .average_error(condition, encodings)
        .expect("reproduction grid covers every condition");
    ReproductionCheck {
        name: name.to_string(),
        noise_condition: condition.to_string(),
        encodings: encodings.iter().map(|e| e.label().to_string()).collect(),
        measured,
        stderr,
        reference_value,
        lower,
        upper,
        passed: (lower..=upper).contains(&measured),
    }
}

/// Runs all oracles and both encodings under the three conditions and
/// attaches pass/fail verdicts.
pub fn reproduce_paper(seed: u64, trials: u64, threads: Option<usize>) -> Result<RunSummary> {
    if trials < MIN_TRIALS {
        return Err(Error::config(
            "trials",
            format!("reproduction needs at least {MIN_TRIALS} trials"),
        ));
    }
    let mut config = ExperimentConfig::new(NoiseSpec::noiseless(), trials, seed);
    config.threads = threads;
    let mut summary = run_conditions(&config, conditions()?)?;
    let verdicts = vec![
        check(
            &summary,
            "baseline",
            BASELINE,
            &Encoding::ALL,
            BASELINE_ERROR,
            (BASELINE_ERROR - BAND, BASELINE_ERROR + BAND),
        ),
        check(
            &summary,
            "turbulent standard",
            TURBULENT,
            &[Encoding::Standard],
            TURBULENT_ERROR,
            (TURBULENT_ERROR - BAND, TURBULENT_ERROR + BAND),
        ),
        check(
            &summary,
            "turbulent dfs",
            TURBULENT,
            &[Encoding::Dfs],
            PROTECTED_ERROR,
            (0.0, BASELINE_ERROR + BAND),
        ),
    ];
    summary.verdicts = Some(verdicts);
    Ok(summary)
}
