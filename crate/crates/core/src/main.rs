use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use railsim::dfs::{find_dfs, verify_dfs, DephasingPattern};
use railsim::harness::{
    emit_csv, emit_json, report, reproduce_paper, run_campaign, RawConfig, RunSummary,
};
use railsim::noise::trial_stream;
use railsim::Error;

const EXIT_CONFIG: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_VERDICT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "railsim",
    version,
    about = "Four-rail Deutsch-Jozsa interferometer simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo campaign for one noise setting.
    Run(RunArgs),
    /// Reproduce the baseline / turbulent / protected error rates.
    Reproduce(ReproduceArgs),
    /// Print the noiseless detector table.
    Ideal(OutputArgs),
    /// Group rails of a dephasing pattern into decoherence-free subspaces.
    DfsFind(DfsArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Write the per-cell table as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the full summary as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Flat TOML file with the same keys as the flags (underscored).
    #[arg(long)]
    config: Option<PathBuf>,
    /// 00, 01, 10, 11, a comma-separated list, or all.
    #[arg(long)]
    oracle: Option<String>,
    /// standard, dfs or both.
    #[arg(long)]
    encoding: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Fringe visibility in [0, 1].
    #[arg(long)]
    visibility: Option<f64>,
    /// Target error without added noise; calibrates per-rail jitter.
    #[arg(long, conflicts_with = "jitter_sigma")]
    baseline_error: Option<f64>,
    /// Explicit per-rail jitter width, radians.
    #[arg(long)]
    jitter_sigma: Option<f64>,
    /// Target standard-readout error with collective noise; calibrates its width.
    #[arg(long, group = "collective")]
    noise_error: Option<f64>,
    /// Explicit collective noise width, radians.
    #[arg(long, group = "collective")]
    noise_sigma: Option<f64>,
    /// Collective phase uniform on [0, 2π).
    #[arg(long, group = "collective")]
    noise_uniform: bool,
    /// Fixed collective phase on rails 2 and 3, radians.
    #[arg(long, group = "collective", allow_hyphen_values = true)]
    noise_phase: Option<f64>,
    /// Photons per trial; 0 keeps intensity mode.
    #[arg(long)]
    photons: Option<u64>,
    /// Worker threads (results do not depend on it).
    #[arg(long)]
    threads: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ReproduceArgs {
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 2002)]
    seed: u64,
    #[arg(long)]
    threads: Option<usize>,
    /// Exit with status 3 when any verdict fails.
    #[arg(long)]
    check: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct DfsArgs {
    /// Comma-separated per-rail coefficients, e.g. 0,1,1,0.
    #[arg(long, default_value = "0,1,1,0")]
    pattern: String,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Random trials for the invariance check; 0 skips it.
    #[arg(long, default_value_t = 100)]
    verify_trials: usize,
    #[arg(long, default_value_t = 2002)]
    seed: u64,
}

impl RunArgs {
    fn raw(&self) -> RawConfig {
        RawConfig {
            oracle: self.oracle.clone(),
            encoding: self.encoding.clone(),
            trials: self.trials,
            seed: self.seed,
            visibility: self.visibility,
            baseline_error: self.baseline_error,
            jitter_sigma: self.jitter_sigma,
            noise_error: self.noise_error,
            noise_sigma: self.noise_sigma,
            noise_uniform: self.noise_uniform.then_some(true),
            noise_phase: self.noise_phase,
            photons: self.photons,
            threads: self.threads,
            csv: self.output.csv.clone(),
            json: self.output.json.clone(),
        }
    }
}

fn write_outputs(
    s: &RunSummary,
    csv: Option<&PathBuf>,
    json: Option<&PathBuf>,
) -> railsim::Result<()> {
    if let Some(path) = csv {
        emit_csv(s, path)?;
    }
    if let Some(path) = json {
        emit_json(s, path)?;
    }
    Ok(())
}

fn run(args: RunArgs) -> railsim::Result<u8> {
    let file = match &args.config {
        Some(path) => RawConfig::from_file(path)?,
        None => RawConfig::default(),
    };
    let config = args.raw().or(file).validate()?;
    let summary = run_campaign(&config)?;
    print!("{}", report::text_table(&summary));
    write_outputs(&summary, config.csv.as_ref(), config.json.as_ref())?;
    Ok(0)
}

fn reproduce(args: ReproduceArgs) -> railsim::Result<u8> {
    if args.threads == Some(0) {
        return Err(Error::Config {
            field: "threads".into(),
            message: "must be at least 1".into(),
        });
    }
    let summary = reproduce_paper(args.seed, args.trials, args.threads)?;
    print!("{}", report::text_table(&summary));
    write_outputs(
        &summary,
        args.output.csv.as_ref(),
        args.output.json.as_ref(),
    )?;
    Ok(if args.check && !summary.all_verdicts_pass() {
        EXIT_VERDICT
    } else {
        0
    })
}

fn ideal(args: OutputArgs) -> railsim::Result<u8> {
    use railsim::harness::{run_conditions, ExperimentConfig, NoiseCondition, NoiseSpec};
    let condition = NoiseCondition::new("ideal", NoiseSpec::noiseless())?;
    let summary = run_conditions(
        &ExperimentConfig::new(NoiseSpec::noiseless(), 1, 0),
        vec![condition],
    )?;
    print!("{}", report::csv_string(&summary));
    write_outputs(&summary, args.csv.as_ref(), args.json.as_ref())?;
    Ok(0)
}

fn dfs_find(args: DfsArgs) -> railsim::Result<u8> {
    let coefficients = args
        .pattern
        .split(',')
        .map(|c| {
            c.trim().parse::<f64>().map_err(|e| Error::Config {
                field: "pattern".into(),
                message: format!("`{c}`: {e}"),
            })
        })
        .collect::<railsim::Result<Vec<_>>>()?;
    let pattern = DephasingPattern::new(coefficients)?;
    let partition = find_dfs(&pattern, args.tol);
    println!("{partition}");
    if args.verify_trials > 0 {
        let mut rng = trial_stream(args.seed, 0, 0);
        let ok = verify_dfs(
            partition.subspaces(),
            &pattern,
            args.verify_trials,
            &mut rng,
        );
        println!(
            "verified over {} trials: {}",
            args.verify_trials,
            if ok { "decoherence-free" } else { "FAILED" }
        );
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Reproduce(a) => reproduce(a),
        Command::Ideal(a) => ideal(a),
        Command::DfsFind(a) => dfs_find(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Io { .. } => EXIT_IO,
                _ => EXIT_CONFIG,
            })
        }
    }
}
