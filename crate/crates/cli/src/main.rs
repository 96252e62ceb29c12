use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use framegeo::OracleConfig;
use framegeo_cli::replay::Replay;
use framegeo_cli::run::{self, BenchmarkSpec, DeviationError, MAX_DEVIATION};
use framegeo_cli::timing::TimingConfig;
use framegeo_cli::{chain, imu, oracle, Experiment, Method};

#[derive(Parser)]
#[command(
    name = "framegeo",
    version,
    about = "Benchmark and verify frame-checked Jacobians"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify every method against the hand-written one, then time it.
    Bench {
        #[command(flatten)]
        spec: SpecArgs,
        /// Where to write the CSV.
        #[arg(long)]
        out: PathBuf,
        /// Timed evaluations per cell.
        #[arg(long, default_value_t = framegeo_cli::timing::DEFAULT_EVALUATIONS)]
        evaluations: usize,
    },
    /// Check every method against the hand-written one without timing.
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        /// Re-check a single dumped input instead.
        #[arg(long, conflicts_with = "experiment")]
        replay: Option<PathBuf>,
        /// Write the dump of a failing input here.
        #[arg(long)]
        replay_out: Option<PathBuf>,
    },
    /// Compare all Jacobians against finite differences.
    Oracle {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        step: f64,
        #[arg(long, default_value_t = 1e-5)]
        tolerance: f64,
    },
    /// Print the expression tree with each node's frame signature.
    Outline {
        #[arg(long, value_enum)]
        experiment: Experiment,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
}

#[derive(Args)]
struct SpecArgs {
    #[arg(long, value_enum)]
    experiment: Option<Experiment>,
    #[arg(long, default_value_t = 1)]
    n_min: usize,
    #[arg(long, default_value_t = chain::MAX_N)]
    n_max: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SpecArgs {
    fn spec(&self) -> Result<BenchmarkSpec> {
        Ok(BenchmarkSpec {
            experiment: self.experiment.context("--experiment is required")?,
            n_min: self.n_min,
            n_max: self.n_max,
            trials: self.trials,
            seed: self.seed,
        })
    }
}

fn report_deviation(err: &DeviationError, dump: Option<&Path>) -> Result<()> {
    let text = err.replay.to_text();
    eprintln!("error: {err}");
    match dump {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("replay written to {}", path.display());
        }
        None => eprint!("--- replay ---\n{text}"),
    }
    Ok(())
}

fn replay_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".replay");
    out.with_file_name(name)
}

fn bench(spec: &BenchmarkSpec, out: &Path, evaluations: usize) -> Result<ExitCode> {
    spec.validate()?;
    let mut cfg = TimingConfig::from_env()?;
    cfg.evaluations = evaluations;
    match run::run(spec, &cfg) {
        Ok(records) => {
            let file = fs::File::create(out).with_context(|| format!("creating {}", out.display()))?;
            run::write_csv(&records, file)?;
            eprintln!("{} records written to {}", records.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => match e.downcast::<DeviationError>() {
            Ok(dev) => {
                report_deviation(&dev, Some(&replay_path(out)))?;
                Ok(ExitCode::from(2))
            }
            Err(e) => Err(e),
        },
    }
}

fn verify(spec: &BenchmarkSpec, dump: Option<&Path>) -> Result<ExitCode> {
    spec.validate()?;
    match run::verify(spec) {
        Ok(checks) => {
            for c in &checks {
                println!(
                    "{} N={} {:<13} trials={} skipped={} max_abs_dev={:e}",
                    c.experiment,
                    c.n,
                    c.method.name(),
                    c.trials,
                    c.skipped,
                    c.max_abs_dev
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(dev) => {
            report_deviation(&dev, dump)?;
            Ok(ExitCode::from(2))
        }
    }
}

fn verify_replay(path: &Path) -> Result<ExitCode> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let replay: Replay = text
        .parse()
        .with_context(|| format!("parsing {}", path.display()))?;
    let hand = run::evaluate(Method::Hand, &replay.input);
    let mut ok = true;
    for method in Method::ALL {
        let out = run::evaluate(method, &replay.input);
        let d = out
            .0
            .iter()
            .zip(&hand.0)
            .map(|(a, b)| (a - b).abs())
            .chain(out.1.iter().zip(&hand.1).map(|(a, b)| (a - b).abs().max()))
            .fold(0.0, f64::max);
        let pass = d <= MAX_DEVIATION;
        ok &= pass;
        println!(
            "{:<13} max_abs_dev={d:e} {}",
            method.name(),
            if pass { "ok" } else { "FAIL" }
        );
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn main() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Bench {
            spec,
            out,
            evaluations,
        } => bench(&spec.spec()?, &out, evaluations),
        Command::Verify {
            spec,
            replay,
            replay_out,
        } => match replay {
            Some(path) => verify_replay(&path),
            None => verify(&spec.spec()?, replay_out.as_deref()),
        },
        Command::Oracle {
            samples,
            seed,
            step,
            tolerance,
        } => {
            let cfg = OracleConfig::new(step, tolerance)?;
            let report = oracle::sweep(samples, seed, &cfg);
            print!("{report}");
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Outline { experiment, n } => {
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0);
            let text = match experiment {
                Experiment::Chain => {
                    anyhow::ensure!(
                        (1..=chain::MAX_N).contains(&n),
                        "n must be in 1..={}",
                        chain::MAX_N
                    );
                    let input = chain::ChainInput::random(n, &mut rng);
                    framegeo_cli::with_chain!(n, m => m::outline(&m::Leaves::new(&input)))
                }
                Experiment::Imu => imu::outline(&imu::ImuInput::random(&mut rng)),
            };
            print!("{text}");
            Ok(ExitCode::SUCCESS)
        }
    }
}
