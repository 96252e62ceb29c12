//! Verification and timing of every (N, method) cell of an experiment.

use std::fmt;
use std::io;

use anyhow::{bail, Result};
use nalgebra::Matrix3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chain::{self, ChainInput, MAX_N};
use crate::imu::{self, ImuInput};
use crate::replay::{Input, Replay};
use crate::timing::{measure, Timing, TimingConfig};
use crate::{with_chain, Experiment, Method};

/// Largest tolerated deviation of any evaluator from the hand-written one.
pub const MAX_DEVIATION: f64 = 1e-10;

pub const CSV_HEADER: [&str; 7] = [
    "experiment",
    "N",
    "method",
    "trials",
    "mean_ns",
    "stddev_ns",
    "max_abs_dev",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BenchmarkSpec {
    pub experiment: Experiment,
    pub n_min: usize,
    pub n_max: usize,
    pub trials: usize,
    pub seed: u64,
}

impl BenchmarkSpec {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            bail!("trials must be positive");
        }
        if self.experiment == Experiment::Chain
            && !(1 <= self.n_min && self.n_min <= self.n_max && self.n_max <= MAX_N)
        {
            bail!(
                "chain lengths must satisfy 1 <= n-min <= n-max <= {MAX_N}, got {}..={}",
                self.n_min,
                self.n_max
            );
        }
        Ok(())
    }

    /// Problem sizes covered. The IMU residual has a single size, reported
    /// as N = 1.
    pub fn sizes(&self) -> Vec<usize> {
        match self.experiment {
            Experiment::Chain => (self.n_min..=self.n_max).collect(),
            Experiment::Imu => vec![1],
        }
    }

    /// The seeded trial inputs for size `n`, with singular ones removed.
    /// Returns the inputs and how many were removed.
    pub fn inputs(&self, n: usize) -> (Vec<Input>, usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(n as u64);
        let mut kept = Vec::with_capacity(self.trials);
        let mut skipped = 0;
        for _ in 0..self.trials {
            match self.experiment {
                Experiment::Chain => kept.push(Input::Chain(ChainInput::random(n, &mut rng))),
                Experiment::Imu => {
                    let x = ImuInput::random(&mut rng);
                    if x.is_singular() {
                        skipped += 1;
                    } else {
                        kept.push(Input::Imu(x));
                    }
                }
            }
        }
        (kept, skipped)
    }
}

/// Value coefficients and Jacobians of one input by one method.
pub fn evaluate(method: Method, input: &Input) -> (Vec<f64>, Vec<Matrix3<f64>>) {
    match input {
        Input::Chain(x) => {
            let out = chain::evaluate(method, x);
            (out.value.0.iter().copied().collect(), out.jacobians)
        }
        Input::Imu(x) => {
            let out = imu::evaluate(method, x);
            (out.value.0.iter().copied().collect(), out.jacobians.to_vec())
        }
    }
}

fn deviation(a: &(Vec<f64>, Vec<Matrix3<f64>>), b: &(Vec<f64>, Vec<Matrix3<f64>>)) -> f64 {
    let v = a.0.iter().zip(&b.0).map(|(x, y)| (x - y).abs());
    let j = a.1.iter().zip(&b.1).map(|(x, y)| (x - y).abs().max());
    v.chain(j)
        .fold(0.0, |m, d| if d.is_nan() { f64::INFINITY } else { m.max(d) })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellCheck {
    pub experiment: Experiment,
    pub n: usize,
    pub method: Method,
    pub trials: usize,
    pub skipped: usize,
    /// Worst deviation from the hand-written evaluator.
    pub max_abs_dev: f64,
}

/// An evaluator disagreed with the hand-written one.
#[derive(Clone, Debug)]
pub struct DeviationError {
    pub deviation: f64,
    pub replay: Replay,
}

impl fmt::Display for DeviationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} deviates from hand by {:e} (limit {:e}) on {} N={} trial {}",
            self.replay.method,
            self.deviation,
            MAX_DEVIATION,
            self.replay.experiment(),
            self.replay.n(),
            self.replay.trial
        )
    }
}

impl std::error::Error for DeviationError {}

/// Checks every method against the hand-written one on every trial input.
pub fn verify(spec: &BenchmarkSpec) -> Result<Vec<CellCheck>, DeviationError> {
    verify_with(spec, evaluate)
}

/// [`verify`] with a substitute evaluator.
#[doc(hidden)]
pub fn verify_with(
    spec: &BenchmarkSpec,
    eval: impl Fn(Method, &Input) -> (Vec<f64>, Vec<Matrix3<f64>>),
) -> Result<Vec<CellCheck>, DeviationError> {
    let mut checks = Vec::new();
    for n in spec.sizes() {
        let (inputs, skipped) = spec.inputs(n);
        let mut worst = [0.0f64; 4];
        for (trial, input) in inputs.iter().enumerate() {
            let hand = eval(Method::Hand, input);
            for (k, method) in Method::ALL.into_iter().enumerate() {
                let d = deviation(&eval(method, input), &hand);
                if !(d <= MAX_DEVIATION) {
                    return Err(DeviationError {
                        deviation: d,
                        replay: Replay {
                            method,
                            trial,
                            input: input.clone(),
                        },
                    });
                }
                worst[k] = worst[k].max(d);
            }
        }
        for (k, method) in Method::ALL.into_iter().enumerate() {
            checks.push(CellCheck {
                experiment: spec.experiment,
                n,
                method,
                trials: inputs.len(),
                skipped,
                max_abs_dev: worst[k],
            });
        }
    }
    Ok(checks)
}

/// Times one method over prepared inputs of one size.
pub fn time_cell(method: Method, inputs: &[Input], cfg: &TimingConfig) -> Timing {
    match inputs.first() {
        Some(Input::Chain(first)) => with_chain!(first.n(), m => {
            let leaves: Vec<m::Leaves> = inputs
                .iter()
                .map(|i| match i {
                    Input::Chain(x) => m::Leaves::new(x),
                    Input::Imu(_) => unreachable!("mixed inputs"),
                })
                .collect();
            match method {
                Method::Hand => measure(&leaves, m::hand, cfg),
                Method::Forward => measure(&leaves, m::forward, cfg),
                Method::TypedForward => measure(&leaves, m::typed_forward, cfg),
                Method::Reverse => measure(&leaves, m::reverse, cfg),
            }
        }),
        Some(Input::Imu(_)) => {
            let leaves: Vec<imu::Leaves> = inputs
                .iter()
                .map(|i| match i {
                    Input::Imu(x) => imu::Leaves::new(x),
                    Input::Chain(_) => unreachable!("mixed inputs"),
                })
                .collect();
            match method {
                Method::Hand => measure(&leaves, imu::hand, cfg),
                Method::Forward => measure(&leaves, imu::forward, cfg),
                Method::TypedForward => measure(&leaves, imu::typed_forward, cfg),
                Method::Reverse => measure(&leaves, imu::reverse, cfg),
            }
        }
        None => panic!("no inputs to time"),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchmarkRecord {
    pub experiment: Experiment,
    pub n: usize,
    pub method: Method,
    pub trials: usize,
    pub mean_ns: f64,
    pub stddev_ns: f64,
    pub max_abs_dev: f64,
}

/// Verifies every cell, then times it. Nothing is timed if any cell fails
/// verification.
pub fn run(spec: &BenchmarkSpec, cfg: &TimingConfig) -> Result<Vec<BenchmarkRecord>> {
    spec.validate()?;
    let checks = verify(spec)?;
    let mut records = Vec::with_capacity(checks.len());
    for n in spec.sizes() {
        let (inputs, _) = spec.inputs(n);
        if inputs.is_empty() {
            bail!("every {} input at N={n} was singular", spec.experiment);
        }
        for check in checks.iter().filter(|c| c.n == n) {
            let t = time_cell(check.method, &inputs, cfg);
            records.push(BenchmarkRecord {
                experiment: spec.experiment,
                n,
                method: check.method,
                trials: check.trials,
                mean_ns: t.mean_ns,
                stddev_ns: t.stddev_ns,
                max_abs_dev: check.max_abs_dev,
            });
        }
    }
    Ok(records)
}

pub fn write_csv<W: io::Write>(records: &[BenchmarkRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.experiment.name().to_string(),
            r.n.to_string(),
            r.method.name().to_string(),
            r.trials.to_string(),
            format!("{:.3}", r.mean_ns),
            format!("{:.3}", r.stddev_ns),
            format!("{:e}", r.max_abs_dev),
        ])?;
    }
    w.flush()?;
    Ok(())
}
