//! Batched wall-clock timing.
//!
//! After a warm-up, the batch size doubles until one batch takes at least
//! the floor (10 µs unless `BENCH_BATCH_NS` says otherwise). Batches then
//! run until the requested number of evaluations is reached, cycling through
//! the inputs one batch at a time. Statistics are over per-batch means.

use std::hint::black_box;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};

pub const DEFAULT_FLOOR_NS: u64 = 10_000;
pub const DEFAULT_EVALUATIONS: usize = 10_000;
pub const BATCH_ENV: &str = "BENCH_BATCH_NS";
const MIN_BATCHES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimingConfig {
    /// Minimum duration of one batch.
    pub floor: Duration,
    /// Timed evaluations per measurement, warm-up excluded.
    pub evaluations: usize,
    pub warmup: Duration,
}

impl Default for TimingConfig {
    fn default() -> Self {
        TimingConfig {
            floor: Duration::from_nanos(DEFAULT_FLOOR_NS),
            evaluations: DEFAULT_EVALUATIONS,
            warmup: Duration::from_millis(2),
        }
    }
}

impl TimingConfig {
    /// Defaults, with the batch floor taken from `BENCH_BATCH_NS` if set.
    pub fn from_env() -> Result<Self> {
        let mut cfg = TimingConfig::default();
        if let Ok(raw) = std::env::var(BATCH_ENV) {
            let ns: u64 = raw
                .trim()
                .parse()
                .with_context(|| format!("{BATCH_ENV}={raw:?} is not a whole number of nanoseconds"))?;
            if ns == 0 {
                bail!("{BATCH_ENV} must be positive");
            }
            cfg.floor = Duration::from_nanos(ns);
        }
        Ok(cfg)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Timing {
    pub mean_ns: f64,
    pub stddev_ns: f64,
    pub median_ns: f64,
    pub batch_size: usize,
    pub batches: usize,
}

fn run_batch<I, O>(input: &I, size: usize, f: &mut impl FnMut(&I) -> O) -> Duration {
    let start = Instant::now();
    for _ in 0..size {
        black_box(f(black_box(input)));
    }
    start.elapsed()
}

/// Times `f` over `inputs`.
pub fn measure<I, O>(inputs: &[I], mut f: impl FnMut(&I) -> O, cfg: &TimingConfig) -> Timing {
    assert!(!inputs.is_empty(), "no inputs to time");
    let warm_until = Instant::now() + cfg.warmup;
    let mut k = 0;
    while Instant::now() < warm_until {
        black_box(f(black_box(&inputs[k % inputs.len()])));
        k += 1;
    }

    let mut size = 1;
    while run_batch(&inputs[0], size, &mut f) < cfg.floor && size < 1 << 30 {
        size *= 2;
    }

    let batches = cfg.evaluations.div_ceil(size).max(MIN_BATCHES);
    let mut per_eval = Vec::with_capacity(batches);
    for b in 0..batches {
        let t = run_batch(&inputs[b % inputs.len()], size, &mut f);
        per_eval.push(t.as_nanos() as f64 / size as f64);
    }
    let n = per_eval.len() as f64;
    let mean = per_eval.iter().sum::<f64>() / n;
    let var = per_eval.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    per_eval.sort_by(f64::total_cmp);
    Timing {
        mean_ns: mean,
        stddev_ns: var.sqrt(),
        median_ns: per_eval[per_eval.len() / 2],
        batch_size: size,
        batches,
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batches_reach_the_floor() {
        let cfg = TimingConfig {
            floor: Duration::from_micros(50),
            evaluations: 1000,
            warmup: Duration::from_micros(100),
        };
        let t = measure(
            &[1u64, 2, 3],
            |x| (0..50).fold(*x, |a, b| a.wrapping_mul(31) ^ b),
            &cfg,
        );
        assert!(t.batch_size >= 1);
        assert!(t.batches >= MIN_BATCHES);
        assert!(t.mean_ns > 0.0 && t.stddev_ns >= 0.0);
        assert!(t.batch_size as f64 * t.median_ns >= 25_000.0);
    }

    #[test]
    fn slope_of_a_line() {
        let xs = [4.0, 5.0, 6.0, 7.0];
        let ys = xs.map(|x| 3.0 * x + 1.0);
        assert!((slope(&xs, &ys) - 3.0).abs() < 1e-12);
    }
}
