//! Benchmark and verification driver: the rotation-chain and IMU-residual
//! experiments, hand-written reference Jacobians, a finite-difference sweep
//! and batched timing.

pub mod chain;
pub mod imu;
pub mod oracle;
pub mod replay;
pub mod run;
pub mod timing;

use std::fmt;

/// How value and Jacobians are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Method {
    Hand,
    Forward,
    TypedForward,
    Reverse,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Hand,
        Method::Forward,
        Method::TypedForward,
        Method::Reverse,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Hand => "hand",
            Method::Forward => "forward",
            Method::TypedForward => "typed_forward",
            Method::Reverse => "reverse",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Experiment {
    Chain,
    Imu,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Chain => "chain",
            Experiment::Imu => "imu",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub use run::{BenchmarkRecord, BenchmarkSpec, CellCheck, DeviationError};
