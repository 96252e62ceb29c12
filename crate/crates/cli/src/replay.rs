//! Plain-text dumps of a failing input, precise enough to reproduce it.
//!
//! ```text
//! experiment=chain
//! N=2
//! method=reverse
//! trial=17
//! rotation1 = 9 numbers, row-major
//! rotation2 = ...
//! p1 = 3 numbers
//! ```
//!
//! Every number is written with 17 significant digits, so parsing recovers
//! the exact `f64`.

use std::fmt::Write as _;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use framegeo::{EuclideanVector, RotationVector, Value, SO3};
use nalgebra::Matrix3;

use crate::chain::ChainInput;
use crate::imu::ImuInput;
use crate::{Experiment, Method};

#[derive(Clone, Debug, PartialEq)]
pub enum Input {
    Chain(ChainInput),
    Imu(ImuInput),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Replay {
    pub method: Method,
    pub trial: usize,
    pub input: Input,
}

fn fields(input: &Input) -> Vec<(String, Vec<f64>)> {
    match input {
        Input::Chain(c) => {
            let mut out: Vec<_> = c
                .rotations
                .iter()
                .enumerate()
                .map(|(i, r)| (format!("rotation{}", i + 1), r.coefficients()))
                .collect();
            out.push(("p1".into(), c.p1.coefficients()));
            out
        }
        Input::Imu(x) => vec![
            ("c_tilde".into(), x.c_tilde.coefficients()),
            ("phi".into(), x.phi.coefficients()),
            ("c_wi".into(), x.c_wi.coefficients()),
            ("c_wj".into(), x.c_wj.coefficients()),
        ],
    }
}

impl Replay {
    pub fn experiment(&self) -> Experiment {
        match self.input {
            Input::Chain(_) => Experiment::Chain,
            Input::Imu(_) => Experiment::Imu,
        }
    }

    pub fn n(&self) -> usize {
        match &self.input {
            Input::Chain(c) => c.n(),
            Input::Imu(_) => 1,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "experiment={}", self.experiment());
        let _ = writeln!(s, "N={}", self.n());
        let _ = writeln!(s, "method={}", self.method);
        let _ = writeln!(s, "trial={}", self.trial);
        for (name, values) in fields(&self.input) {
            let nums: Vec<String> = values.iter().map(|v| format!("{v:.16e}")).collect();
            let _ = writeln!(s, "{name} = {}", nums.join(" "));
        }
        s
    }
}

fn rotation(values: &[f64]) -> Result<SO3> {
    if values.len() != 9 {
        bail!("a rotation needs 9 numbers, got {}", values.len());
    }
    Ok(SO3::from_matrix(Matrix3::from_row_slice(values))?)
}

fn vector(values: &[f64]) -> Result<nalgebra::Vector3<f64>> {
    if values.len() != 3 {
        bail!("a vector needs 3 numbers, got {}", values.len());
    }
    Ok(nalgebra::Vector3::from_row_slice(values))
}

impl FromStr for Replay {
    type Err = anyhow::Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut header = std::collections::HashMap::new();
        let mut named: Vec<(String, Vec<f64>)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some((k, v)) = line.split_once(" = ") {
                let values = v
                    .split_whitespace()
                    .map(f64::from_str)
                    .collect::<Result<Vec<_>, _>>()
                    .with_context(|| format!("line {}", lineno + 1))?;
                named.push((k.trim().to_string(), values));
            } else if let Some((k, v)) = line.split_once('=') {
                header.insert(k.trim().to_string(), v.trim().to_string());
            } else {
                bail!("line {}: expected `key=value` or `name = numbers`", lineno + 1);
            }
        }
        let get = |k: &str| header.get(k).ok_or_else(|| anyhow!("missing `{k}=`"));
        let method = <Method as clap::ValueEnum>::from_str(&get("method")?.replace('_', "-"), true)
            .map_err(|e| anyhow!("bad method: {e}"))?;
        let trial = get("trial")?.parse().context("bad trial")?;
        let field = |k: &str| {
            named
                .iter()
                .find(|(n, _)| n == k)
                .map(|(_, v)| v.as_slice())
                .ok_or_else(|| anyhow!("missing `{k} =`"))
        };
        let input = match get("experiment")?.as_str() {
            "chain" => {
                let n: usize = get("N")?.parse().context("bad N")?;
                let rotations = (1..=n)
                    .map(|i| rotation(field(&format!("rotation{i}"))?))
                    .collect::<Result<Vec<_>>>()?;
                Input::Chain(ChainInput {
                    rotations,
                    p1: EuclideanVector(vector(field("p1")?)?),
                })
            }
            "imu" => Input::Imu(ImuInput {
                c_tilde: rotation(field("c_tilde")?)?,
                phi: RotationVector(vector(field("phi")?)?),
                c_wi: rotation(field("c_wi")?)?,
                c_wj: rotation(field("c_wj")?)?,
            }),
            other => bail!("unknown experiment `{other}`"),
        };
        Ok(Replay { method, trial, input })
    }
}
