//! Finite-difference sweep over every elementary rule and both experiments.
//!
//! Each case evaluates random inputs with all evaluators, checks that they
//! agree, and compares them against central differences of the value.

use std::fmt;

use framegeo::autodiff::reverse_with_cache;
use framegeo::manifold::{random_rotation, random_transform, random_vector};
use framegeo::{
    fd_jacobian, forward_jacobian, frames, typed_forward_jacobian, EuclideanVector, Expr, Framed,
    JacobianList, OracleConfig, Point, Rotation, RotationTangent, RotationVector, Transform, Twist,
    TwistTangent, Value, SE3, SO3,
};
use nalgebra::{DMatrix, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::{self, ChainInput, MAX_N};
use crate::imu::{self, ImuInput};
use crate::Method;

frames!(A, B, C, D, E);

/// Evaluators must agree with each other to this.
pub const AGREEMENT: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct CaseResult {
    pub name: String,
    pub samples: usize,
    /// Inputs redrawn because they were singular.
    pub skipped: usize,
    /// Worst deviation from the finite differences.
    pub oracle: f64,
    /// Worst disagreement between evaluators.
    pub agreement: f64,
}

impl CaseResult {
    fn new(name: impl Into<String>) -> Self {
        CaseResult {
            name: name.into(),
            samples: 0,
            skipped: 0,
            oracle: 0.0,
            agreement: 0.0,
        }
    }

    fn record(&mut self, oracle: f64, agreement: f64) {
        self.samples += 1;
        self.oracle = self.oracle.max(oracle);
        self.agreement = self.agreement.max(agreement);
    }

    pub fn passed(&self, tolerance: f64) -> bool {
        self.samples > 0 && self.oracle <= tolerance && self.agreement <= AGREEMENT
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub tolerance: f64,
    pub cases: Vec<CaseResult>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed(self.tolerance))
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.passed(self.tolerance))
    }

    pub fn min_samples(&self) -> usize {
        self.cases.iter().map(|c| c.samples).min().unwrap_or(0)
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cases {
            writeln!(
                f,
                "{:<4} {:<22} samples={:<5} skipped={:<3} oracle={:.2e} agreement={:.2e}",
                if c.passed(self.tolerance) { "ok" } else { "FAIL" },
                c.name,
                c.samples,
                c.skipped,
                c.oracle,
                c.agreement
            )?;
        }
        Ok(())
    }
}

fn rebuild<V: Value, S>(_: &Framed<V, S>, v: V) -> Framed<V, S>
where
    S: framegeo::expr::SignatureOf<V>,
{
    Framed::new(v)
}

fn worst(a: &[DMatrix<f64>], b: &[DMatrix<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs().max())
        .fold(0.0, f64::max)
}

/// Returns `(oracle deviation, evaluator disagreement)` for `$e` with
/// respect to the listed leaves.
macro_rules! compare {
    ($cfg:expr, $e:expr; $($leaf:ident),+) => {{
        let e = $e;
        let cache = e.evaluate();
        let reverse = reverse_with_cache(&e, &cache).into_dynamic();
        let typed = vec![$(typed_forward_jacobian(&e, &cache, &$leaf).to_dmatrix()),+];
        let forward = vec![$(forward_jacobian(&e, &cache, &$leaf).to_dmatrix()),+];
        let oracle = vec![$({
            let original = &$leaf;
            match fd_jacobian(
                |x| {
                    let $leaf = rebuild(original, *x);
                    ($e).value()
                },
                $leaf.value(),
                $cfg,
            ) {
                Ok(j) => j.to_dmatrix(),
                Err(_) => DMatrix::from_element(1, 1, f64::INFINITY),
            }
        }),+];
        let dev = if oracle.iter().any(|m| m.shape() == (1, 1)) {
            f64::INFINITY
        } else {
            worst(&reverse, &oracle)
        };
        (dev, worst(&reverse, &typed).max(worst(&reverse, &forward)))
    }};
}

fn point(rng: &mut impl Rng) -> EuclideanVector {
    EuclideanVector(random_vector(rng, 3.0))
}

/// Rotation vectors of angle below 2.5 rad.
fn small(rng: &mut impl Rng) -> RotationVector {
    let v: Vector3<f64> = random_vector(rng, 1.0);
    RotationVector(v * (rng.random_range(0.0..2.5) / v.norm().max(1e-9)))
}

fn twist(rng: &mut impl Rng) -> Twist {
    Twist::new(small(rng).0, random_vector(rng, 2.0))
}

fn near(rng: &mut impl Rng) -> SO3 {
    SO3::exp(&small(rng))
}

fn near_se3(rng: &mut impl Rng) -> SE3 {
    SE3::exp(&twist(rng))
}

struct Cases(Vec<CaseResult>);

impl Cases {
    fn get(&mut self, name: &str) -> &mut CaseResult {
        if let Some(i) = self.0.iter().position(|c| c.name == name) {
            &mut self.0[i]
        } else {
            self.0.push(CaseResult::new(name));
            self.0.last_mut().unwrap()
        }
    }

    fn record(&mut self, name: &str, (oracle, agreement): (f64, f64)) {
        self.get(name).record(oracle, agreement);
    }
}

fn elementary(cases: &mut Cases, rng: &mut ChaCha8Rng, cfg: &OracleConfig) {
    let a = Rotation::<A, B>::new(random_rotation(rng));
    let b = Rotation::<B, C>::new(random_rotation(rng));
    let p = Point::<B, C, D>::new(point(rng));
    cases.record("compose so3", compare!(cfg, &a * &b; a, b));
    cases.record("inverse so3", compare!(cfg, (&a).inverse(); a));
    cases.record("rotate", compare!(cfg, &a * &p; a, p));

    let phi = RotationTangent::<A, A, B>::new(small(rng));
    cases.record("exp so3", compare!(cfg, (&phi).exp(); phi));
    cases.record("boxplus so3", compare!(cfg, (&a).boxplus(&phi); a, phi));
    let h = Rotation::<A, A>::new(near(rng));
    cases.record("log so3", compare!(cfg, (&h).log_to::<B>(); h));
    let g2 = Rotation::<A, B>::new(near(rng));
    let base = Rotation::<B, C>::new(random_rotation(rng));
    let g1 = Rotation::<A, C>::new(g2.value().compose(base.value()).compose(&near(rng)));
    cases.record(
        "boxminus so3",
        compare!(cfg, (&g1).boxminus(&g2 * &base); g1, g2, base),
    );

    let t = Transform::<A, B>::new(random_transform(rng, 2.0));
    let u = Transform::<B, C>::new(random_transform(rng, 2.0));
    let q = Point::<B, B, D>::new(point(rng));
    cases.record("compose se3", compare!(cfg, &t * &u; t, u));
    cases.record("inverse se3", compare!(cfg, (&t).inverse(); t));
    cases.record("transform", compare!(cfg, &t * &q; t, q));
    let xi = TwistTangent::<A, A, B>::new(twist(rng));
    cases.record("exp se3", compare!(cfg, (&xi).exp(); xi));
    cases.record("boxplus se3", compare!(cfg, (&t).boxplus(&xi); t, xi));
    let k = Transform::<A, A>::new(near_se3(rng));
    cases.record("log se3", compare!(cfg, (&k).log_to::<B>(); k));
    let t1 = Transform::<A, C>::new(near_se3(rng));
    let t3 = Transform::<B, C>::new(t.value().inverse().compose(&near_se3(rng)).compose(t1.value()));
    cases.record("boxminus se3", compare!(cfg, (&t1).boxminus(&t * &t3); t1, t, t3));

    let v = Point::<D, A, B>::new(point(rng));
    let w = Point::<D, B, C>::new(point(rng));
    let x = Point::<D, A, C>::new(point(rng));
    let y = Point::<D, E, C>::new(point(rng));
    let s: f64 = rng.random_range(-3.0..3.0);
    cases.record("sum", compare!(cfg, &v + &w; v, w));
    cases.record("difference", compare!(cfg, &x - &y; x, y));
    cases.record("negate", compare!(cfg, -&v; v));
    cases.record("scale", compare!(cfg, &v * s; v));
}

/// Every evaluator, the hand-written one included, against differences of
/// the chain value with respect to each rotation and the point.
fn chain_case(cases: &mut Cases, n: usize, rng: &mut ChaCha8Rng, cfg: &OracleConfig) {
    let input = ChainInput::random(n, rng);
    let mut oracle = Vec::with_capacity(n + 1);
    for i in 0..n {
        let j = fd_jacobian(
            |c: &SO3| {
                let mut x = input.clone();
                x.rotations[i] = *c;
                chain::value(&x)
            },
            &input.rotations[i],
            cfg,
        );
        oracle.push(j.map(|j| *j.matrix()));
    }
    oracle.push(
        fd_jacobian(
            |p: &EuclideanVector| {
                chain::value(&ChainInput {
                    p1: *p,
                    ..input.clone()
                })
            },
            &input.p1,
            cfg,
        )
        .map(|j| *j.matrix()),
    );
    let outputs = Method::ALL.map(|m| chain::evaluate(m, &input));
    let mut dev: f64 = 0.0;
    for (k, o) in oracle.iter().enumerate() {
        dev = dev.max(match o {
            Ok(o) => outputs
                .iter()
                .map(|out| (out.jacobians[k] - o).abs().max())
                .fold(0.0, f64::max),
            Err(_) => f64::INFINITY,
        });
    }
    let hand = &outputs[0];
    let agreement = outputs
        .iter()
        .map(|out| {
            let v = (out.value.0 - hand.value.0).abs().max();
            out.jacobians
                .iter()
                .zip(&hand.jacobians)
                .map(|(a, b)| (a - b).abs().max())
                .fold(v, f64::max)
        })
        .fold(0.0, f64::max);
    cases.record(&format!("chain N={n}"), (dev, agreement));
}

fn imu_case(cases: &mut Cases, rng: &mut ChaCha8Rng, cfg: &OracleConfig) {
    let input = loop {
        let x = ImuInput::random(rng);
        if !x.is_singular() {
            break x;
        }
        cases.get("imu residual").skipped += 1;
    };
    let f = |x: ImuInput| imu::value(&x);
    let oracle = [
        fd_jacobian(
            |c: &SO3| f(ImuInput { c_tilde: *c, ..input }),
            &input.c_tilde,
            cfg,
        ),
        fd_jacobian(
            |phi: &RotationVector| f(ImuInput { phi: *phi, ..input }),
            &input.phi,
            cfg,
        ),
        fd_jacobian(|c: &SO3| f(ImuInput { c_wi: *c, ..input }), &input.c_wi, cfg),
        fd_jacobian(|c: &SO3| f(ImuInput { c_wj: *c, ..input }), &input.c_wj, cfg),
    ];
    let outputs = Method::ALL.map(|m| imu::evaluate(m, &input));
    let mut dev: f64 = 0.0;
    for (k, o) in oracle.iter().enumerate() {
        dev = dev.max(match o {
            Ok(o) => outputs
                .iter()
                .map(|out| (out.jacobians[k] - o.matrix()).abs().max())
                .fold(0.0, f64::max),
            Err(_) => f64::INFINITY,
        });
    }
    let hand = &outputs[0];
    let agreement = outputs
        .iter()
        .map(|out| {
            let v = (out.value.0 - hand.value.0).abs().max();
            out.jacobians
                .iter()
                .zip(&hand.jacobians)
                .map(|(a, b)| (a - b).abs().max())
                .fold(v, f64::max)
        })
        .fold(0.0, f64::max);
    cases.record("imu residual", (dev, agreement));
}

/// Runs `samples` random inputs through every case.
pub fn sweep(samples: usize, seed: u64, cfg: &OracleConfig) -> OracleReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Cases(Vec::new());
    for _ in 0..samples {
        elementary(&mut cases, &mut rng, cfg);
        for n in 1..=MAX_N {
            chain_case(&mut cases, n, &mut rng, cfg);
        }
        imu_case(&mut cases, &mut rng, cfg);
    }
    OracleReport {
        tolerance: cfg.tolerance,
        cases: cases.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep_passes() {
        let report = sweep(20, 7, &OracleConfig::default());
        assert!(report.passed(), "{report}");
        assert_eq!(report.cases.len(), 18 + MAX_N + 1);
        assert_eq!(report.min_samples(), 20);
    }

    #[test]
    fn a_wrong_jacobian_is_caught() {
        let mut cases = Cases(Vec::new());
        cases.record("x", (1e-3, 0.0));
        let report = OracleReport {
            tolerance: 1e-5,
            cases: cases.0,
        };
        assert!(!report.passed());
        assert_eq!(report.failures().count(), 1);
    }
}
