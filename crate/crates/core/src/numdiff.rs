//! Central finite differences on manifolds, used as an independent check of
//! the analytic Jacobians.
//!
//! Column `i` is `[f(x ⊞ hδᵢ) ⊟ f(x ⊞ −hδᵢ)] / 2h`, with the same left
//! perturbation convention as the evaluators.

use crate::autodiff::LocalJacobian;
use crate::linalg::{Dim, Mat, Storage, TVec};
use crate::manifold::Value;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    pub step: f64,
    /// Absolute tolerance for comparisons against analytic Jacobians.
    pub tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            step: 1e-6,
            tolerance: 1e-5,
        }
    }
}

impl OracleConfig {
    pub fn new(step: f64, tolerance: f64) -> Result<Self, OracleError> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(OracleError::InvalidStep(step));
        }
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(OracleError::InvalidTolerance(tolerance));
        }
        Ok(OracleConfig { step, tolerance })
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("non-finite function value while differencing column {column}")]
    NonFinite { column: usize },
}

/// Finite-difference local Jacobian of `f` at `x`.
pub fn fd_jacobian<X, Y, F>(
    f: F,
    x: &X,
    cfg: &OracleConfig,
) -> Result<LocalJacobian<Y::Dim, X::Dim>, OracleError>
where
    X: Value,
    Y: Value,
    F: Fn(&X) -> Y,
{
    let h = cfg.step;
    let mut out = Mat::<Y::Dim, X::Dim>::zeros();
    for column in 0..X::Dim::N {
        let mut delta = TVec::<X::Dim>::zeros();
        delta[(column, 0)] = h;
        let plus = f(&x.retract(&delta));
        delta[(column, 0)] = -h;
        let minus = f(&x.retract(&delta));
        if !plus.is_finite() || !minus.is_finite() {
            return Err(OracleError::NonFinite { column });
        }
        let diff = plus.local(&minus);
        for row in 0..Y::Dim::N {
            let d = diff[(row, 0)] / (2.0 * h);
            if !d.is_finite() {
                return Err(OracleError::NonFinite { column });
            }
            out[(row, column)] = d;
        }
    }
    Ok(LocalJacobian::from_dense(out))
}

/// Largest absolute entry difference between two Jacobians.
pub fn max_deviation<R: Dim, C: Dim>(a: &LocalJacobian<R, C>, b: &LocalJacobian<R, C>) -> f64 {
    a.max_abs_diff(b)
}
