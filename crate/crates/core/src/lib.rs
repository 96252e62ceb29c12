//! SO(3)/SE(3) expression trees with block-level automatic differentiation
//! and coordinate-frame checking.
//!
//! * [`manifold`]: rotations, rigid transformations, their tangent spaces and
//!   the elementary operations on them.
//! * [`expr`]: expression trees built with ordinary operators over
//!   [`Framed`] leaves, evaluated with caching.
//! * [`autodiff`]: forward, typed forward and reverse Jacobian evaluators.
//! * [`frames`]: frame signatures and the rules that combine them.
//! * [`numdiff`]: finite-difference Jacobians used to validate the rest.

pub mod autodiff;
pub mod counters;
pub mod expr;
pub mod frames;
pub mod linalg;
pub mod manifold;
pub mod numdiff;

#[doc(hidden)]
pub use typenum;

pub use autodiff::{
    forward_jacobian, reverse_jacobians, typed_forward_jacobian, IntoTuple, JacobianList, LocalJacobian,
};
pub use expr::{
    Expr, Framed, LazyMatrix, NodeCache, Point, Rotation, RotationTangent, Transform, TwistTangent,
};
pub use frames::{Frame, Unframed};
pub use manifold::{
    EuclideanVector, Group, RotationVector, Tangent, Twist, Value, ValueKind, VectorSpace, SE3, SO3,
};
pub use numdiff::{fd_jacobian, OracleConfig, OracleError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ManifoldError {
    #[error("matrix is not orthonormal (max |CᵀC − I| = {0:e})")]
    NotOrthonormal(f64),
    #[error("matrix determinant is {0}, expected +1")]
    BadDeterminant(f64),
}
