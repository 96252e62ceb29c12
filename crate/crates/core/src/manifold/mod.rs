//! Concrete manifold and vector-space values.
//!
//! Perturbations follow the left convention everywhere:
//! `g ⊞ φ = exp(φ) ∘ g` and `g₁ ⊟ g₂ = log(g₁ ∘ g₂⁻¹)`.

mod random;
pub mod se3;
pub mod so3;
mod vectors;

use std::fmt::Debug;

use nalgebra::{Matrix3, Vector3};

use crate::linalg::{Dim, Mat, TVec};

pub use random::{random_rotation, random_transform, random_vector};
pub use se3::{Twist, SE3};
pub use so3::{RotationVector, SMALL_ANGLE, SO3};
pub use vectors::{apply_so3, EuclideanVector};

/// Orthonormality and determinant tolerance for rotation matrices.
pub const ORTHONORMAL_TOL: f64 = 1e-9;

/// Skew-symmetric matrix `v^×` with `cross(v) * w == v × w`.
#[inline(always)]
pub fn cross(v: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Inverse of [`cross`] (reads the off-diagonal entries, no symmetry check).
#[inline(always)]
pub fn vee(m: &Matrix3<f64>) -> Vector3<f64> {
    Vector3::new(m[(2, 1)], m[(0, 2)], m[(1, 0)])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ValueKind {
    Rotation,
    Transform,
    Vector,
    RotationVector,
    Twist,
}

impl ValueKind {
    #[inline]
    pub const fn id(self) -> u64 {
        match self {
            ValueKind::Rotation => 1,
            ValueKind::Transform => 2,
            ValueKind::Vector => 3,
            ValueKind::RotationVector => 4,
            ValueKind::Twist => 5,
        }
    }

    #[inline]
    pub const fn name(self) -> &'static str {
        match self {
            ValueKind::Rotation => "SO3",
            ValueKind::Transform => "SE3",
            ValueKind::Vector => "R3",
            ValueKind::RotationVector => "so3",
            ValueKind::Twist => "se3",
        }
    }

    #[inline]
    pub const fn is_group(self) -> bool {
        matches!(self, ValueKind::Rotation | ValueKind::Transform)
    }
}

/// A value with a tangent space: either a Lie group element or a vector.
///
/// `retract` and `local` are ⊞ and ⊟ for groups and plain `+`/`-` for
/// vector spaces, which is what the finite-difference oracle needs.
pub trait Value: Copy + Debug + PartialEq + Send + Sync + 'static {
    type Dim: Dim;
    const KIND: ValueKind;

    fn retract(&self, delta: &TVec<Self::Dim>) -> Self;
    fn local(&self, base: &Self) -> TVec<Self::Dim>;
    fn is_finite(&self) -> bool;
    /// Flat row-major coefficients, used for replay dumps.
    fn coefficients(&self) -> Vec<f64>;
}

/// Vector-space values (R³, so(3), se(3) in their minimal form).
pub trait VectorSpace: Value {
    fn zero() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, s: f64) -> Self;
    fn to_vector(&self) -> TVec<Self::Dim>;
    fn from_vector(v: &TVec<Self::Dim>) -> Self;
}

/// Lie algebra element of a [`Group`].
pub trait Tangent: VectorSpace {
    type Group: Group<Tangent = Self, Dim = Self::Dim>;
}

/// SO(3) or SE(3).
pub trait Group: Value {
    type Tangent: Tangent<Dim = Self::Dim>;

    fn identity() -> Self;
    fn compose(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
    /// Action on a point: rotation for SO(3), rigid transformation for SE(3).
    fn act(&self, p: &EuclideanVector) -> EuclideanVector;
    /// `self⁻¹` acting on `p`, without forming the inverse.
    fn inverse_act(&self, p: &EuclideanVector) -> EuclideanVector;
    fn adjoint(&self) -> Mat<Self::Dim, Self::Dim>;
    fn exp(t: &Self::Tangent) -> Self;
    fn log(&self) -> Self::Tangent;
    fn left_jacobian(t: &Self::Tangent) -> Mat<Self::Dim, Self::Dim>;
    fn left_jacobian_inverse(t: &Self::Tangent) -> Mat<Self::Dim, Self::Dim>;

    #[inline]
    fn boxplus(&self, t: &Self::Tangent) -> Self {
        Self::exp(t).compose(self)
    }

    #[inline]
    fn boxminus(&self, other: &Self) -> Self::Tangent {
        self.compose(&other.inverse()).log()
    }
}
