use nalgebra::Vector3;

use super::{cross, RotationVector, Value, ValueKind, VectorSpace};
use crate::linalg::D3;

/// A vector in R³ (length units).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EuclideanVector(pub Vector3<f64>);

impl EuclideanVector {
    #[inline]
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        EuclideanVector(Vector3::new(x, y, z))
    }
}

/// `φ^× v`: so(3) element acting on a vector.
#[inline]
pub fn apply_so3(phi: &RotationVector, v: &EuclideanVector) -> EuclideanVector {
    EuclideanVector(cross(&phi.0) * v.0)
}

impl Value for EuclideanVector {
    type Dim = D3;
    const KIND: ValueKind = ValueKind::Vector;

    #[inline]
    fn retract(&self, delta: &Vector3<f64>) -> Self {
        EuclideanVector(self.0 + delta)
    }

    #[inline]
    fn local(&self, base: &Self) -> Vector3<f64> {
        self.0 - base.0
    }

    #[inline]
    fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    fn coefficients(&self) -> Vec<f64> {
        self.0.iter().copied().collect()
    }
}

impl VectorSpace for EuclideanVector {
    #[inline]
    fn zero() -> Self {
        EuclideanVector(Vector3::zeros())
    }
    #[inline]
    fn add(&self, other: &Self) -> Self {
        EuclideanVector(self.0 + other.0)
    }
    #[inline]
    fn sub(&self, other: &Self) -> Self {
        EuclideanVector(self.0 - other.0)
    }
    #[inline]
    fn neg(&self) -> Self {
        EuclideanVector(-self.0)
    }
    #[inline]
    fn scale(&self, s: f64) -> Self {
        EuclideanVector(self.0 * s)
    }
    #[inline]
    fn to_vector(&self) -> Vector3<f64> {
        self.0
    }
    #[inline]
    fn from_vector(v: &Vector3<f64>) -> Self {
        EuclideanVector(*v)
    }
}
