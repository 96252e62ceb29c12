use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};

use super::{cross, vee, EuclideanVector, Group, Tangent, Value, ValueKind, VectorSpace, ORTHONORMAL_TOL};
use crate::linalg::D3;
use crate::ManifoldError;

/// Below this angle exp/log switch to second-order Taylor coefficients.
pub const SMALL_ANGLE: f64 = 1e-6;

// Jacobian coefficients lose digits like eps/θ^k; they switch to series
// well before SMALL_ANGLE.
const SERIES_ANGLE: f64 = 1e-2;

/// Rotation stored as a 3 × 3 orthonormal matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SO3 {
    matrix: Matrix3<f64>,
}

/// Element of so(3) in its R³ form, in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationVector(pub Vector3<f64>);

impl RotationVector {
    #[inline]
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        RotationVector(Vector3::new(x, y, z))
    }

    #[inline]
    pub fn angle(&self) -> f64 {
        self.0.norm()
    }
}

impl SO3 {
    #[inline]
    pub fn identity() -> Self {
        SO3 {
            matrix: Matrix3::identity(),
        }
    }

    /// Wraps a matrix after checking orthonormality and `det = +1`.
    pub fn from_matrix(matrix: Matrix3<f64>) -> Result<Self, ManifoldError> {
        let ortho = (matrix.transpose() * matrix - Matrix3::identity()).abs().max();
        if !ortho.is_finite() || ortho > ORTHONORMAL_TOL {
            return Err(ManifoldError::NotOrthonormal(ortho));
        }
        let det = matrix.determinant();
        if (det - 1.0).abs() > ORTHONORMAL_TOL {
            return Err(ManifoldError::BadDeterminant(det));
        }
        Ok(SO3 { matrix })
    }

    #[inline]
    pub fn from_matrix_unchecked(matrix: Matrix3<f64>) -> Self {
        SO3 { matrix }
    }

    #[inline(always)]
    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.matrix
    }

    #[inline]
    pub fn exp(phi: &RotationVector) -> Self {
        let k = cross(&phi.0);
        let theta2 = phi.0.norm_squared();
        let theta = theta2.sqrt();
        let (a, b) = if theta < SMALL_ANGLE {
            (1.0 - theta2 / 6.0, 0.5 - theta2 / 24.0)
        } else {
            (theta.sin() / theta, (1.0 - theta.cos()) / theta2)
        };
        SO3 {
            matrix: Matrix3::identity() + k * a + k * k * b,
        }
    }

    /// Rotation vector with norm in `[0, π]`.
    ///
    /// At exactly π the axis sign is ambiguous; the axis is then oriented so
    /// its largest-magnitude component is nonnegative.
    #[inline]
    pub fn log(&self) -> RotationVector {
        let m = &self.matrix;
        let w = vee(&(m - m.transpose()));
        let theta = (0.5 * w.norm()).atan2((m.trace() - 1.0) * 0.5);
        if theta < SMALL_ANGLE {
            return RotationVector(w * (0.5 * (1.0 + theta * theta / 6.0)));
        }
        if PI - theta < SMALL_ANGLE {
            return RotationVector(antipodal_axis(m, &w) * theta);
        }
        RotationVector(w * (theta / (2.0 * theta.sin())))
    }

    #[inline(always)]
    pub fn compose(&self, other: &SO3) -> SO3 {
        SO3 {
            matrix: self.matrix * other.matrix,
        }
    }

    #[inline(always)]
    pub fn inverse(&self) -> SO3 {
        SO3 {
            matrix: self.matrix.transpose(),
        }
    }

    #[inline(always)]
    pub fn rotate(&self, v: &EuclideanVector) -> EuclideanVector {
        EuclideanVector(self.matrix * v.0)
    }

    #[inline(always)]
    pub fn inverse_rotate(&self, v: &EuclideanVector) -> EuclideanVector {
        EuclideanVector(self.matrix.tr_mul(&v.0))
    }

    /// Largest deviation from orthonormality and from `det = +1`.
    pub fn invariant_error(&self) -> f64 {
        let ortho = (self.matrix.transpose() * self.matrix - Matrix3::identity())
            .abs()
            .max();
        ortho.max((self.matrix.determinant() - 1.0).abs())
    }
}

#[inline]
fn antipodal_axis(m: &Matrix3<f64>, w: &Vector3<f64>) -> Vector3<f64> {
    let b = (m + Matrix3::identity()) * 0.5;
    let k = (0..3)
        .max_by(|&i, &j| b[(i, i)].total_cmp(&b[(j, j)]))
        .unwrap_or(0);
    let mut axis = b.column(k).into_owned() / b[(k, k)].max(0.0).sqrt();
    axis.normalize_mut();
    let d = w.dot(&axis);
    // Slightly short of π the antisymmetric part still fixes the sign.
    let flip = if d.abs() > 1e-12 {
        d < 0.0
    } else {
        let big = axis.iamax();
        axis[big] < 0.0
    };
    if flip {
        -axis
    } else {
        axis
    }
}

/// Left Jacobian of SO(3): `exp(φ + δ) ≈ exp(J_l(φ) δ) exp(φ)`.
#[inline]
pub fn left_jacobian(phi: &Vector3<f64>) -> Matrix3<f64> {
    let k = cross(phi);
    let t2 = phi.norm_squared();
    let (a, b) = if t2.sqrt() < SERIES_ANGLE {
        (
            0.5 - t2 / 24.0 + t2 * t2 / 720.0,
            1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0,
        )
    } else {
        let t = t2.sqrt();
        ((1.0 - t.cos()) / t2, (t - t.sin()) / (t2 * t))
    };
    Matrix3::identity() + k * a + k * k * b
}

#[inline]
pub fn left_jacobian_inverse(phi: &Vector3<f64>) -> Matrix3<f64> {
    let k = cross(phi);
    let t2 = phi.norm_squared();
    let t = t2.sqrt();
    let c = if t < SERIES_ANGLE {
        1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0
    } else {
        1.0 / t2 - (1.0 + t.cos()) / (2.0 * t * t.sin())
    };
    Matrix3::identity() - k * 0.5 + k * k * c
}

impl Value for SO3 {
    type Dim = D3;
    const KIND: ValueKind = ValueKind::Rotation;

    #[inline]
    fn retract(&self, delta: &Vector3<f64>) -> Self {
        SO3::exp(&RotationVector(*delta)).compose(self)
    }

    #[inline]
    fn local(&self, base: &Self) -> Vector3<f64> {
        self.compose(&base.inverse()).log().0
    }

    #[inline]
    fn is_finite(&self) -> bool {
        self.matrix.iter().all(|x| x.is_finite())
    }

    fn coefficients(&self) -> Vec<f64> {
        self.matrix.transpose().iter().copied().collect()
    }
}

impl Group for SO3 {
    type Tangent = RotationVector;

    #[inline]
    fn identity() -> Self {
        SO3::identity()
    }

    #[inline(always)]
    fn compose(&self, other: &Self) -> Self {
        SO3::compose(self, other)
    }

    #[inline(always)]
    fn inverse(&self) -> Self {
        SO3::inverse(self)
    }

    #[inline(always)]
    fn act(&self, p: &EuclideanVector) -> EuclideanVector {
        self.rotate(p)
    }

    #[inline(always)]
    fn inverse_act(&self, p: &EuclideanVector) -> EuclideanVector {
        self.inverse_rotate(p)
    }

    #[inline(always)]
    fn adjoint(&self) -> Matrix3<f64> {
        self.matrix
    }

    #[inline]
    fn exp(t: &RotationVector) -> Self {
        SO3::exp(t)
    }

    #[inline]
    fn log(&self) -> RotationVector {
        SO3::log(self)
    }

    #[inline]
    fn left_jacobian(t: &RotationVector) -> Matrix3<f64> {
        left_jacobian(&t.0)
    }

    #[inline]
    fn left_jacobian_inverse(t: &RotationVector) -> Matrix3<f64> {
        left_jacobian_inverse(&t.0)
    }
}

impl Value for RotationVector {
    type Dim = D3;
    const KIND: ValueKind = ValueKind::RotationVector;

    #[inline]
    fn retract(&self, delta: &Vector3<f64>) -> Self {
        RotationVector(self.0 + delta)
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

impl VectorSpace for RotationVector {
    #[inline]
    fn zero() -> Self {
        RotationVector(Vector3::zeros())
    }
    #[inline]
    fn add(&self, other: &Self) -> Self {
        RotationVector(self.0 + other.0)
    }
    #[inline]
    fn sub(&self, other: &Self) -> Self {
        RotationVector(self.0 - other.0)
    }
    #[inline]
    fn neg(&self) -> Self {
        RotationVector(-self.0)
    }
    #[inline]
    fn scale(&self, s: f64) -> Self {
        RotationVector(self.0 * s)
    }
    #[inline]
    fn to_vector(&self) -> Vector3<f64> {
        self.0
    }
    #[inline]
    fn from_vector(v: &Vector3<f64>) -> Self {
        RotationVector(*v)
    }
}

impl Tangent for RotationVector {
    type Group = SO3;
}
