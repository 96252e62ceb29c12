use nalgebra::{Matrix3, Matrix6, Vector3, Vector6};

use super::so3::{self, RotationVector, SO3};
use super::{cross, EuclideanVector, Group, Tangent, Value, ValueKind, VectorSpace};
use crate::linalg::D6;

const SERIES_ANGLE: f64 = 0.1;

/// Rigid transformation `p ↦ R p + t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SE3 {
    pub rotation: SO3,
    pub translation: Vector3<f64>,
}

/// Element of se(3). As a 6-vector the rotational part comes first.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Twist {
    pub rotational: Vector3<f64>,
    pub translational: Vector3<f64>,
}

impl Twist {
    #[inline]
    pub fn new(rotational: Vector3<f64>, translational: Vector3<f64>) -> Self {
        Twist {
            rotational,
            translational,
        }
    }

    #[inline]
    pub fn as_vector(&self) -> Vector6<f64> {
        Vector6::new(
            self.rotational.x,
            self.rotational.y,
            self.rotational.z,
            self.translational.x,
            self.translational.y,
            self.translational.z,
        )
    }

    #[inline]
    pub fn from_vector(v: &Vector6<f64>) -> Self {
        Twist {
            rotational: v.fixed_rows::<3>(0).into_owned(),
            translational: v.fixed_rows::<3>(3).into_owned(),
        }
    }
}

impl SE3 {
    #[inline]
    pub fn new(rotation: SO3, translation: Vector3<f64>) -> Self {
        SE3 {
            rotation,
            translation,
        }
    }

    #[inline]
    pub fn identity() -> Self {
        SE3::new(SO3::identity(), Vector3::zeros())
    }

    #[inline]
    pub fn exp(xi: &Twist) -> Self {
        let rotation = SO3::exp(&RotationVector(xi.rotational));
        let v = so3::left_jacobian(&xi.rotational);
        SE3::new(rotation, v * xi.translational)
    }

    #[inline]
    pub fn log(&self) -> Twist {
        let phi = self.rotation.log().0;
        let v_inv = so3::left_jacobian_inverse(&phi);
        Twist::new(phi, v_inv * self.translation)
    }

    #[inline(always)]
    pub fn compose(&self, other: &SE3) -> SE3 {
        SE3::new(
            self.rotation.compose(&other.rotation),
            self.rotation.matrix() * other.translation + self.translation,
        )
    }

    #[inline(always)]
    pub fn inverse(&self) -> SE3 {
        let rt = self.rotation.inverse();
        SE3::new(rt, -(rt.matrix() * self.translation))
    }

    #[inline(always)]
    pub fn transform(&self, p: &EuclideanVector) -> EuclideanVector {
        EuclideanVector(self.rotation.matrix() * p.0 + self.translation)
    }

    /// `self⁻¹ · p` evaluated as `Rᵀ (p − t)`.
    #[inline(always)]
    pub fn inverse_transform(&self, p: &EuclideanVector) -> EuclideanVector {
        EuclideanVector(self.rotation.matrix().tr_mul(&(p.0 - self.translation)))
    }

    /// 4 × 4 homogeneous form.
    #[inline]
    pub fn homogeneous(&self) -> nalgebra::Matrix4<f64> {
        let mut m = nalgebra::Matrix4::identity();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(self.rotation.matrix());
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.translation);
        m
    }
}

#[inline]
fn q_coefficients(t2: f64, series: bool) -> (f64, f64, f64) {
    if series {
        (
            1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0 - t2 * t2 * t2 / 362880.0,
            1.0 / 24.0 - t2 / 720.0 + t2 * t2 / 40320.0 - t2 * t2 * t2 / 3628800.0,
            1.0 / 120.0 - t2 / 2520.0 + t2 * t2 / 120960.0 - t2 * t2 * t2 / 9979200.0,
        )
    } else {
        let t = t2.sqrt();
        let (s, c) = t.sin_cos();
        (
            (t - s) / (t2 * t),
            (t2 + 2.0 * c - 2.0) / (2.0 * t2 * t2),
            (2.0 * t - 3.0 * s + t * c) / (2.0 * t2 * t2 * t),
        )
    }
}

/// Coupling block `Q(φ, ρ)` of the SE(3) left Jacobian.
#[inline]
pub fn q_block(phi: &Vector3<f64>, rho: &Vector3<f64>) -> Matrix3<f64> {
    let px = cross(phi);
    let rx = cross(rho);
    let t2 = phi.norm_squared();
    let (c1, c2, c3) = q_coefficients(t2, t2 < SERIES_ANGLE * SERIES_ANGLE);
    let prp = px * rx * px;
    rx * 0.5
        + (px * rx + rx * px + prp) * c1
        + (px * px * rx + rx * px * px - prp * 3.0) * c2
        + (prp * px + px * prp) * c3
}

/// Left Jacobian of SE(3) in (rotational, translational) order.
#[inline]
pub fn left_jacobian(xi: &Twist) -> Matrix6<f64> {
    let j = so3::left_jacobian(&xi.rotational);
    let q = q_block(&xi.rotational, &xi.translational);
    let mut m = Matrix6::zeros();
    m.fixed_view_mut::<3, 3>(0, 0).copy_from(&j);
    m.fixed_view_mut::<3, 3>(3, 3).copy_from(&j);
    m.fixed_view_mut::<3, 3>(3, 0).copy_from(&q);
    m
}

#[inline]
pub fn left_jacobian_inverse(xi: &Twist) -> Matrix6<f64> {
    let j_inv = so3::left_jacobian_inverse(&xi.rotational);
    let q = q_block(&xi.rotational, &xi.translational);
    let mut m = Matrix6::zeros();
    m.fixed_view_mut::<3, 3>(0, 0).copy_from(&j_inv);
    m.fixed_view_mut::<3, 3>(3, 3).copy_from(&j_inv);
    m.fixed_view_mut::<3, 3>(3, 0).copy_from(&(-j_inv * q * j_inv));
    m
}

impl Value for SE3 {
    type Dim = D6;
    const KIND: ValueKind = ValueKind::Transform;

    #[inline]
    fn retract(&self, delta: &Vector6<f64>) -> Self {
        SE3::exp(&Twist::from_vector(delta)).compose(self)
    }

    #[inline]
    fn local(&self, base: &Self) -> Vector6<f64> {
        self.compose(&base.inverse()).log().as_vector()
    }

    #[inline]
    fn is_finite(&self) -> bool {
        self.rotation.is_finite() && self.translation.iter().all(|x| x.is_finite())
    }

    fn coefficients(&self) -> Vec<f64> {
        let h = self.homogeneous();
        h.transpose().iter().take(12).copied().collect()
    }
}

impl Group for SE3 {
    type Tangent = Twist;

    #[inline]
    fn identity() -> Self {
        SE3::identity()
    }

    #[inline(always)]
    fn compose(&self, other: &Self) -> Self {
        SE3::compose(self, other)
    }

    #[inline(always)]
    fn inverse(&self) -> Self {
        SE3::inverse(self)
    }

    #[inline(always)]
    fn act(&self, p: &EuclideanVector) -> EuclideanVector {
        self.transform(p)
    }

    #[inline(always)]
    fn inverse_act(&self, p: &EuclideanVector) -> EuclideanVector {
        self.inverse_transform(p)
    }

    #[inline]
    fn adjoint(&self) -> Matrix6<f64> {
        let r = self.rotation.matrix();
        let mut m = Matrix6::zeros();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(r);
        m.fixed_view_mut::<3, 3>(3, 3).copy_from(r);
        m.fixed_view_mut::<3, 3>(3, 0)
            .copy_from(&(cross(&self.translation) * r));
        m
    }

    #[inline]
    fn exp(t: &Twist) -> Self {
        SE3::exp(t)
    }

    #[inline]
    fn log(&self) -> Twist {
        SE3::log(self)
    }

    #[inline]
    fn left_jacobian(t: &Twist) -> Matrix6<f64> {
        left_jacobian(t)
    }

    #[inline]
    fn left_jacobian_inverse(t: &Twist) -> Matrix6<f64> {
        left_jacobian_inverse(t)
    }
}

impl Value for Twist {
    type Dim = D6;
    const KIND: ValueKind = ValueKind::Twist;

    #[inline]
    fn retract(&self, delta: &Vector6<f64>) -> Self {
        Twist::from_vector(&(self.as_vector() + delta))
    }

    #[inline]
    fn local(&self, base: &Self) -> Vector6<f64> {
        self.as_vector() - base.as_vector()
    }

    #[inline]
    fn is_finite(&self) -> bool {
        self.as_vector().iter().all(|x| x.is_finite())
    }

    fn coefficients(&self) -> Vec<f64> {
        self.as_vector().iter().copied().collect()
    }
}

impl VectorSpace for Twist {
    #[inline]
    fn zero() -> Self {
        Twist::new(Vector3::zeros(), Vector3::zeros())
    }
    #[inline]
    fn add(&self, other: &Self) -> Self {
        Twist::new(
            self.rotational + other.rotational,
            self.translational + other.translational,
        )
    }
    #[inline]
    fn sub(&self, other: &Self) -> Self {
        Twist::new(
            self.rotational - other.rotational,
            self.translational - other.translational,
        )
    }
    #[inline]
    fn neg(&self) -> Self {
        Twist::new(-self.rotational, -self.translational)
    }
    #[inline]
    fn scale(&self, s: f64) -> Self {
        Twist::new(self.rotational * s, self.translational * s)
    }
    #[inline]
    fn to_vector(&self) -> Vector6<f64> {
        self.as_vector()
    }
    #[inline]
    fn from_vector(v: &Vector6<f64>) -> Self {
        Twist::from_vector(v)
    }
}

impl Tangent for Twist {
    type Group = SE3;
}
