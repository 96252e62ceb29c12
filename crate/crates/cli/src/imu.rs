//! Preintegrated rotation residual
//! `r = log((C̃ exp(φ))⁻¹ C_WI⁻¹ C_WJ)`.

use std::f64::consts::PI;

use framegeo::manifold::{random_rotation, random_vector, so3};
use framegeo::{forward_jacobian, frames, Expr, NodeCache, Rotation, RotationTangent, RotationVector, SO3};
use nalgebra::Matrix3;
use rand::Rng;

use crate::Method;

frames!(W, I, J, X, R);

/// Residuals closer than this to the cut of the log map are flagged.
pub const SINGULAR_MARGIN: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImuInput {
    /// Preintegrated rotation `C̃`.
    pub c_tilde: SO3,
    /// Bias correction `φ`.
    pub phi: RotationVector,
    pub c_wi: SO3,
    pub c_wj: SO3,
}

impl ImuInput {
    /// Random poses with a measurement that is off by a rotation of up to
    /// about 0.5 rad, and a bias correction of up to about 0.1 rad.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let c_wi = random_rotation(rng);
        let c_tilde = random_rotation(rng);
        let phi = RotationVector(random_vector(rng, 0.05));
        let noise = SO3::exp(&RotationVector(random_vector(rng, 0.3)));
        let c_wj = c_wi.compose(&c_tilde).compose(&noise);
        ImuInput {
            c_tilde,
            phi,
            c_wi,
            c_wj,
        }
    }

    /// The case `C̃ = C_WI⁻¹ C_WJ`, `φ = 0`, where the residual vanishes.
    pub fn exact<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let c_wi = random_rotation(rng);
        let c_wj = random_rotation(rng);
        ImuInput {
            c_tilde: c_wi.inverse().compose(&c_wj),
            phi: RotationVector::new(0.0, 0.0, 0.0),
            c_wi,
            c_wj,
        }
    }

    /// Whether the residual is too close to angle π for its Jacobians to be
    /// meaningful.
    pub fn is_singular(&self) -> bool {
        residual(self).angle() > PI - SINGULAR_MARGIN
    }
}

/// Residual and its Jacobians, ordered `C̃, φ, C_WI, C_WJ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ImuOutput {
    pub value: RotationVector,
    pub jacobians: [Matrix3<f64>; 4],
}

pub type Out = (RotationVector, [Matrix3<f64>; 4]);

/// Direct evaluation of the residual.
pub fn residual(x: &ImuInput) -> RotationVector {
    let m = x.c_tilde.compose(&SO3::exp(&x.phi));
    m.inverse().compose(&x.c_wi.inverse()).compose(&x.c_wj).log()
}

/// Hand-written residual and Jacobians.
///
/// With `M = C̃ exp(φ)` and `A = J_l⁻¹(r) Mᵀ`:
/// `∂r/∂C̃ = −A`, `∂r/∂φ = −A C̃ J_l(φ)`, `∂r/∂C_WJ = A C_WIᵀ`,
/// `∂r/∂C_WI = −∂r/∂C_WJ`. `A` is shared by all four.
#[inline(always)]
pub fn hand_imu(c_tilde: &SO3, phi: &RotationVector, c_wi: &SO3, c_wj: &SO3) -> Out {
    let ct = c_tilde.matrix();
    let wi = c_wi.matrix();
    let m = ct * SO3::exp(phi).matrix();
    let n = wi.tr_mul(c_wj.matrix());
    let delta = SO3::from_matrix_unchecked(m.tr_mul(&n));
    let r = delta.log();
    let a = so3::left_jacobian_inverse(&r.0) * m.transpose();
    let d_wj = a * wi.transpose();
    let d_phi = -(a * ct) * so3::left_jacobian(&phi.0);
    (r, [-a, d_phi, -d_wj, d_wj])
}

pub struct Leaves {
    pub c_tilde: Rotation<I, J>,
    pub phi: RotationTangent<J, J, X>,
    pub c_wi: Rotation<W, I>,
    pub c_wj: Rotation<W, J>,
}

impl Leaves {
    pub fn new(x: &ImuInput) -> Self {
        Leaves {
            c_tilde: Rotation::new(x.c_tilde),
            phi: RotationTangent::new(x.phi),
            c_wi: Rotation::new(x.c_wi),
            c_wj: Rotation::new(x.c_wj),
        }
    }
}

macro_rules! residual_expr {
    ($l:expr) => {
        ((&$l.c_tilde * (&$l.phi).exp()).inverse() * ((&$l.c_wi).inverse() * &$l.c_wj)).log_to::<R>()
    };
}

#[inline(always)]
pub fn hand(l: &Leaves) -> Out {
    hand_imu(l.c_tilde.value(), l.phi.value(), l.c_wi.value(), l.c_wj.value())
}

#[inline(always)]
pub fn forward(l: &Leaves) -> Out {
    let e = residual_expr!(l);
    let cache = e.evaluate();
    (
        cache.value(),
        [
            *forward_jacobian(&e, &cache, &l.c_tilde).matrix(),
            *forward_jacobian(&e, &cache, &l.phi).matrix(),
            *forward_jacobian(&e, &cache, &l.c_wi).matrix(),
            *forward_jacobian(&e, &cache, &l.c_wj).matrix(),
        ],
    )
}

#[inline(always)]
pub fn typed_forward(l: &Leaves) -> Out {
    let e = residual_expr!(l);
    let (v, (a, b, c, d)) = e.eval_with_jacobians((&l.c_tilde, &l.phi, &l.c_wi, &l.c_wj));
    (v, [*a.matrix(), *b.matrix(), *c.matrix(), *d.matrix()])
}

#[inline(always)]
pub fn reverse(l: &Leaves) -> Out {
    let e = residual_expr!(l);
    let (v, (a, b, c, d)) = e.eval_with_jacobians(());
    (v, [*a.matrix(), *b.matrix(), *c.matrix(), *d.matrix()])
}

/// Value of the residual expression, for finite differencing.
pub fn value(x: &ImuInput) -> RotationVector {
    let l = Leaves::new(x);
    residual_expr!(l).value()
}

pub fn outline(x: &ImuInput) -> String {
    let l = Leaves::new(x);
    residual_expr!(l).outline()
}

pub fn evaluate(method: Method, x: &ImuInput) -> ImuOutput {
    let l = Leaves::new(x);
    let (value, jacobians) = match method {
        Method::Hand => hand(&l),
        Method::Forward => forward(&l),
        Method::TypedForward => typed_forward(&l),
        Method::Reverse => reverse(&l),
    };
    ImuOutput { value, jacobians }
}
