use nalgebra::{Quaternion, UnitQuaternion, Vector3};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{SE3, SO3};

/// Haar-uniform rotation: a normalized 4-D Gaussian gives a uniform unit
/// quaternion.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> SO3 {
    loop {
        let q = Quaternion::new(
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        );
        if q.norm() > 1e-6 {
            let m = UnitQuaternion::from_quaternion(q)
                .to_rotation_matrix()
                .into_inner();
            return SO3::from_matrix_unchecked(m);
        }
    }
}

/// Vector with entries uniform in `[-scale, scale]`.
pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Vector3<f64> {
    Vector3::from_fn(|_, _| rng.random_range(-scale..=scale))
}

pub fn random_transform<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> SE3 {
    SE3::new(random_rotation(rng), random_vector(rng, scale))
}
