use std::f64::consts::PI;

use framegeo::manifold::{cross, random_rotation, random_vector, EuclideanVector};
use framegeo::{Group, RotationVector, Twist, SE3, SO3};
use nalgebra::{Matrix3, Vector3};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(1000)
}

fn rotation() -> impl Strategy<Value = SO3> {
    any::<u64>().prop_map(|seed| random_rotation(&mut ChaCha8Rng::seed_from_u64(seed)))
}

fn vec3(scale: f64) -> impl Strategy<Value = Vector3<f64>> {
    [-scale..scale, -scale..scale, -scale..scale].prop_map(|[x, y, z]| Vector3::new(x, y, z))
}

/// Rotation vectors with norm up to `max`, direction uniform on the sphere.
fn rotation_vector(max: f64) -> impl Strategy<Value = RotationVector> {
    (any::<u64>(), 0.0..max).prop_map(|(seed, angle)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut axis = random_vector(&mut rng, 1.0);
        while axis.norm() < 1e-3 {
            axis = random_vector(&mut rng, 1.0);
        }
        RotationVector(axis.normalize() * angle)
    })
}

fn transform() -> impl Strategy<Value = SE3> {
    (rotation(), vec3(10.0)).prop_map(|(r, t)| SE3::new(r, t))
}

fn twist(max_angle: f64) -> impl Strategy<Value = Twist> {
    (rotation_vector(max_angle), vec3(5.0)).prop_map(|(w, v)| Twist::new(w.0, v))
}

fn so3_dist(a: &SO3, b: &SO3) -> f64 {
    (a.matrix() - b.matrix()).abs().max()
}

fn se3_dist(a: &SE3, b: &SE3) -> f64 {
    (a.homogeneous() - b.homogeneous()).abs().max()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn so3_group_axioms(a in rotation(), b in rotation(), c in rotation()) {
        let left = a.compose(&b).compose(&c);
        let right = a.compose(&b.compose(&c));
        prop_assert!(so3_dist(&left, &right) < 1e-12);
        prop_assert!(so3_dist(&SO3::identity().compose(&a), &a) == 0.0);
        prop_assert!(so3_dist(&a.compose(&SO3::identity()), &a) == 0.0);
        prop_assert!(so3_dist(&a.compose(&a.inverse()), &SO3::identity()) < 1e-12);
        prop_assert!(so3_dist(&a.inverse().compose(&a), &SO3::identity()) < 1e-12);
        prop_assert!(a.invariant_error() < 1e-9);
    }

    #[test]
    fn se3_group_axioms(a in transform(), b in transform(), c in transform()) {
        let left = a.compose(&b).compose(&c);
        let right = a.compose(&b.compose(&c));
        prop_assert!(se3_dist(&left, &right) < 1e-12);
        prop_assert!(se3_dist(&SE3::identity().compose(&a), &a) < 1e-15);
        prop_assert!(se3_dist(&a.compose(&a.inverse()), &SE3::identity()) < 1e-12);
        let direct = a.homogeneous() * b.homogeneous();
        prop_assert!((a.compose(&b).homogeneous() - direct).abs().max() < 1e-12);
    }

    #[test]
    fn so3_exp_log_round_trip(phi in rotation_vector(PI - 1e-3)) {
        let back = SO3::exp(&phi).log();
        prop_assert!((back.0 - phi.0).abs().max() < 1e-9, "{:?} -> {:?}", phi, back);
    }

    #[test]
    fn se3_exp_log_round_trip(xi in twist(PI - 1e-3)) {
        let back = SE3::exp(&xi).log();
        prop_assert!((back.as_vector() - xi.as_vector()).abs().max() < 1e-9);
    }

    #[test]
    fn so3_box_operators_are_inverse(g1 in rotation(), g2 in rotation(), phi in rotation_vector(PI - 1e-3)) {
        let back = g1.boxplus(&phi).boxminus(&g1);
        prop_assert!((back.0 - phi.0).abs().max() < 1e-9);
        let d = g1.boxminus(&g2);
        prop_assert!(so3_dist(&g2.boxplus(&d), &g1) < 1e-9);
        let explicit = SO3::exp(&phi).compose(&g1);
        prop_assert!(so3_dist(&g1.boxplus(&phi), &explicit) == 0.0);
    }

    #[test]
    fn se3_box_operators_are_inverse(g1 in transform(), g2 in transform(), xi in twist(PI - 1e-3)) {
        let back = g1.boxplus(&xi).boxminus(&g1);
        prop_assert!((back.as_vector() - xi.as_vector()).abs().max() < 1e-9);
        let d = g1.boxminus(&g2);
        prop_assert!(se3_dist(&g2.boxplus(&d), &g1) < 1e-9);
    }

    #[test]
    fn cross_is_skew(v in vec3(100.0), w in vec3(100.0)) {
        let m = cross(&v);
        prop_assert_eq!(m + m.transpose(), Matrix3::zeros());
        prop_assert!((m * w - v.cross(&w)).abs().max() < 1e-12);
    }

    #[test]
    fn transform_is_rotation_plus_translation(t in transform(), p in vec3(10.0)) {
        let p = EuclideanVector(p);
        prop_assert_eq!(t.transform(&p).0, t.rotation.rotate(&p).0 + t.translation);
        let h = t.homogeneous() * p.0.push(1.0);
        prop_assert!((t.transform(&p).0 - h.xyz()).abs().max() < 1e-12);
        prop_assert!((t.inverse().transform(&t.transform(&p)).0 - p.0).abs().max() < 1e-12);
    }

    #[test]
    fn inverse_negates_the_axis(theta in -PI..PI) {
        let a = SO3::exp(&RotationVector::new(theta, 0.0, 0.0)).inverse();
        let b = SO3::exp(&RotationVector::new(-theta, 0.0, 0.0));
        prop_assert!(so3_dist(&a, &b) < 1e-15);
    }
}

#[test]
fn half_turn_log_matches_eigenvector_axis() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..200 {
        let axis = random_vector(&mut rng, 1.0).normalize();
        let c = SO3::exp(&RotationVector(axis * PI));
        let eig = nalgebra::SymmetricEigen::new((c.matrix() + c.matrix().transpose()) * 0.5);
        let k = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - 1.0).abs().total_cmp(&(b.1 - 1.0).abs()))
            .unwrap()
            .0;
        let mut expected: Vector3<f64> = eig.eigenvectors.column(k).into_owned();
        let largest = expected.iamax();
        if expected[largest] < 0.0 {
            expected = -expected;
        }
        let log = c.log();
        assert!((log.0.norm() - PI).abs() < 1e-9);
        assert!(
            (log.0 / PI - expected).abs().max() < 1e-6,
            "{log:?} vs {expected:?}"
        );
    }
}
