use framegeo::autodiff::reverse_with_cache;
use framegeo::manifold::{random_rotation, random_transform, random_vector};
use framegeo::{
    fd_jacobian, forward_jacobian, frames, typed_forward_jacobian, EuclideanVector, Expr, JacobianList,
    NodeCache, OracleConfig, Point, Rotation, RotationTangent, RotationVector, Transform, SE3, SO3,
};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

frames!(A, B, C, D, E, F);

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(500)
}

fn worst(a: &[DMatrix<f64>], b: &[DMatrix<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs().max())
        .fold(0.0, f64::max)
}

/// Largest disagreement between the three evaluators on `$e`.
macro_rules! mode_gap {
    ($e:expr; $($leaf:ident),+) => {{
        let e = $e;
        let cache = e.evaluate();
        let reverse = reverse_with_cache(&e, &cache).into_dynamic();
        let typed = vec![$(typed_forward_jacobian(&e, &cache, &$leaf).to_dmatrix()),+];
        let forward = vec![$(forward_jacobian(&e, &cache, &$leaf).to_dmatrix()),+];
        worst(&reverse, &typed).max(worst(&reverse, &forward))
    }};
}

fn vgap(a: &EuclideanVector, b: &EuclideanVector) -> f64 {
    (a.0 - b.0).abs().max()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn evaluators_agree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c1 = Rotation::<A, B>::new(random_rotation(&mut rng));
        let c2 = Rotation::<B, C>::new(random_rotation(&mut rng));
        let p = Point::<C, C, D>::new(EuclideanVector(random_vector(&mut rng, 3.0)));
        let q = Point::<A, A, C>::new(EuclideanVector(random_vector(&mut rng, 3.0)));
        prop_assert!(mode_gap!(&c1 * &c2 * &p + &q; c1, c2, p, q) <= 1e-12);

        let phi = RotationTangent::<A, A, B>::new(RotationVector(random_vector(&mut rng, 1.0)));
        let r = Point::<B, B, C>::new(EuclideanVector(random_vector(&mut rng, 3.0)));
        prop_assert!(mode_gap!((&c1).boxplus(&phi) * &r; c1, phi, r) <= 1e-12);

        let t = Transform::<A, B>::new(random_transform(&mut rng, 2.0));
        let u = Point::<A, A, C>::new(EuclideanVector(random_vector(&mut rng, 3.0)));
        let v = Point::<B, D, C>::new(EuclideanVector(random_vector(&mut rng, 3.0)));
        prop_assert!(mode_gap!((&t).inverse() * &u - (&v).scale(0.5); t, u, v) <= 1e-12);
    }

    #[test]
    fn evaluation_matches_direct_computation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c1 = Rotation::<A, B>::new(random_rotation(&mut rng));
        let c2 = Rotation::<B, C>::new(random_rotation(&mut rng));
        let p = Point::<C, C, D>::new(EuclideanVector(random_vector(&mut rng, 3.0)));
        let q = Point::<A, A, C>::new(EuclideanVector(random_vector(&mut rng, 3.0)));
        let e = &c1 * &c2 * &p + &q;
        let direct = EuclideanVector(c1.value().rotate(&c2.value().rotate(p.value())).0 + q.value().0);
        prop_assert!(vgap(&e.value(), &direct) <= 1e-12);
        prop_assert!(vgap(&e.evaluate().value(), &direct) <= 1e-12);
    }

    #[test]
    fn reassociation_is_exact_to_rounding(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c1 = Rotation::<A, B>::new(random_rotation(&mut rng));
        let c2 = Rotation::<B, C>::new(random_rotation(&mut rng));
        let c3 = Rotation::<C, D>::new(random_rotation(&mut rng));
        let c4 = Rotation::<D, E>::new(random_rotation(&mut rng));
        let p = Point::<E, E, F>::new(EuclideanVector(random_vector(&mut rng, 3.0)));
        let left_to_right = c1
            .value()
            .compose(c2.value())
            .compose(c3.value())
            .compose(c4.value())
            .rotate(p.value());
        let e = &c1 * &c2 * &c3 * &c4 * &p;
        prop_assert!(vgap(&e.evaluate().value(), &left_to_right) <= 1e-12);
    }

    #[test]
    fn absent_leaf_gets_an_exact_zero(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Rotation::<A, B>::new(random_rotation(&mut rng));
        let p = Point::<B, B, C>::new(EuclideanVector(random_vector(&mut rng, 3.0)));
        let stranger = Rotation::<D, E>::new(random_rotation(&mut rng));
        let e = &c * &p;
        let j = forward_jacobian(&e, &e.evaluate(), &stranger);
        prop_assert!(j.is_zero());
        prop_assert!(j.matrix().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn oracle_of_a_round_trip_is_identity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = OracleConfig::default();
        let (x, g) = (random_rotation(&mut rng), random_rotation(&mut rng));
        let j = fd_jacobian(|y: &SO3| y.compose(&g).compose(&g.inverse()), &x, &cfg).unwrap();
        prop_assert!((j.to_dmatrix() - DMatrix::identity(3, 3)).abs().max() <= 10.0 * cfg.tolerance);
        let (x, g) = (random_transform(&mut rng, 2.0), random_transform(&mut rng, 2.0));
        let j = fd_jacobian(|y: &SE3| y.compose(&g).compose(&g.inverse()), &x, &cfg).unwrap();
        prop_assert!((j.to_dmatrix() - DMatrix::identity(6, 6)).abs().max() <= 10.0 * cfg.tolerance);
    }
}
