use nalgebra::Vector3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::counters;
use crate::manifold::{random_rotation, random_transform, random_vector};

crate::frames!(B, C, L, W);

fn point(v: Vector3<f64>) -> Point {
    Point::new(EuclideanVector(v))
}

fn close(a: &EuclideanVector, b: &EuclideanVector, tol: f64) -> bool {
    (a.0 - b.0).abs().max() <= tol
}

#[test]
fn tree_shape_follows_the_operators() {
    let c = Rotation::<C, B>::new(SO3::identity());
    let p = Point::<C, C, L>::new(EuclideanVector::new(1.0, 0.0, 0.0));
    let q = Point::<B, B, C>::new(EuclideanVector::new(0.0, 1.0, 0.0));
    let e = c.inverse() * &p + &q;
    assert_eq!(
        e.outline(),
        "Sum (B,B,L)\n  Rotate (B,C,L)\n    Inverse (B,C)\n      Leaf SO3 (C,B)\n    Leaf R3 (C,C,L)\n  Leaf R3 (B,B,C)\n"
    );
}

#[test]
fn leaf_evaluates_to_itself() {
    let p = point(Vector3::new(0.25, -1.0, 3.5));
    assert_eq!(Expr::value(&&p), *p.value());
    assert_eq!((&p).evaluate().value(), *p.value());
}

#[test]
fn rotation_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let c: Rotation = Rotation::new(random_rotation(&mut rng));
        let p = point(random_vector(&mut rng, 5.0));
        let e = (&c).inverse() * (&c * &p);
        assert!(close(&e.value(), p.value(), 1e-12));
        assert!(close(&e.evaluate().value(), p.value(), 1e-12));
    }
}

#[test]
fn identity_rotation_reduces_to_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let c: Rotation = Rotation::new(SO3::identity());
    let p = point(random_vector(&mut rng, 5.0));
    let q = point(random_vector(&mut rng, 5.0));
    let e = c.inverse() * &p + &q;
    assert!(close(
        &e.value(),
        &EuclideanVector(p.value().0 + q.value().0),
        1e-15
    ));
}

#[test]
fn inverse_transform_is_fused() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let p = point(random_vector(&mut rng, 5.0));

    let t: Transform = Transform::new(SE3::identity());
    assert!(close(&(t.inverse() * &p).value(), p.value(), 0.0));

    let shift = random_vector(&mut rng, 3.0);
    let t: Transform = Transform::new(SE3::new(SO3::identity(), shift));
    let expected = EuclideanVector(p.value().0 - shift);
    assert!(close(&(t.inverse() * &p).value(), &expected, 1e-15));
    assert!(close(&(t.inverse() * &p).evaluate().value(), &expected, 1e-15));

    for _ in 0..100 {
        let t: Transform = Transform::new(random_transform(&mut rng, 3.0));
        let explicit = t.value().inverse().transform(p.value());
        assert!(close(&(t.inverse() * &p).value(), &explicit, 1e-12));
        assert!(close(&(t.inverse() * &p).evaluate().value(), &explicit, 1e-12));
    }
}

#[test]
fn reassociated_chain_matches_left_to_right() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..100 {
        let c1: Rotation = Rotation::new(random_rotation(&mut rng));
        let c2: Rotation = Rotation::new(random_rotation(&mut rng));
        let c3: Rotation = Rotation::new(random_rotation(&mut rng));
        let p = point(random_vector(&mut rng, 5.0));
        let e = &c1 * &c2 * &c3 * &p;
        let left_to_right = c1
            .value()
            .compose(c2.value())
            .compose(c3.value())
            .rotate(p.value());
        let right_to_left = c1
            .value()
            .rotate(&c2.value().rotate(&c3.value().rotate(p.value())));
        assert!(close(&e.value(), &left_to_right, 1e-12));
        assert!(close(&e.value(), &right_to_left, 1e-12));
        assert!(close(&e.evaluate().value(), &left_to_right, 1e-12));
    }
}

#[test]
fn mixed_tree_matches_direct_computation() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..100 {
        let t: Transform = Transform::new(random_transform(&mut rng, 2.0));
        let c1: Rotation = Rotation::new(random_rotation(&mut rng));
        let c2: Rotation = Rotation::new(random_rotation(&mut rng));
        let phi: RotationTangent = RotationTangent::new(RotationVector(random_vector(&mut rng, 0.5)));
        let p = point(random_vector(&mut rng, 5.0));
        let q = point(random_vector(&mut rng, 5.0));

        let e = &t * (&c1 * &p - (-&q) * 0.5);
        let direct = t.value().transform(&EuclideanVector(
            c1.value().rotate(p.value()).0 + 0.5 * q.value().0,
        ));
        assert!(close(&e.value(), &direct, 1e-12));
        assert!(close(&e.evaluate().value(), &direct, 1e-12));

        let g = (&c1).boxplus(&phi).boxminus(&c2).exp();
        let direct = SO3::exp(&c1.value().boxplus(phi.value()).boxminus(c2.value()));
        assert!((g.value().matrix() - direct.matrix()).abs().max() < 1e-12);
        assert!((g.evaluate().value().matrix() - direct.matrix()).abs().max() < 1e-12);

        let r = ((&c1).inverse() * &c2).log();
        let direct = c1.value().inverse().compose(c2.value()).log();
        assert!((r.value().0 - direct.0).abs().max() < 1e-12);
    }
}

#[test]
fn cached_intermediates_match_subtrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let c = Rotation::<C, B>::new(random_rotation(&mut rng));
    let p = Point::<C, C, L>::new(EuclideanVector(random_vector(&mut rng, 5.0)));
    let q = Point::<B, B, C>::new(EuclideanVector(random_vector(&mut rng, 5.0)));
    let e = c.inverse() * &p + &q;
    let cache = e.evaluate();
    assert_eq!(cache.value, e.value());
    assert_eq!(cache.lhs.value, (c.inverse() * &p).value());
    assert_eq!(cache.lhs.lhs.value(), c.inverse().value());
    assert_eq!(cache.lhs.lhs.child.value, *c.value());
    assert_eq!(cache.lhs.rhs.value, *p.value());
    assert_eq!(cache.rhs.value, *q.value());
}

#[test]
fn framed_evaluation_carries_the_derived_signature() {
    let t = Transform::<W, B>::new(SE3::identity());
    let p = Point::<B, B, L>::new(EuclideanVector::new(1.0, 2.0, 3.0));
    let out: Point<W, W, L> = (&t * &p).evaluate_framed();
    assert_eq!(out.value(), p.value());
    assert_eq!(format!("{out:?}"), format!("{:?}(W,W,L)", p.value()));
}

#[test]
fn identity_blocks_do_no_arithmetic() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let p = point(random_vector(&mut rng, 1.0));
    let q = Point::<W, W, L>::new(EuclideanVector(random_vector(&mut rng, 1.0)));
    let r = Point::<W, L, B>::new(EuclideanVector(random_vector(&mut rng, 1.0)));
    let sum = &q + &r;
    let (_, counts) = counters::count(|| sum.eval_with_jacobians(()));
    assert_eq!(counts.multiplications, 0);
    let neg = -&p;
    let (_, counts) = counters::count(|| neg.eval_with_jacobians(()));
    assert_eq!(counts.multiplications, 0);
}

#[test]
fn leaf_membership_is_static() {
    let c = Rotation::<B, C>::new(SO3::identity());
    let p = Point::<C, C, L>::new(EuclideanVector::new(1.0, 0.0, 0.0));
    type E<'a> = Rotate<&'a Rotation<B, C>, &'a Point<C, C, L>>;
    assert!(<E as Expr>::contains::<Point<C, C, L>>());
    assert!(!<E as Expr>::contains::<Point<B, B, L>>());
    let _ = &c * &p;
}
