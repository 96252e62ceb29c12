use framegeo::frames::{check_rule, FrameSignature, Label, Operation, Pair, Signature, Triple};
use framegeo::manifold::{random_rotation, random_vector};
use framegeo::{
    admits, counters, frames, EuclideanVector, Expr, Frame, Point, Rotation, RotationTangent, RotationVector,
    Transform, Unframed, SE3, SO3,
};
use rand::rngs::StdRng;
use rand::SeedableRng;

frames!(A, B, C, D, L, W);

fn label<F: Frame>() -> Label {
    if F::NAME == Unframed::NAME {
        Label::Unframed
    } else {
        Label::Named(F::NAME)
    }
}

/// Static and run-time verdicts for one binary case; they must agree.
macro_rules! binary {
    ($op:expr, $rule:ident, $lhs:ty, $rhs:ty, $ok:expr) => {{
        let statically = admits!($rule<$rhs> for $lhs);
        let runtime = check_rule($op, &[<$lhs>::runtime(), <$rhs>::runtime()]);
        assert_eq!(statically, $ok, "{:?} {} {}", $op, <$lhs>::runtime(), <$rhs>::runtime());
        assert_eq!(runtime.is_ok(), $ok, "{:?}", runtime);
        runtime
    }};
}

macro_rules! unary {
    ($op:expr, $rule:ident, $arg:ty, $ok:expr) => {{
        let statically = admits!($rule for $arg);
        let runtime = check_rule($op, &[<$arg>::runtime()]);
        assert_eq!(statically, $ok, "{:?} {}", $op, <$arg>::runtime());
        assert_eq!(runtime.is_ok(), $ok, "{:?}", runtime);
        runtime
    }};
}

fn sig2(a: &str, b: &str) -> FrameSignature {
    FrameSignature::Pair(Label::Named(leak(a)), Label::Named(leak(b)))
}

fn sig3(d: &str, a: &str, b: &str) -> FrameSignature {
    FrameSignature::Triple(
        Label::Named(leak(d)),
        Label::Named(leak(a)),
        Label::Named(leak(b)),
    )
}

fn leak(s: &str) -> &'static str {
    Box::leak(s.to_owned().into_boxed_str())
}

#[test]
fn every_rule_accepts_its_pattern_and_rejects_a_variant() {
    use Operation::*;
    // Sum, both operand orders.
    assert_eq!(
        binary!(Sum, SumRule, Triple<D, A, B>, Triple<D, B, C>, true).unwrap(),
        sig3("D", "A", "C")
    );
    assert_eq!(
        binary!(Sum, SumRule, Triple<D, B, C>, Triple<D, A, B>, true).unwrap(),
        sig3("D", "A", "C")
    );
    let _ = binary!(Sum, SumRule, Triple<D, A, B>, Triple<C, B, C>, false);
    let _ = binary!(Sum, SumRule, Triple<D, A, B>, Triple<D, C, A>, true);
    let _ = binary!(Sum, SumRule, Triple<D, A, B>, Triple<D, C, L>, false);

    assert_eq!(
        unary!(Negative, NegRule, Triple<D, A, B>, true).unwrap(),
        sig3("D", "B", "A")
    );
    let _ = unary!(Negative, NegRule, Pair<A, B>, false);

    assert_eq!(
        binary!(Difference, DiffRule, Triple<D, A, C>, Triple<D, B, C>, true).unwrap(),
        sig3("D", "A", "B")
    );
    let _ = binary!(Difference, DiffRule, Triple<D, A, C>, Triple<D, C, B>, false);
    let _ = binary!(Difference, DiffRule, Triple<D, A, C>, Triple<L, B, C>, false);

    assert_eq!(
        unary!(Scaling, ScaleRule, Triple<A, B, C>, true).unwrap(),
        sig3("A", "B", "C")
    );
    let _ = unary!(Scaling, ScaleRule, Pair<A, B>, false);

    assert_eq!(
        binary!(Composition, ComposeRule, Pair<A, B>, Pair<B, C>, true).unwrap(),
        sig2("A", "C")
    );
    let _ = binary!(Composition, ComposeRule, Pair<A, B>, Pair<C, B>, false);

    assert_eq!(
        unary!(Inverse, InverseRule, Pair<A, B>, true).unwrap(),
        sig2("B", "A")
    );
    let _ = unary!(Inverse, InverseRule, Triple<A, A, B>, false);

    assert_eq!(
        binary!(Rotation, RotateRule, Pair<D, A>, Triple<A, B, C>, true).unwrap(),
        sig3("D", "B", "C")
    );
    let _ = binary!(Rotation, RotateRule, Pair<A, D>, Triple<A, B, C>, false);

    assert_eq!(
        binary!(Transformation, TransformRule, Pair<A, B>, Triple<B, B, C>, true).unwrap(),
        sig3("A", "A", "C")
    );
    let _ = binary!(Transformation, TransformRule, Pair<A, B>, Triple<A, B, C>, false);
    // A free vector not anchored at the source origin: read literally, rejected.
    let _ = binary!(Transformation, TransformRule, Pair<A, B>, Triple<B, C, L>, false);

    assert_eq!(
        binary!(BoxPlus, BoxPlusRule, Pair<A, B>, Triple<A, A, B>, true).unwrap(),
        sig2("A", "B")
    );
    let _ = binary!(BoxPlus, BoxPlusRule, Pair<A, B>, Triple<B, A, B>, false);
    let _ = binary!(BoxPlus, BoxPlusRule, Pair<A, B>, Triple<A, B, A>, false);

    assert_eq!(
        binary!(BoxMinus, BoxMinusRule, Pair<A, B>, Pair<A, B>, true).unwrap(),
        sig3("A", "A", "B")
    );
    let _ = binary!(BoxMinus, BoxMinusRule, Pair<A, B>, Pair<B, A>, false);

    assert_eq!(
        unary!(Exp, ExpRule, Triple<A, A, B>, true).unwrap(),
        sig2("A", "A")
    );
    let _ = unary!(Exp, ExpRule, Triple<B, A, B>, false);

    let log_b = Log(label::<B>());
    assert!(admits!(LogRule<B> for Pair<A, A>));
    assert_eq!(
        check_rule(log_b, &[Pair::<A, A>::runtime()]).unwrap(),
        sig3("A", "A", "B")
    );
    assert!(!admits!(LogRule<B> for Pair<A, B>));
    assert!(check_rule(log_b, &[Pair::<A, B>::runtime()]).is_err());
}

#[test]
fn all_unframed_operands_pass_every_rule() {
    use Operation::*;
    type P = Pair<Unframed, Unframed>;
    type T = Triple<Unframed, Unframed, Unframed>;
    let _ = binary!(Sum, SumRule, T, T, true);
    let _ = unary!(Negative, NegRule, T, true);
    let _ = binary!(Difference, DiffRule, T, T, true);
    let _ = unary!(Scaling, ScaleRule, T, true);
    let _ = binary!(Composition, ComposeRule, P, P, true);
    let _ = unary!(Inverse, InverseRule, P, true);
    let _ = binary!(Rotation, RotateRule, P, T, true);
    let _ = binary!(Transformation, TransformRule, P, T, true);
    let _ = binary!(BoxPlus, BoxPlusRule, P, T, true);
    let _ = binary!(BoxMinus, BoxMinusRule, P, P, true);
    let _ = unary!(Exp, ExpRule, T, true);
    assert!(admits!(LogRule<Unframed> for P));
    for op in Operation::ALL {
        let operands: Vec<_> = match op {
            Sum | Difference => vec![T::runtime(), T::runtime()],
            Negative | Scaling | Exp => vec![T::runtime()],
            Composition | BoxMinus => vec![P::runtime(), P::runtime()],
            Inverse | Log(_) => vec![P::runtime()],
            Rotation | Transformation | BoxPlus => vec![P::runtime(), T::runtime()],
        };
        let out = check_rule(op, &operands).unwrap();
        assert!(out.labels().iter().all(|l| *l == Label::Unframed));
    }
}

#[test]
fn mixing_unframed_with_named_frames_is_rejected() {
    let v = check_rule(
        Operation::Composition,
        &[Pair::<A, B>::runtime(), Pair::<B, Unframed>::runtime()],
    )
    .unwrap_err();
    assert_eq!(v.rule, "Composition");
}

#[test]
fn rotation_then_sum_derives_the_result_frames() {
    let phi = Rotation::<B, C>::new(SO3::exp(&RotationVector::new(0.1, 0.2, 0.3)));
    let p_cl = Point::<C, C, L>::new(EuclideanVector::new(1.0, 2.0, 3.0));
    let p_bc = Point::<B, B, C>::new(EuclideanVector::new(-1.0, 0.5, 0.0));
    let p_bl: Point<B, B, L> = (&phi * &p_cl + &p_bc).evaluate_framed();
    let expected = phi.value().rotate(p_cl.value()).0 + p_bc.value().0;
    assert!((p_bl.value().0 - expected).abs().max() < 1e-15);
    assert_eq!(
        (&phi * &p_cl + &p_bc).outline().lines().next(),
        Some("Sum (B,B,L)")
    );
}

#[test]
fn reversed_rotation_is_rejected_without_evaluating() {
    let ((statically, report), counts) = counters::count(|| {
        (
            admits!(RotateRule<Triple<C, C, L>> for Pair<C, B>),
            check_rule(
                Operation::Rotation,
                &[Pair::<C, B>::runtime(), Triple::<C, C, L>::runtime()],
            )
            .unwrap_err(),
        )
    });
    assert!(!statically);
    assert_eq!(
        report.to_string(),
        "rule=Rotation expected=Φ_DA(p^A_BC) got=(C,B), (C,C,L)"
    );
    assert_eq!(counts.evaluations, 0);
    assert_eq!(counts.partials, 0);
}

#[test]
fn exp_forgets_the_target_frame() {
    let phi = RotationTangent::<A, A, B>::new(RotationVector::new(0.1, 0.0, 0.0));
    type ExpOf = framegeo::expr::ExpMap<&'static RotationTangent<A, A, B>>;
    assert_eq!(<<ExpOf as Expr>::Frames as Signature>::runtime(), sig2("A", "A"));
    let g = (&phi).exp();
    // Recovering φ needs the target frame spelled out again.
    let back: RotationTangent<A, A, B> = g.log_to::<B>().evaluate_framed();
    assert!((back.value().0 - phi.value().0).abs().max() < 1e-15);
    let elsewhere: RotationTangent<A, A, C> = (&phi).exp().log_to::<C>().evaluate_framed();
    assert_eq!(elsewhere.value(), back.value());
    assert!(!admits!(LogRule<B> for Pair<A, B>));
}

#[test]
fn integration_update_keeps_the_signature() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..100 {
        let phi = Rotation::<A, B>::new(random_rotation(&mut rng));
        let omega = random_vector(&mut rng, 2.0);
        let dt = 0.01;
        let step = RotationTangent::<A, A, B>::new(RotationVector(omega * dt));
        let updated: Rotation<A, B> = (&phi).boxplus(&step).evaluate_framed();
        let explicit = SO3::exp(&RotationVector(omega * dt)).compose(phi.value());
        assert!((updated.value().matrix() - explicit.matrix()).abs().max() < 1e-15);
    }
    let phi = Rotation::<A, B>::new(random_rotation(&mut rng));
    let zero = RotationTangent::<A, A, B>::new(RotationVector::new(0.0, 0.0, 0.0));
    let same: Rotation<A, B> = (&phi).boxplus(&zero).evaluate_framed();
    assert_eq!(same.value(), phi.value());
}

#[test]
fn framed_instances_satisfy_the_numeric_identities() {
    let mut rng = StdRng::seed_from_u64(4);
    for _ in 0..100 {
        let ab = Rotation::<A, B>::new(random_rotation(&mut rng));
        let bc = Rotation::<B, C>::new(random_rotation(&mut rng));
        let cd = Rotation::<C, D>::new(random_rotation(&mut rng));
        let left: Rotation<A, D> = (&ab * &bc * &cd).evaluate_framed();
        let right: Rotation<A, D> = (&ab * (&bc * &cd)).evaluate_framed();
        assert!((left.value().matrix() - right.value().matrix()).abs().max() < 1e-12);

        let p = Point::<W, A, B>::new(EuclideanVector(random_vector(&mut rng, 3.0)));
        let q = Point::<W, B, C>::new(EuclideanVector(random_vector(&mut rng, 3.0)));
        let pq: Point<W, A, C> = (&p + &q).evaluate_framed();
        let qp: Point<W, A, C> = (&q + &p).evaluate_framed();
        assert_eq!(pq.value(), qp.value());

        let neg: Point<W, B, A> = (-&p).evaluate_framed();
        let scaled: Point<W, A, B> = (&p * -2.0).evaluate_framed();
        assert_eq!(neg.value().0, -p.value().0);
        assert_eq!(scaled.value().0, -2.0 * p.value().0);

        let t = Transform::<W, A>::new(SE3::new(*ab.value(), random_vector(&mut rng, 3.0)));
        let pa = Point::<A, A, L>::new(EuclideanVector(random_vector(&mut rng, 3.0)));
        let moved: Point<W, W, L> = (&t * &pa).evaluate_framed();
        let expected = t.value().rotation.rotate(pa.value()).0 + t.value().translation;
        assert_eq!(moved.value().0, expected);
    }
}

#[test]
fn violation_names_positions_and_both_operands() {
    let v = check_rule(
        Operation::Composition,
        &[Pair::<A, B>::runtime(), Pair::<C, D>::runtime()],
    )
    .unwrap_err();
    assert_eq!(
        v.to_string(),
        "rule=Composition expected=Φ_AB ∘ Φ_BC got=(A,B), (C,D)"
    );
    assert!(!v.positions().is_empty());
}
