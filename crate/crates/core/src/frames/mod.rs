//! Coordinate-frame semantics.
//!
//! Every value carries a frame signature: `Pair<A, B>` for rotations and
//! transforms (`Φ_AB`), `Triple<D, A, B>` for vectors and tangent elements
//! (`p^D_AB`: expressed in `D`, from `A` to `B`). Each operation is admitted
//! by one rule trait below. The rule traits are implemented only for
//! admissible signature combinations, so a violation is a type error.
//!
//! ```
//! use framegeo::frames;
//! use framegeo::{Expr, Point, Rotation};
//! use framegeo::{EuclideanVector, SO3};
//!
//! frames!(B, C, L);
//! let phi = Rotation::<B, C>::new(SO3::identity());
//! let p_cl = Point::<C, C, L>::new(EuclideanVector::new(1.0, 0.0, 0.0));
//! let p_bc = Point::<B, B, C>::new(EuclideanVector::new(0.0, 2.0, 0.0));
//! // Φ_BC(p^C_CL) + p^B_BC = p^B_BL
//! let p_bl: Point<B, B, L> = (&phi * &p_cl + &p_bc).evaluate_framed();
//! assert_eq!(p_bl.value(), &EuclideanVector::new(1.0, 2.0, 0.0));
//! ```
//!
//! Applying `Φ_CB` instead (the frames reversed) is rejected:
//!
//! ```compile_fail
//! use framegeo::frames;
//! use framegeo::{Expr, Point, Rotation};
//! use framegeo::{EuclideanVector, SO3};
//!
//! frames!(B, C, L);
//! let phi = Rotation::<C, B>::new(SO3::identity());
//! let p_cl = Point::<C, C, L>::new(EuclideanVector::new(1.0, 0.0, 0.0));
//! let _ = &phi * &p_cl;
//! ```

mod rules;

use std::fmt::Debug;
use std::marker::PhantomData;

use typenum::{IsEqual, Unsigned, B0, B1, U0};

pub use rules::{check_rule, FrameSignature, Label, Operation, Violation};

/// A coordinate frame label. Declare labels with [`frames!`](crate::frames!).
pub trait Frame: Copy + Debug + Default + Send + Sync + 'static {
    /// Type-level identifier; only used to select between the two admissible
    /// operand orders of a sum.
    type Id: Unsigned + 'static;
    const NAME: &'static str;
}

/// The reserved "no frame" label.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Unframed;

impl Frame for Unframed {
    type Id = U0;
    const NAME: &'static str = "_";
}

/// Declares frame labels with sequential identifiers.
///
/// `frames!(A, B, C)` numbers from 1. Labels that must coexist with an
/// earlier declaration continue its numbering with
/// `frames!(after C; D, E)`. Two distinct labels with the same identifier
/// never produce a wrong signature, but may make a valid sum fail to
/// type-check.
#[macro_export]
macro_rules! frames {
    (after $prev:ty; $($name:ident),+ $(,)?) => {
        $crate::frames!(@step <$prev as $crate::frames::Frame>::Id; $($name),+);
    };
    ($($name:ident),+ $(,)?) => {
        $crate::frames!(@step $crate::typenum::U0; $($name),+);
    };
    (@step $prev:ty; $name:ident $(, $rest:ident)*) => {
        #[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
        pub struct $name;
        impl $crate::frames::Frame for $name {
            type Id = $crate::typenum::Add1<$prev>;
            const NAME: &'static str = stringify!($name);
        }
        $crate::frames!(@step $crate::typenum::Add1<$prev>; $($rest),*);
    };
    (@step $prev:ty;) => {};
}

/// Signature of a group element: two labels.
pub struct Pair<A, B>(PhantomData<(A, B)>);

/// Signature of a vector or tangent element: expressed-in, from, to.
pub struct Triple<D, A, B>(PhantomData<(D, A, B)>);

/// A static frame signature.
pub trait Signature: 'static {
    const ARITY: usize;
    /// Label identifiers, unused slots are 0.
    const IDS: [u64; 3];
    const NAMES: [&'static str; 3];
    /// Number of [`Unframed`] labels in the signature.
    const UNFRAMED: usize;

    fn runtime() -> FrameSignature;
}

fn label<F: Frame>() -> Label {
    if F::Id::U64 == 0 {
        Label::Unframed
    } else {
        Label::Named(F::NAME)
    }
}

impl<A: Frame, B: Frame> Signature for Pair<A, B> {
    const ARITY: usize = 2;
    const IDS: [u64; 3] = [A::Id::U64, B::Id::U64, 0];
    const NAMES: [&'static str; 3] = [A::NAME, B::NAME, ""];
    const UNFRAMED: usize = (A::Id::U64 == 0) as usize + (B::Id::U64 == 0) as usize;

    fn runtime() -> FrameSignature {
        FrameSignature::Pair(label::<A>(), label::<B>())
    }
}

impl<D: Frame, A: Frame, B: Frame> Signature for Triple<D, A, B> {
    const ARITY: usize = 3;
    const IDS: [u64; 3] = [D::Id::U64, A::Id::U64, B::Id::U64];
    const NAMES: [&'static str; 3] = [D::NAME, A::NAME, B::NAME];
    const UNFRAMED: usize =
        (D::Id::U64 == 0) as usize + (A::Id::U64 == 0) as usize + (B::Id::U64 == 0) as usize;

    fn runtime() -> FrameSignature {
        FrameSignature::Triple(label::<D>(), label::<A>(), label::<B>())
    }
}

/// True unless the operands mix [`Unframed`] with named labels.
pub const fn unmixed(arity: usize, unframed: usize) -> bool {
    unframed == 0 || unframed == arity
}

pub const fn unmixed1<S: Signature>() -> bool {
    unmixed(S::ARITY, S::UNFRAMED)
}

pub const fn unmixed2<L: Signature, R: Signature>() -> bool {
    unmixed(L::ARITY + R::ARITY, L::UNFRAMED + R::UNFRAMED)
}

/// Whether a rule trait admits concrete signatures, decided by the type
/// checker and returned as a constant `bool`:
///
/// ```
/// use framegeo::{admits, frames};
/// use framegeo::frames::{Pair, Triple};
///
/// frames!(B, C, L);
/// assert!(admits!(RotateRule<Triple<C, C, L>> for Pair<B, C>));
/// assert!(!admits!(RotateRule<Triple<C, C, L>> for Pair<C, B>));
/// assert!(admits!(InverseRule for Pair<B, C>));
/// ```
#[macro_export]
macro_rules! admits {
    ($rule:ident < $rhs:ty > for $lhs:ty) => {{
        struct Probe<T>(::core::marker::PhantomData<T>);
        trait Yes {
            fn admitted(&self) -> bool {
                true
            }
        }
        trait No {
            fn admitted(&self) -> bool {
                false
            }
        }
        impl<L: $crate::frames::$rule<R>, R> Yes for Probe<(L, R)> {}
        impl<T> No for &Probe<T> {}
        (&Probe::<($lhs, $rhs)>(::core::marker::PhantomData)).admitted()
    }};
    ($rule:ident for $lhs:ty) => {{
        struct Probe<T>(::core::marker::PhantomData<T>);
        trait Yes {
            fn admitted(&self) -> bool {
                true
            }
        }
        trait No {
            fn admitted(&self) -> bool {
                false
            }
        }
        impl<L: $crate::frames::$rule> Yes for Probe<L> {}
        impl<T> No for &Probe<T> {}
        (&Probe::<$lhs>(::core::marker::PhantomData)).admitted()
    }};
}

// Rule traits. Each is implemented exactly for the admissible patterns.

/// `p^D_AB + p^D_BC = p^D_AC`, in either operand order.
#[diagnostic::on_unimplemented(
    message = "frame rule `Sum` violated: expected p^D_AB + p^D_BC, got {Self} + {Rhs}"
)]
pub trait SumRule<Rhs> {
    type Output: Signature;
}

#[doc(hidden)]
pub trait SumSelect {
    type Output: Signature;
}

impl<D: Frame, X: Frame, Y: Frame, Z: Frame, E> SumSelect for (Triple<D, X, Y>, Triple<D, Y, Z>, B1, E) {
    type Output = Triple<D, X, Z>;
}

impl<D: Frame, X: Frame, Y: Frame, W: Frame> SumSelect for (Triple<D, X, Y>, Triple<D, W, X>, B0, B1) {
    type Output = Triple<D, W, Y>;
}

impl<D: Frame, X: Frame, Y: Frame, W: Frame, Z: Frame> SumRule<Triple<D, W, Z>> for Triple<D, X, Y>
where
    Y::Id: IsEqual<W::Id>,
    Z::Id: IsEqual<X::Id>,
    (
        Triple<D, X, Y>,
        Triple<D, W, Z>,
        typenum::Eq<Y::Id, W::Id>,
        typenum::Eq<Z::Id, X::Id>,
    ): SumSelect,
{
    type Output = <(
        Triple<D, X, Y>,
        Triple<D, W, Z>,
        typenum::Eq<Y::Id, W::Id>,
        typenum::Eq<Z::Id, X::Id>,
    ) as SumSelect>::Output;
}

/// `−p^D_AB = p^D_BA`.
#[diagnostic::on_unimplemented(message = "frame rule `Negative` applies to vectors, got {Self}")]
pub trait NegRule {
    type Output: Signature;
}

impl<D: Frame, A: Frame, B: Frame> NegRule for Triple<D, A, B> {
    type Output = Triple<D, B, A>;
}

/// `p^D_AC − p^D_BC = p^D_AB`.
#[diagnostic::on_unimplemented(
    message = "frame rule `Difference` violated: expected p^D_AC - p^D_BC, got {Self} - {Rhs}"
)]
pub trait DiffRule<Rhs> {
    type Output: Signature;
}

impl<D: Frame, A: Frame, B: Frame, C: Frame> DiffRule<Triple<D, B, C>> for Triple<D, A, C> {
    type Output = Triple<D, A, B>;
}

/// `a · p^A_BC = p^A_BC`.
#[diagnostic::on_unimplemented(message = "frame rule `Scaling` applies to vectors, got {Self}")]
pub trait ScaleRule {
    type Output: Signature;
}

impl<D: Frame, A: Frame, B: Frame> ScaleRule for Triple<D, A, B> {
    type Output = Triple<D, A, B>;
}

/// `Φ_AB ∘ Φ_BC = Φ_AC`.
#[diagnostic::on_unimplemented(
    message = "frame rule `Composition` violated: expected Φ_AB ∘ Φ_BC, got {Self} ∘ {Rhs}"
)]
pub trait ComposeRule<Rhs> {
    type Output: Signature;
}

impl<A: Frame, B: Frame, C: Frame> ComposeRule<Pair<B, C>> for Pair<A, B> {
    type Output = Pair<A, C>;
}

/// `(Φ_AB)⁻¹ = Φ_BA`.
#[diagnostic::on_unimplemented(message = "frame rule `Inverse` applies to group elements, got {Self}")]
pub trait InverseRule {
    type Output: Signature;
}

impl<A: Frame, B: Frame> InverseRule for Pair<A, B> {
    type Output = Pair<B, A>;
}

/// `Φ_DA(p^A_BC) = p^D_BC`.
#[diagnostic::on_unimplemented(
    message = "frame rule `Rotation` violated: expected Φ_DA(p^A_BC), got {Self}({Rhs})"
)]
pub trait RotateRule<Rhs> {
    type Output: Signature;
}

impl<D: Frame, A: Frame, B: Frame, C: Frame> RotateRule<Triple<A, B, C>> for Pair<D, A> {
    type Output = Triple<D, B, C>;
}

/// `T_AB(p^B_BC) = p^A_AC`.
#[diagnostic::on_unimplemented(
    message = "frame rule `Transformation` violated: expected T_AB(p^B_BC), got {Self}({Rhs})"
)]
pub trait TransformRule<Rhs> {
    type Output: Signature;
}

impl<A: Frame, B: Frame, C: Frame> TransformRule<Triple<B, B, C>> for Pair<A, B> {
    type Output = Triple<A, A, C>;
}

/// `Φ_AB ⊞ φ^A_AB = Φ_AB`.
#[diagnostic::on_unimplemented(
    message = "frame rule `Manifold plus` violated: expected Φ_AB ⊞ φ^A_AB, got {Self} ⊞ {Rhs}"
)]
pub trait BoxPlusRule<Rhs> {
    type Output: Signature;
}

impl<A: Frame, B: Frame> BoxPlusRule<Triple<A, A, B>> for Pair<A, B> {
    type Output = Pair<A, B>;
}

/// `Φ_AB ⊟ Φ_AB = φ^A_AB`.
#[diagnostic::on_unimplemented(
    message = "frame rule `Manifold minus` violated: expected Φ_AB ⊟ Φ_AB, got {Self} ⊟ {Rhs}"
)]
pub trait BoxMinusRule<Rhs> {
    type Output: Signature;
}

impl<A: Frame, B: Frame> BoxMinusRule<Pair<A, B>> for Pair<A, B> {
    type Output = Triple<A, A, B>;
}

/// `exp(φ^A_AB) = Φ_AA`. The `B` label is lost.
#[diagnostic::on_unimplemented(
    message = "frame rule `Exp map` violated: expected exp(φ^A_AB), got exp({Self})"
)]
pub trait ExpRule {
    type Output: Signature;
}

impl<A: Frame, B: Frame> ExpRule for Triple<A, A, B> {
    type Output = Pair<A, A>;
}

/// `log_B(Φ_AA) = φ^A_AB`; the target label is an explicit argument.
#[diagnostic::on_unimplemented(
    message = "frame rule `Log map` violated: expected log_B(Φ_AA), got log({Self})"
)]
pub trait LogRule<B> {
    type Output: Signature;
}

impl<A: Frame, B: Frame> LogRule<B> for Pair<A, A> {
    type Output = Triple<A, A, B>;
}
