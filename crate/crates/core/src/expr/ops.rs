use std::ops::{Add, Mul, Neg, Sub};

use super::nodes::{Binary, ComposeOp, DifferenceOp, NegateOp, RotateOp, ScaleOp, SumOp, TransformOp, Unary};
use super::{Compose, Difference, Expr, Framed, Negate, Rotate, Scale, Sum, TransformVector};
use crate::manifold::EuclideanVector;
use crate::{SE3, SO3};

/// Chooses the node built by `lhs * rhs` from the operand value kinds:
/// composition for two group elements, rotation or transformation for a
/// group element times a vector.
pub trait MulDispatch<L, R> {
    type Output;
    fn build(lhs: L, rhs: R) -> Self::Output;
}

impl<L, R> MulDispatch<L, R> for (SO3, SO3)
where
    Compose<L, R>: Expr,
{
    type Output = Compose<L, R>;
    #[inline(always)]
    fn build(lhs: L, rhs: R) -> Self::Output {
        Binary::new(ComposeOp, lhs, rhs)
    }
}

impl<L, R> MulDispatch<L, R> for (SE3, SE3)
where
    Compose<L, R>: Expr,
{
    type Output = Compose<L, R>;
    #[inline(always)]
    fn build(lhs: L, rhs: R) -> Self::Output {
        Binary::new(ComposeOp, lhs, rhs)
    }
}

impl<L, R> MulDispatch<L, R> for (SO3, EuclideanVector)
where
    Rotate<L, R>: Expr,
{
    type Output = Rotate<L, R>;
    #[inline(always)]
    fn build(lhs: L, rhs: R) -> Self::Output {
        Binary::new(RotateOp, lhs, rhs)
    }
}

impl<L, R> MulDispatch<L, R> for (SE3, EuclideanVector)
where
    TransformVector<L, R>: Expr,
{
    type Output = TransformVector<L, R>;
    #[inline(always)]
    fn build(lhs: L, rhs: R) -> Self::Output {
        Binary::new(TransformOp, lhs, rhs)
    }
}

macro_rules! expr_ops {
    ($([$($g:tt)*] $t:ty;)*) => {$(
        impl<$($g)*, Rhs: Expr> Mul<Rhs> for $t
        where
            $t: Expr,
            (<$t as Expr>::Value, Rhs::Value): MulDispatch<$t, Rhs>,
        {
            type Output = <(<$t as Expr>::Value, Rhs::Value) as MulDispatch<$t, Rhs>>::Output;
            #[inline(always)]
            fn mul(self, rhs: Rhs) -> Self::Output {
                <(<$t as Expr>::Value, Rhs::Value) as MulDispatch<$t, Rhs>>::build(self, rhs)
            }
        }

        impl<$($g)*> Mul<f64> for $t
        where
            Scale<$t>: Expr,
        {
            type Output = Scale<$t>;
            #[inline(always)]
            fn mul(self, s: f64) -> Scale<$t> {
                Unary::new(ScaleOp(s), self)
            }
        }

        impl<$($g)*> Neg for $t
        where
            Negate<$t>: Expr,
        {
            type Output = Negate<$t>;
            #[inline(always)]
            fn neg(self) -> Negate<$t> {
                Unary::new(NegateOp, self)
            }
        }

        impl<$($g)*, Rhs: Expr> Add<Rhs> for $t
        where
            Sum<$t, Rhs>: Expr,
        {
            type Output = Sum<$t, Rhs>;
            #[inline(always)]
            fn add(self, rhs: Rhs) -> Sum<$t, Rhs> {
                Binary::new(SumOp, self, rhs)
            }
        }

        impl<$($g)*, Rhs: Expr> Sub<Rhs> for $t
        where
            Difference<$t, Rhs>: Expr,
        {
            type Output = Difference<$t, Rhs>;
            #[inline(always)]
            fn sub(self, rhs: Rhs) -> Difference<$t, Rhs> {
                Binary::new(DifferenceOp, self, rhs)
            }
        }
    )*};
}

expr_ops! {
    ['a, V, S] &'a Framed<V, S>;
    [Op, L, R] Binary<Op, L, R>;
    [Op, E] Unary<Op, E>;
}
