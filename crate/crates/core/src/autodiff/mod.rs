//! Jacobian evaluators.
//!
//! All Jacobians are local: with `x ⊞ δ = exp(δ) ∘ x` and
//! `y ⊟ x = log(y ∘ x⁻¹)`, column `i` of the Jacobian of `f` at `x` is
//! `d/dε [f(x ⊞ ε δᵢ) ⊟ f(x)]` at `ε = 0`. Vectors use plain `+`/`-`.
//!
//! * [`forward_jacobian`] walks the tree with dense intermediates and
//!   finds the target leaf by address. Subtrees that cannot contain a leaf
//!   of the target's type are skipped without computing any partial.
//! * [`typed_forward_jacobian`] requires every leaf to have a distinct type
//!   (frame signature), so the target is identified by type alone and the
//!   whole pass is fixed at compile time.
//! * [`reverse_jacobians`] computes the Jacobians of all leaves in one
//!   sweep from the root.
//!
//! ```
//! use framegeo::frames;
//! use framegeo::{Expr, Point, Rotation};
//! use framegeo::{EuclideanVector, SO3};
//! use nalgebra::Matrix3;
//!
//! frames!(W, B);
//! let c = Rotation::<W, B>::new(SO3::identity());
//! let p = Point::<B, B, W>::new(EuclideanVector::new(1.0, 2.0, 3.0));
//! let e = &c * &p;
//! let (value, (d_c, d_p)) = e.eval_with_jacobians(());
//! assert_eq!(value, EuclideanVector::new(1.0, 2.0, 3.0));
//! assert_eq!(*d_c.matrix(), -framegeo::manifold::cross(&value.0));
//! assert_eq!(*d_p.matrix(), Matrix3::identity());
//! let (_, (d_p_typed,)) = e.eval_with_jacobians((&p,));
//! assert_eq!(d_p_typed.matrix(), d_p.matrix());
//! ```
//!
//! The typed evaluators reject expressions in which two leaves share a
//! type:
//!
//! ```compile_fail
//! use framegeo::frames;
//! use framegeo::{Expr, Rotation};
//! use framegeo::SO3;
//!
//! frames!(A);
//! let c = Rotation::<A, A>::new(SO3::identity());
//! let d = Rotation::<A, A>::new(SO3::identity());
//! let _ = (&c * &d).eval_with_jacobians(());
//! ```

use std::fmt;

use nalgebra::DMatrix;

use crate::expr::{DimOf, Expr, Framed, LazyMatrix, Leaf, LeafDim, NodeCache, SignatureOf};
use crate::linalg::{self, Dim, Mat, Storage};
use crate::manifold::Value;

/// A local Jacobian block with an explicit exact-zero flag.
pub struct LocalJacobian<R: Dim, C: Dim> {
    matrix: Mat<R, C>,
    zero: bool,
}

impl<R: Dim, C: Dim> Clone for LocalJacobian<R, C> {
    #[inline]
    fn clone(&self) -> Self {
        *self
    }
}

impl<R: Dim, C: Dim> Copy for LocalJacobian<R, C> {}

impl<R: Dim, C: Dim> fmt::Debug for LocalJacobian<R, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            write!(f, "LocalJacobian::Zero({}x{})", R::N, C::N)
        } else {
            write!(f, "LocalJacobian({:?})", self.matrix)
        }
    }
}

impl<R: Dim, C: Dim> LocalJacobian<R, C> {
    #[inline]
    pub fn zero() -> Self {
        LocalJacobian {
            matrix: Mat::<R, C>::zeros(),
            zero: true,
        }
    }

    #[inline]
    pub fn from_dense(matrix: Mat<R, C>) -> Self {
        LocalJacobian { matrix, zero: false }
    }

    #[inline(always)]
    pub fn from_lazy(m: &LazyMatrix<R, C>) -> Self {
        match m {
            LazyMatrix::Zero => Self::zero(),
            other => Self::from_dense(other.to_dense()),
        }
    }

    #[inline]
    pub fn matrix(&self) -> &Mat<R, C> {
        &self.matrix
    }

    /// True only for the exact zero produced by pruning.
    #[inline]
    pub fn is_zero(&self) -> bool {
        self.zero
    }

    #[inline]
    pub fn rows(&self) -> usize {
        R::N
    }

    #[inline]
    pub fn cols(&self) -> usize {
        C::N
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        linalg::to_dmatrix(&self.matrix)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        linalg::max_abs_diff(&self.matrix, &other.matrix)
    }
}

/// Heterogeneous list of Jacobians, one per leaf.
pub trait JacobianList {
    type Append<T: JacobianList>: JacobianList;
    const LEN: usize;

    fn append<T: JacobianList>(self, tail: T) -> Self::Append<T>;

    fn push_dynamic(&self, out: &mut Vec<DMatrix<f64>>);

    fn into_dynamic(self) -> Vec<DMatrix<f64>>
    where
        Self: Sized,
    {
        let mut out = Vec::with_capacity(Self::LEN);
        self.push_dynamic(&mut out);
        out
    }
}

#[derive(Clone, Copy, Debug)]
pub struct HNil;

#[derive(Clone, Copy, Debug)]
pub struct HCons<H, T>(pub H, pub T);

impl JacobianList for HNil {
    type Append<T: JacobianList> = T;
    const LEN: usize = 0;

    #[inline(always)]
    fn append<T: JacobianList>(self, tail: T) -> T {
        tail
    }

    fn push_dynamic(&self, _: &mut Vec<DMatrix<f64>>) {}
}

impl<R: Dim, C: Dim, T: JacobianList> JacobianList for HCons<LocalJacobian<R, C>, T> {
    type Append<U: JacobianList> = HCons<LocalJacobian<R, C>, T::Append<U>>;
    const LEN: usize = 1 + T::LEN;

    #[inline(always)]
    fn append<U: JacobianList>(self, tail: U) -> Self::Append<U> {
        HCons(self.0, self.1.append(tail))
    }

    fn push_dynamic(&self, out: &mut Vec<DMatrix<f64>>) {
        out.push(self.0.to_dmatrix());
        self.1.push_dynamic(out);
    }
}

/// Converts a short list into a flat tuple.
pub trait IntoTuple {
    type Tuple;
    fn into_tuple(self) -> Self::Tuple;
}

macro_rules! hlist_type {
    () => { HNil };
    ($h:ident $(, $t:ident)*) => { HCons<$h, hlist_type!($($t),*)> };
}

macro_rules! hlist_pat {
    () => { HNil };
    ($h:ident $(, $t:ident)*) => { HCons($h, hlist_pat!($($t),*)) };
}

macro_rules! into_tuple {
    ($(($($t:ident $v:ident),+))*) => {$(
        impl<$($t),+> IntoTuple for hlist_type!($($t),+) {
            type Tuple = ($($t,)+);
            #[inline(always)]
            #[allow(non_snake_case)]
            fn into_tuple(self) -> Self::Tuple {
                let hlist_pat!($($v),+) = self;
                ($($v,)+)
            }
        }
    )*};
}

into_tuple! {
    (A a)
    (A a, B b)
    (A a, B b, C c)
    (A a, B b, C c, D d)
    (A a, B b, C c, D d, E e)
    (A a, B b, C c, D d, E e, F f)
    (A a, B b, C c, D d, E e, F f, G g)
    (A a, B b, C c, D d, E e, F f, G g, H h)
    (A a, B b, C c, D d, E e, F f, G g, H h, I i)
    (A a, B b, C c, D d, E e, F f, G g, H h, I i, J j)
    (A a, B b, C c, D d, E e, F f, G g, H h, I i, J j, K k)
    (A a, B b, C c, D d, E e, F f, G g, H h, I i, J j, K k, L l)
}

/// Untyped forward evaluator. `cache` must come from `e.evaluate()`.
/// A target that is not a leaf of `e` gets the zero Jacobian.
#[inline]
pub fn forward_jacobian<E: Expr, K: Leaf>(
    e: &E,
    cache: &E::Cache,
    target: &K,
) -> LocalJacobian<DimOf<E>, LeafDim<K>> {
    match e.forward_dense(cache, target as *const K) {
        Some(m) => LocalJacobian::from_dense(m),
        None => LocalJacobian::zero(),
    }
}

/// Typed forward evaluator. `cache` must come from `e.evaluate()`.
///
/// Fails to compile if two leaves of `e` share a type, and panics if
/// `target` is a different value of the same type as a leaf of `e`.
#[inline(always)]
pub fn typed_forward_jacobian<E: Expr, V: Value, S: SignatureOf<V>>(
    e: &E,
    cache: &E::Cache,
    target: &Framed<V, S>,
) -> LocalJacobian<DimOf<E>, V::Dim> {
    const {
        assert!(
            E::LEAF_KEYS.all_distinct(),
            "typed evaluation requires every leaf to have a distinct frame signature"
        )
    };
    if let Some(addr) = e.leaf_addr::<Framed<V, S>>() {
        if !std::ptr::eq(addr, target) {
            foreign_target::<V, S>();
        }
    }
    LocalJacobian::from_lazy(&e.typed::<Framed<V, S>>(cache))
}

#[cold]
#[inline(never)]
fn foreign_target<V: Value, S: SignatureOf<V>>() -> ! {
    panic!(
        "target {} {} is not the leaf of that type in this expression",
        V::KIND.name(),
        S::runtime()
    )
}

/// Reverse evaluator over an existing cache; Jacobians in left-to-right
/// leaf order.
#[inline(always)]
pub fn reverse_with_cache<E: Expr>(e: &E, cache: &E::Cache) -> E::Jacobians<DimOf<E>> {
    const {
        assert!(
            E::LEAF_KEYS.all_distinct(),
            "typed evaluation requires every leaf to have a distinct frame signature"
        )
    };
    e.reverse(cache, LazyMatrix::Identity)
}

/// Value and the Jacobians of every leaf, as a tuple in left-to-right leaf
/// order.
#[inline(always)]
pub fn reverse_jacobians<E: Expr>(e: &E) -> (E::Value, <E::Jacobians<DimOf<E>> as IntoTuple>::Tuple)
where
    E::Jacobians<DimOf<E>>: IntoTuple,
{
    let cache = e.evaluate();
    let j = reverse_with_cache(e, &cache);
    (cache.value(), j.into_tuple())
}

/// Argument of [`Expr::eval_with_jacobians`]: `()` or a tuple of leaf
/// references.
pub trait Targets<E: Expr> {
    type Output;
    fn run(self, e: &E) -> (E::Value, Self::Output);
}

impl<E: Expr> Targets<E> for ()
where
    E::Jacobians<DimOf<E>>: IntoTuple,
{
    type Output = <E::Jacobians<DimOf<E>> as IntoTuple>::Tuple;

    #[inline(always)]
    fn run(self, e: &E) -> (E::Value, Self::Output) {
        reverse_jacobians(e)
    }
}

macro_rules! targets {
    ($(($($v:ident $s:ident $t:ident),+))*) => {$(
        impl<'t, E: Expr, $($v: Value, $s: SignatureOf<$v>),+> Targets<E>
            for ($(&'t Framed<$v, $s>,)+)
        {
            type Output = ($(LocalJacobian<DimOf<E>, $v::Dim>,)+);

            #[inline(always)]
            fn run(self, e: &E) -> (E::Value, Self::Output) {
                let cache = e.evaluate();
                let ($($t,)+) = self;
                (cache.value(), ($(typed_forward_jacobian(e, &cache, $t),)+))
            }
        }
    )*};
}

targets! {
    (V1 S1 t1)
    (V1 S1 t1, V2 S2 t2)
    (V1 S1 t1, V2 S2 t2, V3 S3 t3)
    (V1 S1 t1, V2 S2 t2, V3 S3 t3, V4 S4 t4)
    (V1 S1 t1, V2 S2 t2, V3 S3 t3, V4 S4 t4, V5 S5 t5)
    (V1 S1 t1, V2 S2 t2, V3 S3 t3, V4 S4 t4, V5 S5 t5, V6 S6 t6)
    (V1 S1 t1, V2 S2 t2, V3 S3 t3, V4 S4 t4, V5 S5 t5, V6 S6 t6, V7 S7 t7)
    (V1 S1 t1, V2 S2 t2, V3 S3 t3, V4 S4 t4, V5 S5 t5, V6 S6 t6, V7 S7 t7, V8 S8 t8)
    (V1 S1 t1, V2 S2 t2, V3 S3 t3, V4 S4 t4, V5 S5 t5, V6 S6 t6, V7 S7 t7, V8 S8 t8, V9 S9 t9)
    (V1 S1 t1, V2 S2 t2, V3 S3 t3, V4 S4 t4, V5 S5 t5, V6 S6 t6, V7 S7 t7, V8 S8 t8, V9 S9 t9, V10 S10 t10)
    (V1 S1 t1, V2 S2 t2, V3 S3 t3, V4 S4 t4, V5 S5 t5, V6 S6 t6, V7 S7 t7, V8 S8 t8, V9 S9 t9, V10 S10 t10, V11 S11 t11)
    (V1 S1 t1, V2 S2 t2, V3 S3 t3, V4 S4 t4, V5 S5 t5, V6 S6 t6, V7 S7 t7, V8 S8 t8, V9 S9 t9, V10 S10 t10, V11 S11 t11, V12 S12 t12)
}

/// Dense copy of any block, for comparisons.
pub fn dense<S: Storage>(s: &S) -> DMatrix<f64> {
    linalg::to_dmatrix(s)
}
