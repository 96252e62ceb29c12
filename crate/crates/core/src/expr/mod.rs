//! Statically structured expression trees.
//!
//! Leaves borrow [`Framed`] values; operators build nodes whose type records
//! the whole tree, including the frame signature of every subexpression.
//! Nothing is computed until [`Expr::value`] or [`Expr::evaluate`] is
//! called.
//!
//! ```
//! use framegeo::{Expr, Point, Rotation};
//! use framegeo::{EuclideanVector, SO3};
//!
//! let c: Rotation = Rotation::new(SO3::identity());
//! let p: Point = Point::new(EuclideanVector::new(1.0, 2.0, 3.0));
//! let q: Point = Point::new(EuclideanVector::new(0.5, 0.0, -1.0));
//! let e = c.inverse() * &p + &q;
//! assert_eq!(e.value(), EuclideanVector::new(1.5, 2.0, 2.0));
//! assert_eq!(
//!     e.outline(),
//!     "Sum (_,_,_)\n  Rotate (_,_,_)\n    Inverse (_,_)\n      Leaf SO3 (_,_)\n    Leaf R3 (_,_,_)\n  Leaf R3 (_,_,_)\n"
//! );
//! ```

mod lazy;
mod nodes;
mod ops;

use std::fmt;
use std::marker::PhantomData;

use crate::autodiff::{JacobianList, Targets};
use crate::frames::{Frame, Pair, Signature, Triple, Unframed};
use crate::linalg::{Dim, Mat};
use crate::manifold::{EuclideanVector, Group, Twist, Value, ValueKind, VectorSpace};
use crate::{RotationVector, SE3, SO3};

pub use lazy::LazyMatrix;
pub use nodes::{
    Binary, BinaryOp, BoxMinus, BoxMinusOp, BoxPlus, BoxPlusOp, Compose, ComposeOp, Difference, DifferenceOp,
    ExpMap, ExpOp, Inverse, InverseOp, LogMap, LogOp, Negate, NegateOp, Rotate, RotateOp, Scale, ScaleOp,
    Sum, SumOp, TransformOp, TransformVector, Unary, UnaryOp,
};
pub use ops::MulDispatch;

/// A value tagged with a frame signature `S`.
pub struct Framed<V, S> {
    value: V,
    frames: PhantomData<S>,
}

/// `Φ_AB`.
pub type Rotation<A = Unframed, B = Unframed> = Framed<SO3, Pair<A, B>>;
/// `T_AB`.
pub type Transform<A = Unframed, B = Unframed> = Framed<SE3, Pair<A, B>>;
/// `p^D_AB`.
pub type Point<D = Unframed, A = Unframed, B = Unframed> = Framed<EuclideanVector, Triple<D, A, B>>;
/// `φ^D_AB ∈ so(3)`.
pub type RotationTangent<D = Unframed, A = Unframed, B = Unframed> = Framed<RotationVector, Triple<D, A, B>>;
/// `ξ^D_AB ∈ se(3)`.
pub type TwistTangent<D = Unframed, A = Unframed, B = Unframed> = Framed<Twist, Triple<D, A, B>>;

/// Pairs signatures with value kinds: two labels for group elements, three
/// for vectors.
pub trait SignatureOf<V>: Signature {}

impl<A: Frame, B: Frame> SignatureOf<SO3> for Pair<A, B> {}
impl<A: Frame, B: Frame> SignatureOf<SE3> for Pair<A, B> {}
impl<D: Frame, A: Frame, B: Frame, V: VectorSpace> SignatureOf<V> for Triple<D, A, B> {}

impl<V: Value, S: SignatureOf<V>> Framed<V, S> {
    pub fn new(value: V) -> Self {
        Framed {
            value,
            frames: PhantomData,
        }
    }

    pub fn value(&self) -> &V {
        &self.value
    }

    pub fn set(&mut self, value: V) {
        self.value = value;
    }

    pub fn into_inner(self) -> V {
        self.value
    }
}

impl<V: Copy, S> Clone for Framed<V, S> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<V: Copy, S> Copy for Framed<V, S> {}

impl<V: PartialEq, S> PartialEq for Framed<V, S> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl<V: fmt::Debug, S: Signature> fmt::Debug for Framed<V, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.value, S::runtime())
    }
}

/// A leaf type: a framed value that can be a differentiation target.
pub trait Leaf: 'static {
    type Value: Value;
    type Frames: Signature;
    /// Identifies the static leaf type inside an expression.
    const KEY: u64;
}

pub const fn leaf_key(kind: ValueKind, ids: [u64; 3]) -> u64 {
    (kind.id() << 60) | (ids[0] << 40) | (ids[1] << 20) | ids[2]
}

impl<V: Value, S: SignatureOf<V>> Leaf for Framed<V, S> {
    type Value = V;
    type Frames = S;
    const KEY: u64 = leaf_key(V::KIND, S::IDS);
}

/// Tangent dimension of an expression's value.
pub type DimOf<E> = <<E as Expr>::Value as Value>::Dim;
/// Tangent dimension of a leaf type.
pub type LeafDim<K> = <<K as Leaf>::Value as Value>::Dim;

const MAX_LEAVES: usize = 64;

/// Leaf keys of an expression in left-to-right order, built at compile time.
#[derive(Clone, Copy, Debug)]
pub struct KeySet {
    keys: [u64; MAX_LEAVES],
    len: usize,
}

impl KeySet {
    pub const fn single(key: u64) -> Self {
        let mut keys = [0; MAX_LEAVES];
        keys[0] = key;
        KeySet { keys, len: 1 }
    }

    pub const fn union(self, other: KeySet) -> Self {
        assert!(
            self.len + other.len <= MAX_LEAVES,
            "expression has more than 64 leaves"
        );
        let mut out = self;
        let mut i = 0;
        while i < other.len {
            out.keys[out.len] = other.keys[i];
            out.len += 1;
            i += 1;
        }
        out
    }

    pub const fn len(&self) -> usize {
        self.len
    }

    pub const fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub const fn contains(&self, key: u64) -> bool {
        let mut i = 0;
        while i < self.len {
            if self.keys[i] == key {
                return true;
            }
            i += 1;
        }
        false
    }

    pub const fn all_distinct(&self) -> bool {
        let mut i = 0;
        while i < self.len {
            let mut j = i + 1;
            while j < self.len {
                if self.keys[i] == self.keys[j] {
                    return false;
                }
                j += 1;
            }
            i += 1;
        }
        true
    }
}

/// Evaluated value of a node together with its children's caches.
pub trait NodeCache {
    type Value: Value;

    fn value(&self) -> Self::Value;

    #[inline(always)]
    fn act(&self, p: &EuclideanVector) -> EuclideanVector
    where
        Self::Value: Group,
    {
        self.value().act(p)
    }

    #[inline(always)]
    fn inverse_act(&self, p: &EuclideanVector) -> EuclideanVector
    where
        Self::Value: Group,
    {
        self.value().inverse_act(p)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LeafCache<V> {
    pub value: V,
}

#[derive(Clone, Copy, Debug)]
pub struct UnaryCache<V, C> {
    pub value: V,
    pub child: C,
}

#[derive(Clone, Copy, Debug)]
pub struct BinaryCache<V, L, R> {
    pub value: V,
    pub lhs: L,
    pub rhs: R,
}

/// Cache of an inverse node. The inverse is never stored: acting with it
/// uses the child's inverse action (`Rᵀ(p − t)` for a transform).
#[derive(Clone, Copy, Debug)]
pub struct InverseCache<C> {
    pub child: C,
}

impl<V: Value> NodeCache for LeafCache<V> {
    type Value = V;
    #[inline(always)]
    fn value(&self) -> V {
        self.value
    }
}

impl<V: Value, C> NodeCache for UnaryCache<V, C> {
    type Value = V;
    #[inline(always)]
    fn value(&self) -> V {
        self.value
    }
}

impl<V: Value, L, R> NodeCache for BinaryCache<V, L, R> {
    type Value = V;
    #[inline(always)]
    fn value(&self) -> V {
        self.value
    }
}

impl<C> NodeCache for InverseCache<C>
where
    C: NodeCache,
    C::Value: Group,
{
    type Value = C::Value;

    #[inline(always)]
    fn value(&self) -> C::Value {
        self.child.value().inverse()
    }

    #[inline(always)]
    fn act(&self, p: &EuclideanVector) -> EuclideanVector {
        self.child.inverse_act(p)
    }

    #[inline(always)]
    fn inverse_act(&self, p: &EuclideanVector) -> EuclideanVector {
        self.child.act(p)
    }
}

/// An expression tree node.
///
/// The methods marked hidden are the evaluator internals; use
/// [`Expr::eval_with_jacobians`] and the functions in
/// [`autodiff`](crate::autodiff) instead.
pub trait Expr: Sized {
    type Value: Value;
    type Frames: Signature;
    type Cache: NodeCache<Value = Self::Value>;
    /// Leaf Jacobians in left-to-right leaf order, each with `RD` rows.
    type Jacobians<RD: Dim>: JacobianList;

    const LEAF_KEYS: KeySet;
    /// Compile-time well-formedness checks that trait bounds cannot express.
    /// Evaluated whenever the expression is evaluated.
    const CHECKED: ();

    /// Value without a cache. Chains of compositions acting on a vector are
    /// evaluated right to left as matrix-vector products.
    fn value(&self) -> Self::Value;

    /// Value with every intermediate cached.
    fn evaluate(&self) -> Self::Cache;

    #[doc(hidden)]
    #[inline(always)]
    fn act_value(&self, p: &EuclideanVector) -> EuclideanVector
    where
        Self::Value: Group,
    {
        self.value().act(p)
    }

    #[doc(hidden)]
    #[inline(always)]
    fn inverse_act_value(&self, p: &EuclideanVector) -> EuclideanVector
    where
        Self::Value: Group,
    {
        self.value().inverse_act(p)
    }

    /// Dense forward pass with run-time identity checks at matching leaves.
    #[doc(hidden)]
    fn forward_dense<K: Leaf>(
        &self,
        cache: &Self::Cache,
        target: *const K,
    ) -> Option<Mat<DimOf<Self>, LeafDim<K>>>;

    /// Forward pass assuming the leaf of type `K` is the target.
    #[doc(hidden)]
    fn typed<K: Leaf>(&self, cache: &Self::Cache) -> LazyMatrix<DimOf<Self>, LeafDim<K>>;

    #[doc(hidden)]
    fn reverse<RD: Dim>(
        &self,
        cache: &Self::Cache,
        adjoint: LazyMatrix<RD, DimOf<Self>>,
    ) -> Self::Jacobians<RD>;

    /// Address of the leaf of type `K`, if any.
    #[doc(hidden)]
    fn leaf_addr<K: Leaf>(&self) -> Option<*const K>;

    #[doc(hidden)]
    fn render(&self, depth: usize, out: &mut String);

    /// Whether a leaf of type `K` may occur in this expression (decided at
    /// compile time).
    #[inline(always)]
    fn contains<K: Leaf>() -> bool {
        const { Self::LEAF_KEYS.contains(K::KEY) }
    }

    /// One node per line, two spaces of indentation per level.
    fn outline(&self) -> String {
        let mut out = String::new();
        self.render(0, &mut out);
        out
    }

    /// The value with its statically derived frame signature.
    fn evaluate_framed(&self) -> Framed<Self::Value, Self::Frames>
    where
        Self::Frames: SignatureOf<Self::Value>,
    {
        Framed::new(self.value())
    }

    /// Value and Jacobians in one evaluation.
    ///
    /// With a tuple of target leaves `(&a, &b, ...)` this runs the typed
    /// forward evaluator once per target. With `()` it runs the reverse
    /// evaluator and returns the Jacobians of all leaves in left-to-right
    /// order.
    fn eval_with_jacobians<T: Targets<Self>>(&self, targets: T) -> (Self::Value, T::Output) {
        targets.run(self)
    }

    fn inverse(self) -> Inverse<Self>
    where
        Inverse<Self>: Expr,
    {
        Unary::new(InverseOp, self)
    }

    fn exp(self) -> ExpMap<Self>
    where
        ExpMap<Self>: Expr,
    {
        Unary::new(ExpOp, self)
    }

    /// `log_B`: the target frame of the resulting tangent is explicit.
    fn log_to<B: Frame>(self) -> LogMap<Self, B>
    where
        LogMap<Self, B>: Expr,
    {
        Unary::new(LogOp(PhantomData), self)
    }

    /// Log map for unframed expressions.
    fn log(self) -> LogMap<Self, Unframed>
    where
        LogMap<Self, Unframed>: Expr,
    {
        self.log_to::<Unframed>()
    }

    fn boxplus<R: Expr>(self, tangent: R) -> BoxPlus<Self, R>
    where
        BoxPlus<Self, R>: Expr,
    {
        Binary::new(BoxPlusOp, self, tangent)
    }

    fn boxminus<R: Expr>(self, other: R) -> BoxMinus<Self, R>
    where
        BoxMinus<Self, R>: Expr,
    {
        Binary::new(BoxMinusOp, self, other)
    }

    fn scale(self, s: f64) -> Scale<Self>
    where
        Scale<Self>: Expr,
    {
        Unary::new(ScaleOp(s), self)
    }
}

#[cfg(test)]
mod tests;
