use std::any::TypeId;
use std::fmt::Write as _;
use std::marker::PhantomData;

use super::{
    BinaryCache, DimOf, Expr, Framed, InverseCache, KeySet, LazyMatrix, Leaf, LeafCache, LeafDim, NodeCache,
    SignatureOf, UnaryCache,
};
use crate::autodiff::{HCons, HNil, JacobianList, LocalJacobian};
use crate::counters;
use crate::frames::{
    unmixed, unmixed1, unmixed2, BoxMinusRule, BoxPlusRule, ComposeRule, DiffRule, ExpRule, Frame,
    InverseRule, LogRule, NegRule, RotateRule, ScaleRule, Signature, SumRule, TransformRule,
};
use crate::linalg::{self, matmul, Dim, Mat, D3, D6};
use crate::manifold::{cross, EuclideanVector, Group, Tangent, Value, VectorSpace};
use crate::{SE3, SO3};

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

impl<'a, V: Value, S: SignatureOf<V>> Expr for &'a Framed<V, S> {
    type Value = V;
    type Frames = S;
    type Cache = LeafCache<V>;
    type Jacobians<RD: Dim> = HCons<LocalJacobian<RD, V::Dim>, HNil>;

    const LEAF_KEYS: KeySet = KeySet::single(<Framed<V, S> as Leaf>::KEY);
    const CHECKED: () = assert!(unmixed1::<S>(), "leaf signature mixes Unframed with named frames");

    #[inline(always)]
    fn value(&self) -> V {
        self.value
    }

    #[inline(always)]
    fn evaluate(&self) -> LeafCache<V> {
        LeafCache { value: self.value }
    }

    #[inline(always)]
    fn act_value(&self, p: &EuclideanVector) -> EuclideanVector
    where
        V: Group,
    {
        self.value.act(p)
    }

    #[inline(always)]
    fn inverse_act_value(&self, p: &EuclideanVector) -> EuclideanVector
    where
        V: Group,
    {
        self.value.inverse_act(p)
    }

    #[inline(always)]
    fn forward_dense<K: Leaf>(
        &self,
        _cache: &LeafCache<V>,
        target: *const K,
    ) -> Option<Mat<V::Dim, LeafDim<K>>> {
        let same_type = TypeId::of::<Framed<V, S>>() == TypeId::of::<K>();
        if same_type && std::ptr::eq(*self as *const Framed<V, S> as *const (), target as *const ()) {
            Some(linalg::eye::<V::Dim, LeafDim<K>>())
        } else {
            None
        }
    }

    #[inline(always)]
    fn typed<K: Leaf>(&self, _cache: &LeafCache<V>) -> LazyMatrix<V::Dim, LeafDim<K>> {
        if TypeId::of::<Framed<V, S>>() == TypeId::of::<K>() {
            LazyMatrix::Identity
        } else {
            LazyMatrix::Zero
        }
    }

    #[inline(always)]
    fn reverse<RD: Dim>(
        &self,
        _cache: &LeafCache<V>,
        adjoint: LazyMatrix<RD, V::Dim>,
    ) -> Self::Jacobians<RD> {
        HCons(LocalJacobian::from_lazy(&adjoint), HNil)
    }

    #[inline(always)]
    fn leaf_addr<K: Leaf>(&self) -> Option<*const K> {
        if TypeId::of::<Framed<V, S>>() == TypeId::of::<K>() {
            Some(*self as *const Framed<V, S> as *const K)
        } else {
            None
        }
    }

    fn render(&self, depth: usize, out: &mut String) {
        indent(out, depth);
        let _ = writeln!(out, "Leaf {} {}", V::KIND.name(), S::runtime());
    }
}

/// An operation with two operands.
pub trait BinaryOp<L: Expr, R: Expr>: Copy {
    type Value: Value;
    type Frames: Signature;
    const NAME: &'static str;

    fn combine(&self, lhs: &L::Cache, rhs: &R::Cache) -> Self::Value;

    fn value(&self, lhs: &L, rhs: &R) -> Self::Value;

    #[inline(always)]
    fn act_value(&self, lhs: &L, rhs: &R, p: &EuclideanVector) -> EuclideanVector
    where
        Self::Value: Group,
    {
        self.value(lhs, rhs).act(p)
    }

    #[inline(always)]
    fn inverse_act_value(&self, lhs: &L, rhs: &R, p: &EuclideanVector) -> EuclideanVector
    where
        Self::Value: Group,
    {
        self.value(lhs, rhs).inverse_act(p)
    }

    /// Local Jacobian of the result with respect to the left operand.
    fn d_lhs(
        &self,
        cache: &BinaryCache<Self::Value, L::Cache, R::Cache>,
    ) -> LazyMatrix<<Self::Value as Value>::Dim, DimOf<L>>;

    /// Local Jacobian of the result with respect to the right operand.
    fn d_rhs(
        &self,
        cache: &BinaryCache<Self::Value, L::Cache, R::Cache>,
    ) -> LazyMatrix<<Self::Value as Value>::Dim, DimOf<R>>;
}

/// An operation with one operand.
pub trait UnaryOp<E: Expr>: Copy {
    type Value: Value;
    type Frames: Signature;
    type Cache: NodeCache<Value = Self::Value>;
    const NAME: &'static str;
    const UNMIXED: bool = unmixed1::<E::Frames>();

    fn cache(&self, child: E::Cache) -> Self::Cache;

    fn child_cache(cache: &Self::Cache) -> &E::Cache;

    fn value(&self, child: &E) -> Self::Value;

    #[inline(always)]
    fn act_value(&self, child: &E, p: &EuclideanVector) -> EuclideanVector
    where
        Self::Value: Group,
    {
        self.value(child).act(p)
    }

    #[inline(always)]
    fn inverse_act_value(&self, child: &E, p: &EuclideanVector) -> EuclideanVector
    where
        Self::Value: Group,
    {
        self.value(child).inverse_act(p)
    }

    fn derivative(&self, cache: &Self::Cache) -> LazyMatrix<<Self::Value as Value>::Dim, DimOf<E>>;
}

#[derive(Clone, Copy, Debug)]
pub struct Binary<Op, L, R> {
    pub op: Op,
    pub lhs: L,
    pub rhs: R,
}

impl<Op, L, R> Binary<Op, L, R> {
    pub fn new(op: Op, lhs: L, rhs: R) -> Self {
        Binary { op, lhs, rhs }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Unary<Op, E> {
    pub op: Op,
    pub child: E,
}

impl<Op, E> Unary<Op, E> {
    pub fn new(op: Op, child: E) -> Self {
        Unary { op, child }
    }
}

impl<Op, L, R> Expr for Binary<Op, L, R>
where
    L: Expr,
    R: Expr,
    Op: BinaryOp<L, R>,
{
    type Value = Op::Value;
    type Frames = Op::Frames;
    type Cache = BinaryCache<Op::Value, L::Cache, R::Cache>;
    type Jacobians<RD: Dim> = <L::Jacobians<RD> as JacobianList>::Append<R::Jacobians<RD>>;

    const LEAF_KEYS: KeySet = L::LEAF_KEYS.union(R::LEAF_KEYS);
    const CHECKED: () = {
        let () = L::CHECKED;
        let () = R::CHECKED;
        assert!(
            unmixed2::<L::Frames, R::Frames>(),
            "operands mix Unframed with named frames"
        );
    };

    #[inline(always)]
    fn value(&self) -> Op::Value {
        let () = Self::CHECKED;
        self.op.value(&self.lhs, &self.rhs)
    }

    #[inline(always)]
    fn evaluate(&self) -> Self::Cache {
        let () = Self::CHECKED;
        let lhs = self.lhs.evaluate();
        let rhs = self.rhs.evaluate();
        counters::record_evaluation();
        BinaryCache {
            value: self.op.combine(&lhs, &rhs),
            lhs,
            rhs,
        }
    }

    #[inline(always)]
    fn act_value(&self, p: &EuclideanVector) -> EuclideanVector
    where
        Op::Value: Group,
    {
        self.op.act_value(&self.lhs, &self.rhs, p)
    }

    #[inline(always)]
    fn inverse_act_value(&self, p: &EuclideanVector) -> EuclideanVector
    where
        Op::Value: Group,
    {
        self.op.inverse_act_value(&self.lhs, &self.rhs, p)
    }

    #[inline(always)]
    fn forward_dense<K: Leaf>(
        &self,
        cache: &Self::Cache,
        target: *const K,
    ) -> Option<Mat<DimOf<Self>, LeafDim<K>>> {
        let a = if L::contains::<K>() {
            self.lhs.forward_dense(&cache.lhs, target).map(|j| {
                counters::record_partial();
                self.op.d_lhs(cache).mul(&LazyMatrix::Dense(j)).to_dense()
            })
        } else {
            None
        };
        let b = if R::contains::<K>() {
            self.rhs.forward_dense(&cache.rhs, target).map(|j| {
                counters::record_partial();
                self.op.d_rhs(cache).mul(&LazyMatrix::Dense(j)).to_dense()
            })
        } else {
            None
        };
        match (a, b) {
            (Some(a), Some(b)) => Some(linalg::add(&a, &b)),
            (a, None) => a,
            (None, b) => b,
        }
    }

    #[inline(always)]
    fn typed<K: Leaf>(&self, cache: &Self::Cache) -> LazyMatrix<DimOf<Self>, LeafDim<K>> {
        let mut j = LazyMatrix::Zero;
        if L::contains::<K>() {
            counters::record_partial();
            j = self.op.d_lhs(cache).mul(&self.lhs.typed::<K>(&cache.lhs));
        }
        if R::contains::<K>() {
            counters::record_partial();
            let r = self.op.d_rhs(cache).mul(&self.rhs.typed::<K>(&cache.rhs));
            j = j.add(&r);
        }
        j
    }

    #[inline(always)]
    fn reverse<RD: Dim>(
        &self,
        cache: &Self::Cache,
        adjoint: LazyMatrix<RD, DimOf<Self>>,
    ) -> Self::Jacobians<RD> {
        counters::record_partial();
        let l = self.lhs.reverse(&cache.lhs, adjoint.mul(&self.op.d_lhs(cache)));
        counters::record_partial();
        let r = self.rhs.reverse(&cache.rhs, adjoint.mul(&self.op.d_rhs(cache)));
        l.append(r)
    }

    #[inline(always)]
    fn leaf_addr<K: Leaf>(&self) -> Option<*const K> {
        self.lhs.leaf_addr::<K>().or_else(|| self.rhs.leaf_addr::<K>())
    }

    fn render(&self, depth: usize, out: &mut String) {
        indent(out, depth);
        let _ = writeln!(out, "{} {}", Op::NAME, Op::Frames::runtime());
        self.lhs.render(depth + 1, out);
        self.rhs.render(depth + 1, out);
    }
}

impl<Op, E> Expr for Unary<Op, E>
where
    E: Expr,
    Op: UnaryOp<E>,
{
    type Value = Op::Value;
    type Frames = Op::Frames;
    type Cache = Op::Cache;
    type Jacobians<RD: Dim> = E::Jacobians<RD>;

    const LEAF_KEYS: KeySet = E::LEAF_KEYS;
    const CHECKED: () = {
        let () = E::CHECKED;
        assert!(Op::UNMIXED, "operands mix Unframed with named frames");
    };

    #[inline(always)]
    fn value(&self) -> Op::Value {
        let () = Self::CHECKED;
        self.op.value(&self.child)
    }

    #[inline(always)]
    fn evaluate(&self) -> Op::Cache {
        let () = Self::CHECKED;
        let child = self.child.evaluate();
        counters::record_evaluation();
        self.op.cache(child)
    }

    #[inline(always)]
    fn act_value(&self, p: &EuclideanVector) -> EuclideanVector
    where
        Op::Value: Group,
    {
        self.op.act_value(&self.child, p)
    }

    #[inline(always)]
    fn inverse_act_value(&self, p: &EuclideanVector) -> EuclideanVector
    where
        Op::Value: Group,
    {
        self.op.inverse_act_value(&self.child, p)
    }

    #[inline(always)]
    fn forward_dense<K: Leaf>(
        &self,
        cache: &Op::Cache,
        target: *const K,
    ) -> Option<Mat<DimOf<Self>, LeafDim<K>>> {
        if !E::contains::<K>() {
            return None;
        }
        self.child.forward_dense(Op::child_cache(cache), target).map(|j| {
            counters::record_partial();
            self.op.derivative(cache).mul(&LazyMatrix::Dense(j)).to_dense()
        })
    }

    #[inline(always)]
    fn typed<K: Leaf>(&self, cache: &Op::Cache) -> LazyMatrix<DimOf<Self>, LeafDim<K>> {
        if E::contains::<K>() {
            counters::record_partial();
            self.op
                .derivative(cache)
                .mul(&self.child.typed::<K>(Op::child_cache(cache)))
        } else {
            LazyMatrix::Zero
        }
    }

    #[inline(always)]
    fn reverse<RD: Dim>(
        &self,
        cache: &Op::Cache,
        adjoint: LazyMatrix<RD, DimOf<Self>>,
    ) -> Self::Jacobians<RD> {
        counters::record_partial();
        let a = adjoint.mul(&self.op.derivative(cache));
        self.child.reverse(Op::child_cache(cache), a)
    }

    #[inline(always)]
    fn leaf_addr<K: Leaf>(&self) -> Option<*const K> {
        self.child.leaf_addr::<K>()
    }

    fn render(&self, depth: usize, out: &mut String) {
        indent(out, depth);
        let _ = writeln!(out, "{} {}", Op::NAME, Op::Frames::runtime());
        self.child.render(depth + 1, out);
    }
}

// Binary operations.

#[derive(Clone, Copy, Debug, Default)]
pub struct ComposeOp;
#[derive(Clone, Copy, Debug, Default)]
pub struct RotateOp;
#[derive(Clone, Copy, Debug, Default)]
pub struct TransformOp;
#[derive(Clone, Copy, Debug, Default)]
pub struct SumOp;
#[derive(Clone, Copy, Debug, Default)]
pub struct DifferenceOp;
#[derive(Clone, Copy, Debug, Default)]
pub struct BoxPlusOp;
#[derive(Clone, Copy, Debug, Default)]
pub struct BoxMinusOp;

pub type Compose<L, R> = Binary<ComposeOp, L, R>;
pub type Rotate<L, R> = Binary<RotateOp, L, R>;
pub type TransformVector<L, R> = Binary<TransformOp, L, R>;
pub type Sum<L, R> = Binary<SumOp, L, R>;
pub type Difference<L, R> = Binary<DifferenceOp, L, R>;
pub type BoxPlus<L, R> = Binary<BoxPlusOp, L, R>;
pub type BoxMinus<L, R> = Binary<BoxMinusOp, L, R>;

impl<L, R, G> BinaryOp<L, R> for ComposeOp
where
    G: Group,
    L: Expr<Value = G>,
    R: Expr<Value = G>,
    L::Frames: ComposeRule<R::Frames>,
{
    type Value = G;
    type Frames = <L::Frames as ComposeRule<R::Frames>>::Output;
    const NAME: &'static str = "Compose";

    #[inline(always)]
    fn combine(&self, lhs: &L::Cache, rhs: &R::Cache) -> G {
        lhs.value().compose(&rhs.value())
    }

    #[inline(always)]
    fn value(&self, lhs: &L, rhs: &R) -> G {
        lhs.value().compose(&rhs.value())
    }

    #[inline(always)]
    fn act_value(&self, lhs: &L, rhs: &R, p: &EuclideanVector) -> EuclideanVector {
        lhs.act_value(&rhs.act_value(p))
    }

    #[inline(always)]
    fn inverse_act_value(&self, lhs: &L, rhs: &R, p: &EuclideanVector) -> EuclideanVector {
        rhs.inverse_act_value(&lhs.inverse_act_value(p))
    }

    #[inline(always)]
    fn d_lhs(&self, _: &BinaryCache<G, L::Cache, R::Cache>) -> LazyMatrix<G::Dim, G::Dim> {
        LazyMatrix::Identity
    }

    #[inline(always)]
    fn d_rhs(&self, cache: &BinaryCache<G, L::Cache, R::Cache>) -> LazyMatrix<G::Dim, G::Dim> {
        LazyMatrix::Dense(cache.lhs.value().adjoint())
    }
}

impl<L, R> BinaryOp<L, R> for RotateOp
where
    L: Expr<Value = SO3>,
    R: Expr<Value = EuclideanVector>,
    L::Frames: RotateRule<R::Frames>,
{
    type Value = EuclideanVector;
    type Frames = <L::Frames as RotateRule<R::Frames>>::Output;
    const NAME: &'static str = "Rotate";

    #[inline(always)]
    fn combine(&self, lhs: &L::Cache, rhs: &R::Cache) -> EuclideanVector {
        lhs.act(&rhs.value())
    }

    #[inline(always)]
    fn value(&self, lhs: &L, rhs: &R) -> EuclideanVector {
        lhs.act_value(&rhs.value())
    }

    #[inline(always)]
    fn d_lhs(&self, cache: &BinaryCache<EuclideanVector, L::Cache, R::Cache>) -> LazyMatrix<D3, D3> {
        LazyMatrix::Cross(-cache.value.0)
    }

    #[inline(always)]
    fn d_rhs(&self, cache: &BinaryCache<EuclideanVector, L::Cache, R::Cache>) -> LazyMatrix<D3, D3> {
        LazyMatrix::Dense(*cache.lhs.value().matrix())
    }
}

impl<L, R> BinaryOp<L, R> for TransformOp
where
    L: Expr<Value = SE3>,
    R: Expr<Value = EuclideanVector>,
    L::Frames: TransformRule<R::Frames>,
{
    type Value = EuclideanVector;
    type Frames = <L::Frames as TransformRule<R::Frames>>::Output;
    const NAME: &'static str = "Transform";

    #[inline(always)]
    fn combine(&self, lhs: &L::Cache, rhs: &R::Cache) -> EuclideanVector {
        lhs.act(&rhs.value())
    }

    #[inline(always)]
    fn value(&self, lhs: &L, rhs: &R) -> EuclideanVector {
        lhs.act_value(&rhs.value())
    }

    #[inline(always)]
    fn d_lhs(&self, cache: &BinaryCache<EuclideanVector, L::Cache, R::Cache>) -> LazyMatrix<D3, D6> {
        let mut m = Mat::<D3, D6>::zeros();
        m.fixed_view_mut::<3, 3>(0, 0)
            .copy_from(&(-cross(&cache.value.0)));
        m.fixed_view_mut::<3, 3>(0, 3).fill_with_identity();
        LazyMatrix::Dense(m)
    }

    #[inline(always)]
    fn d_rhs(&self, cache: &BinaryCache<EuclideanVector, L::Cache, R::Cache>) -> LazyMatrix<D3, D3> {
        LazyMatrix::Dense(*cache.lhs.value().rotation.matrix())
    }
}

impl<L, R, V> BinaryOp<L, R> for SumOp
where
    V: VectorSpace,
    L: Expr<Value = V>,
    R: Expr<Value = V>,
    L::Frames: SumRule<R::Frames>,
{
    type Value = V;
    type Frames = <L::Frames as SumRule<R::Frames>>::Output;
    const NAME: &'static str = "Sum";

    #[inline(always)]
    fn combine(&self, lhs: &L::Cache, rhs: &R::Cache) -> V {
        lhs.value().add(&rhs.value())
    }

    #[inline(always)]
    fn value(&self, lhs: &L, rhs: &R) -> V {
        lhs.value().add(&rhs.value())
    }

    #[inline(always)]
    fn d_lhs(&self, _: &BinaryCache<V, L::Cache, R::Cache>) -> LazyMatrix<V::Dim, V::Dim> {
        LazyMatrix::Identity
    }

    #[inline(always)]
    fn d_rhs(&self, _: &BinaryCache<V, L::Cache, R::Cache>) -> LazyMatrix<V::Dim, V::Dim> {
        LazyMatrix::Identity
    }
}

impl<L, R, V> BinaryOp<L, R> for DifferenceOp
where
    V: VectorSpace,
    L: Expr<Value = V>,
    R: Expr<Value = V>,
    L::Frames: DiffRule<R::Frames>,
{
    type Value = V;
    type Frames = <L::Frames as DiffRule<R::Frames>>::Output;
    const NAME: &'static str = "Difference";

    #[inline(always)]
    fn combine(&self, lhs: &L::Cache, rhs: &R::Cache) -> V {
        lhs.value().sub(&rhs.value())
    }

    #[inline(always)]
    fn value(&self, lhs: &L, rhs: &R) -> V {
        lhs.value().sub(&rhs.value())
    }

    #[inline(always)]
    fn d_lhs(&self, _: &BinaryCache<V, L::Cache, R::Cache>) -> LazyMatrix<V::Dim, V::Dim> {
        LazyMatrix::Identity
    }

    #[inline(always)]
    fn d_rhs(&self, _: &BinaryCache<V, L::Cache, R::Cache>) -> LazyMatrix<V::Dim, V::Dim> {
        LazyMatrix::Scaled(-1.0)
    }
}

impl<L, R, G> BinaryOp<L, R> for BoxPlusOp
where
    G: Group,
    L: Expr<Value = G>,
    R: Expr<Value = G::Tangent>,
    L::Frames: BoxPlusRule<R::Frames>,
{
    type Value = G;
    type Frames = <L::Frames as BoxPlusRule<R::Frames>>::Output;
    const NAME: &'static str = "BoxPlus";

    #[inline(always)]
    fn combine(&self, lhs: &L::Cache, rhs: &R::Cache) -> G {
        lhs.value().boxplus(&rhs.value())
    }

    #[inline(always)]
    fn value(&self, lhs: &L, rhs: &R) -> G {
        lhs.value().boxplus(&rhs.value())
    }

    #[inline(always)]
    fn d_lhs(&self, cache: &BinaryCache<G, L::Cache, R::Cache>) -> LazyMatrix<G::Dim, G::Dim> {
        // exp(φ) exp(δ) g = exp(Ad(exp φ) δ) exp(φ) g
        LazyMatrix::Dense(G::exp(&cache.rhs.value()).adjoint())
    }

    #[inline(always)]
    fn d_rhs(&self, cache: &BinaryCache<G, L::Cache, R::Cache>) -> LazyMatrix<G::Dim, G::Dim> {
        LazyMatrix::Dense(G::left_jacobian(&cache.rhs.value()))
    }
}

impl<L, R, G> BinaryOp<L, R> for BoxMinusOp
where
    G: Group,
    L: Expr<Value = G>,
    R: Expr<Value = G>,
    L::Frames: BoxMinusRule<R::Frames>,
{
    type Value = G::Tangent;
    type Frames = <L::Frames as BoxMinusRule<R::Frames>>::Output;
    const NAME: &'static str = "BoxMinus";

    #[inline(always)]
    fn combine(&self, lhs: &L::Cache, rhs: &R::Cache) -> G::Tangent {
        lhs.value().boxminus(&rhs.value())
    }

    #[inline(always)]
    fn value(&self, lhs: &L, rhs: &R) -> G::Tangent {
        lhs.value().boxminus(&rhs.value())
    }

    #[inline(always)]
    fn d_lhs(&self, cache: &BinaryCache<G::Tangent, L::Cache, R::Cache>) -> LazyMatrix<G::Dim, G::Dim> {
        LazyMatrix::Dense(G::left_jacobian_inverse(&cache.value))
    }

    #[inline(always)]
    fn d_rhs(&self, cache: &BinaryCache<G::Tangent, L::Cache, R::Cache>) -> LazyMatrix<G::Dim, G::Dim> {
        let j_inv = G::left_jacobian_inverse(&cache.value);
        let relative = cache.lhs.value().compose(&cache.rhs.value().inverse());
        let ad = relative.adjoint();
        LazyMatrix::Dense(linalg::neg(&matmul::<G::Dim, G::Dim, G::Dim>(&j_inv, &ad)))
    }
}

// Unary operations.

#[derive(Clone, Copy, Debug, Default)]
pub struct InverseOp;
#[derive(Clone, Copy, Debug, Default)]
pub struct ExpOp;
/// Log map onto tangents ending in frame `B`.
pub struct LogOp<B>(pub PhantomData<B>);
#[derive(Clone, Copy, Debug, Default)]
pub struct NegateOp;
#[derive(Clone, Copy, Debug)]
pub struct ScaleOp(pub f64);

impl<B> Clone for LogOp<B> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<B> Copy for LogOp<B> {}

impl<B> std::fmt::Debug for LogOp<B> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("LogOp")
    }
}

pub type Inverse<E> = Unary<InverseOp, E>;
pub type ExpMap<E> = Unary<ExpOp, E>;
pub type LogMap<E, B> = Unary<LogOp<B>, E>;
pub type Negate<E> = Unary<NegateOp, E>;
pub type Scale<E> = Unary<ScaleOp, E>;

impl<E, G> UnaryOp<E> for InverseOp
where
    G: Group,
    E: Expr<Value = G>,
    E::Frames: InverseRule,
{
    type Value = G;
    type Frames = <E::Frames as InverseRule>::Output;
    type Cache = InverseCache<E::Cache>;
    const NAME: &'static str = "Inverse";

    #[inline(always)]
    fn cache(&self, child: E::Cache) -> Self::Cache {
        InverseCache { child }
    }

    #[inline(always)]
    fn child_cache(cache: &Self::Cache) -> &E::Cache {
        &cache.child
    }

    #[inline(always)]
    fn value(&self, child: &E) -> G {
        child.value().inverse()
    }

    #[inline(always)]
    fn act_value(&self, child: &E, p: &EuclideanVector) -> EuclideanVector {
        child.inverse_act_value(p)
    }

    #[inline(always)]
    fn inverse_act_value(&self, child: &E, p: &EuclideanVector) -> EuclideanVector {
        child.act_value(p)
    }

    #[inline(always)]
    fn derivative(&self, cache: &Self::Cache) -> LazyMatrix<G::Dim, G::Dim> {
        LazyMatrix::Dense(linalg::neg(&cache.value().adjoint()))
    }
}

impl<E, T> UnaryOp<E> for ExpOp
where
    T: Tangent,
    E: Expr<Value = T>,
    E::Frames: ExpRule,
{
    type Value = T::Group;
    type Frames = <E::Frames as ExpRule>::Output;
    type Cache = UnaryCache<T::Group, E::Cache>;
    const NAME: &'static str = "Exp";

    #[inline(always)]
    fn cache(&self, child: E::Cache) -> Self::Cache {
        UnaryCache {
            value: T::Group::exp(&child.value()),
            child,
        }
    }

    #[inline(always)]
    fn child_cache(cache: &Self::Cache) -> &E::Cache {
        &cache.child
    }

    #[inline(always)]
    fn value(&self, child: &E) -> T::Group {
        T::Group::exp(&child.value())
    }

    #[inline(always)]
    fn derivative(&self, cache: &Self::Cache) -> LazyMatrix<T::Dim, T::Dim> {
        LazyMatrix::Dense(T::Group::left_jacobian(&cache.child.value()))
    }
}

impl<E, G, B> UnaryOp<E> for LogOp<B>
where
    G: Group,
    B: Frame,
    E: Expr<Value = G>,
    E::Frames: LogRule<B>,
{
    type Value = G::Tangent;
    type Frames = <E::Frames as LogRule<B>>::Output;
    type Cache = UnaryCache<G::Tangent, E::Cache>;
    const NAME: &'static str = "Log";
    const UNMIXED: bool = unmixed(
        E::Frames::ARITY + 1,
        E::Frames::UNFRAMED + (<B::Id as typenum::Unsigned>::U64 == 0) as usize,
    );

    #[inline(always)]
    fn cache(&self, child: E::Cache) -> Self::Cache {
        UnaryCache {
            value: child.value().log(),
            child,
        }
    }

    #[inline(always)]
    fn child_cache(cache: &Self::Cache) -> &E::Cache {
        &cache.child
    }

    #[inline(always)]
    fn value(&self, child: &E) -> G::Tangent {
        child.value().log()
    }

    #[inline(always)]
    fn derivative(&self, cache: &Self::Cache) -> LazyMatrix<G::Dim, G::Dim> {
        LazyMatrix::Dense(G::left_jacobian_inverse(&cache.value))
    }
}

impl<E, V> UnaryOp<E> for NegateOp
where
    V: VectorSpace,
    E: Expr<Value = V>,
    E::Frames: NegRule,
{
    type Value = V;
    type Frames = <E::Frames as NegRule>::Output;
    type Cache = UnaryCache<V, E::Cache>;
    const NAME: &'static str = "Negate";

    #[inline(always)]
    fn cache(&self, child: E::Cache) -> Self::Cache {
        UnaryCache {
            value: child.value().neg(),
            child,
        }
    }

    #[inline(always)]
    fn child_cache(cache: &Self::Cache) -> &E::Cache {
        &cache.child
    }

    #[inline(always)]
    fn value(&self, child: &E) -> V {
        child.value().neg()
    }

    #[inline(always)]
    fn derivative(&self, _: &Self::Cache) -> LazyMatrix<V::Dim, V::Dim> {
        LazyMatrix::Scaled(-1.0)
    }
}

impl<E, V> UnaryOp<E> for ScaleOp
where
    V: VectorSpace,
    E: Expr<Value = V>,
    E::Frames: ScaleRule,
{
    type Value = V;
    type Frames = <E::Frames as ScaleRule>::Output;
    type Cache = UnaryCache<V, E::Cache>;
    const NAME: &'static str = "Scale";

    #[inline(always)]
    fn cache(&self, child: E::Cache) -> Self::Cache {
        UnaryCache {
            value: child.value().scale(self.0),
            child,
        }
    }

    #[inline(always)]
    fn child_cache(cache: &Self::Cache) -> &E::Cache {
        &cache.child
    }

    #[inline(always)]
    fn value(&self, child: &E) -> V {
        child.value().scale(self.0)
    }

    #[inline(always)]
    fn derivative(&self, _: &Self::Cache) -> LazyMatrix<V::Dim, V::Dim> {
        LazyMatrix::Scaled(self.0)
    }
}
