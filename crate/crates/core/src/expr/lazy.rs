use nalgebra::Vector3;

use crate::linalg::{self, cross_block, cross_mul, eye, matmul, mul_cross, recast, Dim, Mat, Storage};

/// A Jacobian block whose structure may be known without storing it densely.
///
/// Products with `Identity` and `Zero` do no arithmetic, and products with
/// `Cross` run as column- or row-wise cross products. `Cross` and `Scaled`
/// only appear in square blocks.
#[derive(Debug)]
pub enum LazyMatrix<R: Dim, C: Dim> {
    Zero,
    Identity,
    Scaled(f64),
    /// `a^×` for a 3 × 3 block.
    Cross(Vector3<f64>),
    Dense(Mat<R, C>),
}

impl<R: Dim, C: Dim> Clone for LazyMatrix<R, C> {
    #[inline]
    fn clone(&self) -> Self {
        *self
    }
}

impl<R: Dim, C: Dim> Copy for LazyMatrix<R, C> {}

impl<R: Dim, C: Dim> LazyMatrix<R, C> {
    #[inline]
    pub fn is_zero(&self) -> bool {
        matches!(self, LazyMatrix::Zero)
    }

    #[inline]
    pub fn to_dense(&self) -> Mat<R, C> {
        match self {
            LazyMatrix::Zero => Mat::<R, C>::zeros(),
            LazyMatrix::Identity => eye::<R, C>(),
            LazyMatrix::Scaled(s) => {
                let mut m = Mat::<R, C>::zeros();
                for i in 0..R::N.min(C::N) {
                    m[(i, i)] = *s;
                }
                m
            }
            LazyMatrix::Cross(a) => cross_block::<R, C>(a),
            LazyMatrix::Dense(m) => *m,
        }
    }

    /// Same block under another pair of dimension parameters that agree
    /// with `R, C` at run time.
    #[inline(always)]
    fn recast<R2: Dim, C2: Dim>(self) -> LazyMatrix<R2, C2> {
        match self {
            LazyMatrix::Zero => LazyMatrix::Zero,
            LazyMatrix::Identity => LazyMatrix::Identity,
            LazyMatrix::Scaled(s) => LazyMatrix::Scaled(s),
            LazyMatrix::Cross(a) => LazyMatrix::Cross(a),
            LazyMatrix::Dense(m) => LazyMatrix::Dense(recast(&m)),
        }
    }

    /// `self · rhs`.
    #[inline(always)]
    pub fn mul<K: Dim>(&self, rhs: &LazyMatrix<C, K>) -> LazyMatrix<R, K> {
        use LazyMatrix::*;
        match (*self, *rhs) {
            (Zero, _) | (_, Zero) => Zero,
            (Identity, b) => b.recast(),
            (a, Identity) => a.recast(),
            (Scaled(a), Scaled(b)) => Scaled(a * b),
            (Scaled(a), Cross(v)) | (Cross(v), Scaled(a)) => Cross(v * a),
            (Scaled(a), Dense(m)) => Dense(recast(&linalg::scale(&m, a))),
            (Dense(m), Scaled(a)) => Dense(recast(&linalg::scale(&m, a))),
            (Cross(a), Cross(b)) => Dense(cross_mul::<R, K>(&a, &cross_block::<R, K>(&b))),
            (Cross(a), Dense(m)) => Dense(recast(&cross_mul::<C, K>(&a, &m))),
            (Dense(m), Cross(a)) => Dense(recast(&mul_cross::<R, C>(&m, &a))),
            (Dense(a), Dense(b)) => Dense(matmul::<R, C, K>(&a, &b)),
        }
    }

    #[inline(always)]
    pub fn add(&self, rhs: &LazyMatrix<R, C>) -> LazyMatrix<R, C> {
        use LazyMatrix::*;
        match (*self, *rhs) {
            (Zero, b) => b,
            (a, Zero) => a,
            (Scaled(a), Scaled(b)) => Scaled(a + b),
            (Identity, Identity) => Scaled(2.0),
            (Cross(a), Cross(b)) => Cross(a + b),
            (a, b) => Dense(linalg::add(&a.to_dense(), &b.to_dense())),
        }
    }
}
