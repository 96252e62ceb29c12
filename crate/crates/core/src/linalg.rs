//! Fixed-size dense blocks indexed by tangent dimension.
//!
//! Every value in the library has a tangent dimension of either 3 (SO(3),
//! so(3), R³) or 6 (SE(3), se(3)). Jacobian blocks are therefore one of four
//! shapes. [`Dim`] maps a dimension marker to the concrete nalgebra storage so
//! generic evaluator code can name `Mat<R, C>` without carrying allocator
//! bounds around.

use std::fmt::Debug;
use std::ops::{Index, IndexMut};

use nalgebra::{DMatrix, SMatrix, Vector3};

/// Dense storage usable from dimension-generic code.
pub trait Storage:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Index<(usize, usize), Output = f64>
    + IndexMut<(usize, usize)>
{
    const ROWS: usize;
    const COLS: usize;

    fn zeros() -> Self;
}

impl<const R: usize, const C: usize> Storage for SMatrix<f64, R, C> {
    const ROWS: usize = R;
    const COLS: usize = C;

    #[inline(always)]
    fn zeros() -> Self {
        SMatrix::zeros()
    }
}

/// Tangent-space dimension marker.
pub trait Dim: Copy + Debug + Default + Send + Sync + 'static {
    const N: usize;
    /// Column vector of length `N`.
    type Vector: Storage;
    /// `3 × N` block.
    type Rows3: Storage;
    /// `6 × N` block.
    type Rows6: Storage;
    /// `N × C::N` block.
    type Mat<C: Dim>: Storage;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct D3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct D6;

impl Dim for D3 {
    const N: usize = 3;
    type Vector = SMatrix<f64, 3, 1>;
    type Rows3 = SMatrix<f64, 3, 3>;
    type Rows6 = SMatrix<f64, 6, 3>;
    type Mat<C: Dim> = C::Rows3;
}

impl Dim for D6 {
    const N: usize = 6;
    type Vector = SMatrix<f64, 6, 1>;
    type Rows3 = SMatrix<f64, 3, 6>;
    type Rows6 = SMatrix<f64, 6, 6>;
    type Mat<C: Dim> = C::Rows6;
}

/// `R::N × C::N` dense block.
pub type Mat<R, C> = <R as Dim>::Mat<C>;
/// Tangent vector of dimension `D::N`.
pub type TVec<D> = <D as Dim>::Vector;

#[inline(always)]
pub fn identity<D: Dim>() -> Mat<D, D> {
    let mut m = Mat::<D, D>::zeros();
    for i in 0..D::N {
        m[(i, i)] = 1.0;
    }
    m
}

/// Rectangular identity; equal to [`identity`] when `R == C`.
#[inline(always)]
pub fn eye<R: Dim, C: Dim>() -> Mat<R, C> {
    let mut m = Mat::<R, C>::zeros();
    for i in 0..R::N.min(C::N) {
        m[(i, i)] = 1.0;
    }
    m
}

#[inline(always)]
pub fn scaled_identity<D: Dim>(s: f64) -> Mat<D, D> {
    let mut m = Mat::<D, D>::zeros();
    for i in 0..D::N {
        m[(i, i)] = s;
    }
    m
}

/// Element-wise copy between storages of equal shape. Used where generic
/// code holds the same block under two type parameters known to agree only
/// at monomorphization time.
#[inline(always)]
pub fn recast<A: Storage, B: Storage>(a: &A) -> B {
    debug_assert!(A::ROWS == B::ROWS && A::COLS == B::COLS);
    let mut b = B::zeros();
    for i in 0..B::ROWS {
        for j in 0..B::COLS {
            b[(i, j)] = a[(i, j)];
        }
    }
    b
}

#[inline(always)]
pub fn matmul<R: Dim, K: Dim, C: Dim>(a: &Mat<R, K>, b: &Mat<K, C>) -> Mat<R, C> {
    crate::counters::record_muls(R::N * K::N * C::N);
    let mut out = Mat::<R, C>::zeros();
    for i in 0..R::N {
        for j in 0..C::N {
            let mut acc = 0.0;
            for k in 0..K::N {
                acc += a[(i, k)] * b[(k, j)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

#[inline(always)]
pub fn matvec<R: Dim, C: Dim>(a: &Mat<R, C>, v: &TVec<C>) -> TVec<R> {
    let mut out = TVec::<R>::zeros();
    for i in 0..R::N {
        let mut acc = 0.0;
        for k in 0..C::N {
            acc += a[(i, k)] * v[(k, 0)];
        }
        out[(i, 0)] = acc;
    }
    out
}

#[inline(always)]
pub fn add<S: Storage>(a: &S, b: &S) -> S {
    let mut out = *a;
    for i in 0..S::ROWS {
        for j in 0..S::COLS {
            out[(i, j)] += b[(i, j)];
        }
    }
    out
}

#[inline(always)]
pub fn scale<S: Storage>(a: &S, s: f64) -> S {
    crate::counters::record_muls(S::ROWS * S::COLS);
    let mut out = *a;
    for i in 0..S::ROWS {
        for j in 0..S::COLS {
            out[(i, j)] *= s;
        }
    }
    out
}

#[inline(always)]
pub fn neg<S: Storage>(a: &S) -> S {
    let mut out = *a;
    for i in 0..S::ROWS {
        for j in 0..S::COLS {
            out[(i, j)] = -out[(i, j)];
        }
    }
    out
}

/// `a^× · M` for a `3 × C` block, computed as column-wise cross products.
#[inline(always)]
pub fn cross_mul<R: Dim, C: Dim>(a: &Vector3<f64>, m: &Mat<R, C>) -> Mat<R, C> {
    debug_assert_eq!(R::N, 3);
    crate::counters::record_muls(6 * C::N);
    let mut out = Mat::<R, C>::zeros();
    for j in 0..C::N {
        let (x, y, z) = (m[(0, j)], m[(1, j)], m[(2, j)]);
        out[(0, j)] = a.y * z - a.z * y;
        out[(1, j)] = a.z * x - a.x * z;
        out[(2, j)] = a.x * y - a.y * x;
    }
    out
}

/// `M · a^×` for an `R × 3` block, computed as row-wise cross products
/// (row_i · a^× = row_i × a).
#[inline(always)]
pub fn mul_cross<R: Dim, C: Dim>(m: &Mat<R, C>, a: &Vector3<f64>) -> Mat<R, C> {
    debug_assert_eq!(C::N, 3);
    crate::counters::record_muls(6 * R::N);
    let mut out = Mat::<R, C>::zeros();
    for i in 0..R::N {
        let (x, y, z) = (m[(i, 0)], m[(i, 1)], m[(i, 2)]);
        out[(i, 0)] = y * a.z - z * a.y;
        out[(i, 1)] = z * a.x - x * a.z;
        out[(i, 2)] = x * a.y - y * a.x;
    }
    out
}

/// Writes `a^×` into a generic block that is known to be 3 × 3.
#[inline(always)]
pub fn cross_block<R: Dim, C: Dim>(a: &Vector3<f64>) -> Mat<R, C> {
    recast(&crate::manifold::cross(a))
}

pub fn to_dmatrix<S: Storage>(s: &S) -> DMatrix<f64> {
    DMatrix::from_fn(S::ROWS, S::COLS, |i, j| s[(i, j)])
}

pub fn max_abs_diff<S: Storage>(a: &S, b: &S) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..S::ROWS {
        for j in 0..S::COLS {
            worst = worst.max((a[(i, j)] - b[(i, j)]).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Matrix3, Matrix3x6, Matrix6x3};

    #[test]
    fn generic_product_matches_nalgebra() {
        let a = Matrix3x6::from_fn(|i, j| (i * 7 + j) as f64 * 0.3 - 1.0);
        let b = Matrix6x3::from_fn(|i, j| (i + 2 * j) as f64 * -0.1 + 0.5);
        let ours: Matrix3<f64> = matmul::<D3, D6, D3>(&a, &b);
        assert!((ours - a * b).abs().max() < 1e-14);
    }

    #[test]
    fn cross_products_match_dense() {
        let a = Vector3::new(0.3, -1.2, 2.0);
        let m = Matrix3x6::from_fn(|i, j| (i as f64 - j as f64) * 0.7);
        let lhs: Matrix3x6<f64> = cross_mul::<D3, D6>(&a, &m);
        assert!((lhs - crate::manifold::cross(&a) * m).abs().max() < 1e-14);
        let n = Matrix6x3::from_fn(|i, j| (i * j) as f64 + 0.25);
        let rhs: Matrix6x3<f64> = mul_cross::<D6, D3>(&n, &a);
        assert!((rhs - n * crate::manifold::cross(&a)).abs().max() < 1e-14);
    }
}
