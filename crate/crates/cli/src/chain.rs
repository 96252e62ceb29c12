//! Rotation chain `p₂ = Φ₁Φ₂⋯Φ_N p₁` for N = 1..=10.
//!
//! Each length has its own statically typed expression with distinct frames
//! per rotation (`Φᵢ : F_{i-1} → F_i`), so all three evaluators apply.

use framegeo::manifold::{random_rotation, random_vector};
use framegeo::{forward_jacobian, frames, EuclideanVector, Expr, NodeCache, Point, Rotation, SO3};
use nalgebra::Matrix3;
use rand::Rng;

use crate::Method;

frames!(F0, F1, F2, F3, F4, F5, F6, F7, F8, F9, F10, PX, PY);

pub const MAX_N: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct ChainInput {
    pub rotations: Vec<SO3>,
    pub p1: EuclideanVector,
}

impl ChainInput {
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        ChainInput {
            rotations: (0..n).map(|_| random_rotation(rng)).collect(),
            p1: EuclideanVector(random_vector(rng, 1.0)),
        }
    }

    pub fn n(&self) -> usize {
        self.rotations.len()
    }
}

/// `p₂` and its Jacobians, ordered `Φ₁, …, Φ_N, p₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainOutput {
    pub value: EuclideanVector,
    pub jacobians: Vec<Matrix3<f64>>,
}

/// `−v^× M`, one cross product per column.
#[inline(always)]
fn neg_cross_mul(v: &nalgebra::Vector3<f64>, m: &Matrix3<f64>) -> Matrix3<f64> {
    Matrix3::from_columns(&[m.column(0).cross(v), m.column(1).cross(v), m.column(2).cross(v)])
}

/// Hand-written value and Jacobians. `K` must be `N + 1`.
///
/// `∂p₂/∂p₁ = Φ₁⋯Φ_N` and `∂p₂/∂Φᵢ = −p₂^× Φ₁⋯Φᵢ₋₁`, with the prefix
/// products shared between outputs.
#[inline(always)]
pub fn hand_chain<const N: usize, const K: usize>(
    rotations: [&SO3; N],
    p1: &EuclideanVector,
) -> (EuclideanVector, [Matrix3<f64>; K]) {
    debug_assert_eq!(K, N + 1);
    let mut p2 = p1.0;
    for c in rotations.iter().rev() {
        p2 = c.matrix() * p2;
    }
    let mut out = [Matrix3::zeros(); K];
    out[0] = Matrix3::new(0.0, p2.z, -p2.y, -p2.z, 0.0, p2.x, p2.y, -p2.x, 0.0);
    let mut prefix = *rotations[0].matrix();
    for i in 1..N {
        out[i] = neg_cross_mul(&p2, &prefix);
        prefix *= rotations[i].matrix();
    }
    out[N] = prefix;
    (EuclideanVector(p2), out)
}

macro_rules! chain_case {
    ($m:ident, $n:literal, [$($c:ident: $a:ident => $b:ident),+], $end:ident) => {
        pub mod $m {
            use super::*;

            pub const N: usize = $n;
            pub type Out = (EuclideanVector, [Matrix3<f64>; $n + 1]);

            pub struct Leaves {
                $(pub $c: Rotation<$a, $b>,)+
                pub p: Point<$end, PX, PY>,
            }

            impl Leaves {
                pub fn new(input: &ChainInput) -> Self {
                    assert_eq!(input.n(), N, "chain length");
                    let mut r = input.rotations.iter();
                    Leaves {
                        $($c: Rotation::new(*r.next().unwrap()),)+
                        p: Point::new(input.p1),
                    }
                }
            }

            #[inline(always)]
            pub fn value(l: &Leaves) -> EuclideanVector {
                ($(&l.$c *)+ &l.p).value()
            }

            #[inline(always)]
            pub fn hand(l: &Leaves) -> Out {
                hand_chain::<$n, { $n + 1 }>([$(l.$c.value()),+], l.p.value())
            }

            #[inline(always)]
            pub fn forward(l: &Leaves) -> Out {
                let e = $(&l.$c *)+ &l.p;
                let cache = e.evaluate();
                (
                    cache.value(),
                    [
                        $(*forward_jacobian(&e, &cache, &l.$c).matrix(),)+
                        *forward_jacobian(&e, &cache, &l.p).matrix(),
                    ],
                )
            }

            #[inline(always)]
            pub fn typed_forward(l: &Leaves) -> Out {
                let e = $(&l.$c *)+ &l.p;
                let (v, ($($c,)+ p,)) = e.eval_with_jacobians(($(&l.$c,)+ &l.p,));
                (v, [$(*$c.matrix(),)+ *p.matrix()])
            }

            #[inline(always)]
            pub fn reverse(l: &Leaves) -> Out {
                let e = $(&l.$c *)+ &l.p;
                let (v, ($($c,)+ p,)) = e.eval_with_jacobians(());
                (v, [$(*$c.matrix(),)+ *p.matrix()])
            }

            pub fn outline(l: &Leaves) -> String {
                ($(&l.$c *)+ &l.p).outline()
            }
        }
    };
}

chain_case!(n1, 1, [c1: F0 => F1], F1);
chain_case!(n2, 2, [c1: F0 => F1, c2: F1 => F2], F2);
chain_case!(n3, 3, [c1: F0 => F1, c2: F1 => F2, c3: F2 => F3], F3);
chain_case!(n4, 4, [c1: F0 => F1, c2: F1 => F2, c3: F2 => F3, c4: F3 => F4], F4);
chain_case!(n5, 5, [c1: F0 => F1, c2: F1 => F2, c3: F2 => F3, c4: F3 => F4, c5: F4 => F5], F5);
chain_case!(n6, 6, [c1: F0 => F1, c2: F1 => F2, c3: F2 => F3, c4: F3 => F4, c5: F4 => F5,
    c6: F5 => F6], F6);
chain_case!(n7, 7, [c1: F0 => F1, c2: F1 => F2, c3: F2 => F3, c4: F3 => F4, c5: F4 => F5,
    c6: F5 => F6, c7: F6 => F7], F7);
chain_case!(n8, 8, [c1: F0 => F1, c2: F1 => F2, c3: F2 => F3, c4: F3 => F4, c5: F4 => F5,
    c6: F5 => F6, c7: F6 => F7, c8: F7 => F8], F8);
chain_case!(n9, 9, [c1: F0 => F1, c2: F1 => F2, c3: F2 => F3, c4: F3 => F4, c5: F4 => F5,
    c6: F5 => F6, c7: F6 => F7, c8: F7 => F8, c9: F8 => F9], F9);
chain_case!(n10, 10, [c1: F0 => F1, c2: F1 => F2, c3: F2 => F3, c4: F3 => F4, c5: F4 => F5,
    c6: F5 => F6, c7: F6 => F7, c8: F7 => F8, c9: F8 => F9, c10: F9 => F10], F10);

/// Runs `$body` with `$m` bound to the module for chain length `$n`.
#[macro_export]
#[doc(hidden)]
macro_rules! with_chain {
    ($n:expr, $m:ident => $body:expr) => {
        match $n {
            1 => {
                use $crate::chain::n1 as $m;
                $body
            }
            2 => {
                use $crate::chain::n2 as $m;
                $body
            }
            3 => {
                use $crate::chain::n3 as $m;
                $body
            }
            4 => {
                use $crate::chain::n4 as $m;
                $body
            }
            5 => {
                use $crate::chain::n5 as $m;
                $body
            }
            6 => {
                use $crate::chain::n6 as $m;
                $body
            }
            7 => {
                use $crate::chain::n7 as $m;
                $body
            }
            8 => {
                use $crate::chain::n8 as $m;
                $body
            }
            9 => {
                use $crate::chain::n9 as $m;
                $body
            }
            10 => {
                use $crate::chain::n10 as $m;
                $body
            }
            n => panic!("chain length {n} outside 1..={}", $crate::chain::MAX_N),
        }
    };
}

/// Value and Jacobians of `input` by one method.
pub fn evaluate(method: Method, input: &ChainInput) -> ChainOutput {
    with_chain!(input.n(), m => {
        let leaves = m::Leaves::new(input);
        let (value, j) = match method {
            Method::Hand => m::hand(&leaves),
            Method::Forward => m::forward(&leaves),
            Method::TypedForward => m::typed_forward(&leaves),
            Method::Reverse => m::reverse(&leaves),
        };
        ChainOutput { value, jacobians: j.to_vec() }
    })
}

/// Value of the chain expression, for finite differencing.
pub fn value(input: &ChainInput) -> EuclideanVector {
    with_chain!(input.n(), m => m::value(&m::Leaves::new(input)))
}

/// The same length-10 chain with every label [`framegeo::Unframed`]. Only
/// the untyped evaluator applies, since the rotations share a type.
pub mod unframed {
    use super::*;

    pub struct Leaves {
        pub c: [Rotation; MAX_N],
        pub p: Point,
    }

    impl Leaves {
        pub fn new(input: &ChainInput) -> Self {
            assert_eq!(input.n(), MAX_N, "chain length");
            Leaves {
                c: std::array::from_fn(|i| Rotation::new(input.rotations[i])),
                p: Point::new(input.p1),
            }
        }
    }

    /// Value and `∂p₂/∂p₁`.
    #[inline(always)]
    pub fn value_and_point_jacobian(l: &Leaves) -> (EuclideanVector, Matrix3<f64>) {
        let [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10] = &l.c;
        let e = c1 * c2 * c3 * c4 * c5 * c6 * c7 * c8 * c9 * c10 * &l.p;
        let cache = e.evaluate();
        (cache.value(), *forward_jacobian(&e, &cache, &l.p).matrix())
    }
}

/// Framed counterpart of [`unframed::value_and_point_jacobian`].
#[inline(always)]
pub fn framed_value_and_point_jacobian(l: &n10::Leaves) -> (EuclideanVector, Matrix3<f64>) {
    let e = &l.c1 * &l.c2 * &l.c3 * &l.c4 * &l.c5 * &l.c6 * &l.c7 * &l.c8 * &l.c9 * &l.c10 * &l.p;
    let cache = e.evaluate();
    (cache.value(), *forward_jacobian(&e, &cache, &l.p).matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use framegeo::manifold::cross;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_rotations() {
        let input = ChainInput {
            rotations: vec![SO3::identity(); 3],
            p1: EuclideanVector::new(0.5, -2.0, 1.0),
        };
        let out = evaluate(Method::Hand, &input);
        assert_eq!(out.value, input.p1);
        for j in &out.jacobians[..3] {
            assert_eq!(*j, -cross(&input.p1.0));
        }
        assert_eq!(out.jacobians[3], Matrix3::identity());
    }

    #[test]
    fn hand_matches_direct_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let input = ChainInput::random(3, &mut rng);
        let [m1, m2, m3] = [0, 1, 2].map(|i| *input.rotations[i].matrix());
        let p2 = m1 * m2 * m3 * input.p1.0;
        let expected = [-cross(&p2), -cross(&p2) * m1, -cross(&p2) * m1 * m2, m1 * m2 * m3];
        let out = evaluate(Method::Hand, &input);
        assert!((out.value.0 - p2).abs().max() < 1e-14);
        for (j, e) in out.jacobians.iter().zip(&expected) {
            assert!((j - e).abs().max() < 1e-14);
        }
    }

    #[test]
    fn every_method_agrees_for_every_length() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..=MAX_N {
            let input = ChainInput::random(n, &mut rng);
            let hand = evaluate(Method::Hand, &input);
            assert_eq!(hand.jacobians.len(), n + 1);
            for method in Method::ALL {
                let out = evaluate(method, &input);
                assert!((out.value.0 - hand.value.0).abs().max() < 1e-12);
                for (a, b) in out.jacobians.iter().zip(&hand.jacobians) {
                    assert!((a - b).abs().max() < 1e-10, "{method:?} N={n}");
                }
            }
        }
    }

    #[test]
    fn tree_is_left_associated() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let input = ChainInput::random(2, &mut rng);
        let l = n2::Leaves::new(&input);
        assert_eq!(
            n2::outline(&l),
            "Rotate (F0,PX,PY)\n  Compose (F0,F2)\n    Leaf SO3 (F0,F1)\n    Leaf SO3 (F1,F2)\n  Leaf R3 (F2,PX,PY)\n"
        );
    }

    #[test]
    fn unframed_chain_matches_framed() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let input = ChainInput::random(MAX_N, &mut rng);
        let a = unframed::value_and_point_jacobian(&unframed::Leaves::new(&input));
        let b = framed_value_and_point_jacobian(&n10::Leaves::new(&input));
        assert_eq!(a, b);
    }
}
