//! Operation counters.
//!
//! Inside [`count`], dense block products record their scalar
//! multiplications, every elementary Jacobian rule records one partial and
//! every node evaluation records one evaluation. Outside it each hook costs
//! one relaxed atomic load. Counts are per-thread.

use std::cell::Cell;
use std::sync::atomic::{AtomicUsize, Ordering};

/// Snapshot of the per-thread counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounts {
    /// Scalar multiplications performed by block products.
    pub multiplications: u64,
    /// Elementary Jacobian rule evaluations.
    pub partials: u64,
    /// Numeric node evaluations (value computations).
    pub evaluations: u64,
}

/// Number of [`count`] calls in progress, on any thread.
static ACTIVE: AtomicUsize = AtomicUsize::new(0);

#[inline(always)]
fn active() -> bool {
    ACTIVE.load(Ordering::Relaxed) != 0
}

thread_local! {
    static COUNTS: Cell<OpCounts> = const { Cell::new(OpCounts { multiplications: 0, partials: 0, evaluations: 0 }) };
}

#[inline(always)]
pub(crate) fn record_muls(n: usize) {
    if active() {
        COUNTS.with(|c| {
            let mut v = c.get();
            v.multiplications += n as u64;
            c.set(v);
        });
    }
}

#[inline(always)]
pub(crate) fn record_partial() {
    if active() {
        COUNTS.with(|c| {
            let mut v = c.get();
            v.partials += 1;
            c.set(v);
        });
    }
}

#[inline(always)]
pub(crate) fn record_evaluation() {
    if active() {
        COUNTS.with(|c| {
            let mut v = c.get();
            v.evaluations += 1;
            c.set(v);
        });
    }
}

pub fn reset() {
    COUNTS.with(|c| c.set(OpCounts::default()));
}

pub fn snapshot() -> OpCounts {
    COUNTS.with(|c| c.get())
}

/// Runs `f` and returns the counts it accumulated.
pub fn count<T>(f: impl FnOnce() -> T) -> (T, OpCounts) {
    struct Guard;
    impl Drop for Guard {
        fn drop(&mut self) {
            ACTIVE.fetch_sub(1, Ordering::SeqCst);
        }
    }
    ACTIVE.fetch_add(1, Ordering::SeqCst);
    let guard = Guard;
    let before = snapshot();
    let out = f();
    let after = snapshot();
    drop(guard);
    (
        out,
        OpCounts {
            multiplications: after.multiplications - before.multiplications,
            partials: after.partials - before.partials,
            evaluations: after.evaluations - before.evaluations,
        },
    )
}
