//! Floating point operation accounting.
//!
//! Kernels report their work into a thread-local counter using the usual
//! conventions: a sparse matrix-vector product costs `2 * nnz`, a dense
//! `m x n` times `n`-vector product costs `2 * m * n`, a dot product of
//! length `n` costs `2 * n`. Callers wrap a phase of work in [`measure`] to
//! obtain the count for that phase.

use std::cell::Cell;

thread_local! {
    static COUNTER: Cell<u64> = const { Cell::new(0) };
}

#[inline]
pub fn add(n: u64) {
    COUNTER.with(|c| c.set(c.get().wrapping_add(n)));
}

#[inline]
pub fn add_usize(n: usize) {
    add(n as u64);
}

/// Current value of this thread's counter.
pub fn current() -> u64 {
    COUNTER.with(Cell::get)
}

/// Runs `f` and returns its result together with the FLOPs it recorded.
pub fn measure<R>(f: impl FnOnce() -> R) -> (R, u64) {
    let start = current();
    let out = f();
    (out, current().wrapping_sub(start))
}
