//! Splitting index ranges across workers. The core crate only ships a
//! sequential executor; the CLI crate supplies a threaded one.

use alloc::vec::Vec;
use core::ops::Range;

/// Runs `task` over a partition of `0..total` and returns the per-chunk
/// results in chunk order.
pub trait Executor: Sync {
    fn run<T: Send>(&self, total: u64, task: &(dyn Fn(Range<u64>) -> T + Sync)) -> Vec<T>;
}

/// One chunk covering everything, on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn run<T: Send>(&self, total: u64, task: &(dyn Fn(Range<u64>) -> T + Sync)) -> Vec<T> {
        alloc::vec![task(0..total)]
    }
}

/// Splits `0..total` into at most `parts` contiguous, nearly equal ranges.
pub fn split_range(total: u64, parts: usize) -> Vec<Range<u64>> {
    let parts = (parts.max(1) as u64).min(total.max(1));
    let base = total / parts;
    let extra = total % parts;
    let mut out = Vec::with_capacity(parts as usize);
    let mut start = 0;
    for k in 0..parts {
        let len = base + u64::from(k < extra);
        out.push(start..start + len);
        start += len;
    }
    out
}
