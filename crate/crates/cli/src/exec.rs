use std::ops::Range;
use std::thread;

use impartial::exec::{split_range, Executor};

/// Runs chunks on scoped threads, one per job. Results come back in chunk
/// order, so merged reports do not depend on scheduling.
#[derive(Clone, Copy, Debug)]
pub struct Threaded {
    jobs: usize,
}

impl Threaded {
    pub fn new(jobs: usize) -> Self {
        Threaded { jobs: jobs.max(1) }
    }
}

impl Executor for Threaded {
    fn run<T: Send>(&self, total: u64, task: &(dyn Fn(Range<u64>) -> T + Sync)) -> Vec<T> {
        let ranges = split_range(total, self.jobs);
        if ranges.len() == 1 {
            return vec![task(ranges[0].clone())];
        }
        thread::scope(|s| {
            let handles: Vec<_> = ranges.into_iter().map(|r| s.spawn(move || task(r))).collect();
            handles.into_iter().map(|h| h.join().expect("worker thread panicked")).collect()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunks_come_back_in_order() {
        let out = Threaded::new(4).run(10, &|r: Range<u64>| r.start);
        assert_eq!(out, vec![0, 3, 6, 8]);
        let sums: u64 = Threaded::new(3).run(100, &|r: Range<u64>| r.sum::<u64>()).into_iter().sum();
        assert_eq!(sums, 4950);
    }
}
