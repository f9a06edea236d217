//! Chunked execution of campaign index spaces.
//!
//! With the `parallel` feature and more than one job, chunks run on a
//! dedicated rayon pool; otherwise they run in order on the calling thread.
//! Either way the per-chunk results are combined with an associative,
//! commutative merge, so the outcome does not depend on the schedule.

use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exec {
    jobs: usize,
}

impl Default for Exec {
    fn default() -> Self {
        Exec::sequential()
    }
}

impl Exec {
    pub fn sequential() -> Self {
        Exec { jobs: 1 }
    }

    /// `jobs` is clamped to at least one.
    pub fn with_jobs(jobs: usize) -> Self {
        Exec { jobs: jobs.max(1) }
    }

    pub fn jobs(&self) -> usize {
        self.jobs
    }

    pub fn is_parallel(&self) -> bool {
        cfg!(feature = "parallel") && self.jobs > 1
    }

    /// Splits `range` into consecutive chunks of at most `chunk` indices,
    /// maps each with `f` and folds the results with `merge`.
    pub fn fold_chunks<T, F, I, M>(&self, range: Range<u64>, chunk: u64, identity: I, f: F, merge: M) -> T
    where
        T: Send,
        F: Fn(Range<u64>) -> T + Sync,
        I: Fn() -> T + Sync,
        M: Fn(T, T) -> T + Sync,
    {
        let chunk = chunk.max(1);
        let count = (range.end.saturating_sub(range.start)).div_ceil(chunk);
        let piece = |i: u64| {
            let lo = range.start + i * chunk;
            lo..(lo + chunk).min(range.end)
        };
        #[cfg(feature = "parallel")]
        if self.jobs > 1 {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(self.jobs)
                .build()
                .expect("thread pool");
            return pool.install(|| {
                (0..count)
                    .into_par_iter()
                    .map(|i| f(piece(i)))
                    .reduce(&identity, &merge)
            });
        }
        (0..count).fold(identity(), |acc, i| merge(acc, f(piece(i))))
    }

    /// Chunk size giving a few chunks per worker for an exhaustive space.
    pub fn chunk_for(&self, len: u64) -> u64 {
        let pieces = (self.jobs as u64 * 8).max(1);
        len.div_ceil(pieces).max(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folds_every_index_once() {
        for jobs in [1, 2, 3, 7] {
            let exec = Exec::with_jobs(jobs);
            let sum = exec.fold_chunks(5..1000, 37, || 0u64, |r| r.sum::<u64>(), |a, b| a + b);
            assert_eq!(sum, (5..1000).sum::<u64>());
            let empty = exec.fold_chunks(3..3, 10, || 0u64, |r| r.count() as u64, |a, b| a + b);
            assert_eq!(empty, 0);
        }
    }
}
