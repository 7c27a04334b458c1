//! Worker-thread plumbing shared by the oracle and the query benchmark.
//!
//! The `REACH_RATIO_THREADS` environment variable caps the worker count;
//! unset or `1` means sequential execution. Parallel callers must only use
//! order-preserving maps or commutative reductions, so results never depend
//! on the schedule.

use std::ops::Range;

pub(crate) fn worker_count() -> usize {
    match std::env::var("REACH_RATIO_THREADS") {
        Ok(v) => v.trim().parse::<usize>().ok().filter(|&n| n >= 1).unwrap_or(1),
        Err(_) => 1,
    }
}

/// Splits `0..n` into one contiguous range per worker.
pub(crate) fn split(n: u32) -> Vec<Range<u32>> {
    let workers = worker_count().min(n.max(1) as usize).max(1);
    let chunk = n.div_ceil(workers as u32).max(1);
    (0..workers as u32)
        .map(|i| (i * chunk).min(n)..((i + 1) * chunk).min(n))
        .filter(|r| !r.is_empty())
        .collect()
}

/// Maps each range to a vector and concatenates the results in range order.
pub(crate) fn map_ranges<T, F>(ranges: Vec<Range<u32>>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<u32>) -> Vec<T> + Sync + Send,
{
    if ranges.len() <= 1 {
        return ranges.into_iter().flat_map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(ranges.len())
        .build()
        .expect("worker pool");
    let parts: Vec<Vec<T>> = pool.install(|| {
        use rayon::prelude::*;
        ranges.into_par_iter().map(f).collect()
    });
    parts.into_iter().flatten().collect()
}
