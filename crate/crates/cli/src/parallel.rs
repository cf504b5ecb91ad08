//! Stream-split parallel sampling. Work is cut into fixed-size chunks, chunk
//! `i` draws from stream `i`, and results are merged in stream order, so the
//! output does not depend on the number of worker threads.

use rayon::prelude::*;
use stable_exit_core::montecarlo::{RngStream, SamplePool};
use stable_exit_core::Result;

/// Draws per stream.
pub const CHUNK: usize = 10_000;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "STABLE_EXIT_THREADS";

/// Sizes the global worker pool from `STABLE_EXIT_THREADS`, if set.
pub fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        // Fails only if the pool was already built; the first setting stands.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

/// `(stream_id, count)` pairs covering `n` draws.
pub fn chunks(n: usize) -> Vec<(u64, usize)> {
    (0..n.div_ceil(CHUNK))
        .map(|i| (i as u64, CHUNK.min(n - i * CHUNK)))
        .collect()
}

/// Runs `draw(count, rng)` on every chunk and returns the results in stream order.
pub fn map_streams<T, F>(seed: u64, n: usize, draw: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, &mut RngStream) -> Result<T> + Sync,
{
    chunks(n)
        .into_par_iter()
        .map(|(id, k)| draw(k, &mut RngStream::new(seed, id)))
        .collect()
}

/// Parallel pool built from per-stream pools.
pub fn sample_pool<F>(seed: u64, n: usize, draw: F) -> Result<SamplePool>
where
    F: Fn(usize, &mut RngStream) -> Result<SamplePool> + Sync,
{
    if n == 0 {
        return draw(0, &mut RngStream::new(seed, 0));
    }
    SamplePool::concat(&map_streams(seed, n, draw)?)
}
