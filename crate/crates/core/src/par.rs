//! Deterministic parallel reductions.
//!
//! Ranges are cut into fixed-size blocks; each block is summed sequentially
//! and the block totals are added in ascending order, so the result depends
//! on the block size but not on the number of worker threads.

use std::ops::Add;

use rayon::prelude::*;

/// Block size used when the caller has no preference.
pub const DEFAULT_BLOCK: usize = 4096;

/// `Σ_{i in lo..hi} f(i)` with fixed-order block reduction.
pub fn block_sum<T, F>(lo: usize, hi: usize, block: usize, zero: T, f: F) -> T
where
    T: Copy + Send + Sync + Add<Output = T>,
    F: Fn(usize) -> T + Sync,
{
    if hi <= lo {
        return zero;
    }
    let block = block.max(1);
    let nblocks = (hi - lo).div_ceil(block);
    let parts: Vec<T> = (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let s = lo + b * block;
            let e = (s + block).min(hi);
            (s..e).fold(zero, |acc, i| acc + f(i))
        })
        .collect();
    parts.into_iter().fold(zero, |a, b| a + b)
}

/// Same reduction over the items of a slice.
pub fn block_sum_slice<I, T, F>(items: &[I], block: usize, zero: T, f: F) -> T
where
    I: Sync,
    T: Copy + Send + Sync + Add<Output = T>,
    F: Fn(&I) -> T + Sync,
{
    block_sum(0, items.len(), block, zero, |i| f(&items[i]))
}
