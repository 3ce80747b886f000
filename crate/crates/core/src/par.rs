//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) the loops below fan out through
//! rayon; without it they run sequentially with identical results. Results
//! are always collected in index order so outputs do not depend on thread
//! scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `(0..n).map(f)` collected in order.
#[cfg(feature = "parallel")]
pub fn map_indexed<T: Send, F: Fn(usize) -> T + Sync>(n: usize, f: F) -> Vec<T> {
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T: Send, F: Fn(usize) -> T + Sync>(n: usize, f: F) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Mutable chunk iteration: `f(chunk_index, chunk)` over disjoint chunks.
#[cfg(feature = "parallel")]
pub fn for_each_chunk_mut<T: Send, F: Fn(usize, &mut [T]) + Sync>(
    data: &mut [T],
    chunk: usize,
    f: F,
) {
    data.par_chunks_mut(chunk)
        .enumerate()
        .for_each(|(i, c)| f(i, c));
}

#[cfg(not(feature = "parallel"))]
pub fn for_each_chunk_mut<T: Send, F: Fn(usize, &mut [T]) + Sync>(
    data: &mut [T],
    chunk: usize,
    f: F,
) {
    data.chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
}

/// Always-sequential twin of [`for_each_chunk_mut`], kept compiled under
/// every feature set so benchmarks can compare the two paths directly.
pub fn for_each_chunk_mut_serial<T, F: Fn(usize, &mut [T])>(data: &mut [T], chunk: usize, f: F) {
    data.chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
}

/// Sum of `f(i)` for `i in 0..n`, reduced in index order (deterministic).
pub fn sum_indexed<F: Fn(usize) -> f64 + Sync>(n: usize, f: F) -> f64 {
    map_indexed(n, f).into_iter().sum()
}
