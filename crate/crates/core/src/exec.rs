//! Execution policy for the data-parallel inner loops.
//!
//! Every grid-sized loop in the crate goes through [`Exec`]. With the
//! `parallel` feature the [`Exec::Parallel`] policy fans chunks out to the
//! rayon pool; without it, or with [`Exec::Sequential`], the same chunks are
//! processed in order on the calling thread.
//!
//! Reductions always use the same fixed chunking and a pairwise tree over
//! the chunk partials, so their result does not depend on the policy or on
//! the number of worker threads.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Number of elements per work item for pointwise loops and reductions.
pub const CHUNK: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Whether this policy actually runs on the thread pool in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// `out[i] = f(i)` for every index.
    pub fn fill<T, F>(self, out: &mut [T], f: F)
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.for_each_chunk(out, CHUNK, |offset, chunk| {
            for (j, v) in chunk.iter_mut().enumerate() {
                *v = f(offset + j);
            }
        });
    }

    /// Calls `f(offset, chunk)` on consecutive chunks of `chunk_len` elements.
    pub fn for_each_chunk<T, F>(self, data: &mut [T], chunk_len: usize, f: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync + Send,
    {
        assert!(chunk_len > 0);
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            data.par_chunks_mut(chunk_len)
                .enumerate()
                .for_each(|(c, chunk)| f(c * chunk_len, chunk));
            return;
        }
        for (c, chunk) in data.chunks_mut(chunk_len).enumerate() {
            f(c * chunk_len, chunk);
        }
    }

    /// Like [`Exec::for_each_chunk`] but with per-worker scratch state.
    pub fn for_each_chunk_init<T, S, I, F>(self, data: &mut [T], chunk_len: usize, init: I, f: F)
    where
        T: Send,
        I: Fn() -> S + Sync + Send,
        F: Fn(&mut S, usize, &mut [T]) + Sync + Send,
    {
        assert!(chunk_len > 0);
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            data.par_chunks_mut(chunk_len)
                .enumerate()
                .for_each_init(&init, |s, (c, chunk)| f(s, c * chunk_len, chunk));
            return;
        }
        let mut s = init();
        for (c, chunk) in data.chunks_mut(chunk_len).enumerate() {
            f(&mut s, c * chunk_len, chunk);
        }
    }

    /// Deterministic sum of `f(i)` for `i in 0..n`.
    pub fn sum<F>(self, n: usize, f: F) -> f64
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        let chunks = n.div_ceil(CHUNK);
        let partial = |c: usize| {
            let end = ((c + 1) * CHUNK).min(n);
            let mut acc = 0.0;
            for i in c * CHUNK..end {
                acc += f(i);
            }
            acc
        };
        #[cfg(feature = "parallel")]
        let partials: Vec<f64> = if self == Exec::Parallel {
            (0..chunks).into_par_iter().map(partial).collect()
        } else {
            (0..chunks).map(partial).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let partials: Vec<f64> = (0..chunks).map(partial).collect();
        pairwise_sum(&partials)
    }

    /// Deterministic maximum of `f(i)`; returns 0 for an empty range.
    pub fn max<F>(self, n: usize, f: F) -> f64
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        let chunks = n.div_ceil(CHUNK);
        let partial = |c: usize| {
            let end = ((c + 1) * CHUNK).min(n);
            (c * CHUNK..end).map(&f).fold(0.0f64, f64::max)
        };
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            return (0..chunks).into_par_iter().map(partial).reduce(|| 0.0, f64::max);
        }
        (0..chunks).map(partial).fold(0.0, f64::max)
    }
}

/// Fixed-shape pairwise summation.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}
