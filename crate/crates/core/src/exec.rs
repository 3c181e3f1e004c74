//! Trial dispatch: data-parallel over rayon when the `parallel` feature is
//! enabled, plain loops otherwise. Results are aggregated by counting or by
//! index, so output is identical for any worker count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Counts trial indices in `0..trials` for which `pred` holds.
pub fn count_matching<F>(trials: u64, pred: F) -> u64
where
    F: Fn(u64) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        count_matching_par(trials, pred)
    }
    #[cfg(not(feature = "parallel"))]
    {
        count_matching_seq(trials, pred)
    }
}

pub fn count_matching_seq<F>(trials: u64, pred: F) -> u64
where
    F: Fn(u64) -> bool + Sync + Send,
{
    (0..trials).filter(|&t| pred(t)).count() as u64
}

#[cfg(feature = "parallel")]
pub fn count_matching_par<F>(trials: u64, pred: F) -> u64
where
    F: Fn(u64) -> bool + Sync + Send,
{
    (0..trials).into_par_iter().filter(|&t| pred(t)).count() as u64
}

/// Maps `0..n` through `f`, preserving index order in the output.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_indexed_par(n, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_indexed_seq(n, f)
    }
}

pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_indexed_par<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}
