//! Execution strategy for the exhaustive loops.
//!
//! Every enumeration in the crate goes through the helpers here so that the
//! same code runs either on the rayon pool or on the calling thread. With the
//! `parallel` feature disabled, [`Strategy::Parallel`] silently runs
//! sequentially. Results are always returned in index order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

impl Strategy {
    /// True when this strategy will actually fan out to worker threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

/// Maps `f` over `0..len`, preserving order.
pub fn map_range<T, F>(strategy: Strategy, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = strategy;
    (0..len).map(f).collect()
}

/// Maps `f` over a slice, preserving order.
pub fn map_slice<S, T, F>(strategy: Strategy, items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = strategy;
    items.iter().map(f).collect()
}

/// Counts the indices in `0..len` satisfying `pred`.
pub fn count_range<F>(strategy: Strategy, len: usize, pred: F) -> usize
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return (0..len).into_par_iter().filter(|&i| pred(i)).count();
    }
    let _ = strategy;
    (0..len).filter(|&i| pred(i)).count()
}

/// Returns the smallest index in `0..len` for which `f` yields `Some`, with
/// its payload. The parallel path still reports the minimal index.
pub fn find_first<T, F>(strategy: Strategy, len: usize, f: F) -> Option<(usize, T)>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return (0..len)
            .into_par_iter()
            .filter_map(|i| f(i).map(|t| (i, t)))
            .min_by_key(|(i, _)| *i);
    }
    let _ = strategy;
    (0..len).find_map(|i| f(i).map(|t| (i, t)))
}

/// Folds `0..len` into per-shard accumulators and merges them. `merge` must be
/// commutative and associative for the result to be shard-independent.
pub fn fold_range<A, Id, Fo, Me>(strategy: Strategy, len: usize, identity: Id, fold: Fo, merge: Me) -> A
where
    A: Send,
    Id: Fn() -> A + Sync + Send,
    Fo: Fn(A, usize) -> A + Sync + Send,
    Me: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return (0..len)
            .into_par_iter()
            .fold(&identity, &fold)
            .reduce(&identity, &merge);
    }
    let _ = (strategy, &merge);
    (0..len).fold(identity(), fold)
}
