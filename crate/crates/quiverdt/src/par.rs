//! Thin fan-out helpers: rayon when the `parallel` feature is on, plain
//! iteration otherwise. Results come back in input order either way, so
//! callers stay deterministic.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub(crate) fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub(crate) fn par_sum_u64<T, F>(items: Vec<T>, f: F) -> u64
where
    T: Send,
    F: Fn(T) -> u64 + Sync + Send,
{
    items.into_par_iter().map(f).sum()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_sum_u64<T, F>(items: Vec<T>, f: F) -> u64
where
    F: Fn(T) -> u64,
{
    items.into_iter().map(f).sum()
}
