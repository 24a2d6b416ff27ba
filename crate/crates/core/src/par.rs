//! Data-parallel helpers. With the `parallel` feature these run on rayon's
//! global pool; without it they are plain sequential iterators. Both paths
//! return results in index order, so output never depends on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// First `Some` in index order.
#[cfg(feature = "parallel")]
pub fn find_map_first<R, G>(len: usize, f: G) -> Option<R>
where
    R: Send,
    G: Fn(usize) -> Option<R> + Sync + Send,
{
    (0..len).into_par_iter().find_map_first(f)
}

#[cfg(not(feature = "parallel"))]
pub fn find_map_first<R, G>(len: usize, f: G) -> Option<R>
where
    R: Send,
    G: Fn(usize) -> Option<R> + Sync + Send,
{
    (0..len).find_map(f)
}

#[cfg(feature = "parallel")]
pub fn map_collect<R, G>(len: usize, f: G) -> Vec<R>
where
    R: Send,
    G: Fn(usize) -> R + Sync + Send,
{
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<R, G>(len: usize, f: G) -> Vec<R>
where
    R: Send,
    G: Fn(usize) -> R + Sync + Send,
{
    (0..len).map(f).collect()
}
