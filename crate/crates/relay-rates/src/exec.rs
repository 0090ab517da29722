//! Parallel/sequential execution facade.
//!
//! All batch loops in the crate go through [`map_items`]. With the default
//! `parallel` feature the work is distributed with rayon; without it the
//! same closure runs on a plain iterator, so results are identical either
//! way (ordering is preserved by both paths).

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub(crate) fn map_items<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_items<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}
