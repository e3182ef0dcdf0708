//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) batch loops run on the rayon
//! global pool. Without it, or with [`Exec::Sequential`], the same closures run
//! in a plain loop. Results always come back in index order, so output never
//! depends on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a batch loop is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Falls back to sequential when the crate is built without `parallel`.
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Map `f` over `items`, preserving order.
    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }

    /// Map `f` over `lo..hi`, preserving order.
    pub fn map_range<U, F>(self, lo: u64, hi: u64, f: F) -> Vec<U>
    where
        U: Send,
        F: Fn(u64) -> U + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (lo..hi).into_par_iter().map(f).collect(),
            _ => (lo..hi).map(f).collect(),
        }
    }

    /// Like [`Exec::map_range`] but stops at the first error in index order.
    pub fn try_map_range<U, E, F>(self, lo: u64, hi: u64, f: F) -> Result<Vec<U>, E>
    where
        U: Send,
        E: Send,
        F: Fn(u64) -> Result<U, E> + Sync + Send,
    {
        self.map_range(lo, hi, f).into_iter().collect()
    }

    /// Smallest index in `lo..hi` for which `pred` holds.
    pub fn find_first<F>(self, lo: u64, hi: u64, pred: F) -> Option<u64>
    where
        F: Fn(u64) -> bool + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (lo..hi).into_par_iter().find_first(|&i| pred(i)),
            _ => (lo..hi).find(|&i| pred(i)),
        }
    }
}
