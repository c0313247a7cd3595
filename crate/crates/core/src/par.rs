//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) the [`Exec::Parallel`] mode fans out
//! over rayon's global pool. Without it, every mode runs sequentially. Results
//! are always returned in input order, so callers that pick "the first hit"
//! stay deterministic regardless of scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a batch of independent checks is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
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

/// Map `f` over `items`, preserving order.
pub fn map<T, U, F>(exec: Exec, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

/// Map `f` over `0..n`, preserving order.
pub fn map_range<U, F>(exec: Exec, n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
        _ => (0..n).map(f).collect(),
    }
}

/// Index of the first item (in input order) for which `f` returns `Some`,
/// together with its value.
///
/// The parallel mode evaluates in chunks so that a hit early in the order
/// does not wait for the whole batch.
pub fn find_first<T, U, F>(exec: Exec, items: &[T], f: F) -> Option<(usize, U)>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Option<U> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            let chunk = (rayon::current_num_threads() * 4).max(1);
            let mut start = 0;
            while start < items.len() {
                let end = (start + chunk).min(items.len());
                let hit = items[start..end]
                    .par_iter()
                    .enumerate()
                    .filter_map(|(i, t)| f(t).map(|u| (start + i, u)))
                    .min_by_key(|(i, _)| *i);
                if hit.is_some() {
                    return hit;
                }
                start = end;
            }
            None
        }
        _ => items
            .iter()
            .enumerate()
            .find_map(|(i, t)| f(t).map(|u| (i, u))),
    }
}

/// True iff `f` holds for every item.
pub fn all<T, F>(exec: Exec, items: &[T], f: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => items.par_iter().all(f),
        _ => items.iter().all(f),
    }
}
