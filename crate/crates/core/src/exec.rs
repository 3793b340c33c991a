//! Data-parallel map with a sequential fallback.
//!
//! Bulk work (candidate evaluation in the tag adversary, per-cell
//! certification, Riemann-term evaluation) goes through [`map_indexed`].
//! With the `parallel` feature it runs on the rayon pool; without it, it is
//! a plain iterator map. Output order is the input order either way, and all
//! callers reduce sequentially over that order, so results do not depend on
//! the feature or the thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `items`, preserving index order in the output.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Map `f` over `items`, preserving index order in the output.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Always-sequential map, kept available for benchmarking against
/// [`map_indexed`] in a single binary.
pub fn map_indexed_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree_in_order() {
        let items: Vec<u64> = (0..10_000).collect();
        let a = map_indexed(&items, |x| x * x);
        let b = map_indexed_seq(&items, |x| x * x);
        assert_eq!(a, b);
    }
}
