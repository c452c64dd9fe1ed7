//! Order-preserving maps over independent work items.
//!
//! With the `parallel` feature (default) [`map_ordered`] fans out over rayon's
//! global pool; without it, it is the same as [`map_sequential`]. Output order
//! always matches input order, so results are deterministic either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_ordered<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_ordered<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_sequential(items, f)
}

/// Whether [`map_ordered`] runs in parallel in this build.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let items: Vec<u64> = (0..500).collect();
        let par = map_ordered(&items, |x| x * x);
        let seq = map_sequential(&items, |x| x * x);
        assert_eq!(par, seq);
    }
}
