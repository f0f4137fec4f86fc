//! Data-parallel helpers. Component computations across a truncated product
//! are independent; results are always assembled in index order so output is
//! deterministic either way.

#[cfg(feature = "parallel")]
pub fn map_components<T: Send>(count: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_components<T: Send>(count: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    map_components_seq(count, f)
}

/// Sequential twin, always available (the bench suite compares the two).
pub fn map_components_seq<T: Send>(count: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..count).map(f).collect()
}

/// Parallel map over an arbitrary indexed collection.
#[cfg(feature = "parallel")]
pub fn map_items<I: Send, T: Send>(items: Vec<I>, f: impl Fn(I) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_items<I: Send, T: Send>(items: Vec<I>, f: impl Fn(I) -> T + Sync + Send) -> Vec<T> {
    items.into_iter().map(f).collect()
}
