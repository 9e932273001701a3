//! Thin shim over rayon so the data-parallel inner loops (per-tree and
//! per-graph amplitude sums) compile to plain iteration when the `parallel`
//! feature is off. Results are exact rationals, so reduction order never
//! affects the output.

#[cfg(feature = "parallel")]
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}
