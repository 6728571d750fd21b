//! Execution strategy for the data-parallel sweeps.
//!
//! With the `parallel` feature disabled every strategy runs sequentially.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Whether this strategy actually uses worker threads in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Map `f` over `items` and collect in input order.
pub fn map_collect<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Map `f` over `0..n` and fold the results with the associative `merge`.
pub fn map_reduce<R, F, M>(exec: Exec, n: usize, identity: R, f: F, merge: M) -> R
where
    R: Send + Sync + Clone,
    F: Fn(usize) -> R + Sync + Send,
    M: Fn(R, R) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n)
            .into_par_iter()
            .map(&f)
            .reduce(|| identity.clone(), &merge);
    }
    let _ = exec;
    (0..n).map(f).fold(identity, merge)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let v: Vec<u64> = (0..1000).collect();
        let a = map_collect(Exec::Sequential, &v, |x| x * x);
        let b = map_collect(Exec::Parallel, &v, |x| x * x);
        assert_eq!(a, b);
        let s = map_reduce(Exec::Sequential, 1000, 0u64, |i| i as u64, |a, b| a + b);
        let p = map_reduce(Exec::Parallel, 1000, 0u64, |i| i as u64, |a, b| a + b);
        assert_eq!(s, p);
        assert_eq!(s, 499_500);
    }
}
