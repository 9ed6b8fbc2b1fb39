//! Execution policy for sweeps.
//!
//! With the `parallel` feature, [`Exec::Parallel`] maps over a rayon pool;
//! without it both policies run on the calling thread.

use std::ops::Range;

/// Environment variable read by [`init_workers`] when no count is given.
pub const WORKERS_ENV: &str = "NRS_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    #[default]
    Parallel,
    Sequential,
}

impl Exec {
    /// `f` over `range`, results in index order.
    pub fn map<T, F>(self, range: Range<u64>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                let (lo, hi) = (range.start as usize, range.end as usize);
                (lo..hi).into_par_iter().map(|i| f(i as u64)).collect()
            }
            _ => range.map(f).collect(),
        }
    }

    /// Map then fold the results in index order, so the outcome does not
    /// depend on scheduling.
    pub fn map_fold<T, A, F, G>(self, range: Range<u64>, f: F, init: A, mut fold: G) -> A
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
        G: FnMut(A, T) -> A,
    {
        self.map(range, f).into_iter().fold(init, &mut fold)
    }
}

/// Worker threads available to [`Exec::Parallel`].
pub fn workers() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

/// Sizes the global pool from `n`, else from `NRS_WORKERS`. Later calls are
/// ignored once the pool exists.
pub fn init_workers(n: Option<usize>) -> usize {
    let n = n.or_else(|| std::env::var(WORKERS_ENV).ok().and_then(|v| v.parse().ok()));
    #[cfg(feature = "parallel")]
    {
        if let Some(n) = n.filter(|&n| n > 0) {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    workers()
}
