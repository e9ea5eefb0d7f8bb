//! Sequential or data-parallel execution of independent, index-addressed work.
//!
//! Results always come back in index order, so callers see the same output
//! whichever strategy runs. Without the `parallel` feature every strategy
//! runs sequentially.

use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// `f(state, i)` for every `i` in `range`, with per-worker state from `init`.
    pub fn map_init<T, S, I, F>(self, range: Range<u64>, init: I, f: F) -> Vec<T>
    where
        T: Send,
        I: Fn() -> S + Sync + Send,
        F: Fn(&mut S, u64) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                range.into_par_iter().map_init(init, f).collect()
            }
            _ => {
                let mut state = init();
                range.map(|i| f(&mut state, i)).collect()
            }
        }
    }

    /// `f` over a slice, in order.
    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }
}

/// Sizes the global worker pool. Must run before any parallel work.
#[cfg(feature = "parallel")]
pub fn set_thread_count(threads: usize) -> Result<(), rayon::ThreadPoolBuildError> {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()
}
