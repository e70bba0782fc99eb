//! Data-parallel map over sample indices.
//!
//! With the `parallel` feature (default) work fans out over rayon; without
//! it every [`Execution`] runs sequentially. Results are always collected in
//! index order, so output never depends on scheduling.

/// How a batch is spread over threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// rayon's global pool
    #[default]
    Parallel,
    /// a dedicated pool with this many threads
    Threads(usize),
}

/// Whether this build can run anything other than sequentially.
pub const PARALLEL_ENABLED: bool = cfg!(feature = "parallel");

/// `(0..len).map(f).collect()` under the chosen execution.
pub fn map_indexed<T, F>(len: usize, execution: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match execution {
        Execution::Sequential => (0..len).map(f).collect(),
        Execution::Parallel => parallel::map(len, f),
        Execution::Threads(1) => (0..len).map(f).collect(),
        Execution::Threads(threads) => parallel::map_in_pool(len, threads, f),
    }
}

#[cfg(feature = "parallel")]
mod parallel {
    use rayon::prelude::*;

    pub(super) fn map<T, F>(len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..len).into_par_iter().map(f).collect()
    }

    pub(super) fn map_in_pool<T, F>(len: usize, threads: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| map(len, f)),
            Err(_) => (0..len).map(f).collect(),
        }
    }
}

#[cfg(not(feature = "parallel"))]
mod parallel {
    pub(super) fn map<T, F>(len: usize, f: F) -> Vec<T>
    where
        F: Fn(usize) -> T,
    {
        (0..len).map(f).collect()
    }

    pub(super) fn map_in_pool<T, F>(len: usize, _threads: usize, f: F) -> Vec<T>
    where
        F: Fn(usize) -> T,
    {
        map(len, f)
    }
}
