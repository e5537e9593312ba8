//! Command pipelines behind the `seqent` binary: analyze, predict,
//! simulate, and oracle.

pub mod analyze;
pub mod config;
pub mod oracle;
pub mod predict;
pub mod report;
pub mod simulate;

/// Runs `f` on a rayon pool of `workers` threads; `0` uses the default pool.
pub fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        f()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("worker pool")
            .install(f)
    }
}
