//! Order-preserving map that runs on a rayon pool when the `parallel` feature
//! is enabled and `jobs != 1`, and sequentially otherwise.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `jobs == 0` means one worker per available core.
pub fn map<T, R, F>(items: &[T], jobs: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if jobs != 1 && items.len() > 1 {
        match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => return pool.install(|| items.par_iter().map(&f).collect()),
            Err(e) => log_pool_failure(&e),
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = jobs;
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
fn log_pool_failure(e: &rayon::ThreadPoolBuildError) {
    eprintln!("warning: falling back to sequential execution: {e}");
}

pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_order_for_any_job_count() {
        let items: Vec<u64> = (0..500).collect();
        let expect: Vec<u64> = items.iter().map(|x| x * x).collect();
        for jobs in [0, 1, 2, 8] {
            assert_eq!(map(&items, jobs, |x| x * x), expect);
        }
    }
}
