//! Thread pools and parallel drivers.

use rayon::prelude::*;
use rayon::ThreadPool;

use zetascope_core::fuchsian::{EnumerationParams, FuchsianGroup, FuchsianSpectrum};

use crate::error::{usage, Result};

/// Environment variable read when `--threads` is absent.
pub const THREADS_ENV: &str = "ZETASCOPE_THREADS";

/// Prefix depth used to split word enumeration into blocks.
const SPLIT_DEPTH: usize = 3;

/// `--threads`, else `ZETASCOPE_THREADS`, else rayon's default.
pub fn thread_count(flag: Option<usize>) -> Result<Option<usize>> {
    if let Some(n) = flag {
        return Ok(Some(n));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(usage!("{THREADS_ENV}='{v}' is not a positive integer")),
        },
        Err(_) => Ok(None),
    }
}

pub fn pool(threads: Option<usize>) -> Result<ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        b = b.num_threads(n);
    }
    b.build().map_err(|e| usage!("cannot start thread pool: {e}"))
}

/// Word enumeration split into prefix blocks. The result does not depend on
/// the number of workers.
pub fn enumerate_fuchsian(group: &FuchsianGroup, params: &EnumerationParams, pool: &ThreadPool) -> Result<FuchsianSpectrum> {
    let prefixes = group.prefixes(SPLIT_DEPTH, params.max_word);
    let blocks = pool.install(|| prefixes.par_iter().map(|p| group.enumerate_block(p, params)).collect::<Vec<_>>());
    Ok(group.collect(blocks, params)?)
}

/// Maps `f` over `xs` in parallel, keeping input order.
pub fn grid_map<T, U, F>(pool: &ThreadPool, xs: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    pool.install(|| xs.par_iter().map(f).collect())
}
