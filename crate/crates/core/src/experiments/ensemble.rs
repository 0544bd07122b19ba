use rayon::prelude::*;

use crate::Result;

/// Evaluates `run(r)` for `r in 0..n` on the current rayon pool and returns
/// the results in run order. On failure the error of the lowest failing run
/// index is reported, whatever the scheduling.
pub fn ensemble<T, F>(n: u64, run: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    let results: Vec<Result<T>> = (0..n).into_par_iter().map(&run).collect();
    results.into_iter().collect()
}
