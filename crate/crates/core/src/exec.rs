//! Dispatch between rayon and plain sequential execution.
//!
//! Every multi-restart search in this crate funnels through these helpers.
//! The contract is determinism: callers derive an independent RNG stream per
//! task index, and the merge here is a true maximum with ties broken toward
//! the smaller index, so the winner is the same whether tasks run on one
//! thread or many.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Evaluate `eval(i)` for `i` in `0..count` and keep the candidate with the
/// largest value (ties resolve to the smallest index). NaN scores are treated
/// as negative infinity so the merge stays a total order.
pub(crate) fn best_of<T, F>(count: usize, eval: F) -> Option<(f64, T)>
where
    T: Send,
    F: Fn(usize) -> (f64, T) + Sync + Send,
{
    let scored = |i: usize| {
        let (v, t) = eval(i);
        let v = if v.is_nan() { f64::NEG_INFINITY } else { v };
        (v, i, t)
    };
    #[cfg(feature = "parallel")]
    let best = (0..count).into_par_iter().map(scored).reduce_with(pick);
    #[cfg(not(feature = "parallel"))]
    let best = (0..count).map(scored).reduce(pick);
    best.map(|(v, _, t)| (v, t))
}

fn pick<T>(a: (f64, usize, T), b: (f64, usize, T)) -> (f64, usize, T) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

/// Order-preserving map over `0..count`, parallel when the feature is on.
pub(crate) fn map_collect<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    return (0..count).into_par_iter().map(f).collect();
    #[cfg(not(feature = "parallel"))]
    (0..count).map(f).collect()
}
