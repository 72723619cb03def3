//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) the [`Exec::Parallel`] mode fans work
//! out over rayon's pool. Without it every mode runs sequentially. Results are
//! always returned in input order so both paths are observationally identical.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    #[default]
    Parallel,
    Sequential,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

pub fn map<T, U, F>(exec: Exec, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

pub fn map_range<U, F>(exec: Exec, len: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..len).map(f).collect()
}

/// Evaluates `f` on items in order and returns every result up to and
/// including the first one for which `stop` holds.
///
/// In parallel mode, items past an already-found stopping index are skipped;
/// the returned prefix is identical to the sequential one.
pub fn prefix_until<T, U, F, S>(exec: Exec, items: &[T], f: F, stop: S) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
    S: Fn(&U) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        use std::sync::atomic::{AtomicUsize, Ordering};
        let best = AtomicUsize::new(usize::MAX);
        let results: Vec<Option<U>> = items
            .par_iter()
            .enumerate()
            .map(|(i, item)| {
                if i > best.load(Ordering::Relaxed) {
                    return None;
                }
                let out = f(item);
                if stop(&out) {
                    best.fetch_min(i, Ordering::Relaxed);
                }
                Some(out)
            })
            .collect();
        let cut = best.load(Ordering::Relaxed);
        return results
            .into_iter()
            .take(cut.saturating_add(1))
            .map(|r| r.expect("items before the stopping index are always evaluated"))
            .collect();
    }
    let _ = exec;
    let mut out = Vec::new();
    for item in items {
        let r = f(item);
        let done = stop(&r);
        out.push(r);
        if done {
            break;
        }
    }
    out
}

/// Runs `f` inside a dedicated pool of `jobs` threads when parallelism is
/// available; otherwise just calls `f`.
pub fn with_jobs<R: Send, F: FnOnce() -> R + Send>(jobs: Option<usize>, f: F) -> R {
    #[cfg(feature = "parallel")]
    if let Some(n) = jobs {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            return pool.install(f);
        }
    }
    let _ = jobs;
    f()
}
