//! Data-parallel helpers.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`] fans
//! work out over rayon's pool. Without it both modes run sequentially, so
//! results never depend on the build.

use crate::circuit::Circuit;
use crate::device::{Calibration, CouplingGraph};
use crate::layout::{LayoutMap, Method};
use crate::mapper::{map, MapError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// True when this build can actually run work in parallel.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// `items.iter().map(f)` with output order preserved.
pub fn map_items<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Maps every circuit with the same device, calibration and method.
pub fn map_batch(
    exec: Execution,
    circuits: &[Circuit],
    graph: &CouplingGraph,
    cal: &Calibration,
    method: Method,
) -> Vec<Result<LayoutMap, MapError>> {
    map_items(exec, circuits, |c| map(c, graph, cal, method))
}

/// Runs `f` on a dedicated pool of `workers` threads. `None` or a build
/// without the `parallel` feature runs `f` on the caller's pool.
pub fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if let Some(n) = workers {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool");
        return pool.install(f);
    }
    let _ = workers;
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree_and_keep_order() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = map_items(Execution::Sequential, &items, |x| x * x);
        let par = map_items(Execution::Parallel, &items, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(seq[31], 961);
    }

    #[test]
    fn worker_pool_runs_closure() {
        assert_eq!(with_workers(Some(2), || 7), 7);
        assert_eq!(with_workers(None, || 8), 8);
    }
}
