//! Data-parallel helpers. Without the `parallel` feature every map runs
//! sequentially; results are always returned in index order.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this build can honour [`Execution::Parallel`].
    pub const fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// `(0..len).map(f).collect()`, fanned out over the rayon pool when requested.
pub(crate) fn map_indexed<T, F>(exec: Execution, len: usize, min_chunk: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Execution::Parallel {
        use rayon::prelude::*;
        return (0..len)
            .into_par_iter()
            .with_min_len(min_chunk.max(1))
            .map(f)
            .collect();
    }
    let _ = (exec, min_chunk);
    (0..len).map(f).collect()
}
