//! Evaluation of independent grid points, data-parallel when the `parallel`
//! feature is enabled.

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExecutionMode {
    #[default]
    Parallel,
    Sequential,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Execution {
    pub mode: ExecutionMode,
    /// Worker count; 0 uses every available core.
    pub threads: usize,
}

impl Execution {
    pub const SEQUENTIAL: Execution = Execution {
        mode: ExecutionMode::Sequential,
        threads: 0,
    };

    /// Applies `f` to every item, keeping input order in the output.
    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Result<Vec<R>>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Result<R> + Sync + Send,
    {
        match self.mode {
            ExecutionMode::Sequential => items.iter().map(f).collect(),
            ExecutionMode::Parallel => parallel_map(self.threads, items, f),
        }
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, R, F>(threads: usize, items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    use rayon::prelude::*;
    let run = || items.par_iter().map(&f).collect::<Result<Vec<R>>>();
    if threads == 0 {
        return run();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| {
            crate::Error::InvalidParameter(format!("cannot start {threads} workers: {e}"))
        })?;
    pool.install(run)
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, R, F>(threads: usize, items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    let _ = threads;
    items.iter().map(f).collect()
}
