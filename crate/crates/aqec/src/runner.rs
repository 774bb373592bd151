//! Shard-parallel execution of Monte Carlo tasks.
//!
//! Shards are evaluated on a rayon pool and merged in index order, so the
//! merged tally does not depend on the worker count.

use aqec_core::sampling::{merge_in_order, shards, ShardedTask};
use rayon::prelude::*;

use crate::error::{AppError, AppResult};

pub const WORKERS_ENV: &str = "AQEC_WORKERS";

/// Worker count: `AQEC_WORKERS` wins over the config value, which wins over
/// the number of available cores.
pub fn resolve_workers(configured: Option<usize>) -> AppResult<usize> {
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let w: usize = v
            .trim()
            .parse()
            .map_err(|_| AppError::Usage(format!("{}={} is not a positive integer", WORKERS_ENV, v)))?;
        if w == 0 {
            return Err(AppError::Usage(format!("{} must be positive", WORKERS_ENV)));
        }
        return Ok(w);
    }
    Ok(configured.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())))
}

pub struct Runner {
    pool: rayon::ThreadPool,
}

impl Runner {
    pub fn new(workers: usize) -> AppResult<Runner> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .map_err(|e| AppError::Usage(format!("cannot start {} workers: {}", workers, e)))?;
        Ok(Runner { pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Runs `n` samples of `task`; `None` when `n = 0`.
    pub fn run<T: ShardedTask>(&self, task: &T, n: u64) -> Option<T::Tally> {
        let parts: Vec<T::Tally> = self.pool.install(|| shards(n).into_par_iter().map(|r| task.run(r)).collect());
        merge_in_order(parts)
    }

    /// Maps `f` over `items` on the pool, keeping input order.
    pub fn map<I, O, F>(&self, items: Vec<I>, f: F) -> Vec<O>
    where
        I: Send,
        O: Send,
        F: Fn(I) -> O + Sync + Send,
    {
        self.pool.install(|| items.into_par_iter().map(f).collect())
    }
}
