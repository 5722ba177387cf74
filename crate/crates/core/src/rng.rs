//! Per-chain random streams and order-independent fan-out.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// The random stream for one chain. The ChaCha stream id carries the chain
/// index, so every chain draws from a disjoint counter range of one key and
/// the result never depends on scheduling.
pub fn chain_rng(master_seed: u64, chain_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(chain_index);
    rng
}

/// Maps `f` over `first..first + count` and returns results in index order.
///
/// `workers = None` uses the global rayon pool; `Some(n)` builds a pool with
/// `n` threads. Output is identical for every choice.
pub fn map_chains<T, F>(first: u64, count: usize, workers: Option<usize>, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    let run = || {
        (0..count as u64)
            .into_par_iter()
            .map(|i| f(first + i))
            .collect::<Vec<T>>()
    };
    match workers {
        None => Ok(run()),
        Some(0) => Err(Error::arg("worker count must be positive")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::arg(e.to_string()))?;
            Ok(pool.install(run))
        }
    }
}
