//! Rayon drivers over the core's chunk, block and restart primitives.
//!
//! Each driver collects partial results in index order and hands them to the
//! same merge function the serial path uses, so thread count never changes
//! the output.

use divisor_maxcut::oracle::{
    brute_force_block, brute_force_plan, finish_brute_force, finish_local_search, local_search_restart,
    BRUTE_FORCE_LIMIT,
};
use divisor_maxcut::rounding::{chunk_plan, integer_weights, merge_chunks, simulate_chunk, DEFAULT_CHUNK};
use divisor_maxcut::{CutStats, EmbeddingFactor, Error, Multigraph, OracleResult};
use rayon::prelude::*;

pub fn simulate_parallel(g: &Multigraph, f: &EmbeddingFactor, samples: u64, seed: u64) -> Result<CutStats, Error> {
    simulate_parallel_chunked(g, f, samples, seed, DEFAULT_CHUNK)
}

pub fn simulate_parallel_chunked(
    g: &Multigraph,
    f: &EmbeddingFactor,
    samples: u64,
    seed: u64,
    chunk: u64,
) -> Result<CutStats, Error> {
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), found: f.n() });
    }
    let w = integer_weights(g)?;
    let chunks = chunk_plan(samples, chunk)
        .into_par_iter()
        .map(|(i, c)| simulate_chunk(&w, f, seed, i, c))
        .collect();
    merge_chunks(g, &w, chunks, seed, chunk)
}

fn block_bits() -> u32 {
    // a few blocks per thread keeps the load even
    (rayon::current_num_threads().max(1) * 8).next_power_of_two().trailing_zeros()
}

pub fn brute_force_parallel(g: &Multigraph) -> Result<OracleResult, Error> {
    brute_force_parallel_with_limit(g, BRUTE_FORCE_LIMIT)
}

pub fn brute_force_parallel_with_limit(g: &Multigraph, limit: usize) -> Result<OracleResult, Error> {
    let (w, plan) = brute_force_plan(g, limit, block_bits())?;
    let blocks: Vec<_> = plan.into_par_iter().map(|(bits, prefix)| brute_force_block(&w, bits, prefix)).collect();
    finish_brute_force(g, &w, blocks)
}

pub fn local_search_parallel(g: &Multigraph, restarts: u64, seed: u64) -> Result<OracleResult, Error> {
    let w = integer_weights(g)?;
    let runs: Vec<_> = (0..restarts).into_par_iter().map(|i| local_search_restart(&w, seed, i)).collect();
    finish_local_search(g, &w, runs)
}

/// Exhaustive search when the graph is small enough, local search otherwise.
pub fn best_cut(g: &Multigraph, restarts: u64, seed: u64) -> Result<OracleResult, Error> {
    if g.n() <= BRUTE_FORCE_LIMIT {
        brute_force_parallel(g)
    } else {
        local_search_parallel(g, restarts, seed)
    }
}
