//! Rayon-parallel partition estimators. Work is split along the same fixed
//! block grid as the serial drivers and block sums are merged in block
//! order, so the parallel result is bit-identical to the serial one.

use anyhow::Result;
use latgauge::mc::{self, BlockSum, McEstimate};
use latgauge::wilson::{ActionParams, PartitionSampler};
use rayon::prelude::*;

fn parallel_estimate(sampler: &PartitionSampler, n: u64, seed: u64) -> Result<McEstimate> {
    let blocks = mc::blocks_of(n);
    let sums = blocks
        .par_iter()
        .map(|&(block, len)| sampler.block_sum(seed, block, len))
        .collect::<latgauge::Result<Vec<BlockSum>>>()?;
    let total = sums.into_iter().fold(BlockSum::default(), BlockSum::merge);
    Ok(McEstimate::from_total(total, seed)?)
}

/// Parallel gauge-fixed estimator (tree bonds frozen at the identity).
pub fn gauge_fixed_estimate(params: &ActionParams, n: u64, seed: u64) -> Result<McEstimate> {
    parallel_estimate(&PartitionSampler::new(params, true), n, seed)
}

/// Parallel full-measure estimator (every bond Haar distributed).
pub fn full_measure_estimate(params: &ActionParams, n: u64, seed: u64) -> Result<McEstimate> {
    parallel_estimate(&PartitionSampler::new(params, false), n, seed)
}
