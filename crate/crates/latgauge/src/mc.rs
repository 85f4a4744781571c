//! Reproducible Monte Carlo accumulation. Samples are drawn in fixed-size
//! blocks; block k uses a private random stream derived from (master seed, k)
//! and block sums are merged in block order, so an estimate depends only on
//! (sample count, seed), never on how blocks were scheduled across workers.

use alloc::vec::Vec;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::math;
use crate::{Error, Result};

/// Samples per block. Large enough to amortize scheduling, small enough that
/// desk-scale runs still parallelize.
pub const BLOCK_LEN: u64 = 16_384;

/// A private counter-based random stream: ChaCha12 keyed by the master seed
/// with the 64-bit stream id selecting the block.
pub struct SeededRandomStream(ChaCha12Rng);

impl SeededRandomStream {
    pub fn for_block(master_seed: u64, block: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
        rng.set_stream(block);
        SeededRandomStream(rng)
    }
}

impl RngCore for SeededRandomStream {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.0.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> core::result::Result<(), rand::Error> {
        self.0.try_fill_bytes(dest)
    }
}

/// The blocks covering `n` samples: (block index, samples in block).
pub fn blocks_of(n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut remaining = n;
    let mut index = 0;
    while remaining > 0 {
        let len = remaining.min(BLOCK_LEN);
        out.push((index, len));
        remaining -= len;
        index += 1;
    }
    out
}

/// Running first and second moments of one block (or a prefix merge of
/// blocks).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BlockSum {
    pub sum: f64,
    pub sum_sq: f64,
    pub count: u64,
}

impl BlockSum {
    pub fn add(&mut self, value: f64) {
        self.sum += value;
        self.sum_sq += value * value;
        self.count += 1;
    }

    /// Order matters for bit reproducibility: always merge in block order.
    pub fn merge(self, rhs: BlockSum) -> BlockSum {
        BlockSum {
            sum: self.sum + rhs.sum,
            sum_sq: self.sum_sq + rhs.sum_sq,
            count: self.count + rhs.count,
        }
    }
}

/// Mean and standard error of a Monte Carlo run, tagged with the sample count
/// and master seed that produced it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

impl McEstimate {
    /// Finalize block sums (already merged in block order) into an estimate;
    /// std_error is the sample standard deviation over sqrt(n).
    pub fn from_total(total: BlockSum, seed: u64) -> Result<Self> {
        if total.count == 0 {
            return Err(Error::InvalidParameter(
                "Monte Carlo estimate needs at least one sample".into(),
            ));
        }
        let n = total.count as f64;
        let mean = total.sum / n;
        let std_error = if total.count > 1 {
            let var = ((total.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
            math::sqrt(var / n)
        } else {
            0.0
        };
        Ok(McEstimate {
            mean,
            std_error,
            n_samples: total.count,
            seed,
        })
    }

    /// |mean - reference| in units of this estimate's standard error
    /// (0 when both the distance and the error vanish).
    pub fn sigma_from(&self, reference: f64) -> f64 {
        let distance = math::abs(self.mean - reference);
        if distance == 0.0 {
            return 0.0;
        }
        distance / self.std_error
    }

    /// Distance between two estimates in combined standard errors.
    pub fn sigma_between(&self, other: &McEstimate) -> f64 {
        let distance = math::abs(self.mean - other.mean);
        if distance == 0.0 {
            return 0.0;
        }
        distance / math::sqrt(self.std_error * self.std_error + other.std_error * other.std_error)
    }
}

/// Sequential reference driver: runs every block in order on one thread.
/// `sample` draws one value from the block's private stream. Parallel
/// drivers must produce bit-identical results by computing the same block
/// sums and merging them in the same order.
pub fn estimate_serial<F>(n: u64, seed: u64, mut sample: F) -> Result<McEstimate>
where
    F: FnMut(&mut SeededRandomStream) -> f64,
{
    let mut total = BlockSum::default();
    for (block, len) in blocks_of(n) {
        let mut rng = SeededRandomStream::for_block(seed, block);
        let mut partial = BlockSum::default();
        for _ in 0..len {
            partial.add(sample(&mut rng));
        }
        total = total.merge(partial);
    }
    McEstimate::from_total(total, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn blocks_cover_exactly_n_samples() {
        assert_eq!(blocks_of(0), alloc::vec![]);
        assert_eq!(blocks_of(1), alloc::vec![(0, 1)]);
        assert_eq!(blocks_of(BLOCK_LEN), alloc::vec![(0, BLOCK_LEN)]);
        assert_eq!(
            blocks_of(BLOCK_LEN + 5),
            alloc::vec![(0, BLOCK_LEN), (1, 5)]
        );
        let total: u64 = blocks_of(100_000).iter().map(|(_, len)| len).sum();
        assert_eq!(total, 100_000);
    }

    #[test]
    fn streams_for_different_blocks_differ() {
        let mut a = SeededRandomStream::for_block(7, 0);
        let mut b = SeededRandomStream::for_block(7, 1);
        let mut c = SeededRandomStream::for_block(7, 0);
        let xa = a.next_u64();
        let xb = b.next_u64();
        let xc = c.next_u64();
        assert_ne!(xa, xb);
        assert_eq!(xa, xc);
    }

    #[test]
    fn estimate_is_deterministic_and_merge_order_independent_of_workers() {
        let f = |rng: &mut SeededRandomStream| rng.gen_range(0.0..1.0);
        let n = 3 * BLOCK_LEN + 17;
        let first = estimate_serial(n, 42, f).unwrap();
        let second = estimate_serial(n, 42, f).unwrap();
        assert_eq!(first, second);

        // Simulate an out-of-order parallel schedule: compute block sums in
        // reverse, then merge in block order. Must match exactly.
        let blocks = blocks_of(n);
        let mut sums = alloc::vec![BlockSum::default(); blocks.len()];
        for (block, len) in blocks.iter().rev() {
            let mut rng = SeededRandomStream::for_block(42, *block);
            let mut partial = BlockSum::default();
            for _ in 0..*len {
                partial.add(f(&mut rng));
            }
            sums[*block as usize] = partial;
        }
        let total = sums
            .into_iter()
            .fold(BlockSum::default(), |acc, s| acc.merge(s));
        let third = McEstimate::from_total(total, 42).unwrap();
        assert_eq!(first, third);
    }

    #[test]
    fn constant_samples_have_zero_error() {
        let est = estimate_serial(1000, 1, |_| 1.0).unwrap();
        assert_eq!(est.mean, 1.0);
        assert_eq!(est.std_error, 0.0);
        assert_eq!(est.sigma_from(1.0), 0.0);
    }

    #[test]
    fn uniform_mean_is_near_half() {
        let est = estimate_serial(200_000, 5, |rng| rng.gen_range(0.0..1.0)).unwrap();
        assert!(est.std_error > 0.0);
        assert!(est.sigma_from(0.5) < 4.0, "mean {} se {}", est.mean, est.std_error);
        // Standard error of U(0,1) mean is 1/sqrt(12 n).
        let expected_se = (1.0 / 12.0_f64 / 200_000.0).sqrt();
        assert!((est.std_error - expected_se).abs() < 0.1 * expected_se);
    }

    #[test]
    fn zero_samples_is_an_error() {
        assert!(estimate_serial(0, 1, |_| 1.0).is_err());
    }

    #[test]
    fn sigma_between_combines_errors() {
        let a = McEstimate {
            mean: 1.0,
            std_error: 0.03,
            n_samples: 10,
            seed: 0,
        };
        let b = McEstimate {
            mean: 1.1,
            std_error: 0.04,
            n_samples: 10,
            seed: 1,
        };
        let want = 0.1 / (0.0009_f64 + 0.0016).sqrt();
        assert!((a.sigma_between(&b) - want).abs() < 1e-12);
        assert_eq!(a.sigma_between(&a), 0.0);
    }
}
