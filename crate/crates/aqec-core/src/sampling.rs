//! Seeded sample streams and shard bookkeeping.
//!
//! Sample `i` draws from its own ChaCha8 stream: the key is
//! `root ⊕ splitmix64(i / SHARD_SIZE)` and the stream id is `i % SHARD_SIZE`.
//! A sample's randomness therefore depends only on `(root, i)`, and tallies
//! are merged in shard order, so results do not depend on how shards are
//! scheduled.

use alloc::vec::Vec;
use core::ops::Range;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub const SHARD_SIZE: u64 = 4096;

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

pub fn sample_rng(root: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(root ^ splitmix64(index / SHARD_SIZE));
    rng.set_stream(index % SHARD_SIZE);
    rng
}

/// Uniform in `[0, 1)` with 53 random bits.
#[inline]
pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Exponential variate with the given rate (`rate > 0`).
#[inline]
pub fn exponential(rng: &mut impl RngCore, rate: f64) -> f64 {
    -libm::log1p(-uniform(rng)) / rate
}

/// Uniform integer in `0..n` by rejection (no modulo bias).
#[inline]
pub fn below(rng: &mut impl RngCore, n: u64) -> u64 {
    debug_assert!(n > 0);
    let zone = u64::MAX - (u64::MAX - n + 1) % n;
    loop {
        let v = rng.next_u64();
        if v <= zone {
            return v % n;
        }
    }
}

/// Sufficient statistics that can be merged across shards.
pub trait Tally: Send + Sized {
    fn merge(&mut self, other: Self);
}

/// A Monte Carlo task whose samples are addressed by index.
pub trait ShardedTask: Sync {
    type Tally: Tally;

    fn run(&self, samples: Range<u64>) -> Self::Tally;
}

/// Sample ranges of the shards covering `0..n`.
pub fn shards(n: u64) -> Vec<Range<u64>> {
    let mut out = Vec::new();
    let mut s = 0;
    while s < n {
        let e = (s + SHARD_SIZE).min(n);
        out.push(s..e);
        s = e;
    }
    out
}

/// Runs every shard in order on the current thread.
pub fn run_serial<T: ShardedTask>(task: &T, n: u64) -> Option<T::Tally> {
    merge_in_order(shards(n).into_iter().map(|r| task.run(r)))
}

pub fn merge_in_order<A: Tally>(parts: impl IntoIterator<Item = A>) -> Option<A> {
    let mut it = parts.into_iter();
    let mut acc = it.next()?;
    for p in it {
        acc.merge(p);
    }
    Some(acc)
}
