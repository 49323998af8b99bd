//! Counter-based randomness with labeled streams.
//!
//! Every random quantity in this crate is a pure function of
//! `(master seed, replica index, label, draw index)`.  There is no mutable
//! generator state: a stream is just a 64-bit key, and the i-th draw is a
//! strong mix of `key` and `i`.  This buys two properties that ordinary
//! sequential generators make awkward:
//!
//! * workers can be assigned replicas in any order, on any number of
//!   threads, and still produce bit-identical results;
//! * a prefix of a sample can be regenerated exactly (used when a match
//!   search overruns its cap and the sample must be extended in place).
//!
//! The draw function is the splitmix64 output function applied to the
//! Weyl sequence `key + (i+1)·φ`, i.e. random access into the classic
//! splitmix64 stream seeded with `key`.  Stream keys are derived from the
//! master seed by hashing `(seed, replica, label)` with SHA-256, so streams
//! with different labels ("env", "x", "y", ...) are independent even for
//! adjacent seeds or replica indices.

use sha2::{Digest, Sha256};

/// 2^64 / φ, the Weyl increment used by splitmix64.
const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// splitmix64 finalizer: a fast invertible mix with good avalanche.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives the key of an independent stream from a master seed, a replica
/// index and a short textual label.
///
/// The triple is hashed with SHA-256 and the first eight bytes of the
/// digest form the key, so no algebraic relation between nearby seeds or
/// replicas survives into the streams.
pub fn stream_seed(master: u64, replica: u64, label: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update(replica.to_le_bytes());
    h.update(label.as_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

/// A stateless random stream: draw `i` is a pure function of the key and `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CounterStream {
    key: u64,
}

impl CounterStream {
    pub fn new(key: u64) -> Self {
        CounterStream { key }
    }

    /// The i-th 64-bit draw of the stream.
    #[inline]
    pub fn u64_at(&self, index: u64) -> u64 {
        mix64(self.key.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
    }

    /// The i-th draw as a double in `[0, 1)`, using the top 53 bits.
    #[inline]
    pub fn unit_f64_at(&self, index: u64) -> f64 {
        (self.u64_at(index) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// A derived stream for nested indexing (e.g. per-site rejection
    /// sampling, or a per-environment point stream).  Distinct `index`
    /// values give unrelated keys.
    #[inline]
    pub fn substream(&self, index: u64) -> CounterStream {
        CounterStream::new(mix64(self.key ^ self.u64_at(index)))
    }

    /// The i-th draw reduced to `0..bound` without modulo bias.
    ///
    /// Uses rejection from the largest multiple of `bound`; retries move to
    /// a substream so the result is still a pure function of `(key, index)`.
    pub fn below_at(&self, index: u64, bound: u64) -> u64 {
        assert!(bound > 0, "below_at requires a positive bound");
        if bound.is_power_of_two() {
            return self.u64_at(index) & (bound - 1);
        }
        let zone = u64::MAX - (u64::MAX % bound);
        let first = self.u64_at(index);
        if first < zone {
            return first % bound;
        }
        let retries = self.substream(index);
        let mut attempt = 0u64;
        loop {
            let u = retries.u64_at(attempt);
            if u < zone {
                return u % bound;
            }
            attempt += 1;
        }
    }
}
