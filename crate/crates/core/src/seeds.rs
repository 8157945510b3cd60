//! Counter-based pseudo-randomness.
//!
//! Everything random in this crate derives from splitmix64, fixed here so
//! outputs are stable across platforms and releases. The generator state is a
//! single `u64`; the i-th element of the stream seeded by `s` is
//! `finalize(s + (i+1) * GOLDEN)` where `GOLDEN = 0x9E3779B97F4A7C15` and
//! `finalize` is the splitmix64 output function (Steele, Lea, Flood 2014).
//! Because each element depends only on `(s, i)`, draws can be evaluated in
//! any order or in parallel without changing results.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64 output function.
pub fn finalize(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Element `index` of the splitmix64 stream seeded by `seed`.
pub fn stream_at(seed: u64, index: u64) -> u64 {
    finalize(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

/// Derives an independent child seed from a master seed and two indices
/// (e.g. a schedule position and a trial number). The chain is two nested
/// stream lookups, so children collide only if splitmix64 itself collides.
pub fn derive(master: u64, stream: u64, index: u64) -> u64 {
    stream_at(stream_at(master, stream), index)
}

/// Sequential splitmix64 generator for internal shuffles and local search.
pub struct SplitMix {
    state: u64,
}

impl SplitMix {
    pub fn new(seed: u64) -> Self {
        SplitMix { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        finalize(self.state)
    }

    /// Uniform draw from `0..bound` by 128-bit multiply (bound > 0).
    pub fn next_below(&mut self, bound: u64) -> u64 {
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

/// Bernoulli(q) indicator for element `index` of the stream seeded by `seed`.
///
/// The draw succeeds iff the stream value is below `floor(q * 2^64)`, so the
/// realized success probability is exactly `floor(q * 2^64) / 2^64`, which
/// equals `q` for every `f64` in `[2^-11, 1]` and is within one part in 2^52
/// of `q` below that. No rejection step, no platform dependence.
pub fn bernoulli(seed: u64, index: u64, q: f64) -> bool {
    if q <= 0.0 {
        return false;
    }
    if q >= 1.0 {
        return true;
    }
    let threshold = (q * 18_446_744_073_709_551_616.0) as u128;
    (stream_at(seed, index) as u128) < threshold
}
