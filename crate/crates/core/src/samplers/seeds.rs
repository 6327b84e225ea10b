use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Master seed plus a counter-based substream derivation rule.
///
/// The RNG for a work unit is a pure function of
/// `(master, lane, index)`: `lane` separates independent consumers (the
/// chi-process copies, field axes, ...), `index` is the replication
/// counter. Parallel partitioning therefore cannot change results.
///
/// Samplers that produce two replications per FFT derive one substream per
/// *pair* with `index = replication / 2`; the mapping from substream to
/// replication stays fixed either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedSpec {
    master: u64,
}

impl SeedSpec {
    pub fn new(master: u64) -> Self {
        Self { master }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    /// Derive an independent child spec for a tagged sub-experiment
    /// (ladder points, scenario stages).
    pub fn child(&self, tag: u64) -> SeedSpec {
        let mut z = self
            .master
            .wrapping_mul(0x2545_f491_4f6c_dd1d)
            ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        SeedSpec::new(z ^ (z >> 31))
    }

    /// Deterministic substream RNG for `(lane, index)`.
    pub fn rng(&self, lane: u64, index: u64) -> ChaCha8Rng {
        let mut words = [0u64; 4];
        let mut state = self
            .master
            .wrapping_add(0x9e37_79b9_7f4a_7c15)
            .wrapping_mul(0xbf58_476d_1ce4_e5b9)
            ^ lane.wrapping_mul(0x94d0_49bb_1331_11eb)
            ^ index.wrapping_mul(0xd6e8_feb8_6659_fd93);
        for w in &mut words {
            state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            *w = z ^ (z >> 31);
        }
        let mut seed = [0u8; 32];
        for (chunk, w) in seed.chunks_exact_mut(8).zip(words) {
            chunk.copy_from_slice(&w.to_le_bytes());
        }
        ChaCha8Rng::from_seed(seed)
    }
}
