//! Counter-based splittable random streams.
//!
//! Every consumer of randomness derives its own [`Stream`] from a root seed
//! and a short integer path (for example `[TRIAL, t, ZOMBIE, z]`), so
//! results do not depend on scheduling: trials can run on any number of
//! workers, and adding more zombies leaves the streams of the existing ones
//! untouched.  The generator is the splitmix64 sequence, which is more than
//! adequate for Monte Carlo use and is trivially reproducible.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// The splitmix64 finalizer: a bijective avalanche mix.
#[inline]
pub fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// An independent random stream addressed by `(root seed, path)`.
#[derive(Debug, Clone)]
pub struct Stream {
    state: u64,
}

// Path tags keeping the derivation trees of unrelated consumers disjoint.
pub const TAG_TRIAL: u64 = 1;
pub const TAG_PLACEMENT: u64 = 2;
pub const TAG_ZOMBIE_MOVES: u64 = 3;
pub const TAG_COIN_TAPE: u64 = 4;
pub const TAG_WALK_BUILDER: u64 = 5;
pub const TAG_SEARCH: u64 = 6;
pub const TAG_BRACKET: u64 = 7;
pub const TAG_CHAIN: u64 = 8;

impl Stream {
    /// Derive the stream addressed by `path` under `root`.
    pub fn new(root: u64, path: &[u64]) -> Stream {
        let mut state = mix(root ^ GOLDEN);
        for &p in path {
            state = mix(state ^ p.wrapping_mul(GOLDEN));
        }
        Stream { state }
    }

    /// Child stream: equivalent to extending the derivation path.
    pub fn child(&self, path: &[u64]) -> Stream {
        let mut state = self.state;
        for &p in path {
            state = mix(state ^ p.wrapping_mul(GOLDEN));
        }
        Stream { state }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform value in `[0, bound)`, unbiased by rejection.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        if bound.is_power_of_two() {
            return self.next_u64() & (bound - 1);
        }
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }

    /// Fair coin.
    pub fn coin(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }
}
