//! Counter-based random streams: every draw is a pure function of the seed
//! and an index, so work can be split into ranges and run in any order.

pub use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::{RngCore, SeedableRng};

/// Generator positioned at the first word of sample `index` when every
/// sample consumes `words` 32-bit words.
pub fn positioned(seed: u64, index: u64, words: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(u128::from(index) * u128::from(words));
    rng
}

/// Independent generator for `index`, for samples that need a variable
/// number of draws.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform double in `[0, 1)` from the top 53 bits of a draw.
#[inline]
pub fn unit<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_agree_with_sequential_draws() {
        let mut seq = positioned(9, 0, 4);
        let mut draws = [0u64; 6];
        for d in &mut draws {
            *d = seq.next_u64();
        }
        let mut jumped = positioned(9, 2, 4);
        assert_eq!(jumped.next_u64(), draws[4]);
        assert_eq!(jumped.next_u64(), draws[5]);
    }

    #[test]
    fn streams_differ() {
        assert_ne!(stream(1, 0).next_u64(), stream(1, 1).next_u64());
        assert_eq!(stream(1, 5).next_u64(), stream(1, 5).next_u64());
    }

    #[test]
    fn unit_range() {
        let mut rng = stream(3, 0);
        for _ in 0..1000 {
            let u = unit(&mut rng);
            assert!((0.0..1.0).contains(&u));
        }
    }
}
