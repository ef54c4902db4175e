//! Seeded random words for tests and probes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::words::{Letter, Word};

pub type SampleRng = ChaCha8Rng;

/// Reads `CLT_SEED` if set, otherwise returns `default`.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var("CLT_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(default)
}

/// A reproducible generator; `CLT_SEED` overrides `default`.
pub fn seeded_rng(default: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed_from_env(default))
}

/// A uniformly chosen reduced word whose length is uniform in `0..=max_len`.
pub fn random_word<R: Rng>(rng: &mut R, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    random_word_of_length(rng, rank, len)
}

pub fn random_word_of_length<R: Rng>(rng: &mut R, rank: usize, len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::new(rng.gen_range(0..rank as u32), rng.gen_bool(0.5));
        if letters.last() != Some(&l.inv()) {
            letters.push(l);
        }
    }
    Word::from_letters(letters)
}

/// A non-trivial cyclically reduced word of length in `1..=max_len`.
pub fn random_cyclically_reduced<R: Rng>(rng: &mut R, rank: usize, max_len: usize) -> Word {
    loop {
        let len = rng.gen_range(1..=max_len);
        let w = random_word_of_length(rng, rank, len);
        if w.is_cyclically_reduced() {
            return w;
        }
    }
}
