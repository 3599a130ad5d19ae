//! Input generators shared by the benchmarks.

use halfstat::transform::render_words;

/// Deterministic pseudo-text of `n` words drawn from a Zipf-like vocabulary.
pub fn synthetic_words(n: usize, seed: u64) -> Vec<String> {
    let mut state = seed
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    (0..n)
        .map(|_| {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let u = ((state >> 11) as f64) / ((1u64 << 53) as f64);
            let rank = (1.0 / (u + 1e-4)) as usize;
            format!("w{rank}")
        })
        .collect()
}

pub fn synthetic_text(n: usize, seed: u64) -> String {
    render_words(&synthetic_words(n, seed))
}
