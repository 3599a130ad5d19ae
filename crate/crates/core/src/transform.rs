//! Experimental variants of a word sequence: halves, seeded shuffles and
//! inversions.

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_REPETITIONS: u32 = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPair {
    pub first: Vec<String>,
    pub second: Vec<String>,
    /// True when the word count was odd and the middle word was left out.
    pub dropped_middle: bool,
}

/// Word-index ranges of the two halves of an `n`-word sequence.
///
/// Each half has `n / 2` words; for odd `n` the middle word belongs to neither.
pub fn half_ranges(n: usize) -> Result<(Range<usize>, Range<usize>)> {
    if n < 2 {
        return Err(Error::TooFewWords {
            needed: 2,
            found: n,
        });
    }
    let half = n / 2;
    Ok((0..half, n - half..n))
}

pub fn split_halves(words: &[String]) -> Result<HalfPair> {
    let (first, second) = half_ranges(words.len())?;
    Ok(HalfPair {
        dropped_middle: first.end != second.start,
        first: words[first].to_vec(),
        second: words[second].to_vec(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShuffleSpec {
    pub seed: u64,
    pub repetitions: u32,
}

impl Default for ShuffleSpec {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            repetitions: DEFAULT_REPETITIONS,
        }
    }
}

impl ShuffleSpec {
    pub fn new(seed: u64, repetitions: u32) -> Result<Self> {
        let spec = Self { seed, repetitions };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::InvalidConfig(
                "shuffle repetitions must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Generator for one (document, repetition) pair.
    ///
    /// The ChaCha key comes from the run seed and the stream number from a
    /// hash of the document id and repetition index, so results do not depend
    /// on the order in which documents are processed.
    pub fn rng(&self, doc_id: &str, repetition: u32) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        let mut stream = Fnv1a::new();
        stream.write(doc_id.as_bytes());
        stream.write(&[0xff]);
        stream.write(&repetition.to_le_bytes());
        rng.set_stream(stream.finish());
        rng
    }
}

struct Fnv1a(u64);

impl Fnv1a {
    fn new() -> Self {
        Self(0xcbf2_9ce4_8422_2325)
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    fn finish(&self) -> u64 {
        self.0
    }
}

/// Fisher–Yates permutation of `words` for repetition `repetition` of `doc_id`.
pub fn shuffle_words(
    words: &[String],
    spec: &ShuffleSpec,
    doc_id: &str,
    repetition: u32,
) -> Result<Vec<String>> {
    spec.validate()?;
    if repetition >= spec.repetitions {
        return Err(Error::InvalidConfig(format!(
            "repetition index {repetition} out of range for {} repetitions",
            spec.repetitions
        )));
    }
    let mut out = words.to_vec();
    let mut rng = spec.rng(doc_id, repetition);
    for i in (1..out.len()).rev() {
        let j = rng.gen_range(0..=i);
        out.swap(i, j);
    }
    Ok(out)
}

/// Reverse the word order; the words themselves are untouched.
pub fn invert_words(words: &[String]) -> Vec<String> {
    words.iter().rev().cloned().collect()
}

/// Reverse the character sequence.
pub fn invert_letters(body: &str) -> String {
    body.chars().rev().collect()
}

/// Render a word sequence as text: words joined by single spaces.
pub fn render_words(words: &[String]) -> String {
    words.join(" ")
}

/// Units that whole-text inversion reverses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rendering {
    /// Tokenized words; punctuation and case folding as in the tokenizer.
    #[default]
    Words,
    /// Whitespace-separated tokens of the body, punctuation and case intact.
    Tokens,
}

impl std::str::FromStr for Rendering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "words" => Ok(Rendering::Words),
            "tokens" => Ok(Rendering::Tokens),
            other => Err(Error::InvalidConfig(format!("unknown rendering `{other}`"))),
        }
    }
}

pub fn whitespace_tokens(body: &str) -> Vec<String> {
    body.split_whitespace().map(String::from).collect()
}
