//! Statistical comparison of the two halves of a text.
//!
//! A document is split into two halves with the same number of words, a battery
//! of lexical, spatial and compression features is computed on each half, and
//! the paired values are compared over a corpus with the Wilcoxon signed-rank
//! statistic and the Gaussian `p`-sigma rule. Random word shuffles and word or
//! letter inversions act as controls.
//!
//! The crate is organised as a pipeline:
//!
//! 1. [`corpus`]: load UTF-8 documents, strip Project Gutenberg boilerplate,
//!    filter by length and persist a JSON Lines manifest.
//! 2. [`tokenize`]: words, punctuation, sentences, paragraphs and letters.
//! 3. [`transform`]: halves, seeded shuffles and inversions.
//! 4. [`features`], [`spatial`], [`compress`]: per-half statistics.
//! 5. [`stats`]: sign percentages, Wilcoxon `W`, sigma levels and Pearson
//!    correlation of binary indicators.
//! 6. [`report`]: run the whole battery over a manifest and write tables.
//!
//! ```
//! use halfstat::{features, transform};
//!
//! let words: Vec<String> = "a b a c b d".split(' ').map(String::from).collect();
//! let halves = transform::split_halves(&words).unwrap();
//! let first = features::spectrum(&halves.first).unwrap();
//! let second = features::spectrum(&halves.second).unwrap();
//! assert_eq!(first.distinct, 2);
//! assert_eq!(second.distinct, 3);
//! ```

pub mod compress;
pub mod corpus;
pub mod error;
pub mod features;
pub mod report;
pub mod spatial;
pub mod stats;
pub mod tokenize;
pub mod transform;

pub use compress::{
    BitOrder, BitString, CompressResult, Compressor, Deflate, LzOptions, LzParse, SizeMode,
};
pub use corpus::{CorpusManifest, ManifestEntry, TextDocument};
pub use error::{Error, Result};
pub use features::{CommonWordStats, FrequencySpectrum, HalfFeatures, RareCounts};
pub use report::{CompressorChoice, RelationRow, RelationSpec, ResultBundle, RunConfig, Variant};
pub use spatial::{MuConfig, PeriodStats, WordOccurrences};
pub use stats::{Direction, IndicatorMatrix, PairedSample, WilcoxonResult};
pub use tokenize::{TokenizedText, TokenizerConfig};
pub use transform::{HalfPair, ShuffleSpec};
