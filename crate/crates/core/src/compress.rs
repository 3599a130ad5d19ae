//! Lempel–Ziv complexity and relative compressibility of text.
//!
//! Text is expanded to bits (each UTF-8 byte as 8 bits) and parsed left to
//! right into fragments, each fragment being the shortest extension of an
//! earlier fragment that has not been produced before. The fragment count
//! `C_LZ` gives the relative compressibility `s = (S_in − C_LZ) / S_in`,
//! where `S_in` is the size of the text in bytes. A second estimate `s_zip`
//! uses the length of a raw deflate stream.

use std::io::Write;

use flate2::write::DeflateEncoder;
use flate2::Compression;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transform::{invert_words, render_words, shuffle_words, ShuffleSpec};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BitOrder {
    #[default]
    MsbFirst,
    LsbFirst,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitString {
    /// One entry per bit, each 0 or 1.
    pub bits: Vec<u8>,
    pub source_bytes: usize,
}

impl BitString {
    pub fn from_bits(bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        Self {
            source_bytes: bits.len().div_ceil(8),
            bits,
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

pub fn to_bitstring(text: &str) -> BitString {
    to_bitstring_with(text.as_bytes(), BitOrder::MsbFirst)
}

pub fn to_bitstring_with(bytes: &[u8], order: BitOrder) -> BitString {
    let mut bits = Vec::with_capacity(bytes.len() * 8);
    for &byte in bytes {
        for k in 0..8 {
            let shift = match order {
                BitOrder::MsbFirst => 7 - k,
                BitOrder::LsbFirst => k,
            };
            bits.push((byte >> shift) & 1);
        }
    }
    BitString {
        bits,
        source_bytes: bytes.len(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LzParse {
    pub fragment_count: usize,
    /// End offset (exclusive) of every fragment; the last one is the input length.
    pub boundaries: Vec<usize>,
}

impl LzParse {
    /// The fragments as slices of `bits`.
    pub fn fragments<'a>(&self, bits: &'a [u8]) -> Vec<&'a [u8]> {
        let mut start = 0;
        self.boundaries
            .iter()
            .map(|&end| {
                let f = &bits[start..end];
                start = end;
                f
            })
            .collect()
    }
}

const NO_CHILD: u32 = u32::MAX;

/// Incremental dictionary parse of a bit sequence.
///
/// The dictionary is a binary trie of completed fragments. Each step walks the
/// trie as far as the input allows and closes the fragment one bit past the
/// deepest match. A trailing fragment that ends inside the trie is counted.
pub fn lz_complexity(bits: &[u8]) -> Result<LzParse> {
    if bits.is_empty() {
        return Err(Error::EmptyInput("LZ complexity of an empty bit string"));
    }
    // node 0 is the empty root
    let mut trie: Vec<[u32; 2]> = vec![[NO_CHILD; 2]];
    let mut boundaries = Vec::new();
    let mut node = 0usize;
    for (i, &bit) in bits.iter().enumerate() {
        let b = usize::from(bit & 1);
        let child = trie[node][b];
        if child == NO_CHILD {
            trie[node][b] = trie.len() as u32;
            trie.push([NO_CHILD; 2]);
            boundaries.push(i + 1);
            node = 0;
        } else {
            node = child as usize;
        }
    }
    if node != 0 {
        boundaries.push(bits.len());
    }
    Ok(LzParse {
        fragment_count: boundaries.len(),
        boundaries,
    })
}

/// A byte-oriented compressor used for the `s_zip` estimate.
pub trait Compressor: Send + Sync {
    fn name(&self) -> &str;
    fn version(&self) -> &str;
    fn settings(&self) -> String;
    fn compressed_len(&self, data: &[u8]) -> std::io::Result<usize>;
}

/// Raw deflate stream (no zlib or gzip container) at a fixed level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Deflate {
    pub level: u32,
}

impl Default for Deflate {
    fn default() -> Self {
        Self {
            level: Compression::default().level(),
        }
    }
}

impl Compressor for Deflate {
    fn name(&self) -> &str {
        "deflate"
    }

    fn version(&self) -> &str {
        "flate2 1.1 / miniz_oxide 0.8"
    }

    fn settings(&self) -> String {
        format!("raw stream, level {}", self.level)
    }

    fn compressed_len(&self, data: &[u8]) -> std::io::Result<usize> {
        let mut enc = DeflateEncoder::new(
            Vec::with_capacity(data.len() / 2),
            Compression::new(self.level),
        );
        enc.write_all(data)?;
        Ok(enc.finish()?.len())
    }
}

/// How `C_LZ` is turned into a size comparable with `S_in`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SizeMode {
    /// Subtract the raw fragment count from the byte count.
    #[default]
    Fragments,
    /// Use the coded length `C·(1 + log2 C)` bits, converted to bytes.
    Coded,
}

impl SizeMode {
    fn compressed_size(self, fragments: usize) -> f64 {
        let c = fragments as f64;
        match self {
            SizeMode::Fragments => c,
            SizeMode::Coded => c * (1.0 + c.log2()) / 8.0,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LzOptions {
    pub bit_order: BitOrder,
    pub size_mode: SizeMode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompressResult {
    pub source_bytes: usize,
    pub fragments: usize,
    pub s: f64,
    pub compressed_bytes: Option<usize>,
    pub s_zip: Option<f64>,
}

/// LZ-based relative compressibility of raw bytes.
pub fn lz_compressibility(bytes: &[u8], options: LzOptions) -> Result<(usize, f64)> {
    if bytes.is_empty() {
        return Err(Error::EmptyInput("compressibility of an empty text"));
    }
    let bits = to_bitstring_with(bytes, options.bit_order);
    let fragments = lz_complexity(&bits.bits)?.fragment_count;
    let s_in = bytes.len() as f64;
    Ok((
        fragments,
        (s_in - options.size_mode.compressed_size(fragments)) / s_in,
    ))
}

/// Both compressibility estimates for `text`.
///
/// A compressor failure leaves `s_zip` empty and is logged; `s` is still
/// produced.
pub fn compressibility(
    text: &str,
    compressor: Option<&dyn Compressor>,
    options: LzOptions,
) -> Result<CompressResult> {
    let bytes = text.as_bytes();
    let (fragments, s) = lz_compressibility(bytes, options)?;
    let compressed_bytes = compressor.and_then(|c| match c.compressed_len(bytes) {
        Ok(n) => Some(n),
        Err(err) => {
            log::warn!("{} compressor failed: {err}; s_zip omitted", c.name());
            None
        }
    });
    let s_in = bytes.len() as f64;
    Ok(CompressResult {
        source_bytes: bytes.len(),
        fragments,
        s,
        compressed_bytes,
        s_zip: compressed_bytes.map(|n| (s_in - n as f64) / s_in),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InversionResult {
    pub s: f64,
    pub s_inverted: f64,
    pub s_zip: Option<f64>,
    pub s_zip_inverted: Option<f64>,
}

/// Compressibility of the text and of its word-inverted version, both
/// rendered as space-joined words.
pub fn inversion_experiment(
    words: &[String],
    compressor: Option<&dyn Compressor>,
    options: LzOptions,
) -> Result<InversionResult> {
    if words.len() < 2 {
        return Err(Error::TooFewWords {
            needed: 2,
            found: words.len(),
        });
    }
    let original = compressibility(&render_words(words), compressor, options)?;
    let inverted = compressibility(&render_words(&invert_words(words)), compressor, options)?;
    Ok(InversionResult {
        s: original.s,
        s_inverted: inverted.s,
        s_zip: original.s_zip,
        s_zip_inverted: inverted.s_zip,
    })
}

/// Mean over repetitions of `s(original) − s(shuffled)`, both rendered as
/// space-joined words.
pub fn shuffle_experiment(
    words: &[String],
    spec: &ShuffleSpec,
    doc_id: &str,
    options: LzOptions,
) -> Result<f64> {
    if words.len() < 2 {
        return Err(Error::TooFewWords {
            needed: 2,
            found: words.len(),
        });
    }
    spec.validate()?;
    let (_, s_original) = lz_compressibility(render_words(words).as_bytes(), options)?;
    let mut total = 0.0;
    for rep in 0..spec.repetitions {
        let shuffled = shuffle_words(words, spec, doc_id, rep)?;
        let (_, s_shuffled) = lz_compressibility(render_words(&shuffled).as_bytes(), options)?;
        total += s_original - s_shuffled;
    }
    Ok(total / f64::from(spec.repetitions))
}
