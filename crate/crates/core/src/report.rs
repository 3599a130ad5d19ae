//! Whole-corpus pipeline and table output.
//!
//! [`analyze_corpus`] loads every included manifest entry, computes half
//! features for each requested [`Variant`], evaluates the relation battery
//! ([`relation_battery`]) and the indicator correlation matrix, and returns a
//! [`ResultBundle`]. [`emit_tables`] writes the bundle to disk:
//!
//! ```text
//! out/run.json                 configuration echo and compressor identity
//! out/results.jsonl            one object per (text, variant, repetition, half)
//! out/tables/<table>.csv|.md   summary, rare, mu, compress, inversion, correlation
//! out/tables/exclusions.csv    texts dropped from individual relations
//! ```
//!
//! Output is byte-identical for identical configurations, whatever the number
//! of worker threads.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compress::{
    compressibility, inversion_experiment, shuffle_experiment, CompressResult, Compressor, Deflate,
    InversionResult, LzOptions,
};
use crate::corpus::{
    prepare_document, BoilerplateMarkers, CorpusManifest, ManifestEntry, TextDocument,
};
use crate::error::{Error, Result};
use crate::features::{common_words, CommonWordStats, HalfFeatures, DEFAULT_KAPPA_MAX};
use crate::spatial::{self, MuConfig, DEFAULT_MU_THRESHOLDS};
use crate::stats::{
    pearson_indicator, sigma_label, sign_percentage, wilcoxon, Direction, IndicatorMatrix,
    PairedSample, SIGNIFICANCE_LEVEL,
};
use crate::tokenize::{tokenize, TokenizedText, TokenizerConfig};
use crate::transform::{
    half_ranges, invert_letters, invert_words, render_words, shuffle_words, whitespace_tokens,
    Rendering, ShuffleSpec, DEFAULT_REPETITIONS, DEFAULT_SEED,
};

/// Correlations with magnitude above this are flagged.
pub const CORRELATION_FLAG: f64 = 0.4;
/// Below this many texts the Gaussian sigma rule is not meaningful.
pub const MIN_TEXTS_FOR_SIGMA_RULE: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Original,
    Shuffled,
    InvertedWords,
    InvertedLetters,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Original,
        Variant::Shuffled,
        Variant::InvertedWords,
        Variant::InvertedLetters,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Original => "original",
            Variant::Shuffled => "shuffled",
            Variant::InvertedWords => "inverted-words",
            Variant::InvertedLetters => "inverted-letters",
        }
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown variant `{s}`")))
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompressorChoice {
    #[default]
    Deflate,
    None,
}

impl CompressorChoice {
    pub fn build(self) -> Option<Box<dyn Compressor>> {
        match self {
            CompressorChoice::Deflate => Some(Box::new(Deflate::default())),
            CompressorChoice::None => None,
        }
    }
}

impl FromStr for CompressorChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "deflate" => Ok(CompressorChoice::Deflate),
            "none" => Ok(CompressorChoice::None),
            other => Err(Error::InvalidConfig(format!(
                "unknown compressor `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub manifest: PathBuf,
    pub tokenizer: TokenizerConfig,
    pub strip_boilerplate: bool,
    pub seed: u64,
    pub shuffle_repetitions: u32,
    pub mu_thresholds: Vec<usize>,
    /// Admit words into `Ω` with `count > k` rather than `count ≥ k`.
    pub min_count_exclusive: bool,
    pub kappa_max: usize,
    pub compressor: CompressorChoice,
    pub lz: LzOptions,
    /// Report Yule's constant with the `1/n` factor.
    pub yule_per_type: bool,
    pub variants: Vec<Variant>,
    /// What the whole-text inversion experiments reverse.
    #[serde(default)]
    pub inversion_rendering: Rendering,
}

impl RunConfig {
    pub fn new(manifest: impl Into<PathBuf>) -> Self {
        Self {
            manifest: manifest.into(),
            tokenizer: TokenizerConfig::default(),
            strip_boilerplate: true,
            seed: DEFAULT_SEED,
            shuffle_repetitions: DEFAULT_REPETITIONS,
            mu_thresholds: DEFAULT_MU_THRESHOLDS.to_vec(),
            min_count_exclusive: false,
            kappa_max: DEFAULT_KAPPA_MAX,
            compressor: CompressorChoice::Deflate,
            lz: LzOptions::default(),
            yule_per_type: false,
            variants: Variant::ALL.to_vec(),
            inversion_rendering: Rendering::Words,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.tokenizer.validate()?;
        self.shuffle_spec().validate()?;
        if self.kappa_max == 0 {
            return Err(Error::InvalidConfig("kappa_max must be at least 1".into()));
        }
        if self.mu_thresholds.is_empty() {
            return Err(Error::InvalidConfig(
                "at least one mu threshold is required".into(),
            ));
        }
        for &k in &self.mu_thresholds {
            MuConfig::new(k, false)?;
        }
        if self.variants.is_empty() {
            return Err(Error::InvalidConfig("no variants selected".into()));
        }
        Ok(())
    }

    pub fn shuffle_spec(&self) -> ShuffleSpec {
        ShuffleSpec {
            seed: self.seed,
            repetitions: self.shuffle_repetitions,
        }
    }

    fn has(&self, v: Variant) -> bool {
        self.variants.contains(&v)
    }

    fn mu_configs(&self) -> impl Iterator<Item = MuConfig> + '_ {
        self.mu_thresholds.iter().flat_map(move |&k| {
            [false, true].map(|common_only| MuConfig {
                min_count: k,
                common_only,
                exclusive: self.min_count_exclusive,
            })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuValue {
    pub min_count: usize,
    pub common_only: bool,
    pub value: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfRecord {
    pub features: HalfFeatures,
    pub mu: Vec<MuValue>,
    pub compress: CompressResult,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariantRecord {
    pub variant: Variant,
    pub repetition: Option<u32>,
    pub dropped_middle: bool,
    pub common: CommonWordStats,
    pub halves: [HalfRecord; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LetterInversion {
    pub s: f64,
    pub s_inverted: f64,
    pub s_zip: Option<f64>,
    pub s_zip_inverted: Option<f64>,
}

/// Whole-text experiments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WholeRecord {
    pub words: usize,
    pub inversion: Option<InversionResult>,
    pub letter_inversion: Option<LetterInversion>,
    /// Mean of `s(original) − s(shuffled)` over the shuffle repetitions.
    pub shuffle_difference: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TextRecord {
    pub id: String,
    pub whole: WholeRecord,
    pub variants: Vec<VariantRecord>,
}

impl TextRecord {
    fn variant(&self, v: Variant) -> impl Iterator<Item = &VariantRecord> {
        self.variants.iter().filter(move |r| r.variant == v)
    }
}

fn half_record(
    body: &str,
    text: &TokenizedText,
    common: &std::collections::HashSet<String>,
    config: &RunConfig,
    compressor: Option<&dyn Compressor>,
) -> Result<HalfRecord> {
    let features = HalfFeatures::compute(text, config.kappa_max, config.yule_per_type)?;
    let mu = config
        .mu_configs()
        .map(|cfg| {
            let result = spatial::mu(&text.words, &cfg, cfg.common_only.then_some(common));
            MuValue {
                min_count: cfg.min_count,
                common_only: cfg.common_only,
                value: result.as_ref().ok().copied(),
                error: result.err().map(|e| e.to_string()),
            }
        })
        .collect();
    let compress = compressibility(&body[text.region()], compressor, config.lz)?;
    Ok(HalfRecord {
        features,
        mu,
        compress,
    })
}

fn variant_record(
    variant: Variant,
    repetition: Option<u32>,
    body: &str,
    tokens: &TokenizedText,
    config: &RunConfig,
    compressor: Option<&dyn Compressor>,
) -> Result<VariantRecord> {
    let (r1, r2) = half_ranges(tokens.total_words)?;
    let dropped_middle = r1.end != r2.start;
    let first = tokens.slice(r1);
    let second = tokens.slice(r2);
    let common = common_words(&first.words, &second.words)?;
    let common_types = spatial::common_types(&first.words, &second.words);
    Ok(VariantRecord {
        variant,
        repetition,
        dropped_middle,
        common,
        halves: [
            half_record(body, &first, &common_types, config, compressor)?,
            half_record(body, &second, &common_types, config, compressor)?,
        ],
    })
}

/// Compute every variant and whole-text experiment for one document.
pub fn analyze_document(
    doc: &TextDocument,
    config: &RunConfig,
    compressor: Option<&dyn Compressor>,
) -> Result<TextRecord> {
    let tokens = tokenize(&doc.body, &config.tokenizer);
    if tokens.total_words < 2 {
        return Err(Error::TooFewWords {
            needed: 2,
            found: tokens.total_words,
        });
    }
    // Rendered variants are already folded and merged.
    let render_cfg = TokenizerConfig {
        merge_plural: false,
        ..config.tokenizer.clone()
    };
    let spec = config.shuffle_spec();
    let rendered_record = |variant, rep, body: String| -> Result<VariantRecord> {
        let t = tokenize(&body, &render_cfg);
        variant_record(variant, rep, &body, &t, config, compressor)
    };

    let mut variants = Vec::new();
    for &variant in &config.variants {
        match variant {
            Variant::Original => {
                variants.push(variant_record(
                    variant, None, &doc.body, &tokens, config, compressor,
                )?);
            }
            Variant::Shuffled => {
                for rep in 0..spec.repetitions {
                    let words = shuffle_words(&tokens.words, &spec, &doc.id, rep)?;
                    variants.push(rendered_record(variant, Some(rep), render_words(&words))?);
                }
            }
            Variant::InvertedWords => {
                let words = invert_words(&tokens.words);
                variants.push(rendered_record(variant, None, render_words(&words))?);
            }
            Variant::InvertedLetters => {
                let body = invert_letters(&render_words(&tokens.words));
                variants.push(rendered_record(variant, None, body)?);
            }
        }
    }

    let units = match config.inversion_rendering {
        Rendering::Words => tokens.words.clone(),
        Rendering::Tokens => whitespace_tokens(&doc.body),
    };
    let inversion = if config.has(Variant::InvertedWords) {
        Some(inversion_experiment(&units, compressor, config.lz)?)
    } else {
        None
    };
    let letter_inversion = if config.has(Variant::InvertedLetters) {
        let rendered = render_words(&units);
        let a = compressibility(&rendered, compressor, config.lz)?;
        let b = compressibility(&invert_letters(&rendered), compressor, config.lz)?;
        Some(LetterInversion {
            s: a.s,
            s_inverted: b.s,
            s_zip: a.s_zip,
            s_zip_inverted: b.s_zip,
        })
    } else {
        None
    };
    let shuffle_difference = if config.has(Variant::Shuffled) {
        Some(shuffle_experiment(
            &tokens.words,
            &spec,
            &doc.id,
            config.lz,
        )?)
    } else {
        None
    };

    Ok(TextRecord {
        id: doc.id.clone(),
        whole: WholeRecord {
            words: tokens.total_words,
            inversion,
            letter_inversion,
            shuffle_difference,
        },
        variants,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Table {
    Summary,
    Rare,
    Mu,
    Compress,
    Inversion,
}

impl Table {
    pub const ALL: [Table; 5] = [
        Table::Summary,
        Table::Rare,
        Table::Mu,
        Table::Compress,
        Table::Inversion,
    ];

    pub fn file_stem(self) -> &'static str {
        match self {
            Table::Summary => "summary",
            Table::Rare => "rare",
            Table::Mu => "mu",
            Table::Compress => "compress",
            Table::Inversion => "inversion",
        }
    }
}

/// The quantity a relation compares.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Measure {
    Distinct,
    Rare {
        kappa: usize,
    },
    RareNorm {
        kappa: usize,
    },
    RareMass {
        kappa: usize,
    },
    CommonShare,
    /// `C` against `n_half / 2` for one half.
    CommonVsVocabulary {
        half: usize,
    },
    Mu {
        min_count: usize,
        common_only: bool,
    },
    Letters,
    Yule,
    Punctuation,
    AvgWordLength,
    Sentences,
    SentenceMean,
    SentenceDispersion,
    SentenceEntropy,
    Paragraphs,
    Bytes,
    LzCompressibility,
    ZipCompressibility,
    /// Whole text against its word inversion.
    InversionLz,
    InversionZip,
    LetterInversionLz,
    LetterInversionZip,
    /// Mean of `s(original) − s(shuffled)` against zero.
    ShuffleLz,
}

impl Measure {
    /// Whole-text comparisons, computed once per text.
    fn is_whole_text(self) -> bool {
        matches!(
            self,
            Measure::InversionLz
                | Measure::InversionZip
                | Measure::LetterInversionLz
                | Measure::LetterInversionZip
                | Measure::ShuffleLz
        )
    }

    /// Features that depend on punctuation and layout, which rendered variants lose.
    fn is_structural(self) -> bool {
        matches!(
            self,
            Measure::Punctuation
                | Measure::Sentences
                | Measure::SentenceMean
                | Measure::SentenceDispersion
                | Measure::SentenceEntropy
                | Measure::Paragraphs
        )
    }

    fn applies_to(self, variant: Variant) -> bool {
        variant == Variant::Original || !(self.is_whole_text() || self.is_structural())
    }

    fn half_value(self, h: &HalfRecord) -> std::result::Result<f64, String> {
        let f = &h.features;
        let missing = |what: &str| format!("{what} undefined for this half");
        Ok(match self {
            Measure::Distinct => f.distinct as f64,
            Measure::Rare { kappa } => f.rare.h(kappa) as f64,
            Measure::RareNorm { kappa } => f.rare.h_norm(kappa),
            Measure::RareMass { kappa } => f.rare.rare_mass(kappa) as f64,
            Measure::Mu {
                min_count,
                common_only,
            } => {
                let mu =
                    h.mu.iter()
                        .find(|m| m.min_count == min_count && m.common_only == common_only)
                        .ok_or_else(|| missing("mu"))?;
                return mu
                    .value
                    .ok_or_else(|| mu.error.clone().unwrap_or_else(|| missing("mu")));
            }
            Measure::Letters => f.letters as f64,
            Measure::Yule => f.yule_k.ok_or_else(|| missing("Yule's constant"))?,
            Measure::Punctuation => f.punctuation as f64,
            Measure::AvgWordLength => f.avg_word_length,
            Measure::Sentences => f.sentences as f64,
            Measure::SentenceMean => f.sentence_mean.ok_or_else(|| missing("sentence mean"))?,
            Measure::SentenceDispersion => f
                .sentence_dispersion
                .ok_or_else(|| missing("sentence dispersion"))?,
            Measure::SentenceEntropy => f
                .sentence_entropy
                .ok_or_else(|| missing("sentence entropy"))?,
            Measure::Paragraphs => f.paragraphs as f64,
            Measure::Bytes => f.byte_size as f64,
            Measure::LzCompressibility => h.compress.s,
            Measure::ZipCompressibility => h
                .compress
                .s_zip
                .ok_or_else(|| "no compressor output".to_string())?,
            _ => unreachable!("not a per-half measure"),
        })
    }

    fn extract(
        self,
        text: &TextRecord,
        record: &VariantRecord,
    ) -> std::result::Result<(f64, f64), String> {
        let no_zip = || "no compressor output".to_string();
        match self {
            Measure::CommonShare => Ok((record.common.c1, record.common.c2)),
            Measure::CommonVsVocabulary { half } => Ok((
                record.common.common as f64,
                record.halves[half - 1].features.distinct as f64 / 2.0,
            )),
            Measure::InversionLz | Measure::InversionZip => {
                let inv = text
                    .whole
                    .inversion
                    .as_ref()
                    .ok_or("inversion not computed")?;
                if self == Measure::InversionLz {
                    Ok((inv.s, inv.s_inverted))
                } else {
                    Ok((
                        inv.s_zip.ok_or_else(no_zip)?,
                        inv.s_zip_inverted.ok_or_else(no_zip)?,
                    ))
                }
            }
            Measure::LetterInversionLz | Measure::LetterInversionZip => {
                let inv = text
                    .whole
                    .letter_inversion
                    .as_ref()
                    .ok_or("letter inversion not computed")?;
                if self == Measure::LetterInversionLz {
                    Ok((inv.s, inv.s_inverted))
                } else {
                    Ok((
                        inv.s_zip.ok_or_else(no_zip)?,
                        inv.s_zip_inverted.ok_or_else(no_zip)?,
                    ))
                }
            }
            Measure::ShuffleLz => {
                let diff = text
                    .whole
                    .shuffle_difference
                    .ok_or("shuffle experiment not computed")?;
                Ok((diff, 0.0))
            }
            _ => Ok((
                self.half_value(&record.halves[0])?,
                self.half_value(&record.halves[1])?,
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationSpec {
    pub name: String,
    pub measure: Measure,
    pub direction: Direction,
    pub table: Table,
}

impl RelationSpec {
    fn new(name: impl Into<String>, measure: Measure, direction: Direction, table: Table) -> Self {
        Self {
            name: name.into(),
            measure,
            direction,
            table,
        }
    }

    pub fn applies_to(&self, variant: Variant) -> bool {
        self.measure.applies_to(variant)
    }

    pub fn extract(
        &self,
        text: &TextRecord,
        record: &VariantRecord,
    ) -> std::result::Result<(f64, f64), String> {
        self.measure.extract(text, record)
    }
}

/// All relations evaluated for a run, in table order.
pub fn relation_battery(config: &RunConfig) -> Vec<RelationSpec> {
    use Direction::{FirstGreater as Gt, FirstLess as Lt};
    use Measure as M;
    use Table as T;

    let mut out = vec![
        RelationSpec::new("n1>n2", M::Distinct, Gt, T::Summary),
        RelationSpec::new("c1<c2", M::CommonShare, Lt, T::Summary),
        RelationSpec::new("C<n1/2", M::CommonVsVocabulary { half: 1 }, Lt, T::Summary),
        RelationSpec::new("C<n2/2", M::CommonVsVocabulary { half: 2 }, Lt, T::Summary),
        RelationSpec::new("L1>L2", M::Letters, Gt, T::Summary),
        RelationSpec::new("rho1>rho2", M::Paragraphs, Gt, T::Summary),
        RelationSpec::new("K1<K2", M::Yule, Lt, T::Summary),
        RelationSpec::new("alpha1<alpha2", M::SentenceMean, Lt, T::Summary),
        RelationSpec::new("dalpha1<dalpha2", M::SentenceDispersion, Lt, T::Summary),
        RelationSpec::new("eps1<eps2", M::SentenceEntropy, Lt, T::Summary),
        RelationSpec::new("sigma1>sigma2", M::Sentences, Gt, T::Summary),
        RelationSpec::new("punct1>punct2", M::Punctuation, Gt, T::Summary),
        RelationSpec::new("wordlen1>wordlen2", M::AvgWordLength, Gt, T::Summary),
        RelationSpec::new("bytes1>bytes2", M::Bytes, Gt, T::Summary),
    ];
    for kappa in (1..=config.kappa_max).rev() {
        out.push(RelationSpec::new(
            format!("h1>h2[k={kappa}]"),
            M::Rare { kappa },
            Gt,
            T::Rare,
        ));
        out.push(RelationSpec::new(
            format!("h1/n1>h2/n2[k={kappa}]"),
            M::RareNorm { kappa },
            Gt,
            T::Rare,
        ));
        out.push(RelationSpec::new(
            format!("mass1>mass2[k={kappa}]"),
            M::RareMass { kappa },
            Gt,
            T::Rare,
        ));
    }
    let op = if config.min_count_exclusive {
        ">"
    } else {
        ">="
    };
    for &k in &config.mu_thresholds {
        out.push(RelationSpec::new(
            format!("mu1>mu2[n{op}{k}]"),
            M::Mu {
                min_count: k,
                common_only: false,
            },
            Gt,
            T::Mu,
        ));
        out.push(RelationSpec::new(
            format!("muC1>muC2[n{op}{k}]"),
            M::Mu {
                min_count: k,
                common_only: true,
            },
            Gt,
            T::Mu,
        ));
    }
    out.push(RelationSpec::new(
        "s1<s2[LZ]",
        M::LzCompressibility,
        Lt,
        T::Compress,
    ));
    if config.compressor != CompressorChoice::None {
        out.push(RelationSpec::new(
            "s1<s2[zip]",
            M::ZipCompressibility,
            Lt,
            T::Compress,
        ));
    }
    if config.has(Variant::InvertedWords) {
        out.push(RelationSpec::new(
            "s>s_inv[LZ]",
            M::InversionLz,
            Gt,
            T::Inversion,
        ));
        if config.compressor != CompressorChoice::None {
            out.push(RelationSpec::new(
                "s>s_inv[zip]",
                M::InversionZip,
                Gt,
                T::Inversion,
            ));
        }
    }
    if config.has(Variant::InvertedLetters) {
        out.push(RelationSpec::new(
            "s>s_letters_inv[LZ]",
            M::LetterInversionLz,
            Gt,
            T::Inversion,
        ));
        if config.compressor != CompressorChoice::None {
            out.push(RelationSpec::new(
                "s>s_letters_inv[zip]",
                M::LetterInversionZip,
                Gt,
                T::Inversion,
            ));
        }
    }
    if config.has(Variant::Shuffled) {
        out.push(RelationSpec::new(
            "s-s_shuffled>0[LZ]",
            M::ShuffleLz,
            Gt,
            T::Inversion,
        ));
    }
    out
}

/// One evaluated relation for one variant.
///
/// `w` is oriented so that a positive value supports the relation. For the
/// shuffled variant `w`, `sigma_w`, `percentage` and the pair counts are
/// means over the repetitions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationRow {
    pub variant: Variant,
    pub relation: String,
    pub table: Table,
    pub direction: Direction,
    pub m: f64,
    pub m_effective: f64,
    pub w: Option<f64>,
    pub sigma_w: Option<f64>,
    pub sigma_level: Option<u8>,
    pub percentage: Option<f64>,
    pub threshold: Option<f64>,
    /// Three-sigma rule passed with `W` in the relation's direction.
    pub significant: bool,
    pub excluded: usize,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Exclusion {
    pub variant: Variant,
    pub relation: String,
    pub id: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationEntry {
    pub a: String,
    pub b: String,
    pub r: Option<f64>,
    pub flagged: bool,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTable {
    pub relations: Vec<String>,
    pub texts: usize,
    pub entries: Vec<CorrelationEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompressorInfo {
    pub name: String,
    pub version: String,
    pub settings: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TextFailure {
    pub id: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultBundle {
    pub config: RunConfig,
    pub compressor: Option<CompressorInfo>,
    pub records: Vec<TextRecord>,
    pub failures: Vec<TextFailure>,
    pub rows: Vec<RelationRow>,
    pub exclusions: Vec<Exclusion>,
    pub correlation: CorrelationTable,
    pub warnings: Vec<String>,
}

impl ResultBundle {
    pub fn row(&self, variant: Variant, relation: &str) -> Option<&RelationRow> {
        self.rows
            .iter()
            .find(|r| r.variant == variant && r.relation == relation)
    }

    pub fn rows_in(&self, table: Table) -> impl Iterator<Item = &RelationRow> {
        self.rows.iter().filter(move |r| r.table == table)
    }
}

/// Run the full battery over the manifest named in `config`.
pub fn analyze_corpus(config: &RunConfig) -> Result<ResultBundle> {
    let manifest = CorpusManifest::load(&config.manifest)?;
    analyze_manifest(&manifest, config)
}

pub fn analyze_manifest(manifest: &CorpusManifest, config: &RunConfig) -> Result<ResultBundle> {
    config.validate()?;
    let mut entries: Vec<&ManifestEntry> = manifest.included().collect();
    if entries.is_empty() {
        return Err(Error::EmptyInput("manifest has no included texts"));
    }
    entries.sort_by(|a, b| a.id.cmp(&b.id));
    let markers = BoilerplateMarkers::default();
    let compressor = config.compressor.build();
    let compressor = compressor.as_deref();
    let results: Vec<(String, Result<TextRecord>)> = entries
        .par_iter()
        .map(|entry| {
            let result = prepare_document(&entry.path, config.strip_boilerplate, &markers)
                .and_then(|mut doc| {
                    doc.id = entry.id.clone();
                    analyze_document(&doc, config, compressor)
                });
            (entry.id.clone(), result)
        })
        .collect();
    assemble(results, config, compressor)
}

/// Run the battery over in-memory documents.
pub fn analyze_texts(docs: &[TextDocument], config: &RunConfig) -> Result<ResultBundle> {
    config.validate()?;
    if docs.is_empty() {
        return Err(Error::EmptyInput("no texts to analyze"));
    }
    let mut sorted: Vec<&TextDocument> = docs.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    if let Some(w) = sorted.windows(2).find(|w| w[0].id == w[1].id) {
        return Err(Error::DuplicateId(w[0].id.clone()));
    }
    let compressor = config.compressor.build();
    let compressor = compressor.as_deref();
    let results = sorted
        .par_iter()
        .map(|doc| (doc.id.clone(), analyze_document(doc, config, compressor)))
        .collect();
    assemble(results, config, compressor)
}

fn assemble(
    results: Vec<(String, Result<TextRecord>)>,
    config: &RunConfig,
    compressor: Option<&dyn Compressor>,
) -> Result<ResultBundle> {
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (id, result) in results {
        match result {
            Ok(r) => records.push(r),
            Err(e) => {
                log::warn!("{id}: excluded from analysis: {e}");
                failures.push(TextFailure {
                    id,
                    reason: e.to_string(),
                });
            }
        }
    }

    let mut warnings = Vec::new();
    if records.len() < MIN_TEXTS_FOR_SIGMA_RULE {
        warnings.push(format!(
            "only {} text(s) analyzed; the Gaussian sigma rule is not meaningful below {MIN_TEXTS_FOR_SIGMA_RULE}",
            records.len()
        ));
    }

    let battery = relation_battery(config);
    let mut rows = Vec::new();
    let mut exclusions = Vec::new();
    for &variant in &config.variants {
        for spec in battery.iter().filter(|s| s.applies_to(variant)) {
            rows.push(evaluate(spec, variant, &records, config, &mut exclusions));
        }
    }
    let correlation = correlation_table(&records, config);

    Ok(ResultBundle {
        config: config.clone(),
        compressor: compressor.map(|c| CompressorInfo {
            name: c.name().to_string(),
            version: c.version().to_string(),
            settings: c.settings(),
        }),
        records,
        failures,
        rows,
        exclusions,
        correlation,
        warnings,
    })
}

fn samples_for(
    spec: &RelationSpec,
    variant: Variant,
    records: &[TextRecord],
    repetitions: u32,
    exclusions: &mut Vec<Exclusion>,
) -> Vec<PairedSample> {
    let reps: Vec<Option<u32>> = if variant == Variant::Shuffled && !spec.measure.is_whole_text() {
        (0..repetitions).map(Some).collect()
    } else {
        vec![None]
    };
    let mut excluded_ids = std::collections::BTreeSet::new();
    let samples = reps
        .iter()
        .map(|&rep| {
            let mut pairs = Vec::new();
            for text in records {
                let record = text
                    .variant(variant)
                    .find(|r| rep.is_none() || r.repetition == rep);
                let Some(record) = record else { continue };
                match spec.extract(text, record) {
                    Ok((x1, x2)) => pairs.push((text.id.clone(), x1, x2)),
                    Err(reason) => {
                        if excluded_ids.insert(text.id.clone()) {
                            exclusions.push(Exclusion {
                                variant,
                                relation: spec.name.clone(),
                                id: text.id.clone(),
                                reason,
                            });
                        }
                    }
                }
            }
            PairedSample {
                label: spec.name.clone(),
                pairs,
            }
        })
        .collect();
    samples
}

fn evaluate(
    spec: &RelationSpec,
    variant: Variant,
    records: &[TextRecord],
    config: &RunConfig,
    exclusions: &mut Vec<Exclusion>,
) -> RelationRow {
    let before = exclusions.len();
    let samples = samples_for(
        spec,
        variant,
        records,
        config.shuffle_repetitions,
        exclusions,
    );
    let excluded = exclusions.len() - before;

    let mut row = RelationRow {
        variant,
        relation: spec.name.clone(),
        table: spec.table,
        direction: spec.direction,
        m: mean(samples.iter().map(|s| s.len() as f64)),
        m_effective: 0.0,
        w: None,
        sigma_w: None,
        sigma_level: None,
        percentage: None,
        threshold: None,
        significant: false,
        excluded,
        note: None,
    };

    let outcomes: Vec<_> = samples
        .iter()
        .filter_map(|s| {
            let w = wilcoxon(s).ok()?;
            let p = sign_percentage(s, spec.direction).ok()?;
            Some((w, p))
        })
        .collect();
    if outcomes.is_empty() {
        row.note = Some(if samples.iter().all(PairedSample::is_empty) {
            "no texts with a defined value".to_string()
        } else {
            "all differences are zero".to_string()
        });
        return row;
    }

    let orient = spec.direction.orientation();
    let w = mean(outcomes.iter().map(|(w, _)| orient * w.w));
    let sigma = mean(outcomes.iter().map(|(w, _)| w.sigma_w));
    let level = crate::stats::sigma_level(w, sigma);
    row.m_effective = mean(outcomes.iter().map(|(w, _)| w.m_effective as f64));
    row.w = Some(w);
    row.sigma_w = Some(sigma);
    row.sigma_level = Some(level);
    row.percentage = Some(mean(outcomes.iter().map(|(_, p)| p.fraction)));
    row.threshold = Some(crate::stats::percentage_threshold(row.m.round() as usize));
    row.significant = level >= SIGNIFICANCE_LEVEL && w > 0.0;
    if outcomes.len() < samples.len() {
        row.note = Some(format!(
            "{} of {} repetitions had only zero differences",
            samples.len() - outcomes.len(),
            samples.len()
        ));
    } else if (row.m as usize) < MIN_TEXTS_FOR_SIGMA_RULE {
        row.note = Some(format!(
            "M < {MIN_TEXTS_FOR_SIGMA_RULE}: sigma rule not meaningful"
        ));
    }
    row
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// Relations whose per-text outcomes are correlated.
pub fn correlation_relations(config: &RunConfig) -> Vec<RelationSpec> {
    use Direction::{FirstGreater as Gt, FirstLess as Lt};
    let k = config.mu_thresholds[0];
    let (s_name, s_measure) = if config.compressor == CompressorChoice::None {
        ("s1<s2[LZ]", Measure::LzCompressibility)
    } else {
        ("s1<s2[zip]", Measure::ZipCompressibility)
    };
    vec![
        RelationSpec::new("n1>n2", Measure::Distinct, Gt, Table::Summary),
        RelationSpec::new("h1>h2[k=1]", Measure::Rare { kappa: 1 }, Gt, Table::Rare),
        RelationSpec::new("L1>L2", Measure::Letters, Gt, Table::Summary),
        RelationSpec::new(
            "h1/n1>h2/n2[k=1]",
            Measure::RareNorm { kappa: 1 },
            Gt,
            Table::Rare,
        ),
        RelationSpec::new(
            format!("mu1>mu2[n>={k}]"),
            Measure::Mu {
                min_count: k,
                common_only: false,
            },
            Gt,
            Table::Mu,
        ),
        RelationSpec::new(
            format!("muC1>muC2[n>={k}]"),
            Measure::Mu {
                min_count: k,
                common_only: true,
            },
            Gt,
            Table::Mu,
        ),
        RelationSpec::new(s_name, s_measure, Lt, Table::Compress),
    ]
}

/// Indicator matrix over the original variant, restricted to texts where
/// every correlated relation is defined.
pub fn indicator_matrix(records: &[TextRecord], config: &RunConfig) -> IndicatorMatrix {
    let specs = correlation_relations(config);
    let mut texts = Vec::new();
    let mut columns = vec![Vec::new(); specs.len()];
    for text in records {
        let Some(record) = text.variant(Variant::Original).next() else {
            continue;
        };
        let outcomes: Option<Vec<bool>> = specs
            .iter()
            .map(|s| {
                s.extract(text, record)
                    .ok()
                    .map(|(a, b)| s.direction.holds(a, b))
            })
            .collect();
        if let Some(outcomes) = outcomes {
            texts.push(text.id.clone());
            for (col, v) in columns.iter_mut().zip(outcomes) {
                col.push(v);
            }
        }
    }
    IndicatorMatrix {
        relations: specs.into_iter().map(|s| s.name).collect(),
        texts,
        columns,
    }
}

fn correlation_table(records: &[TextRecord], config: &RunConfig) -> CorrelationTable {
    if !config.has(Variant::Original) {
        return CorrelationTable::default();
    }
    let matrix = indicator_matrix(records, config);
    let mut entries = Vec::new();
    for a in 0..matrix.relations.len() {
        for b in a + 1..matrix.relations.len() {
            let r = pearson_indicator(&matrix, a, b);
            entries.push(CorrelationEntry {
                a: matrix.relations[a].clone(),
                b: matrix.relations[b].clone(),
                flagged: r.as_ref().is_ok_and(|r| r.abs() > CORRELATION_FLAG),
                note: r.as_ref().err().map(|e| e.to_string()),
                r: r.ok(),
            });
        }
    }
    CorrelationTable {
        relations: matrix.relations,
        texts: matrix.texts.len(),
        entries,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableFormat {
    Csv,
    Markdown,
}

impl FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "md" | "markdown" => Ok(TableFormat::Markdown),
            other => Err(Error::InvalidConfig(format!(
                "unknown table format `{other}`"
            ))),
        }
    }
}

#[derive(Serialize)]
struct RunEcho<'a> {
    config: &'a RunConfig,
    compressor: &'a Option<CompressorInfo>,
    texts: usize,
    failures: &'a [TextFailure],
    warnings: &'a [String],
}

#[derive(Serialize)]
struct HalfLine<'a> {
    id: &'a str,
    variant: Variant,
    repetition: Option<u32>,
    half: u8,
    dropped_middle: bool,
    common: &'a CommonWordStats,
    #[serde(flatten)]
    record: &'a HalfRecord,
}

#[derive(Serialize)]
struct WholeLine<'a> {
    id: &'a str,
    whole: &'a WholeRecord,
}

/// Serialize the per-text records as JSON Lines, preceded by a config line.
pub fn results_jsonl(bundle: &ResultBundle) -> Result<String> {
    let mut out = serde_json::to_string(&serde_json::json!({ "config": bundle.config }))?;
    out.push('\n');
    for text in &bundle.records {
        out.push_str(&serde_json::to_string(&WholeLine {
            id: &text.id,
            whole: &text.whole,
        })?);
        out.push('\n');
        for v in &text.variants {
            for (i, half) in v.halves.iter().enumerate() {
                out.push_str(&serde_json::to_string(&HalfLine {
                    id: &text.id,
                    variant: v.variant,
                    repetition: v.repetition,
                    half: i as u8 + 1,
                    dropped_middle: v.dropped_middle,
                    common: &v.common,
                    record: half,
                })?);
                out.push('\n');
            }
        }
    }
    Ok(out)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

const RELATION_CSV_HEADER: &str =
    "variant,relation,direction,M,M_effective,W,sigma_W,p,sigma_rule,percentage,threshold,significant,excluded,note";

pub fn relation_csv(rows: &[&RelationRow], config_json: &str) -> String {
    let mut out = format!("# config: {config_json}\n{RELATION_CSV_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.variant,
            csv_field(&r.relation),
            r.direction.symbol(),
            r.m,
            r.m_effective,
            opt(r.w),
            opt(r.sigma_w),
            r.sigma_level.map(|p| p.to_string()).unwrap_or_default(),
            r.sigma_level.map(sigma_label).unwrap_or_default(),
            opt(r.percentage),
            opt(r.threshold),
            r.significant,
            r.excluded,
            csv_field(r.note.as_deref().unwrap_or("")),
        );
    }
    out
}

pub fn relation_markdown(title: &str, rows: &[&RelationRow], config_json: &str) -> String {
    let mut out = format!("# {title}\n\nconfig: `{config_json}`\n\n");
    out.push_str("| variant | relation | M | W | \\|W\\|>pσ_W | % | threshold |\n");
    out.push_str("|---|---|---|---|---|---|---|\n");
    for r in rows {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} | {} |",
            r.variant,
            r.relation.replace('|', "\\|"),
            r.m,
            r.w.map(|w| format!("{w:.1}"))
                .unwrap_or_else(|| "n/a".into()),
            r.sigma_level
                .map(sigma_label)
                .unwrap_or_else(|| "n/a".into()),
            r.percentage
                .map(|p| format!("{p:.6}"))
                .unwrap_or_else(|| "n/a".into()),
            r.threshold
                .map(|t| format!("{t:.4}"))
                .unwrap_or_else(|| "n/a".into()),
        );
    }
    out
}

pub fn correlation_csv(c: &CorrelationTable, config_json: &str) -> String {
    let mut out = format!(
        "# config: {config_json}\n# texts: {}\na,b,r,flagged,note\n",
        c.texts
    );
    for e in &c.entries {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            csv_field(&e.a),
            csv_field(&e.b),
            opt(e.r),
            e.flagged,
            csv_field(e.note.as_deref().unwrap_or(""))
        );
    }
    out
}

/// Upper-triangular matrix; entries above the flag threshold are underlined.
pub fn correlation_markdown(c: &CorrelationTable, config_json: &str) -> String {
    let mut out = format!(
        "# Indicator correlations\n\nconfig: `{config_json}`\n\ntexts: {}\n\n",
        c.texts
    );
    if c.relations.len() < 2 {
        out.push_str("(no relations)\n");
        return out;
    }
    let cols = &c.relations[1..];
    let esc = |s: &str| s.replace('|', "\\|");
    out.push_str("| |");
    for col in cols {
        let _ = write!(out, " ν({}) |", esc(col));
    }
    out.push_str("\n|---|");
    out.push_str(&"---|".repeat(cols.len()));
    out.push('\n');
    let lookup: BTreeMap<(&str, &str), &CorrelationEntry> = c
        .entries
        .iter()
        .map(|e| ((e.a.as_str(), e.b.as_str()), e))
        .collect();
    for row in &c.relations[..c.relations.len() - 1] {
        let _ = write!(out, "| ν({}) |", esc(row));
        for col in cols {
            let cell = match lookup.get(&(row.as_str(), col.as_str())) {
                Some(CorrelationEntry {
                    r: Some(r),
                    flagged,
                    ..
                }) => {
                    if *flagged {
                        format!("<u>{r:.6}</u>")
                    } else {
                        format!("{r:.6}")
                    }
                }
                Some(_) => "n/a".to_string(),
                None => "--".to_string(),
            };
            let _ = write!(out, " {cell} |");
        }
        out.push('\n');
    }
    out
}

fn exclusions_csv(bundle: &ResultBundle) -> String {
    let mut out = String::from("variant,relation,id,reason\n");
    for e in &bundle.exclusions {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            e.variant,
            csv_field(&e.relation),
            csv_field(&e.id),
            csv_field(&e.reason)
        );
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Write `run.json`, `results.jsonl` and `tables/*` under `out_dir`.
/// Returns the paths written, in order.
pub fn emit_tables(
    bundle: &ResultBundle,
    out_dir: &Path,
    formats: &[TableFormat],
) -> Result<Vec<PathBuf>> {
    let tables_dir = out_dir.join("tables");
    fs::create_dir_all(&tables_dir).map_err(|e| Error::io(&tables_dir, e))?;
    let config_json = serde_json::to_string(&bundle.config)?;
    let mut written = Vec::new();
    let mut put = |path: PathBuf, contents: &str| -> Result<()> {
        write_file(&path, contents)?;
        written.push(path);
        Ok(())
    };

    let echo = RunEcho {
        config: &bundle.config,
        compressor: &bundle.compressor,
        texts: bundle.records.len(),
        failures: &bundle.failures,
        warnings: &bundle.warnings,
    };
    put(
        out_dir.join("run.json"),
        &(serde_json::to_string_pretty(&echo)? + "\n"),
    )?;
    put(out_dir.join("results.jsonl"), &results_jsonl(bundle)?)?;

    for table in Table::ALL {
        let rows: Vec<&RelationRow> = bundle.rows_in(table).collect();
        for format in formats {
            match format {
                TableFormat::Csv => put(
                    tables_dir.join(format!("{}.csv", table.file_stem())),
                    &relation_csv(&rows, &config_json),
                )?,
                TableFormat::Markdown => put(
                    tables_dir.join(format!("{}.md", table.file_stem())),
                    &relation_markdown(table.file_stem(), &rows, &config_json),
                )?,
            }
        }
    }
    for format in formats {
        match format {
            TableFormat::Csv => put(
                tables_dir.join("correlation.csv"),
                &correlation_csv(&bundle.correlation, &config_json),
            )?,
            TableFormat::Markdown => put(
                tables_dir.join("correlation.md"),
                &correlation_markdown(&bundle.correlation, &config_json),
            )?,
        }
    }
    put(tables_dir.join("exclusions.csv"), &exclusions_csv(bundle))?;
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: &str, body: &str) -> TextDocument {
        TextDocument::new(id, body)
    }

    fn small_config() -> RunConfig {
        RunConfig {
            mu_thresholds: vec![2, 3],
            shuffle_repetitions: 3,
            ..RunConfig::new("unused")
        }
    }

    const STORY: &str = "The old man walked to the sea. The sea was calm, and the man was tired.\n\n\
        He sat on a stone. A gull came; the gull looked at him! Then the gull flew away, and he slept.";

    #[test]
    fn battery_covers_qualitative_rows() {
        let names: Vec<String> = relation_battery(&RunConfig::new("m"))
            .into_iter()
            .map(|s| s.name)
            .collect();
        for expected in [
            "n1>n2",
            "h1>h2[k=1]",
            "h1/n1>h2/n2[k=5]",
            "s1<s2[LZ]",
            "s1<s2[zip]",
            "c1<c2",
            "mu1>mu2[n>=15]",
            "muC1>muC2[n>=30]",
            "L1>L2",
            "K1<K2",
            "punct1>punct2",
            "wordlen1>wordlen2",
            "sigma1>sigma2",
            "alpha1<alpha2",
            "rho1>rho2",
            "bytes1>bytes2",
            "s>s_inv[LZ]",
            "C<n1/2",
        ] {
            assert!(names.iter().any(|n| n == expected), "missing {expected}");
        }
        let exclusive = RunConfig {
            min_count_exclusive: true,
            ..RunConfig::new("m")
        };
        assert!(relation_battery(&exclusive)
            .iter()
            .any(|s| s.name == "mu1>mu2[n>15]"));
    }

    #[test]
    fn document_record_shape() {
        let cfg = small_config();
        let rec = analyze_document(&doc("story", STORY), &cfg, Some(&Deflate::default())).unwrap();
        // original + 3 shuffles + 2 inversions
        assert_eq!(rec.variants.len(), 6);
        let original = &rec.variants[0];
        assert_eq!(original.variant, Variant::Original);
        let [a, b] = &original.halves;
        assert_eq!(a.features.words, b.features.words);
        assert_eq!(
            a.features.words * 2 + usize::from(original.dropped_middle),
            rec.whole.words
        );
        assert!(a.features.sentences >= 2);
        assert!(rec.whole.inversion.is_some());
        assert!(rec.whole.shuffle_difference.is_some());
        let shuffled = rec
            .variants
            .iter()
            .filter(|v| v.variant == Variant::Shuffled)
            .count();
        assert_eq!(shuffled, 3);
    }

    #[test]
    fn too_short_documents_fail_softly() {
        let cfg = small_config();
        let docs = vec![doc("a", STORY), doc("b", "word")];
        let bundle = analyze_texts(&docs, &cfg).unwrap();
        assert_eq!(bundle.records.len(), 1);
        assert_eq!(bundle.failures.len(), 1);
        assert_eq!(bundle.failures[0].id, "b");
        let row = bundle.row(Variant::Original, "n1>n2").unwrap();
        assert_eq!(row.m, 1.0);
        assert!(!bundle.warnings.is_empty());
    }

    #[test]
    fn empty_inputs_rejected() {
        assert!(analyze_texts(&[], &small_config()).is_err());
        let dup = vec![doc("a", STORY), doc("a", STORY)];
        assert!(matches!(
            analyze_texts(&dup, &small_config()),
            Err(Error::DuplicateId(_))
        ));
        let bad = RunConfig {
            variants: vec![],
            ..small_config()
        };
        assert!(analyze_texts(&[doc("a", STORY)], &bad).is_err());
    }

    #[test]
    fn structural_relations_only_for_original() {
        let cfg = small_config();
        let bundle = analyze_texts(
            &[doc("a", STORY), doc("b", &STORY.replace("gull", "crow"))],
            &cfg,
        )
        .unwrap();
        assert!(bundle.row(Variant::Original, "sigma1>sigma2").is_some());
        assert!(bundle.row(Variant::Shuffled, "sigma1>sigma2").is_none());
        assert!(bundle.row(Variant::Shuffled, "n1>n2").is_some());
        assert!(bundle.row(Variant::Shuffled, "s>s_inv[LZ]").is_none());
    }

    #[test]
    fn variants_parse() {
        for v in Variant::ALL {
            assert_eq!(v.as_str().parse::<Variant>().unwrap(), v);
        }
        assert!("reversed".parse::<Variant>().is_err());
        assert_eq!(
            "none".parse::<CompressorChoice>().unwrap(),
            CompressorChoice::None
        );
    }
}
