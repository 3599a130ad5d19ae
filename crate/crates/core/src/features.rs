//! Lexical statistics of a word sequence: frequency spectrum, rare words,
//! common words and Yule's constant.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tokenize::{sentence_stats, TokenizedText};

pub const DEFAULT_KAPPA_MAX: usize = 5;

/// Occurrence count of every word type.
pub fn word_counts<S: AsRef<str>>(words: &[S]) -> HashMap<&str, usize> {
    let mut counts = HashMap::new();
    for w in words {
        *counts.entry(w.as_ref()).or_insert(0) += 1;
    }
    counts
}

/// `counts[m]` is the number of distinct words occurring exactly `m` times.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencySpectrum {
    pub counts: BTreeMap<usize, usize>,
    /// Total number of words.
    pub total: usize,
    /// Number of distinct words.
    pub distinct: usize,
    /// Occurrence count of the most frequent word.
    pub max_count: usize,
}

impl FrequencySpectrum {
    /// Number of word types with exactly `m` occurrences.
    pub fn v(&self, m: usize) -> usize {
        self.counts.get(&m).copied().unwrap_or(0)
    }

    /// Both conservation identities: `Σ V_m = n` and `Σ m·V_m = N`.
    pub fn is_conserved(&self) -> bool {
        self.counts.values().sum::<usize>() == self.distinct
            && self.counts.iter().map(|(m, v)| m * v).sum::<usize>() == self.total
            && self.counts.keys().next_back().copied() == Some(self.max_count)
    }
}

pub fn spectrum<S: AsRef<str>>(words: &[S]) -> Result<FrequencySpectrum> {
    if words.is_empty() {
        return Err(Error::EmptyInput(
            "frequency spectrum of an empty word list",
        ));
    }
    let per_word = word_counts(words);
    let mut counts = BTreeMap::new();
    for &c in per_word.values() {
        *counts.entry(c).or_insert(0) += 1;
    }
    Ok(FrequencySpectrum {
        max_count: counts.keys().next_back().copied().unwrap_or(0),
        counts,
        total: words.len(),
        distinct: per_word.len(),
    })
}

/// Rare-word counts for `κ = 1..=kappa_max`; index `κ - 1` holds the value for `κ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RareCounts {
    /// `h(κ) = Σ_{m ≤ κ} V_m`, words occurring at most `κ` times.
    pub h: Vec<usize>,
    /// `h(κ) / n`.
    pub h_norm: Vec<f64>,
    /// `Σ_{m ≤ κ} m·V_m`, occurrences of those words.
    pub rare_mass: Vec<usize>,
}

impl RareCounts {
    pub fn h(&self, kappa: usize) -> usize {
        self.h[kappa - 1]
    }

    pub fn h_norm(&self, kappa: usize) -> f64 {
        self.h_norm[kappa - 1]
    }

    pub fn rare_mass(&self, kappa: usize) -> usize {
        self.rare_mass[kappa - 1]
    }
}

pub fn rare_counts(s: &FrequencySpectrum, kappa_max: usize) -> RareCounts {
    let mut h = Vec::with_capacity(kappa_max);
    let mut rare_mass = Vec::with_capacity(kappa_max);
    let (mut types, mut tokens) = (0, 0);
    for m in 1..=kappa_max {
        types += s.v(m);
        tokens += m * s.v(m);
        h.push(types);
        rare_mass.push(tokens);
    }
    let h_norm = h.iter().map(|&x| x as f64 / s.distinct as f64).collect();
    RareCounts {
        h,
        h_norm,
        rare_mass,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommonWordStats {
    /// Word types present in both halves.
    pub common: usize,
    /// Fraction of first-half tokens that are common types.
    pub c1: f64,
    /// Fraction of second-half tokens that are common types.
    pub c2: f64,
}

pub fn common_words<S: AsRef<str>>(first: &[S], second: &[S]) -> Result<CommonWordStats> {
    if first.is_empty() || second.is_empty() {
        return Err(Error::EmptyInput("common words need two non-empty halves"));
    }
    let types1: HashSet<&str> = first.iter().map(AsRef::as_ref).collect();
    let types2: HashSet<&str> = second.iter().map(AsRef::as_ref).collect();
    let common: HashSet<&str> = types1.intersection(&types2).copied().collect();
    let share = |half: &[S]| {
        half.iter().filter(|w| common.contains(w.as_ref())).count() as f64 / half.len() as f64
    };
    Ok(CommonWordStats {
        common: common.len(),
        c1: share(first),
        c2: share(second),
    })
}

/// Yule's constant `K = 100·(Σ_m V_m·m² − N) / N²`.
///
/// The numerator is accumulated in integers, so texts with no repeated word
/// give exactly 0.
pub fn yule_k(s: &FrequencySpectrum) -> Result<f64> {
    if s.total < 2 {
        return Err(Error::TooFewWords {
            needed: 2,
            found: s.total,
        });
    }
    let sum_sq: u128 = s
        .counts
        .iter()
        .map(|(&m, &v)| (m as u128) * (m as u128) * v as u128)
        .sum();
    let n = s.total as u128;
    Ok(100.0 * (sum_sq - n) as f64 / (n * n) as f64)
}

/// Yule's constant with the `1/n` factor that the traditional form omits.
pub fn yule_k_per_type(s: &FrequencySpectrum) -> Result<f64> {
    Ok(yule_k(s)? / s.distinct as f64)
}

/// Entropy (natural log) of the distribution `V_m / n` over `m`.
pub fn spectrum_entropy(s: &FrequencySpectrum) -> f64 {
    let n = s.distinct as f64;
    let h: f64 = s
        .counts
        .values()
        .map(|&v| {
            let p = v as f64 / n;
            p * p.ln()
        })
        .sum();
    0.0 - h
}

/// Everything computed for one half of a text from its own words.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfFeatures {
    pub words: usize,
    pub distinct: usize,
    pub rare: RareCounts,
    pub letters: usize,
    pub yule_k: Option<f64>,
    pub spectrum_entropy: f64,
    pub max_count: usize,
    pub punctuation: usize,
    pub sentences: usize,
    pub sentence_mean: Option<f64>,
    pub sentence_dispersion: Option<f64>,
    pub sentence_entropy: Option<f64>,
    pub paragraphs: usize,
    pub avg_word_length: f64,
    pub byte_size: usize,
}

impl HalfFeatures {
    /// `yule_per_type` switches Yule's constant to the `1/n`-scaled form.
    pub fn compute(text: &TokenizedText, kappa_max: usize, yule_per_type: bool) -> Result<Self> {
        let spec = spectrum(&text.words)?;
        let rare = rare_counts(&spec, kappa_max);
        let yule = if yule_per_type {
            yule_k_per_type(&spec).ok()
        } else {
            yule_k(&spec).ok()
        };
        let sentences = sentence_stats(text).ok();
        Ok(Self {
            words: spec.total,
            distinct: spec.distinct,
            rare,
            letters: text.letter_count,
            yule_k: yule,
            spectrum_entropy: spectrum_entropy(&spec),
            max_count: spec.max_count,
            punctuation: text.punctuation_count,
            sentences: text.sentence_count(),
            sentence_mean: sentences.map(|s| s.mean),
            sentence_dispersion: sentences.map(|s| s.dispersion),
            sentence_entropy: sentences.map(|s| s.entropy),
            paragraphs: text.paragraph_count,
            avg_word_length: text.avg_word_length,
            byte_size: text.byte_size,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Vec<&str> {
        s.split_whitespace().collect()
    }

    #[test]
    fn spectrum_hand_counts() {
        let s = spectrum(&w("a a b c d d")).unwrap();
        assert_eq!(s.counts, BTreeMap::from([(1, 2), (2, 2)]));
        assert_eq!((s.distinct, s.total, s.max_count), (4, 6, 2));
        assert!(s.is_conserved());

        let s = spectrum(&w("a")).unwrap();
        assert_eq!((s.v(1), s.distinct, s.total), (1, 1, 1));
        assert!(spectrum::<&str>(&[]).is_err());
    }

    #[test]
    fn spectrum_with_sparse_top_counts() {
        // Top of a 11612-word, 2012-type half: three words with 929, 574 and
        // 387 occurrences and nothing in between.
        let mut words: Vec<String> = Vec::new();
        for (word, count) in [("the", 929), ("and", 574), ("of", 387)] {
            words.extend(std::iter::repeat(word.to_string()).take(count));
        }
        // 2009 low-frequency types fill the rest of the half.
        let remaining = 11_612 - 929 - 574 - 387;
        let types = 2_009;
        let base = remaining / types;
        let extra = remaining % types;
        for t in 0..types {
            let c = base + usize::from(t < extra);
            words.extend(std::iter::repeat(format!("w{t}")).take(c));
        }
        let s = spectrum(&words).unwrap();
        assert_eq!((s.total, s.distinct, s.max_count), (11_612, 2_012, 929));
        assert_eq!((s.v(929), s.v(574), s.v(387)), (1, 1, 1));
        assert!((575..=928).all(|m| s.v(m) == 0));
        assert!((388..=573).all(|m| s.v(m) == 0));
        assert!(s.is_conserved());
    }

    #[test]
    fn rare_counts_hand_computed() {
        let s = spectrum(&w("a b c c d d d")).unwrap();
        let r = rare_counts(&s, 5);
        assert_eq!(r.h(1), 2);
        assert_eq!(r.h(2), 3);
        assert_eq!(r.h_norm(2), 0.75);
        assert_eq!(r.rare_mass(2), 4);
        assert_eq!(r.h, [2, 3, 4, 4, 4]);

        let r = rare_counts(&spectrum(&w("a b c")).unwrap(), 5);
        assert_eq!((r.h(1), r.h_norm(1)), (3, 1.0));

        let r = rare_counts(&spectrum(&["x"; 10]).unwrap(), 5);
        assert!(r.h.iter().all(|&h| h == 0));
    }

    #[test]
    fn common_word_stats() {
        let c = common_words(&w("a a b c"), &w("b b c d")).unwrap();
        assert_eq!((c.common, c.c1, c.c2), (2, 0.5, 0.75));
        let c = common_words(&w("a b b"), &w("b a a")).unwrap();
        assert_eq!((c.common, c.c1, c.c2), (2, 1.0, 1.0));
        let c = common_words(&w("a b"), &w("c d")).unwrap();
        assert_eq!((c.common, c.c1, c.c2), (0, 0.0, 0.0));
        assert!(common_words(&w(""), &w("a")).is_err());
    }

    #[test]
    fn yule_constant() {
        let k = yule_k(&spectrum(&w("a a b")).unwrap()).unwrap();
        assert!((k - 200.0 / 9.0).abs() < 1e-12);
        let k = yule_k(&spectrum(&vec!["x"; 1000]).unwrap()).unwrap();
        assert!((k - 100.0 * (1.0 - 1.0 / 1000.0)).abs() < 1e-12);
        assert_eq!(yule_k(&spectrum(&w("a b c d e")).unwrap()).unwrap(), 0.0);
        assert!(yule_k(&spectrum(&w("a")).unwrap()).is_err());
        let s = spectrum(&w("a a b")).unwrap();
        assert_eq!(yule_k_per_type(&s).unwrap(), yule_k(&s).unwrap() / 2.0);
    }

    #[test]
    fn spectrum_entropies() {
        assert_eq!(spectrum_entropy(&spectrum(&w("a b c")).unwrap()), 0.0);
        assert_eq!(spectrum_entropy(&spectrum(&w("a")).unwrap()), 0.0);
        let e = spectrum_entropy(&spectrum(&w("a b c c d d")).unwrap());
        assert!((e - std::f64::consts::LN_2).abs() < 1e-15);
    }
}
