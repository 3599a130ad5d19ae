//! Spatial period of words and the distance `μ` between word frequency and
//! inverse period.
//!
//! For a word occurring `ℓ` times at positions `p_1 < … < p_ℓ` in a half of
//! `N` words, the average period is the mean gap `t = (p_ℓ − p_1)/(ℓ − 1)`,
//! `g = 1/t`, and `f = ℓ/N`. A word placed evenly through the half has
//! `g ≈ f`; clustered words have `g > f`.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_MU_THRESHOLDS: [usize; 3] = [15, 20, 30];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordOccurrences {
    pub word: String,
    /// 1-based, strictly increasing positions in the half.
    pub positions: Vec<usize>,
}

impl WordOccurrences {
    pub fn count(&self) -> usize {
        self.positions.len()
    }
}

/// Positions of every word type, ordered by word.
pub fn occurrences<S: AsRef<str>>(words: &[S]) -> Vec<WordOccurrences> {
    let mut map: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, w) in words.iter().enumerate() {
        map.entry(w.as_ref()).or_default().push(i + 1);
    }
    map.into_iter()
        .map(|(word, positions)| WordOccurrences {
            word: word.to_string(),
            positions,
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodStats {
    /// `ℓ / N`.
    pub frequency: f64,
    /// Average period `t`, in words.
    pub period: f64,
    /// `g = 1/t`.
    pub inverse_period: f64,
    /// Average characteristic frequency: mean of the reciprocal gaps.
    pub mean_char_freq: f64,
}

pub fn period_stats(occ: &WordOccurrences, half_len: usize) -> Result<PeriodStats> {
    let l = occ.count();
    if l < 2 {
        return Err(Error::PeriodUndefined {
            word: occ.word.clone(),
            count: l,
        });
    }
    debug_assert!(occ.positions.windows(2).all(|p| p[0] < p[1]));
    let gaps = occ.positions.windows(2).map(|p| p[1] - p[0]);
    let span = occ.positions[l - 1] - occ.positions[0];
    let period = span as f64 / (l - 1) as f64;
    let mean_char_freq = gaps.map(|g| 1.0 / g as f64).sum::<f64>() / (l - 1) as f64;
    Ok(PeriodStats {
        frequency: l as f64 / half_len as f64,
        period,
        inverse_period: 1.0 / period,
        mean_char_freq,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuConfig {
    /// Minimal occurrence count `k` for a word to enter `Ω`.
    pub min_count: usize,
    /// Restrict `Ω` to words present in both halves.
    pub common_only: bool,
    /// Use `count > k` instead of `count ≥ k`.
    pub exclusive: bool,
}

impl MuConfig {
    pub fn new(min_count: usize, common_only: bool) -> Result<Self> {
        let cfg = Self {
            min_count,
            common_only,
            exclusive: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_count < 2 {
            return Err(Error::InvalidConfig(format!(
                "mu needs min_count >= 2, got {}",
                self.min_count
            )));
        }
        Ok(())
    }

    fn admits(&self, count: usize) -> bool {
        if self.exclusive {
            count > self.min_count
        } else {
            count >= self.min_count
        }
    }
}

/// `μ = (1/|Ω|) Σ_{w∈Ω} |f(w) − g(w)|` over one half.
///
/// `common_types` must be given when `config.common_only` is set.
pub fn mu<S: AsRef<str>>(
    words: &[S],
    config: &MuConfig,
    common_types: Option<&HashSet<String>>,
) -> Result<f64> {
    config.validate()?;
    if config.common_only && common_types.is_none() {
        return Err(Error::InvalidConfig(
            "common-only mu requires the set of common word types".into(),
        ));
    }
    let mut total = 0.0;
    let mut omega = 0usize;
    for occ in occurrences(words) {
        if !config.admits(occ.count()) {
            continue;
        }
        if config.common_only && !common_types.is_some_and(|c| c.contains(&occ.word)) {
            continue;
        }
        let p = period_stats(&occ, words.len())?;
        total += (p.frequency - p.inverse_period).abs();
        omega += 1;
    }
    if omega == 0 {
        return Err(Error::Undefined(format!(
            "mu: no word reaches {} occurrences{}",
            config.min_count,
            if config.common_only {
                " among common words"
            } else {
                ""
            }
        )));
    }
    Ok(total / omega as f64)
}

/// Word types present in both halves.
pub fn common_types<S: AsRef<str>>(first: &[S], second: &[S]) -> HashSet<String> {
    let a: HashSet<&str> = first.iter().map(AsRef::as_ref).collect();
    second
        .iter()
        .map(AsRef::as_ref)
        .filter(|w| a.contains(w))
        .map(str::to_string)
        .collect()
}
