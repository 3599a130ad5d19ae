//! Corpus-level inference on paired per-text values.
//!
//! For every text `i` a relation yields a pair `(x1_i, x2_i)`, the values of a
//! feature on the first and second half. The Wilcoxon signed-rank statistic
//! `W = Σ R_i·sgn(x2_i − x1_i)` ranks the nonzero `|x2_i − x1_i|` in
//! increasing order; under the symmetric null its variance is
//! `M(M+1)(2M+1)/6`, and the null is rejected at level `p` when
//! `|W| > p·σ_W`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Highest sigma level reported.
pub const MAX_SIGMA_LEVEL: u8 = 5;
/// Sigma level required to call a relation significant.
pub const SIGNIFICANCE_LEVEL: u8 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// The relation claims `x1 > x2`.
    FirstGreater,
    /// The relation claims `x1 < x2`.
    FirstLess,
}

impl Direction {
    pub fn holds(self, x1: f64, x2: f64) -> bool {
        match self {
            Direction::FirstGreater => x1 > x2,
            Direction::FirstLess => x1 < x2,
        }
    }

    /// Sign that turns `W` (computed on `x2 − x1`) into a value that is
    /// positive when the relation holds.
    pub fn orientation(self) -> f64 {
        match self {
            Direction::FirstGreater => -1.0,
            Direction::FirstLess => 1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Direction::FirstGreater => ">",
            Direction::FirstLess => "<",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PairedSample {
    pub label: String,
    /// `(text id, x1, x2)`.
    pub pairs: Vec<(String, f64, f64)>,
}

impl PairedSample {
    pub fn new(label: impl Into<String>, pairs: Vec<(String, f64, f64)>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (id, _, _) in &pairs {
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        Ok(Self {
            label: label.into(),
            pairs,
        })
    }

    /// Build from bare values, numbering the pairs.
    pub fn from_values(label: impl Into<String>, x1: &[f64], x2: &[f64]) -> Self {
        assert_eq!(x1.len(), x2.len(), "paired samples must have equal length");
        Self {
            label: label.into(),
            pairs: x1
                .iter()
                .zip(x2)
                .enumerate()
                .map(|(i, (&a, &b))| (i.to_string(), a, b))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            label: self.label.clone(),
            pairs: self
                .pairs
                .iter()
                .map(|(id, a, b)| (id.clone(), lambda * a, lambda * b))
                .collect(),
        }
    }

    pub fn swapped(&self) -> Self {
        Self {
            label: self.label.clone(),
            pairs: self
                .pairs
                .iter()
                .map(|(id, a, b)| (id.clone(), *b, *a))
                .collect(),
        }
    }
}

/// `0.5 + 3/(2√M)`, the fraction a sign count must exceed under the 3σ rule.
pub fn percentage_threshold(m: usize) -> f64 {
    0.5 + 3.0 / (2.0 * (m as f64).sqrt())
}

/// `σ_W(M) = √(M(M+1)(2M+1)/6)`.
pub fn sigma_w(m: usize) -> f64 {
    let m = m as f64;
    (m * (m + 1.0) * (2.0 * m + 1.0) / 6.0).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignPercentage {
    pub fraction: f64,
    pub threshold: f64,
}

/// Fraction of non-tied pairs for which `direction` holds.
pub fn sign_percentage(s: &PairedSample, direction: Direction) -> Result<SignPercentage> {
    if s.is_empty() {
        return Err(Error::EmptyInput("sign percentage of an empty sample"));
    }
    let (mut hits, mut untied) = (0usize, 0usize);
    for &(_, x1, x2) in &s.pairs {
        if x1 != x2 {
            untied += 1;
            hits += usize::from(direction.holds(x1, x2));
        }
    }
    if untied == 0 {
        return Err(Error::Undefined(format!("{}: all pairs are tied", s.label)));
    }
    Ok(SignPercentage {
        fraction: hits as f64 / untied as f64,
        threshold: percentage_threshold(s.len()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// `Σ R_i·sgn(x2_i − x1_i)` over nonzero differences.
    pub w: f64,
    pub sigma_w: f64,
    pub sigma_level: u8,
    /// Fraction of non-tied pairs with `x2 > x1`.
    pub percentage: f64,
    /// Number of nonzero differences.
    pub m_effective: usize,
}

/// Ranks (1-based, ties averaged) of `values` in increasing order.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // positions i..j share the mean of ranks i+1..=j
        let rank = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = rank;
        }
        i = j;
    }
    ranks
}

/// Signed-rank statistic on `d_i = x2_i − x1_i`.
///
/// Zero differences are dropped and `M` is reduced accordingly. Tied `|d_i|`
/// share their average rank; `σ_W` is not corrected for ties.
pub fn wilcoxon(s: &PairedSample) -> Result<WilcoxonResult> {
    let diffs: Vec<f64> = s
        .pairs
        .iter()
        .map(|&(_, x1, x2)| x2 - x1)
        .filter(|&d| d != 0.0)
        .collect();
    if diffs.is_empty() {
        return Err(Error::Undefined(format!(
            "{}: Wilcoxon statistic needs at least one nonzero difference",
            s.label
        )));
    }
    let magnitudes: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = average_ranks(&magnitudes);
    let w: f64 = diffs.iter().zip(&ranks).map(|(d, r)| r * d.signum()).sum();
    let m = diffs.len();
    let sigma = sigma_w(m);
    let positive = diffs.iter().filter(|&&d| d > 0.0).count();
    Ok(WilcoxonResult {
        w,
        sigma_w: sigma,
        sigma_level: sigma_level(w, sigma),
        percentage: positive as f64 / m as f64,
        m_effective: m,
    })
}

/// Largest `p ≤ 5` with `|W| > p·σ_W`.
pub fn sigma_level(w: f64, sigma: f64) -> u8 {
    (1..=MAX_SIGMA_LEVEL)
        .rev()
        .find(|&p| w.abs() > f64::from(p) * sigma)
        .unwrap_or(0)
}

/// Table notation: `p=3`..`p=5`, or `False` below three sigma.
pub fn sigma_label(level: u8) -> String {
    if level >= SIGNIFICANCE_LEVEL {
        format!("p={level}")
    } else {
        "False".to_string()
    }
}

/// Whether `W` is unchanged when every value is multiplied by `lambda`.
pub fn scale_invariance_check(s: &PairedSample, lambda: f64) -> Result<bool> {
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "scale factor must be positive, got {lambda}"
        )));
    }
    Ok(wilcoxon(&s.scaled(lambda))?.w == wilcoxon(s)?.w)
}

/// Binary outcomes: `columns[a][k]` is true when relation `a` holds for text `k`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IndicatorMatrix {
    pub relations: Vec<String>,
    pub texts: Vec<String>,
    pub columns: Vec<Vec<bool>>,
}

impl IndicatorMatrix {
    pub fn new(
        relations: Vec<String>,
        texts: Vec<String>,
        columns: Vec<Vec<bool>>,
    ) -> Result<Self> {
        if relations.len() != columns.len() || columns.iter().any(|c| c.len() != texts.len()) {
            return Err(Error::InvalidConfig(
                "indicator matrix dimensions disagree".into(),
            ));
        }
        Ok(Self {
            relations,
            texts,
            columns,
        })
    }

    pub fn mean(&self, a: usize) -> f64 {
        let col = &self.columns[a];
        col.iter().filter(|&&v| v).count() as f64 / col.len() as f64
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<(f64, f64)> {
        if self.texts.is_empty() {
            return Err(Error::EmptyInput(
                "correlation of an empty indicator matrix",
            ));
        }
        let (ma, mb) = (self.mean(a), self.mean(b));
        for (idx, m) in [(a, ma), (b, mb)] {
            if m == 0.0 || m == 1.0 {
                return Err(Error::Undefined(format!(
                    "correlation with constant indicator `{}`",
                    self.relations[idx]
                )));
            }
        }
        Ok((ma, mb))
    }
}

/// Pearson correlation of indicator columns `a` and `b`, from centered sums.
pub fn pearson_indicator(m: &IndicatorMatrix, a: usize, b: usize) -> Result<f64> {
    m.check_pair(a, b)?;
    // Deviations scaled by n stay integral: n·x_i − Σx.
    let n = m.texts.len() as i128;
    let sum = |col: &[bool]| col.iter().filter(|&&v| v).count() as i128;
    let (sa, sb) = (sum(&m.columns[a]), sum(&m.columns[b]));
    let (mut sxy, mut sxx, mut syy) = (0i128, 0i128, 0i128);
    for (&x, &y) in m.columns[a].iter().zip(&m.columns[b]) {
        let dx = n * i128::from(x) - sa;
        let dy = n * i128::from(y) - sb;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    Ok(sxy as f64 / ((sxx as f64).sqrt() * (syy as f64).sqrt()))
}

/// The same correlation written for 0/1 data:
/// `(mean(ν_a ν_b) − ν̄_a ν̄_b) / √(ν̄_a(1−ν̄_a) ν̄_b(1−ν̄_b))`.
pub fn pearson_indicator_binary(m: &IndicatorMatrix, a: usize, b: usize) -> Result<f64> {
    m.check_pair(a, b)?;
    // ⟨xy⟩ − ⟨x⟩⟨y⟩ over sqrt(⟨x⟩(1−⟨x⟩)·⟨y⟩(1−⟨y⟩)), with every mean multiplied by n.
    let n = m.texts.len() as i128;
    let count = |col: &[bool]| col.iter().filter(|&&v| v).count() as i128;
    let (na, nb) = (count(&m.columns[a]), count(&m.columns[b]));
    let both = m.columns[a]
        .iter()
        .zip(&m.columns[b])
        .filter(|(&x, &y)| x && y)
        .count() as i128;
    let num = n * both - na * nb;
    let va = na * (n - na);
    let vb = nb * (n - nb);
    Ok(num as f64 / ((va as f64).sqrt() * (vb as f64).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_thresholds() {
        assert!((3.0 * sigma_w(156) - 3391.02).abs() < 0.01);
        assert!((3.0 * sigma_w(350) - 11365.6).abs() < 0.1);
        assert!((percentage_threshold(156) - 0.6201).abs() < 1e-4);
        assert!((percentage_threshold(350) - 0.5802).abs() < 1e-4);
    }

    #[test]
    fn three_pair_example() {
        let s = PairedSample::from_values("x", &[5.0, 2.0, 7.0], &[2.0, 3.0, 5.0]);
        let r = wilcoxon(&s).unwrap();
        assert_eq!(r.w, -4.0);
        assert_eq!(r.m_effective, 3);
        assert_eq!(r.sigma_w, 14f64.sqrt());
        assert!((r.percentage - 1.0 / 3.0).abs() < 1e-15);
        assert!(scale_invariance_check(&s, 2.5).unwrap());
        assert!(scale_invariance_check(&s, 1.0).unwrap());
        assert_eq!(wilcoxon(&s.swapped()).unwrap().w, 4.0);
        assert!(scale_invariance_check(&s, 0.0).is_err());
    }

    #[test]
    fn zero_differences_and_ties() {
        let s = PairedSample::from_values("x", &[1.0, 1.0, 1.0, 1.0], &[1.0, 2.0, 0.0, 3.0]);
        let r = wilcoxon(&s).unwrap();
        // |d| = 1, 1, 2 -> ranks 1.5, 1.5, 3
        assert_eq!(r.m_effective, 3);
        assert_eq!(r.w, 1.5 - 1.5 + 3.0);
        let same = PairedSample::from_values("x", &[1.0, 2.0], &[1.0, 2.0]);
        assert!(wilcoxon(&same).is_err());
        assert!(sign_percentage(&same, Direction::FirstGreater).is_err());
    }

    #[test]
    fn average_ranking() {
        assert_eq!(average_ranks(&[3.0, 1.0, 2.0]), [3.0, 1.0, 2.0]);
        assert_eq!(average_ranks(&[2.0, 2.0, 2.0, 1.0]), [3.0, 3.0, 3.0, 1.0]);
    }

    #[test]
    fn sigma_levels_of_published_rows() {
        let sigma = sigma_w(156);
        assert!((sigma - 1130.34).abs() < 0.01);
        assert_eq!(sigma_level(6978.0, sigma), 5);
        assert_eq!(sigma_level(5268.0, sigma), 4);
        assert_eq!(sigma_level(2292.0, sigma), 2);
        assert_eq!(sigma_label(sigma_level(2292.0, sigma)), "False");
        assert_eq!(sigma_level(-1312.0, sigma), 1);
        assert_eq!(sigma_level(0.0, sigma), 0);
        assert_eq!(sigma_level(1e9, sigma), 5);
    }

    #[test]
    fn sign_percentages() {
        let s = PairedSample::from_values("n", &[3.0, 4.0, 5.0], &[1.0, 2.0, 5.0]);
        let p = sign_percentage(&s, Direction::FirstGreater).unwrap();
        assert_eq!(p.fraction, 1.0);
        assert_eq!(p.threshold, percentage_threshold(3));
        assert_eq!(
            sign_percentage(&s, Direction::FirstLess).unwrap().fraction,
            0.0
        );
    }

    #[test]
    fn duplicate_ids_rejected() {
        let pairs = vec![("a".to_string(), 1.0, 2.0), ("a".to_string(), 2.0, 1.0)];
        assert!(PairedSample::new("x", pairs).is_err());
    }

    #[test]
    fn indicator_correlations() {
        let col = vec![true, false, true, true, false];
        let inv: Vec<bool> = col.iter().map(|v| !v).collect();
        let m = IndicatorMatrix::new(
            vec!["a".into(), "b".into(), "c".into(), "k".into()],
            (0..5).map(|i| i.to_string()).collect(),
            vec![col.clone(), col, inv, vec![true; 5]],
        )
        .unwrap();
        assert!((pearson_indicator(&m, 0, 1).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson_indicator(&m, 0, 2).unwrap() + 1.0).abs() < 1e-15);
        assert!((pearson_indicator_binary(&m, 0, 2).unwrap() + 1.0).abs() < 1e-15);
        assert!(pearson_indicator(&m, 0, 3).is_err());
        assert!(pearson_indicator_binary(&m, 3, 0).is_err());
    }
}
