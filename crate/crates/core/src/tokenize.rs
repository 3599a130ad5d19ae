//! Word, punctuation, sentence and paragraph segmentation.
//!
//! A word is a maximal run of Unicode letters and digits, where an apostrophe
//! or hyphen is kept only when it sits between two such characters
//! (`don't`, `well-known`). Everything else is either whitespace, one of the
//! counted punctuation signs, or ignored.
//!
//! A sentence is the run of words between two sentence delimiters (by default
//! comma, dot, semicolon, question mark and exclamation mark). A paragraph is a
//! block of lines separated from its neighbours by at least one blank line; a
//! paragraph break also closes the current sentence.
//!
//! Besides the aggregate counts, a [`TokenizedText`] remembers where every word
//! sits (byte offsets, sentence and paragraph index, trailing punctuation), so
//! the counts of any contiguous word range can be recomputed with
//! [`TokenizedText::slice`]. That is how per-half statistics are obtained.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct TokenizerConfig {
    pub case_fold: bool,
    /// Map a word ending in `s` to its stem when the stem also occurs in the
    /// document.
    pub merge_plural: bool,
    pub sentence_delims: BTreeSet<char>,
    /// When false, `,` is removed from `sentence_delims`.
    pub comma_is_delim: bool,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        Self {
            case_fold: true,
            merge_plural: false,
            sentence_delims: [',', '.', ';', '?', '!'].into_iter().collect(),
            comma_is_delim: true,
        }
    }
}

impl TokenizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.effective_delims().next().is_none() {
            return Err(Error::InvalidConfig(
                "sentence delimiter set is empty".to_string(),
            ));
        }
        Ok(())
    }

    fn effective_delims(&self) -> impl Iterator<Item = char> + '_ {
        self.sentence_delims
            .iter()
            .copied()
            .filter(move |&c| self.comma_is_delim || c != ',')
    }

    fn is_delim(&self, c: char) -> bool {
        (self.comma_is_delim || c != ',') && self.sentence_delims.contains(&c)
    }
}

/// Characters counted by `punctuation_count` when they occur outside words.
///
/// Typographic quotes and dashes count as their ASCII counterparts.
pub fn is_counted_punctuation(c: char) -> bool {
    matches!(
        c,
        '.' | ','
            | ';'
            | ':'
            | '!'
            | '?'
            | '"'
            | '\''
            | '('
            | ')'
            | '\u{2014}' // em dash
            | '-'
            | '\u{2013}' // en dash
            | '\u{2010}' // hyphen
            | '\u{2018}'
            | '\u{2019}'
            | '\u{201C}'
            | '\u{201D}'
    )
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

fn is_connector(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '-' | '\u{2010}')
}

fn normalize_connector(c: char) -> char {
    match c {
        '\u{2019}' => '\'',
        '\u{2010}' => '-',
        other => other,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct WordSpan {
    start: usize,
    sentence: usize,
    paragraph: usize,
    punct_after: usize,
    /// End of the last non-whitespace character before the next word.
    tail: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TokenizedText {
    pub words: Vec<String>,
    /// Letters over all words, counted after case folding.
    pub letter_count: usize,
    pub punctuation_count: usize,
    /// Words per sentence, in text order. Empty sentences are not recorded.
    pub sentence_lengths: Vec<usize>,
    /// Number of paragraphs that contain at least one word.
    pub paragraph_count: usize,
    pub total_words: usize,
    /// `letter_count / total_words`, or 0 for an empty text.
    pub avg_word_length: f64,
    /// UTF-8 length of the covered region of the body.
    pub byte_size: usize,
    spans: Vec<WordSpan>,
    leading_punct: usize,
    region: Range<usize>,
}

/// Segment `body` according to `config`.
pub fn tokenize(body: &str, config: &TokenizerConfig) -> TokenizedText {
    let chars: Vec<(usize, char)> = body.char_indices().collect();
    let mut words = Vec::new();
    let mut spans: Vec<WordSpan> = Vec::new();
    let mut leading_punct = 0usize;
    let mut content: Option<Range<usize>> = None;

    let mut sentence = 0usize;
    let mut sentence_len = 0usize;
    let mut paragraph = 0usize;
    let mut seen_content = false;
    let mut line_blank = true;
    let mut pending_break = false;

    let mut i = 0;
    while i < chars.len() {
        let (offset, c) = chars[i];

        if c == '\n' {
            if line_blank && seen_content {
                pending_break = true;
            }
            line_blank = true;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }

        line_blank = false;
        let end = offset + c.len_utf8();
        match content.as_mut() {
            Some(r) => r.end = end,
            None => content = Some(offset..end),
        }
        if pending_break {
            pending_break = false;
            paragraph += 1;
            if sentence_len > 0 {
                sentence += 1;
                sentence_len = 0;
            }
        }
        seen_content = true;

        if is_word_char(c) {
            let mut word = String::new();
            let mut j = i;
            while j < chars.len() {
                let ch = chars[j].1;
                if is_word_char(ch) {
                    word.push(ch);
                    j += 1;
                } else if is_connector(ch)
                    && chars
                        .get(j + 1)
                        .is_some_and(|&(_, next)| is_word_char(next))
                {
                    word.push(normalize_connector(ch));
                    j += 1;
                } else {
                    break;
                }
            }
            if config.case_fold {
                word = word.to_lowercase();
            }
            words.push(word);
            let tail = chars.get(j).map_or(body.len(), |&(o, _)| o);
            if let Some(r) = content.as_mut() {
                r.end = tail;
            }
            spans.push(WordSpan {
                start: offset,
                sentence,
                paragraph,
                punct_after: 0,
                tail,
            });
            sentence_len += 1;
            i = j;
            continue;
        }

        if let Some(span) = spans.last_mut() {
            span.tail = end;
        }
        if is_counted_punctuation(c) {
            match spans.last_mut() {
                Some(span) => span.punct_after += 1,
                None => leading_punct += 1,
            }
        }
        if config.is_delim(c) && sentence_len > 0 {
            sentence += 1;
            sentence_len = 0;
        }
        i += 1;
    }

    if config.merge_plural {
        merge_plurals(&mut words);
    }

    let mut text = TokenizedText {
        words,
        letter_count: 0,
        punctuation_count: 0,
        sentence_lengths: Vec::new(),
        paragraph_count: 0,
        total_words: 0,
        avg_word_length: 0.0,
        byte_size: 0,
        spans,
        leading_punct,
        region: content.unwrap_or(0..0),
    };
    text.recount();
    text
}

fn merge_plurals(words: &mut [String]) {
    let types: HashSet<String> = words.iter().cloned().collect();
    for word in words.iter_mut() {
        if let Some(stem) = word.strip_suffix('s') {
            if !stem.is_empty() && types.contains(stem) {
                *word = stem.to_string();
            }
        }
    }
}

fn letters(word: &str) -> usize {
    word.chars().filter(|c| c.is_alphabetic()).count()
}

impl TokenizedText {
    fn recount(&mut self) {
        self.total_words = self.words.len();
        self.letter_count = self.words.iter().map(|w| letters(w)).sum();
        self.avg_word_length = if self.total_words == 0 {
            0.0
        } else {
            self.letter_count as f64 / self.total_words as f64
        };
        self.punctuation_count =
            self.leading_punct + self.spans.iter().map(|s| s.punct_after).sum::<usize>();

        self.sentence_lengths.clear();
        let mut current: Option<usize> = None;
        for span in &self.spans {
            if current == Some(span.sentence) {
                *self.sentence_lengths.last_mut().unwrap() += 1;
            } else {
                self.sentence_lengths.push(1);
                current = Some(span.sentence);
            }
        }

        self.paragraph_count = self
            .spans
            .iter()
            .map(|s| s.paragraph)
            .collect::<BTreeSet<_>>()
            .len();
        self.byte_size = self.region.len();
    }

    pub fn sentence_count(&self) -> usize {
        self.sentence_lengths.len()
    }

    /// Byte range of `body` covered by this text.
    pub fn region(&self) -> Range<usize> {
        self.region.clone()
    }

    /// Byte range of the body that belongs to the words in `range`.
    ///
    /// The region runs from the start of the first word (or the start of the
    /// covered region when `range` begins at word 0) to the last
    /// non-whitespace character before the word after the range. Trailing
    /// punctuation travels with the preceding word; whitespace between words
    /// belongs to neither side.
    pub fn byte_range(&self, range: Range<usize>) -> Range<usize> {
        assert!(range.start <= range.end && range.end <= self.words.len());
        let start = if range.start == 0 {
            self.region.start
        } else {
            self.spans[range.start].start
        };
        let end = if range.end == range.start {
            start
        } else {
            self.spans[range.end - 1].tail
        };
        start..end.max(start)
    }

    /// Statistics of the contiguous word range `range`.
    pub fn slice(&self, range: Range<usize>) -> TokenizedText {
        let region = self.byte_range(range.clone());
        let mut text = TokenizedText {
            words: self.words[range.clone()].to_vec(),
            letter_count: 0,
            punctuation_count: 0,
            sentence_lengths: Vec::new(),
            paragraph_count: 0,
            total_words: 0,
            avg_word_length: 0.0,
            byte_size: 0,
            spans: self.spans[range.clone()].to_vec(),
            leading_punct: if range.start == 0 {
                self.leading_punct
            } else {
                0
            },
            region,
        };
        text.recount();
        text
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SentenceStats {
    /// Mean sentence length in words.
    pub mean: f64,
    pub dispersion: f64,
    /// Entropy (natural log) of the sentence-length distribution.
    pub entropy: f64,
}

/// Mean, dispersion and entropy of the empirical sentence-length distribution.
pub fn sentence_stats(text: &TokenizedText) -> Result<SentenceStats> {
    let total = text.sentence_lengths.len();
    if total == 0 {
        return Err(Error::Undefined(
            "sentence statistics of a text with no sentences".into(),
        ));
    }
    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    for &len in &text.sentence_lengths {
        *histogram.entry(len).or_default() += 1;
    }
    let weights: Vec<(f64, f64)> = histogram
        .iter()
        .map(|(&len, &count)| (len as f64, count as f64 / total as f64))
        .collect();
    let mean: f64 = weights.iter().map(|(a, k)| a * k).sum();
    let dispersion = weights.iter().map(|(a, k)| k * (a - mean).powi(2)).sum();
    let entropy = -weights.iter().map(|(_, k)| k * k.ln()).sum::<f64>();
    Ok(SentenceStats {
        mean,
        dispersion,
        entropy: entropy + 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tok(s: &str) -> TokenizedText {
        tokenize(s, &TokenizerConfig::default())
    }

    #[test]
    fn hand_segmented_example() {
        let t = tok("Dogs bark. Cats, too!");
        assert_eq!(t.words, ["dogs", "bark", "cats", "too"]);
        assert_eq!(t.total_words, 4);
        assert_eq!(t.sentence_lengths, [2, 1, 1]);
        assert_eq!(t.punctuation_count, 3);
        assert_eq!(t.letter_count, 15);
        assert_eq!(t.paragraph_count, 1);
    }

    #[test]
    fn empty_body() {
        let t = tok("");
        assert_eq!(t.total_words, 0);
        assert_eq!(t.letter_count, 0);
        assert_eq!(t.paragraph_count, 0);
        assert!(t.sentence_lengths.is_empty());
        assert_eq!(t.avg_word_length, 0.0);
    }

    #[test]
    fn case_folding() {
        assert_eq!(tok("Word word").words, ["word", "word"]);
        let cfg = TokenizerConfig {
            case_fold: false,
            ..Default::default()
        };
        assert_eq!(tokenize("Word word", &cfg).words, ["Word", "word"]);
    }

    #[test]
    fn connectors_only_inside_words() {
        let t = tok("'Tis a well-known don't -- end- 'quoted'");
        assert_eq!(
            t.words,
            ["tis", "a", "well-known", "don't", "end", "quoted"]
        );
        // leading ', two dashes, trailing -, two quotes around `quoted`
        assert_eq!(t.punctuation_count, 6);
        let curly = tok("don\u{2019}t");
        assert_eq!(curly.words, ["don't"]);
    }

    #[test]
    fn comma_toggle() {
        let cfg = TokenizerConfig {
            comma_is_delim: false,
            ..Default::default()
        };
        let t = tokenize("Dogs bark. Cats, too!", &cfg);
        assert_eq!(t.sentence_lengths, [2, 2]);
    }

    #[test]
    fn empty_delimiters_rejected() {
        let cfg = TokenizerConfig {
            sentence_delims: [','].into_iter().collect(),
            comma_is_delim: false,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        assert!(TokenizerConfig::default().validate().is_ok());
    }

    #[test]
    fn paragraphs_and_sentence_breaks() {
        let t = tok("CHAPTER ONE\n\nIt was late\nand dark. Then\n   \n\nmorning");
        assert_eq!(t.paragraph_count, 3);
        assert_eq!(t.sentence_lengths, [2, 5, 1, 1]);
    }

    #[test]
    fn merge_plural_uses_document_vocabulary() {
        let cfg = TokenizerConfig {
            merge_plural: true,
            ..Default::default()
        };
        let t = tokenize("dog dogs cats is s", &cfg);
        assert_eq!(t.words, ["dog", "dog", "cats", "is", "s"]);
        assert_eq!(t.letter_count, 3 + 3 + 4 + 2 + 1);
    }

    #[test]
    fn slices_recount() {
        let body = "\"One two. Three\n\nfour, five six!\"";
        let t = tok(body);
        assert_eq!(t.punctuation_count, 5);
        let a = t.slice(0..3);
        let b = t.slice(3..6);
        assert_eq!(a.words, ["one", "two", "three"]);
        assert_eq!(a.sentence_lengths, [2, 1]);
        assert_eq!(a.paragraph_count, 1);
        assert_eq!(a.punctuation_count, 2);
        assert_eq!(&body[a.region()], "\"One two. Three");
        assert_eq!(&body[b.region()], "four, five six!\"");
        assert_eq!(b.sentence_lengths, [1, 2]);
        assert_eq!(b.punctuation_count, 3);
        assert_eq!(a.byte_size + b.byte_size + 2, body.len());

        // Rendered halves get the same size whichever side they fall on.
        let r = tok("ab cd ef gh");
        assert_eq!(r.slice(0..2).byte_size, r.slice(2..4).byte_size);
        assert_eq!(tok("  x y \n").region(), 2..5);
        let whole = t.slice(0..6);
        assert_eq!(whole, t);
    }

    #[test]
    fn sentence_statistics() {
        let mut t = tok("a b. c d. e f.");
        let s = sentence_stats(&t).unwrap();
        assert_eq!((s.mean, s.dispersion, s.entropy), (2.0, 0.0, 0.0));

        t = tok("a. b c d.");
        let s = sentence_stats(&t).unwrap();
        assert_eq!(s.mean, 2.0);
        assert_eq!(s.dispersion, 1.0);
        assert!((s.entropy - std::f64::consts::LN_2).abs() < 1e-15);

        let s = sentence_stats(&tok("a b c d")).unwrap();
        assert_eq!((s.mean, s.dispersion), (4.0, 0.0));

        assert!(sentence_stats(&tok("...")).is_err());
    }
}
