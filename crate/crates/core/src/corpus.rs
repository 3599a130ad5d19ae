//! Loading, cleaning and length filtering of the document collection.
//!
//! Documents are UTF-8 `.txt` files. The manifest is persisted as JSON Lines,
//! one [`ManifestEntry`] per line, ordered by document id.

use std::collections::HashSet;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};
use crate::tokenize::{tokenize, TokenizerConfig};

pub const DEFAULT_MIN_WORDS: usize = 10_000;
pub const DEFAULT_MAX_WORDS: usize = 50_000;

pub const REASON_BELOW_MIN: &str = "below min_words";
pub const REASON_ABOVE_MAX: &str = "above max_words";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TextDocument {
    pub id: String,
    pub title: Option<String>,
    pub body: String,
    /// Size of the stored body in bytes. Set from the raw file when loading and
    /// recomputed when the body is cut down by [`strip_boilerplate`].
    pub byte_size: usize,
    pub path: Option<PathBuf>,
}

impl TextDocument {
    pub fn new(id: impl Into<String>, body: impl Into<String>) -> Self {
        let body = body.into();
        Self {
            id: id.into(),
            title: None,
            byte_size: body.len(),
            body,
            path: None,
        }
    }
}

/// Read one document. The id is the file stem.
///
/// The body is normalized to NFC with `\r\n` and lone `\r` turned into `\n`;
/// `byte_size` is the size of the file as read.
pub fn load_document(path: &Path) -> Result<TextDocument> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let byte_size = bytes.len();
    let raw = String::from_utf8(bytes).map_err(|e| Error::InvalidEncoding {
        path: path.to_path_buf(),
        offset: e.utf8_error().valid_up_to(),
    })?;
    let body: String = raw
        .replace("\r\n", "\n")
        .replace('\r', "\n")
        .nfc()
        .collect();
    Ok(TextDocument {
        id: document_id(path),
        title: None,
        body,
        byte_size,
        path: Some(path.to_path_buf()),
    })
}

fn document_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.to_string_lossy().into_owned())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoilerplateMarkers {
    pub start: String,
    pub end: String,
}

impl Default for BoilerplateMarkers {
    /// Project Gutenberg's `*** START OF ... ***` / `*** END OF ... ***` lines.
    fn default() -> Self {
        Self {
            start: "*** START OF".to_string(),
            end: "*** END OF".to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StripWarning {
    MarkersMissing,
    MarkersOutOfOrder,
}

impl std::fmt::Display for StripWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StripWarning::MarkersMissing => f.write_str("boilerplate markers not found"),
            StripWarning::MarkersOutOfOrder => {
                f.write_str("boilerplate end marker precedes start marker")
            }
        }
    }
}

/// Keep only the text strictly between the start-marker line and the
/// end-marker line.
///
/// When either marker is missing, or the end marker comes first, the document
/// is returned unchanged along with a warning. A `Title:` line in the header is
/// picked up as the document title.
pub fn strip_boilerplate(
    mut doc: TextDocument,
    markers: &BoilerplateMarkers,
) -> (TextDocument, Option<StripWarning>) {
    let (Some(start), Some(end)) = (doc.body.find(&markers.start), doc.body.find(&markers.end))
    else {
        return (doc, Some(StripWarning::MarkersMissing));
    };
    if end < start {
        return (doc, Some(StripWarning::MarkersOutOfOrder));
    }

    let header = &doc.body[..start];
    if doc.title.is_none() {
        doc.title = header
            .lines()
            .find_map(|l| l.strip_prefix("Title:"))
            .map(|t| t.trim().to_string())
            .filter(|t| !t.is_empty());
    }

    let inner_start = doc.body[start..]
        .find('\n')
        .map_or(doc.body.len(), |i| start + i + 1);
    let inner_end = doc.body[..end].rfind('\n').map_or(0, |i| i + 1);
    doc.body = if inner_start < inner_end {
        doc.body[inner_start..inner_end].to_string()
    } else {
        String::new()
    };
    doc.byte_size = doc.body.len();
    (doc, None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub path: PathBuf,
    pub word_count: usize,
    pub included: bool,
    pub exclusion_reason: Option<String>,
}

impl ManifestEntry {
    fn is_length_exclusion(&self) -> bool {
        matches!(
            self.exclusion_reason.as_deref(),
            Some(REASON_BELOW_MIN | REASON_ABOVE_MAX)
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub entries: Vec<ManifestEntry>,
}

impl CorpusManifest {
    pub fn included(&self) -> impl Iterator<Item = &ManifestEntry> {
        self.entries.iter().filter(|e| e.included)
    }

    /// Re-apply length bounds to the entries.
    ///
    /// Entries excluded for any reason other than length (load failures,
    /// manual editorial exclusions) stay excluded.
    pub fn apply_length_bounds(&mut self, min_words: usize, max_words: usize) -> Result<()> {
        check_bounds(min_words, max_words)?;
        for entry in &mut self.entries {
            if !entry.included && !entry.is_length_exclusion() {
                continue;
            }
            let reason = length_verdict(entry.word_count, min_words, max_words);
            entry.included = reason.is_none();
            entry.exclusion_reason = reason.map(str::to_string);
        }
        Ok(())
    }

    pub fn write_jsonl(&self, mut out: impl Write) -> Result<()> {
        for entry in &self.entries {
            serde_json::to_writer(&mut out, entry)?;
            out.write_all(b"\n")
                .map_err(|e| Error::io("<manifest>", e))?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf)?;
        fs::write(path, buf).map_err(|e| Error::io(path, e))
    }

    pub fn read_jsonl(input: impl std::io::Read) -> Result<Self> {
        let mut entries = Vec::new();
        let mut ids = HashSet::new();
        for (n, line) in BufReader::new(input).lines().enumerate() {
            let line = line.map_err(|e| Error::io("<manifest>", e))?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: ManifestEntry =
                serde_json::from_str(&line).map_err(|source| Error::Manifest {
                    line: n + 1,
                    source,
                })?;
            if !entry.included
                && entry
                    .exclusion_reason
                    .as_deref()
                    .map_or(true, str::is_empty)
            {
                return Err(Error::InvalidConfig(format!(
                    "manifest entry `{}` is excluded without a reason",
                    entry.id
                )));
            }
            if !ids.insert(entry.id.clone()) {
                return Err(Error::DuplicateId(entry.id));
            }
            entries.push(entry);
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_jsonl(file)
    }
}

fn check_bounds(min_words: usize, max_words: usize) -> Result<()> {
    if min_words > max_words {
        return Err(Error::InvalidConfig(format!(
            "min_words ({min_words}) exceeds max_words ({max_words})"
        )));
    }
    Ok(())
}

fn length_verdict(word_count: usize, min_words: usize, max_words: usize) -> Option<&'static str> {
    if word_count < min_words {
        Some(REASON_BELOW_MIN)
    } else if word_count > max_words {
        Some(REASON_ABOVE_MAX)
    } else {
        None
    }
}

/// Count words in every document and mark those within `[min_words, max_words]`
/// (inclusive) as included. Entries are ordered by id.
pub fn filter_by_length(
    docs: &[TextDocument],
    min_words: usize,
    max_words: usize,
    config: &TokenizerConfig,
) -> Result<CorpusManifest> {
    check_bounds(min_words, max_words)?;
    let mut entries: Vec<ManifestEntry> = docs
        .par_iter()
        .map(|doc| {
            let word_count = tokenize(&doc.body, config).total_words;
            let reason = length_verdict(word_count, min_words, max_words);
            ManifestEntry {
                id: doc.id.clone(),
                path: doc.path.clone().unwrap_or_else(|| PathBuf::from(&doc.id)),
                word_count,
                included: reason.is_none(),
                exclusion_reason: reason.map(str::to_string),
            }
        })
        .collect();
    entries.sort_by(|a, b| a.id.cmp(&b.id));
    if let Some(dup) = entries.windows(2).find(|w| w[0].id == w[1].id) {
        return Err(Error::DuplicateId(dup[0].id.clone()));
    }
    Ok(CorpusManifest { entries })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    pub min_words: usize,
    pub max_words: usize,
    /// Strip Project Gutenberg boilerplate when the markers are present.
    pub strip_boilerplate: bool,
    pub markers: BoilerplateMarkers,
    pub tokenizer: TokenizerConfig,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            min_words: DEFAULT_MIN_WORDS,
            max_words: DEFAULT_MAX_WORDS,
            strip_boilerplate: true,
            markers: BoilerplateMarkers::default(),
            tokenizer: TokenizerConfig::default(),
        }
    }
}

/// List the `.txt` files directly inside `dir`, sorted by path.
pub fn list_text_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "txt") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// Load a document and apply the optional boilerplate stripping.
pub fn prepare_document(
    path: &Path,
    strip: bool,
    markers: &BoilerplateMarkers,
) -> Result<TextDocument> {
    let doc = load_document(path)?;
    if !strip {
        return Ok(doc);
    }
    let (doc, warning) = strip_boilerplate(doc, markers);
    if let Some(w) = warning {
        log::debug!("{}: {w}", path.display());
    }
    Ok(doc)
}

/// Build a manifest from every `.txt` file in `dir`.
///
/// Files that cannot be read or decoded get an excluded entry carrying the
/// error message.
pub fn build_manifest(dir: &Path, options: &BuildOptions) -> Result<CorpusManifest> {
    check_bounds(options.min_words, options.max_words)?;
    options.tokenizer.validate()?;
    let files = list_text_files(dir)?;
    let loaded: Vec<Result<TextDocument>> = files
        .par_iter()
        .map(|p| prepare_document(p, options.strip_boilerplate, &options.markers))
        .collect();

    let mut docs = Vec::new();
    let mut failed = Vec::new();
    for (path, result) in files.iter().zip(loaded) {
        match result {
            Ok(doc) => docs.push(doc),
            Err(err) => {
                log::warn!("excluding {}: {err}", path.display());
                failed.push(ManifestEntry {
                    id: document_id(path),
                    path: path.clone(),
                    word_count: 0,
                    included: false,
                    exclusion_reason: Some(err.to_string()),
                });
            }
        }
    }

    let mut manifest = filter_by_length(
        &docs,
        options.min_words,
        options.max_words,
        &options.tokenizer,
    )?;
    manifest.entries.extend(failed);
    manifest.entries.sort_by(|a, b| a.id.cmp(&b.id));
    if let Some(dup) = manifest.entries.windows(2).find(|w| w[0].id == w[1].id) {
        return Err(Error::DuplicateId(dup[0].id.clone()));
    }
    Ok(manifest)
}
