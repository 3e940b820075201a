//! Corpus loading, shingling and exact Jaccard similarity.
//!
//! Documents are reduced to *profiles*: sets of 32-bit shingle hashes. The
//! shingle hash is a fixed public FNV-1a so that the exact-Jaccard ground
//! truth is reproducible bit-for-bit across platforms and runs.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// A raw input document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    /// Unique id within a corpus (line number or file name).
    pub id: String,
    pub text: String,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            text: text.into(),
        }
    }
}

/// A document reduced to a set of 32-bit shingle hashes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ShingleSet {
    elements: BTreeSet<u32>,
}

impl ShingleSet {
    /// Build a profile from raw element values (mainly for tests and
    /// synthetic corpora).
    pub fn from_elements<I: IntoIterator<Item = u32>>(elements: I) -> Self {
        Self {
            elements: elements.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.elements.iter().copied()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elements.contains(&x)
    }
}

/// Shingling unit: whole word tokens or single characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShingleUnit {
    Word,
    Character,
}

/// Text normalization applied before windowing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalizer {
    /// Lowercase and collapse all whitespace runs to single spaces.
    LowercaseCollapse,
    None,
}

/// Shingling parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShingleConfig {
    pub unit: ShingleUnit,
    /// Tokens or characters per shingle window. Must be >= 1.
    pub width: usize,
    pub normalizer: Normalizer,
}

impl ShingleConfig {
    pub fn new(unit: ShingleUnit, width: usize, normalizer: Normalizer) -> Result<Self> {
        if width == 0 {
            return Err(Error::Parameter("shingle width must be >= 1".into()));
        }
        Ok(Self {
            unit,
            width,
            normalizer,
        })
    }
}

impl Default for ShingleConfig {
    /// Word-token shingles of width 3 with lowercase + whitespace collapse.
    fn default() -> Self {
        Self {
            unit: ShingleUnit::Word,
            width: 3,
            normalizer: Normalizer::LowercaseCollapse,
        }
    }
}

/// Corpus file layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    /// One document per line of a single UTF-8 text file.
    OneDocPerLine,
    /// One document per file in a directory (non-recursive).
    OneDocPerFile,
}

/// Result of loading a corpus: documents in deterministic order plus the
/// ids of documents skipped for invalid UTF-8.
#[derive(Debug, Clone)]
pub struct LoadedCorpus {
    pub documents: Vec<Document>,
    pub skipped: Vec<String>,
}

/// Load a corpus from disk.
///
/// Line corpora get ids "0", "1", ...; directory corpora use the file name
/// and are ordered lexicographically. Invalid UTF-8 skips the affected
/// document and records its id in `skipped`.
pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<LoadedCorpus> {
    match format {
        CorpusFormat::OneDocPerLine => load_lines(path),
        CorpusFormat::OneDocPerFile => load_dir(path),
    }
}

fn load_lines(path: &Path) -> Result<LoadedCorpus> {
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut documents = Vec::new();
    let mut skipped = Vec::new();
    if bytes.is_empty() {
        return Ok(LoadedCorpus { documents, skipped });
    }
    // One trailing newline terminates the last line rather than opening
    // an empty document.
    let body = bytes.strip_suffix(b"\n").unwrap_or(&bytes);
    for (i, raw) in body.split(|&b| b == b'\n').enumerate() {
        let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
        let id = i.to_string();
        match std::str::from_utf8(raw) {
            Ok(text) => documents.push(Document::new(id, text)),
            Err(_) => skipped.push(id),
        }
    }
    Ok(LoadedCorpus { documents, skipped })
}

fn load_dir(path: &Path) -> Result<LoadedCorpus> {
    let entries = fs::read_dir(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut files = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let p = entry.path();
        if p.is_file() {
            files.push(p);
        }
    }
    files.sort_by_key(|p| p.file_name().map(|n| n.to_os_string()));

    let mut documents = Vec::new();
    let mut skipped = Vec::new();
    for file in files {
        let id = file
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let bytes = fs::read(&file).map_err(|source| Error::Io {
            path: file.clone(),
            source,
        })?;
        match String::from_utf8(bytes) {
            Ok(text) => documents.push(Document::new(id, text)),
            Err(_) => skipped.push(id),
        }
    }
    Ok(LoadedCorpus { documents, skipped })
}

/// FNV-1a 32-bit hash of a byte string. This is the fixed public shingle
/// hash of the artifact; changing it changes every profile.
pub fn shingle_hash(bytes: &[u8]) -> u32 {
    let mut h: u32 = 0x811C_9DC5;
    for &b in bytes {
        h ^= u32::from(b);
        h = h.wrapping_mul(0x0100_0193);
    }
    h
}

/// Convert a document into its shingle-set profile.
///
/// Texts shorter than the window width yield an empty profile.
pub fn shingle(doc: &Document, cfg: &ShingleConfig) -> ShingleSet {
    let mut elements = BTreeSet::new();
    match cfg.unit {
        ShingleUnit::Word => {
            let tokens: Vec<String> = match cfg.normalizer {
                Normalizer::LowercaseCollapse => doc
                    .text
                    .split_whitespace()
                    .map(|t| t.to_lowercase())
                    .collect(),
                Normalizer::None => doc.text.split_whitespace().map(str::to_string).collect(),
            };
            if tokens.len() >= cfg.width {
                for window in tokens.windows(cfg.width) {
                    elements.insert(shingle_hash(window.join(" ").as_bytes()));
                }
            }
        }
        ShingleUnit::Character => {
            let normalized: String = match cfg.normalizer {
                Normalizer::LowercaseCollapse => {
                    let tokens: Vec<String> = doc
                        .text
                        .split_whitespace()
                        .map(|t| t.to_lowercase())
                        .collect();
                    tokens.join(" ")
                }
                Normalizer::None => doc.text.clone(),
            };
            let chars: Vec<char> = normalized.chars().collect();
            if chars.len() >= cfg.width {
                for window in chars.windows(cfg.width) {
                    let s: String = window.iter().collect();
                    elements.insert(shingle_hash(s.as_bytes()));
                }
            }
        }
    }
    ShingleSet { elements }
}

/// Count of jaccard_exact calls that saw two empty profiles.
static EMPTY_PAIR_WARNINGS: AtomicU64 = AtomicU64::new(0);

/// Number of both-empty pairs seen by [`jaccard_exact`] so far.
pub fn empty_pair_warnings() -> u64 {
    EMPTY_PAIR_WARNINGS.load(Ordering::Relaxed)
}

/// Exact Jaccard similarity |a ∩ b| / |a ∪ b|.
///
/// Two empty profiles compare as 1.0 (identical) and bump a warning
/// counter; 0/0 has no defined value otherwise.
pub fn jaccard_exact(a: &ShingleSet, b: &ShingleSet) -> f64 {
    if a.is_empty() && b.is_empty() {
        EMPTY_PAIR_WARNINGS.fetch_add(1, Ordering::Relaxed);
        return 1.0;
    }
    let inter = a.elements.intersection(&b.elements).count();
    let union = a.elements.len() + b.elements.len() - inter;
    inter as f64 / union as f64
}
