//! Proceedings corpus: data model, ingestion of JSONL/CSV exports and the
//! persisted single-file store.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Version embedded in every persisted corpus file.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: field `{field}`: {message}")]
    Malformed {
        line: usize,
        field: &'static str,
        message: String,
    },
    #[error("line {line}: unknown year format `{value}`")]
    YearFormat { line: usize, value: String },
    #[error("article {index}: {message}")]
    Invalid { index: usize, message: String },
    #[error("persisted corpus has format_version {found}, expected {expected}")]
    VersionMismatch { found: u64, expected: u32 },
    #[error("persisted corpus is unreadable: {0}")]
    Persist(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One published article and its raw reference strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Article {
    pub venue_year: i32,
    pub title: String,
    pub authors: Vec<String>,
    pub references: Vec<String>,
}

/// Accepted range of proceedings years.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct YearRange {
    pub first: i32,
    pub last: i32,
}

impl Default for YearRange {
    fn default() -> Self {
        YearRange {
            first: 1800,
            last: 2200,
        }
    }
}

impl YearRange {
    pub fn contains(&self, year: i32) -> bool {
        self.first <= year && year <= self.last
    }
}

/// The full corpus. Years without any article are absent from `counts`,
/// never present with a zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    articles: Vec<Article>,
    counts: BTreeMap<i32, u64>,
}

impl Corpus {
    pub fn new(articles: Vec<Article>) -> Result<Self, CorpusError> {
        Self::with_range(articles, YearRange::default())
    }

    pub fn with_range(articles: Vec<Article>, range: YearRange) -> Result<Self, CorpusError> {
        let mut counts = BTreeMap::new();
        for (index, article) in articles.iter().enumerate() {
            if !range.contains(article.venue_year) {
                return Err(CorpusError::Invalid {
                    index,
                    message: format!(
                        "venue_year {} outside {}..={}",
                        article.venue_year, range.first, range.last
                    ),
                });
            }
            if article.title.trim().is_empty() {
                return Err(CorpusError::Invalid {
                    index,
                    message: "empty title".into(),
                });
            }
            *counts.entry(article.venue_year).or_insert(0) += 1;
        }
        Ok(Corpus { articles, counts })
    }

    pub fn empty() -> Self {
        Corpus {
            articles: Vec::new(),
            counts: BTreeMap::new(),
        }
    }

    pub fn articles(&self) -> &[Article] {
        &self.articles
    }

    /// Number of articles per proceedings year (N_t).
    pub fn counts(&self) -> &BTreeMap<i32, u64> {
        &self.counts
    }

    pub fn count(&self, year: i32) -> u64 {
        self.counts.get(&year).copied().unwrap_or(0)
    }

    pub fn years_present(&self) -> BTreeSet<i32> {
        self.counts.keys().copied().collect()
    }

    pub fn total_articles(&self) -> u64 {
        self.articles.len() as u64
    }

    pub fn total_references(&self) -> u64 {
        self.articles.iter().map(|a| a.references.len() as u64).sum()
    }

    pub fn first_year(&self) -> Option<i32> {
        self.counts.keys().next().copied()
    }

    pub fn last_year(&self) -> Option<i32> {
        self.counts.keys().next_back().copied()
    }

    pub fn into_articles(self) -> Vec<Article> {
        self.articles
    }
}

/// Per-year reference totals: the denominators of every share statistic.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CorpusStats {
    pub per_year_reference_totals: BTreeMap<i32, u64>,
    pub mean_refs_per_paper: BTreeMap<i32, f64>,
}

impl CorpusStats {
    pub fn total(&self, year: i32) -> u64 {
        self.per_year_reference_totals
            .get(&year)
            .copied()
            .unwrap_or(0)
    }
}

pub fn corpus_stats(corpus: &Corpus) -> CorpusStats {
    let mut totals: BTreeMap<i32, u64> = BTreeMap::new();
    for article in corpus.articles() {
        *totals.entry(article.venue_year).or_insert(0) += article.references.len() as u64;
    }
    let mean_refs_per_paper = totals
        .iter()
        .map(|(&year, &total)| (year, total as f64 / corpus.count(year) as f64))
        .collect();
    CorpusStats {
        per_year_reference_totals: totals,
        mean_refs_per_paper,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Jsonl,
    Csv,
}

impl InputFormat {
    /// Guess from the file extension; anything that is not `.csv` is JSONL.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => InputFormat::Csv,
            _ => InputFormat::Jsonl,
        }
    }
}

pub fn ingest(path: &Path, format: InputFormat) -> Result<Corpus, CorpusError> {
    let articles = match format {
        InputFormat::Jsonl => read_jsonl(path)?,
        InputFormat::Csv => read_csv(path)?,
    };
    Corpus::new(articles)
}

fn read_jsonl(path: &Path) -> Result<Vec<Article>, CorpusError> {
    let reader = BufReader::new(fs::File::open(path)?);
    let mut articles = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        articles.push(parse_json_record(&line, line_no)?);
    }
    Ok(articles)
}

fn malformed(line: usize, field: &'static str, message: impl Into<String>) -> CorpusError {
    CorpusError::Malformed {
        line,
        field,
        message: message.into(),
    }
}

fn parse_json_record(text: &str, line: usize) -> Result<Article, CorpusError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| malformed(line, "record", e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| malformed(line, "record", "expected a JSON object"))?;

    let venue_year = match obj.get("venue_year") {
        None | Some(serde_json::Value::Null) => {
            return Err(malformed(line, "venue_year", "missing"))
        }
        Some(serde_json::Value::Number(n)) => match n.as_i64() {
            Some(y) if i32::try_from(y).is_ok() => y as i32,
            _ => {
                return Err(CorpusError::YearFormat {
                    line,
                    value: n.to_string(),
                })
            }
        },
        Some(other) => {
            return Err(CorpusError::YearFormat {
                line,
                value: other.to_string(),
            })
        }
    };
    let title = match obj.get("title") {
        Some(serde_json::Value::String(s)) => s.clone(),
        None => return Err(malformed(line, "title", "missing")),
        Some(_) => return Err(malformed(line, "title", "expected a string")),
    };
    let authors = string_array(obj.get("authors"), line, "authors")?;
    let references = string_array(obj.get("references"), line, "references")?;
    if title.trim().is_empty() {
        return Err(malformed(line, "title", "empty"));
    }
    Ok(Article {
        venue_year,
        title,
        authors,
        references,
    })
}

fn string_array(
    value: Option<&serde_json::Value>,
    line: usize,
    field: &'static str,
) -> Result<Vec<String>, CorpusError> {
    match value {
        None => Err(malformed(line, field, "missing")),
        Some(serde_json::Value::Array(items)) => items
            .iter()
            .map(|item| {
                item.as_str()
                    .map(str::to_owned)
                    .ok_or_else(|| malformed(line, field, "expected an array of strings"))
            })
            .collect(),
        Some(_) => Err(malformed(line, field, "expected an array of strings")),
    }
}

fn split_pipe(field: &str) -> Vec<String> {
    if field.is_empty() {
        return Vec::new();
    }
    field.split('|').map(str::to_owned).collect()
}

fn read_csv(path: &Path) -> Result<Vec<Article>, CorpusError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| malformed(1, "header", e.to_string()))?;
    let headers = reader
        .headers()
        .map_err(|e| malformed(1, "header", e.to_string()))?
        .clone();
    let column = |name: &'static str| -> Result<usize, CorpusError> {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| malformed(1, name, "missing column"))
    };
    let year_col = column("venue_year")?;
    let title_col = column("title")?;
    let authors_col = column("authors")?;
    let refs_col = column("references")?;

    let mut articles = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            malformed(line, "record", e.to_string())
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let get = |col: usize, name: &'static str| {
            record
                .get(col)
                .ok_or_else(|| malformed(line, name, "missing"))
        };
        let year_text = get(year_col, "venue_year")?.trim();
        if year_text.is_empty() {
            return Err(malformed(line, "venue_year", "missing"));
        }
        let venue_year: i32 = year_text.parse().map_err(|_| CorpusError::YearFormat {
            line,
            value: year_text.to_owned(),
        })?;
        let title = get(title_col, "title")?.to_owned();
        if title.trim().is_empty() {
            return Err(malformed(line, "title", "empty"));
        }
        articles.push(Article {
            venue_year,
            title,
            authors: split_pipe(get(authors_col, "authors")?),
            references: split_pipe(get(refs_col, "references")?),
        });
    }
    Ok(articles)
}

/// Writes `corpus` as JSONL, one article per line, in corpus order.
pub fn write_jsonl(corpus: &Corpus, mut out: impl std::io::Write) -> std::io::Result<()> {
    for article in corpus.articles() {
        serde_json::to_writer(&mut out, article)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[derive(Serialize)]
struct StoreRef<'a> {
    format_version: u32,
    articles: &'a [Article],
}

#[derive(Deserialize)]
struct StoreOwned {
    format_version: u64,
    articles: Vec<Article>,
}

pub fn to_store_bytes(corpus: &Corpus) -> Vec<u8> {
    let mut bytes = serde_json::to_vec(&StoreRef {
        format_version: FORMAT_VERSION,
        articles: corpus.articles(),
    })
    .expect("corpus serialization is infallible");
    bytes.push(b'\n');
    bytes
}

pub fn from_store_bytes(bytes: &[u8]) -> Result<Corpus, CorpusError> {
    // Check the version first so a newer file fails with a clear message
    // even if its article layout changed.
    let header: serde_json::Value =
        serde_json::from_slice(bytes).map_err(|e| CorpusError::Persist(e.to_string()))?;
    match header.get("format_version").and_then(|v| v.as_u64()) {
        Some(v) if v == FORMAT_VERSION as u64 => {}
        Some(found) => {
            return Err(CorpusError::VersionMismatch {
                found,
                expected: FORMAT_VERSION,
            })
        }
        None => return Err(CorpusError::Persist("missing format_version".into())),
    }
    let store: StoreOwned =
        serde_json::from_value(header).map_err(|e| CorpusError::Persist(e.to_string()))?;
    debug_assert_eq!(store.format_version, FORMAT_VERSION as u64);
    Corpus::new(store.articles)
}

/// Persists the corpus as a single self-describing JSON document.
pub fn save(corpus: &Corpus, path: &Path) -> Result<(), CorpusError> {
    crate::report::write_atomic(path, &to_store_bytes(corpus))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<Corpus, CorpusError> {
    from_store_bytes(&fs::read(path)?)
}

/// Loads any supported corpus file: a persisted store (`.json`), CSV or JSONL.
pub fn open(path: &Path) -> Result<Corpus, CorpusError> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => load(path),
        _ => ingest(path, InputFormat::from_path(path)),
    }
}
