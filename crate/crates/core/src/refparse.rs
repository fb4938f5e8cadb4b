//! Reference-string parsing: publication year, title and author keys, and
//! the canonical `<year>_<normalized title>` paper identity.
//!
//! Two author notations are recognised:
//!
//! * firstname-first, e.g. `Virginia Braun and Victoria Clarke. 2006. Title. Venue.`
//!   (also the IEEE variant `A. Author and B. Author, "Title," in ...`);
//! * lastname-comma-initials, e.g. `Hart, S. G., & Staveland, L. E. (1988). Title. ...`
//!   (also the older `Card, S.K. and Moran, T.P. Title. Publisher, 1983.` layout).
//!
//! Parsing never fails hard: anything unrecognised comes back with
//! [`NotationStyle::Unknown`] and absent fields.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::LazyLock;

use rayon::prelude::*;
use regex::Regex;
use serde::{Deserialize, Serialize};
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::corpus::Corpus;

/// Lowercases, folds diacritics and keeps only `[a-z0-9]`.
pub fn normalize_title(title_raw: &str) -> String {
    let mut out = String::with_capacity(title_raw.len());
    for c in title_raw.nfkd() {
        if is_combining_mark(c) {
            continue;
        }
        for lc in c.to_lowercase() {
            if lc.is_ascii_alphanumeric() {
                out.push(lc);
            }
        }
    }
    out
}

fn fold_letters(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.nfkd() {
        if is_combining_mark(c) {
            continue;
        }
        for lc in c.to_lowercase() {
            if lc.is_ascii_lowercase() {
                out.push(lc);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NotationStyle {
    FirstnameFirst,
    LastnameCommaInitials,
    Unknown,
}

impl NotationStyle {
    pub fn as_str(self) -> &'static str {
        match self {
            NotationStyle::FirstnameFirst => "firstname_first",
            NotationStyle::LastnameCommaInitials => "lastname_comma_initials",
            NotationStyle::Unknown => "unknown",
        }
    }
}

/// Canonical identity of a cited work.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PaperId(String);

impl PaperId {
    /// Present iff the title normalizes to something non-empty.
    pub fn new(year: i32, title_norm: &str) -> Option<Self> {
        if !(0..=9999).contains(&year)
            || title_norm.is_empty()
            || !title_norm
                .bytes()
                .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit())
        {
            return None;
        }
        Some(PaperId(format!("{year:04}_{title_norm}")))
    }

    pub fn from_title(year: i32, title_raw: &str) -> Option<Self> {
        Self::new(year, &normalize_title(title_raw))
    }

    /// Validates an already-minted key such as `2006_usingthematicanalysis`.
    pub fn parse(key: &str) -> Option<Self> {
        let (year, title) = key.split_once('_')?;
        if year.len() != 4 || !year.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        Self::new(year.parse().ok()?, title)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn year(&self) -> i32 {
        self.0[..4].parse().expect("paper id starts with a 4-digit year")
    }

    pub fn title_norm(&self) -> &str {
        &self.0[5..]
    }
}

impl fmt::Display for PaperId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `<lastname>_<first initial>`, ASCII-folded and lowercase.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AuthorKey(String);

impl AuthorKey {
    pub fn from_parts(surname: &str, given: &str) -> Option<Self> {
        let last = fold_letters(surname);
        let initial = fold_letters(given).chars().next()?;
        if last.is_empty() {
            return None;
        }
        Some(AuthorKey(format!("{last}_{initial}")))
    }

    /// Accepts `Braun, V.`, `V. Braun` and `Virginia Braun` alike.
    pub fn from_name(name: &str) -> Option<Self> {
        let name = name.trim();
        if let Some((surname, given)) = name.split_once(',') {
            return Self::from_parts(surname, given);
        }
        let tokens: Vec<&str> = name.split_whitespace().collect();
        split_firstname_first(&tokens).and_then(|(given, surname)| Self::from_parts(&surname, given))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AuthorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

const PARTICLES: &[&str] = &[
    "van", "von", "der", "den", "de", "del", "della", "da", "di", "du", "dos", "das", "la", "le",
    "ter", "ten", "zu", "y", "bin", "al",
];

const SUFFIXES: &[&str] = &["jr", "sr", "ii", "iii", "iv"];

fn is_suffix(token: &str) -> bool {
    let t = token.trim_end_matches([',', '.']).to_ascii_lowercase();
    SUFFIXES.contains(&t.as_str())
}

fn is_particle(token: &str) -> bool {
    PARTICLES.contains(&token)
}

/// Splits `[given..., particles..., surname]` into (first given token, surname).
fn split_firstname_first<'a>(tokens: &[&'a str]) -> Option<(&'a str, String)> {
    let mut end = tokens.len();
    while end > 0 && is_suffix(tokens[end - 1]) {
        end -= 1;
    }
    if end < 2 {
        return None;
    }
    let mut start = end - 1;
    while start > 1 && is_particle(tokens[start - 1]) {
        start -= 1;
    }
    let surname: String = tokens[start..end].concat();
    Some((tokens[0], surname))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsedReference {
    pub raw: String,
    pub year: Option<i32>,
    pub title_raw: Option<String>,
    pub title_norm: Option<String>,
    pub authors: Vec<AuthorKey>,
    pub style: NotationStyle,
}

impl ParsedReference {
    fn unknown(raw: &str, year: Option<i32>) -> Self {
        ParsedReference {
            raw: raw.to_owned(),
            year,
            title_raw: None,
            title_norm: None,
            authors: Vec::new(),
            style: NotationStyle::Unknown,
        }
    }

    pub fn paper_id(&self) -> Option<PaperId> {
        paper_id(self)
    }
}

/// Present iff the reference has both a year and a non-empty normalized title.
pub fn paper_id(reference: &ParsedReference) -> Option<PaperId> {
    if reference.style == NotationStyle::Unknown {
        return None;
    }
    PaperId::new(reference.year?, reference.title_norm.as_deref()?)
}

/// Year bounds applied while parsing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseContext {
    pub min_year: i32,
    pub max_year: i32,
}

impl Default for ParseContext {
    fn default() -> Self {
        ParseContext {
            min_year: 1800,
            max_year: current_year() + 1,
        }
    }
}

impl ParseContext {
    /// A reference may not postdate its citing article by more than a year.
    pub fn citing(venue_year: i32) -> Self {
        let default = Self::default();
        ParseContext {
            min_year: default.min_year,
            max_year: default.max_year.min(venue_year + 1),
        }
    }

    fn plausible(&self, year: i32) -> bool {
        self.min_year <= year && year <= self.max_year
    }
}

fn current_year() -> i32 {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    1970 + (secs as f64 / (365.2425 * 86_400.0)) as i32
}

static LEADING_NUMBER: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(?:\[\d{1,4}\]|\d{1,3}\.|\(\d{1,4}\))\s+").unwrap());

// One `Surname, I. I.` entry, optionally preceded by a list separator.
static LASTNAME_ENTRY: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"^(?:\s*,?\s*(?:&|and)\s+|\s*,\s*|\s*)(?P<sur>(?:(?:van|von|der|den|de|del|della|da|di|du|dos|das|la|le|ter|ten|Van|Von|De|Del|Da|Di|Du|La|Le)\s+)*\p{Lu}[\p{L}'’\-]*(?:[\s\-]\p{Lu}[\p{L}'’\-]*)?),\s*(?P<ini>\p{Lu}\.(?:\s?-?\s?\p{Lu}\.)*|\p{Lu}(?:-?\p{Lu})?\b)(?:\s*,?\s*(?:Jr|Sr|II|III)\.?)?",
    )
    .unwrap()
});

static ET_AL: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^\s*,?\s*(?:et\s+al\.?|and\s+others\.?|\.\.\.)").unwrap());

static PAREN_YEAR: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^\s*\.?\s*\(\s*(?P<year>\d{4})[a-z]?(?:[,/][^)]*)?\)\s*[.,:]?\s*").unwrap()
});

static BARE_YEAR: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^\s*[.,]?\s*(?P<year>\d{4})[a-z]?\s*[.,:]\s*").unwrap());

static YEAR_TOKEN: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?:^|[^\d])(?P<year>\d{4})[a-z]?(?:[^\d]|$)").unwrap());

static INITIAL_TOKEN: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^\p{Lu}\.?(?:-?\p{Lu}\.?)*,?$").unwrap());

static NAME_TOKEN: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^\p{Lu}[\p{L}'’\-]*\.?,?$|^(?:Mc|Mac|O')\p{Lu}\p{L}*,?$").unwrap());

static FIRSTNAME_SEPARATOR: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\s*,\s*(?:and|&)\s+|\s+(?:and|&)\s+|\s*,\s*").unwrap());

const ABBREVIATIONS: &[&str] = &[
    "e.g", "i.e", "vs", "al", "no", "vol", "dr", "st", "mr", "mrs", "ms", "prof", "inc", "ltd",
    "fig", "approx", "ca", "cf", "jr", "sr",
];

/// Parses with the default year bounds.
pub fn parse_reference(raw: &str) -> ParsedReference {
    parse_reference_with(raw, &ParseContext::default())
}

pub fn parse_reference_with(raw: &str, ctx: &ParseContext) -> ParsedReference {
    let cleaned = clean(raw);
    let text = cleaned.as_str();

    if let Some(parsed) = parse_lastname_style(raw, text, ctx) {
        return parsed;
    }
    if let Some(parsed) = parse_firstname_style(raw, text, ctx) {
        return parsed;
    }
    ParsedReference::unknown(raw, first_year(text, ctx))
}

fn clean(raw: &str) -> String {
    let collapsed = raw.split_whitespace().collect::<Vec<_>>().join(" ");
    LEADING_NUMBER.replace(&collapsed, "").into_owned()
}

fn first_year(text: &str, ctx: &ParseContext) -> Option<i32> {
    YEAR_TOKEN
        .captures_iter(text)
        .filter_map(|c| c["year"].parse::<i32>().ok())
        .find(|&y| ctx.plausible(y))
}

fn parse_lastname_style(raw: &str, text: &str, ctx: &ParseContext) -> Option<ParsedReference> {
    let mut pos = 0;
    let mut authors = Vec::new();
    while let Some(caps) = LASTNAME_ENTRY.captures(&text[pos..]) {
        if let Some(key) = AuthorKey::from_parts(&caps["sur"], &caps["ini"]) {
            authors.push(key);
        }
        pos += caps.get(0).unwrap().end();
    }
    if authors.is_empty() {
        return None;
    }
    if let Some(m) = ET_AL.find(&text[pos..]) {
        pos += m.end();
    }
    let rest = &text[pos..];

    let (year, title_part, adjacent) = if let Some(c) = PAREN_YEAR.captures(rest) {
        (c["year"].parse::<i32>().ok(), &rest[c.get(0).unwrap().end()..], true)
    } else if let Some(c) = BARE_YEAR.captures(rest) {
        (c["year"].parse::<i32>().ok(), &rest[c.get(0).unwrap().end()..], true)
    } else {
        (None, rest.trim_start_matches(['.', ',', ' ', ':']), false)
    };

    Some(finish(
        raw,
        NotationStyle::LastnameCommaInitials,
        authors,
        year.filter(|_| adjacent),
        title_part,
        ctx,
    ))
}

fn parse_firstname_style(raw: &str, text: &str, ctx: &ParseContext) -> Option<ParsedReference> {
    let (block, rest) = split_firstname_block(text)?;
    let authors = firstname_authors(block)?;

    let (year, title_part) = if let Some(c) = BARE_YEAR.captures(rest) {
        (c["year"].parse::<i32>().ok(), &rest[c.get(0).unwrap().end()..])
    } else if let Some(c) = PAREN_YEAR.captures(rest) {
        (c["year"].parse::<i32>().ok(), &rest[c.get(0).unwrap().end()..])
    } else {
        (None, rest)
    };
    Some(finish(
        raw,
        NotationStyle::FirstnameFirst,
        authors,
        year,
        title_part,
        ctx,
    ))
}

/// Finds the end of a firstname-first author block: the first sentence
/// period that does not close an initial, or a comma that opens a quoted
/// title.
fn split_firstname_block(text: &str) -> Option<(&str, &str)> {
    let bytes = text.as_bytes();
    let mut word_start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            ' ' => word_start = i + 1,
            ',' => {
                let after = text[i + 1..].trim_start();
                if after.starts_with(['"', '“', '‘', '\'']) {
                    return Some((&text[..i], after));
                }
            }
            '.' => {
                let next = bytes.get(i + 1).copied();
                if !matches!(next, None | Some(b' ')) {
                    continue;
                }
                let word = &text[word_start..i];
                let bare = word.trim_start_matches(['(', '"']);
                if INITIAL_TOKEN.is_match(bare) && bare.chars().filter(|c| c.is_uppercase()).count() <= 3
                {
                    // `O. Wobbrock` style initial, unless the block is done.
                    let after = &text[i + 1..];
                    if !after.trim_start().starts_with(|c: char| c.is_ascii_digit()) {
                        continue;
                    }
                }
                return Some((&text[..i], &text[(i + 1).min(text.len())..]));
            }
            '(' if i > 0 => {
                // `Firstname Lastname (2006). Title.`
                let after = &text[i..];
                if PAREN_YEAR.is_match(after) {
                    return Some((text[..i].trim_end(), after));
                }
            }
            _ => {}
        }
    }
    None
}

fn firstname_authors(block: &str) -> Option<Vec<AuthorKey>> {
    let block = block.trim().trim_end_matches(',');
    let block = match ET_AL_SUFFIX.find(block) {
        Some(m) => &block[..m.start()],
        None => block,
    };
    if block.is_empty() || block.len() > 600 {
        return None;
    }
    let mut keys = Vec::new();
    let mut names = 0usize;
    for name in FIRSTNAME_SEPARATOR.split(block) {
        let name = name.trim();
        if name.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = name.split_whitespace().collect();
        if tokens.len() > 6 {
            return None;
        }
        for tok in &tokens {
            let ok = INITIAL_TOKEN.is_match(tok)
                || NAME_TOKEN.is_match(tok)
                || is_particle(tok)
                || is_suffix(tok);
            if !ok {
                return None;
            }
        }
        names += 1;
        if let Some((given, surname)) = split_firstname_first(&tokens) {
            if let Some(key) = AuthorKey::from_parts(&surname, given) {
                keys.push(key);
            }
        }
    }
    if names == 0 {
        return None;
    }
    Some(keys)
}

static ET_AL_SUFFIX: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\s*,?\s*(?:et\s+al\.?|and\s+others)$").unwrap());

fn finish(
    raw: &str,
    style: NotationStyle,
    authors: Vec<AuthorKey>,
    adjacent_year: Option<i32>,
    title_part: &str,
    ctx: &ParseContext,
) -> ParsedReference {
    let (title, tail) = extract_title(title_part);
    let year = adjacent_year
        .filter(|&y| ctx.plausible(y))
        .or_else(|| first_year(tail, ctx));
    let title_raw = title.filter(|t| t.chars().any(char::is_alphanumeric));
    let title_norm = title_raw
        .as_deref()
        .map(normalize_title)
        .filter(|t| !t.is_empty());
    ParsedReference {
        raw: raw.to_owned(),
        year,
        title_raw: title_raw.filter(|_| title_norm.is_some()),
        title_norm,
        authors,
        style,
    }
}

/// Returns the title sentence at the start of `text` and the remaining tail.
fn extract_title(text: &str) -> (Option<String>, &str) {
    let text = text.trim_start();
    if text.is_empty() {
        return (None, "");
    }
    for (open, close) in [('"', '"'), ('“', '”'), ('‘', '’')] {
        if let Some(inner) = text.strip_prefix(open) {
            if let Some(end) = inner.find(close) {
                let title = inner[..end].trim().trim_end_matches([',', '.']);
                return (Some(title.to_owned()), &inner[end + close.len_utf8()..]);
            }
        }
    }
    let end = sentence_end(text);
    let (title, tail) = text.split_at(end);
    let title = title
        .trim()
        .trim_end_matches(['.', ','])
        .trim();
    (Some(title.to_owned()), tail)
}

fn sentence_end(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut word_start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            ' ' => word_start = i + 1,
            '?' | '!' => {
                let next = bytes.get(i + 1).copied();
                if matches!(next, None | Some(b' ') | Some(b'.') | Some(b',')) {
                    return i + 1;
                }
            }
            '.' => {
                let next = bytes.get(i + 1).copied();
                if !matches!(next, None | Some(b' ')) {
                    continue;
                }
                let word = text[word_start..i].trim_start_matches(['(', '"', '“']);
                let lower = word.to_ascii_lowercase();
                let is_abbrev = ABBREVIATIONS.contains(&lower.as_str())
                    || (word.chars().count() == 1 && word.chars().all(char::is_uppercase))
                    || (word.contains('.') && word.len() <= 5);
                if is_abbrev {
                    continue;
                }
                return i;
            }
            _ => {}
        }
    }
    text.len()
}

/// The parts of a reference the analyses need, without the raw text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CitedRef {
    pub year: Option<i32>,
    pub id: Option<PaperId>,
    pub authors: Vec<AuthorKey>,
    pub style: NotationStyle,
}

impl From<ParsedReference> for CitedRef {
    fn from(parsed: ParsedReference) -> Self {
        CitedRef {
            id: paper_id(&parsed),
            year: parsed.year,
            authors: parsed.authors,
            style: parsed.style,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedArticle {
    pub venue_year: i32,
    pub refs: Vec<CitedRef>,
}

/// Every reference of a corpus, parsed in the context of its citing article.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedCorpus {
    pub articles: Vec<ParsedArticle>,
}

impl ParsedCorpus {
    pub fn refs_by_year(&self) -> impl Iterator<Item = (i32, &CitedRef)> {
        self.articles
            .iter()
            .flat_map(|a| a.refs.iter().map(move |r| (a.venue_year, r)))
    }
}

/// Parses all references; the result does not depend on the thread count.
pub fn parse_corpus(corpus: &Corpus) -> ParsedCorpus {
    let articles = corpus
        .articles()
        .par_iter()
        .map(|article| {
            let ctx = ParseContext::citing(article.venue_year);
            ParsedArticle {
                venue_year: article.venue_year,
                refs: article
                    .references
                    .iter()
                    .map(|raw| CitedRef::from(parse_reference_with(raw, &ctx)))
                    .collect(),
            }
        })
        .collect();
    ParsedCorpus { articles }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParseYield {
    pub by_style: BTreeMap<NotationStyle, u64>,
    pub total: u64,
    pub with_year: u64,
    pub identified: u64,
    pub parsed_fraction: f64,
}

pub fn parse_yield(parsed: &ParsedCorpus) -> ParseYield {
    let mut by_style = BTreeMap::new();
    let (mut total, mut with_year, mut identified) = (0u64, 0u64, 0u64);
    for (_, r) in parsed.refs_by_year() {
        *by_style.entry(r.style).or_insert(0) += 1;
        total += 1;
        with_year += r.year.is_some() as u64;
        identified += r.id.is_some() as u64;
    }
    let parsed_fraction = if total == 0 {
        1.0
    } else {
        identified as f64 / total as f64
    };
    ParseYield {
        by_style,
        total,
        with_year,
        identified,
        parsed_fraction,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn keys(r: &ParsedReference) -> Vec<&str> {
        r.authors.iter().map(AuthorKey::as_str).collect()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(
            normalize_title("Using thematic analysis in psychology"),
            "usingthematicanalysisinpsychology"
        );
        assert_eq!(
            normalize_title("D3: Data-Driven Documents\n"),
            "d3datadrivendocuments"
        );
        assert_eq!(
            normalize_title("Beyond Zipf\u{2019}s law\u{2026}"),
            normalize_title("beyond zipfs law")
        );
        assert_eq!(normalize_title("Caf\u{e9} na\u{ef}ve \u{fb01}t"), "cafenaivefit");
        assert_eq!(normalize_title("!!! ---"), "");
    }

    #[test]
    fn acm_two_authors() {
        let r = parse_reference(
            "Virginia Braun and Victoria Clarke. 2006. Using thematic analysis in psychology. \
             Qualitative Research in Psychology 3, 2, 77\u{2013}101.",
        );
        assert_eq!(r.style, NotationStyle::FirstnameFirst);
        assert_eq!(r.year, Some(2006));
        assert_eq!(
            r.title_norm.as_deref(),
            Some("usingthematicanalysisinpsychology")
        );
        assert_eq!(keys(&r), ["braun_v", "clarke_v"]);
        assert_eq!(
            paper_id(&r).unwrap().as_str(),
            "2006_usingthematicanalysisinpsychology"
        );
    }

    #[test]
    fn apa_with_book_chapter_tail() {
        let r = parse_reference(
            "Hart, S. G., & Staveland, L. E. (1988). Development of NASA-TLX (Task Load Index): \
             Results of empirical and theoretical research. In P. A. Hancock & N. Meshkati (Eds.), \
             Human mental workload (pp. 139\u{2013}183). North-Holland.",
        );
        assert_eq!(r.style, NotationStyle::LastnameCommaInitials);
        assert_eq!(r.year, Some(1988));
        assert_eq!(keys(&r), ["hart_s", "staveland_l"]);
        assert_eq!(
            paper_id(&r).unwrap().as_str(),
            "1988_developmentofnasatlxtaskloadindexresultsofempiricalandtheoreticalresearch"
        );
    }

    #[test]
    fn unparseable_is_soft() {
        let r = parse_reference("(no date) Untitled memo");
        assert_eq!(r.style, NotationStyle::Unknown);
        assert_eq!(r.year, None);
        assert_eq!(paper_id(&r), None);
    }

    #[test]
    fn year_suffix_is_stripped() {
        let r = parse_reference("Lee, K. (2023a). Some title here. Journal 1, 2.");
        assert_eq!(r.year, Some(2023));
        let r = parse_reference("Kim Lee. 2023b. Some title here. In Proc. X.");
        assert_eq!(r.year, Some(2023));
    }

    #[test]
    fn old_sigchi_year_at_end() {
        let r = parse_reference(
            "Ishii, H. and Ullmer, B. Tangible bits: towards seamless interfaces between people, \
             bits and atoms. In Proc. CHI '97, ACM Press (1997), 234-241.",
        );
        assert_eq!(r.style, NotationStyle::LastnameCommaInitials);
        assert_eq!(r.year, Some(1997));
        assert_eq!(keys(&r), ["ishii_h", "ullmer_b"]);
        assert_eq!(
            r.title_norm.as_deref(),
            Some("tangiblebitstowardsseamlessinterfacesbetweenpeoplebitsandatoms")
        );
    }

    #[test]
    fn ieee_quoted_title() {
        let r = parse_reference(
            "M. Bostock, V. Ogievetsky, and J. Heer, \u{201c}D\u{b3}: Data-driven documents,\u{201d} \
             IEEE Trans. Vis. Comput. Graph., vol. 17, no. 12, pp. 2301\u{2013}2309, 2011.",
        );
        assert_eq!(r.style, NotationStyle::FirstnameFirst);
        assert_eq!(r.year, Some(2011));
        assert_eq!(keys(&r), ["bostock_m", "ogievetsky_v", "heer_j"]);
        assert_eq!(r.title_norm.as_deref(), Some("d3datadrivendocuments"));
    }

    #[test]
    fn citing_context_rejects_future_years() {
        let ctx = ParseContext::citing(2000);
        let r = parse_reference_with("Ann Lee. 2010. A title. Venue.", &ctx);
        assert_eq!(r.year, None);
        let r = parse_reference_with("Ann Lee. 2001. A title. Venue.", &ctx);
        assert_eq!(r.year, Some(2001));
    }

    #[test]
    fn author_key_forms_collapse() {
        for name in ["V. Braun", "Virginia Braun", "Braun, V.", "Braun, Virginia"] {
            assert_eq!(AuthorKey::from_name(name).unwrap().as_str(), "braun_v");
        }
        assert_eq!(
            AuthorKey::from_name("Xavier van der Berg").unwrap().as_str(),
            "vanderberg_x"
        );
        assert_eq!(
            AuthorKey::from_name("José Pérez-García Jr.").unwrap().as_str(),
            "perezgarcia_j"
        );
        assert_eq!(AuthorKey::from_name("Madonna"), None);
    }

    #[test]
    fn paper_id_shape() {
        assert_eq!(PaperId::new(2006, "abc").unwrap().as_str(), "2006_abc");
        assert_eq!(PaperId::new(2006, ""), None);
        assert_eq!(PaperId::new(2006, "a b"), None);
        let id = PaperId::parse("1988_nasatlx").unwrap();
        assert_eq!((id.year(), id.title_norm()), (1988, "nasatlx"));
        assert!(PaperId::parse("88_x").is_none());
    }

    #[test]
    fn numbered_and_wrapped_references() {
        let r = parse_reference(
            "[12] Jacob O. Wobbrock and Julie A.\n Kientz. 2016. Research contributions in \
             human-computer interaction. interactions 23, 3 (2016), 38\u{2013}44.",
        );
        assert_eq!(r.year, Some(2016));
        assert_eq!(keys(&r), ["wobbrock_j", "kientz_j"]);
        assert_eq!(
            r.title_norm.as_deref(),
            Some("researchcontributionsinhumancomputerinteraction")
        );
    }

    #[test]
    fn et_al_is_dropped() {
        let r = parse_reference("Smith, J., et al. (2015). Big study. Nature 1, 2.");
        assert_eq!(keys(&r), ["smith_j"]);
        assert_eq!(r.year, Some(2015));
        let r = parse_reference("John Smith et al. 2015. Big study. Nature 1, 2.");
        assert_eq!(keys(&r), ["smith_j"]);
        assert_eq!(r.title_norm.as_deref(), Some("bigstudy"));
    }

    #[test]
    fn yield_counts_styles() {
        use crate::corpus::Article;
        let corpus = Corpus::new(vec![Article {
            venue_year: 2010,
            title: "T".into(),
            authors: vec![],
            references: vec![
                "Ann Lee. 2001. A title. Venue.".into(),
                "Lee, A. (2002). Other title. Venue.".into(),
                "(no date) Untitled memo".into(),
            ],
        }])
        .unwrap();
        let y = parse_yield(&parse_corpus(&corpus));
        assert_eq!(y.total, 3);
        assert_eq!(y.identified, 2);
        assert_eq!(y.by_style[&NotationStyle::Unknown], 1);
        assert!((y.parsed_fraction - 2.0 / 3.0).abs() < 1e-15);

        let empty = parse_yield(&parse_corpus(&Corpus::empty()));
        assert_eq!((empty.total, empty.parsed_fraction), (0, 1.0));
    }

    #[test]
    fn question_mark_title() {
        let r = parse_reference("Ann Lee. 2019. Is this the end? Journal of Things 3.");
        assert_eq!(r.title_raw.as_deref(), Some("Is this the end?"));
    }
}
