//! The Milestone Coefficient and its components, exponent estimation for
//! the age adjustment, and super-milestone detection.
//!
//! For a paper cited in years `x` with counts `c`:
//!
//! * `SIGN` is the sign of the least-squares slope of `c` on `x` (`+1` for a
//!   single point or a flat series);
//! * `TCS = max(c) - min(c)`;
//! * `TCI = TCS / ((max(x) - min(x) + 1) * e^alpha)`;
//! * `NCI = sum_x c_x / total_x`, with `total_x` every citation made in year `x`;
//! * `MC = SIGN * |TCI * NCI|` (or `SIGN * sqrt(TCI^2 + NCI^2)` in norm mode).

pub mod powerlaw;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::corpus::{Corpus, CorpusStats};
use crate::refparse::{PaperId, ParsedCorpus};
use crate::timeseries::CitationSeries;

pub use powerlaw::{fit_discrete, hurwitz_zeta, PowerLawError, TailFit};

/// Exponent used when none is estimated.
pub const DEFAULT_ALPHA: f64 = 3.63;
pub const DEFAULT_SUPER_THRESHOLD: f64 = 0.001;

#[derive(Debug, Error, PartialEq)]
pub enum MilestoneError {
    #[error("years and counts differ in length ({years} vs {counts})")]
    LengthMismatch { years: usize, counts: usize },
    #[error("citation series is empty")]
    EmptySeries,
    #[error("years must be strictly increasing")]
    UnorderedYears,
    #[error("alpha must be finite")]
    NonFiniteAlpha,
    #[error("year {0} has citations to the paper but no citation total")]
    ZeroDenominator(i32),
    #[error("year {0} has no articles")]
    MissingYear(i32),
    #[error(transparent)]
    PowerLaw(#[from] PowerLawError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum McFormula {
    /// `SIGN * sqrt(TCI^2 * NCI^2)`.
    #[default]
    Product,
    /// `SIGN * sqrt(TCI^2 + NCI^2)`.
    Norm,
}

impl McFormula {
    pub fn as_str(self) -> &'static str {
        match self {
            McFormula::Product => "product",
            McFormula::Norm => "norm",
        }
    }
}

impl fmt::Display for McFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for McFormula {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "product" => Ok(McFormula::Product),
            "norm" => Ok(McFormula::Norm),
            other => Err(format!("unknown MC formula `{other}`")),
        }
    }
}

fn check_series(years: &[i32], counts: &[f64]) -> Result<(), MilestoneError> {
    if years.len() != counts.len() {
        return Err(MilestoneError::LengthMismatch {
            years: years.len(),
            counts: counts.len(),
        });
    }
    if years.is_empty() {
        return Err(MilestoneError::EmptySeries);
    }
    if years.windows(2).any(|w| w[1] <= w[0]) {
        return Err(MilestoneError::UnorderedYears);
    }
    Ok(())
}

/// Least-squares slope of `counts` on `years` and its sign.
pub fn sign_of_trend(years: &[i32], counts: &[f64]) -> Result<(f64, Sign), MilestoneError> {
    check_series(years, counts)?;
    if years.len() == 1 {
        return Ok((0.0, Sign::Positive));
    }
    let n = years.len() as f64;
    let mean_x = years.iter().map(|&y| y as f64).sum::<f64>() / n;
    let mean_c = counts.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (&x, &c) in years.iter().zip(counts) {
        let dx = x as f64 - mean_x;
        sxy += dx * (c - mean_c);
        sxx += dx * dx;
    }
    let slope = sxy / sxx;
    let sign = if slope >= 0.0 {
        Sign::Positive
    } else {
        Sign::Negative
    };
    Ok((slope, sign))
}

pub fn tcs(counts: &[f64]) -> Result<f64, MilestoneError> {
    let max = counts.iter().copied().reduce(f64::max);
    let min = counts.iter().copied().reduce(f64::min);
    match (max, min) {
        (Some(max), Some(min)) => Ok(max - min),
        _ => Err(MilestoneError::EmptySeries),
    }
}

pub fn tci(years: &[i32], counts: &[f64], alpha: f64) -> Result<f64, MilestoneError> {
    check_series(years, counts)?;
    if !alpha.is_finite() {
        return Err(MilestoneError::NonFiniteAlpha);
    }
    let span = (years[years.len() - 1] - years[0] + 1) as f64;
    Ok(tcs(counts)? / (span * alpha.exp()))
}

/// Sum over years of the paper's share of all citations made that year.
pub fn nci(
    by_year: &BTreeMap<i32, u64>,
    per_year_totals: &BTreeMap<i32, u64>,
) -> Result<f64, MilestoneError> {
    let mut sum = 0.0;
    for (&year, &count) in by_year {
        if count == 0 {
            continue;
        }
        match per_year_totals.get(&year) {
            Some(&total) if total > 0 => sum += count as f64 / total as f64,
            _ => return Err(MilestoneError::ZeroDenominator(year)),
        }
    }
    Ok(sum)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MilestoneRecord {
    pub paper: PaperId,
    pub total: u64,
    pub sign: i32,
    pub slope: f64,
    pub tcs: f64,
    pub tci: f64,
    pub nci: f64,
    pub mc: f64,
    pub formula: McFormula,
    pub years: Vec<i32>,
    pub series: Vec<u64>,
}

pub fn milestone_coefficient(
    series: &CitationSeries,
    per_year_totals: &BTreeMap<i32, u64>,
    alpha: f64,
    formula: McFormula,
) -> Result<MilestoneRecord, MilestoneError> {
    let years = series.years();
    let counts = series.counts();
    let (slope, sign) = sign_of_trend(&years, &counts)?;
    let tcs = tcs(&counts)?;
    let tci = tci(&years, &counts, alpha)?;
    let nci = nci(&series.by_year, per_year_totals)?;
    let magnitude = match formula {
        McFormula::Product => (tci * nci).abs(),
        McFormula::Norm => (tci * tci + nci * nci).sqrt(),
    };
    let mc = if magnitude == 0.0 {
        0.0
    } else {
        sign.value() as f64 * magnitude
    };
    Ok(MilestoneRecord {
        paper: series.paper.clone(),
        total: series.total(),
        sign: sign.value(),
        slope,
        tcs,
        tci,
        nci,
        mc,
        formula,
        years,
        series: series.by_year.values().copied().collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaMethod {
    MleDiscrete,
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaEstimate {
    pub alpha: f64,
    pub xmin: u64,
    pub n_tail: usize,
    pub method: AlphaMethod,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaSource {
    Mle,
    Fixed(f64),
}

impl Default for AlphaSource {
    fn default() -> Self {
        AlphaSource::Fixed(DEFAULT_ALPHA)
    }
}

impl FromStr for AlphaSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "mle" {
            return Ok(AlphaSource::Mle);
        }
        match s.parse::<f64>() {
            Ok(a) if a.is_finite() => Ok(AlphaSource::Fixed(a)),
            _ => Err(format!("alpha must be a number or `mle`, got `{s}`")),
        }
    }
}

/// Pools every per-year citation count of every paper into one sample.
pub fn pooled_counts<'a>(series: impl IntoIterator<Item = &'a CitationSeries>) -> Vec<u64> {
    series
        .into_iter()
        .flat_map(|s| s.by_year.values().copied())
        .collect()
}

pub fn estimate_alpha(
    series: &BTreeMap<PaperId, CitationSeries>,
    source: AlphaSource,
) -> Result<AlphaEstimate, MilestoneError> {
    match source {
        AlphaSource::Fixed(alpha) => Ok(AlphaEstimate {
            alpha,
            xmin: 1,
            n_tail: 0,
            method: AlphaMethod::Fixed,
        }),
        AlphaSource::Mle => {
            let fit = fit_discrete(&pooled_counts(series.values()))?;
            Ok(AlphaEstimate {
                alpha: fit.alpha,
                xmin: fit.xmin,
                n_tail: fit.n_tail,
                method: AlphaMethod::MleDiscrete,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuperMilestoneFlag {
    pub paper: PaperId,
    pub peak_share: f64,
    pub peak_year: i32,
    pub is_super: bool,
}

/// Peak yearly share of all citations; super iff strictly above `threshold`.
pub fn super_flag(
    series: &CitationSeries,
    per_year_totals: &BTreeMap<i32, u64>,
    threshold: f64,
) -> SuperMilestoneFlag {
    let mut peak_share = 0.0;
    let mut peak_year = series.first_cited;
    for (&year, &count) in &series.by_year {
        let total = per_year_totals.get(&year).copied().unwrap_or(0);
        if total == 0 {
            continue;
        }
        let share = count as f64 / total as f64;
        if share > peak_share {
            peak_share = share;
            peak_year = year;
        }
    }
    SuperMilestoneFlag {
        paper: series.paper.clone(),
        peak_share,
        peak_year,
        is_super: peak_share > threshold,
    }
}

pub fn detect_super<'a>(
    series: impl IntoIterator<Item = &'a CitationSeries>,
    per_year_totals: &BTreeMap<i32, u64>,
    threshold: f64,
) -> Vec<SuperMilestoneFlag> {
    series
        .into_iter()
        .map(|s| super_flag(s, per_year_totals, threshold))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CitingFraction {
    /// Paper's share of the year's citations.
    pub share: f64,
    pub mean_refs_per_paper: f64,
    /// Expected number of citations to the paper per article that year.
    pub expected_per_article: f64,
    /// Articles per citation to the paper (`1 / expected_per_article`).
    pub articles_per_citation: Option<f64>,
}

pub fn estimated_citing_fraction(
    corpus: &Corpus,
    parsed: &ParsedCorpus,
    stats: &CorpusStats,
    paper: &PaperId,
    year: i32,
) -> Result<CitingFraction, MilestoneError> {
    if corpus.count(year) == 0 {
        return Err(MilestoneError::MissingYear(year));
    }
    let cites = parsed
        .articles
        .iter()
        .filter(|a| a.venue_year == year)
        .flat_map(|a| a.refs.iter())
        .filter(|r| r.id.as_ref() == Some(paper))
        .count() as f64;
    let total = stats.total(year) as f64;
    let share = if total > 0.0 { cites / total } else { 0.0 };
    let mean_refs_per_paper = stats.mean_refs_per_paper.get(&year).copied().unwrap_or(0.0);
    let expected_per_article = share * mean_refs_per_paper;
    Ok(CitingFraction {
        share,
        mean_refs_per_paper,
        expected_per_article,
        articles_per_citation: (expected_per_article > 0.0).then(|| 1.0 / expected_per_article),
    })
}
