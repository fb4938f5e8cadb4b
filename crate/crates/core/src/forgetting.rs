//! Growth-adjusted forgetting curves and their smoothness statistics.
//!
//! Two readings of the weighting are offered. `Literal` evaluates the
//! expectation profile `(N_j / N) * C_i`, where `C_i` is the number of
//! citations from year `i` into the corpus year range. `PerCapita` rescales
//! the actual counts by publication volume, `c_ij * N / N_j`. Values are kept
//! as exact ratios.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::corpus::Corpus;
use crate::refparse::{PaperId, ParsedCorpus};
use crate::timeseries::{build_citation_curves, rank_by_total, CitationCurve, CitationSeries};

#[derive(Debug, Error, PartialEq)]
pub enum ForgettingError {
    #[error("corpus has no articles")]
    EmptyCorpus,
    #[error("citing year {0} is not a proceedings year")]
    MissingYear(i32),
    #[error("a curve needs at least 2 points, got {0}")]
    TooShort(usize),
    #[error("top-n must be at least 1")]
    InvalidTopN,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveMode {
    #[default]
    Literal,
    PerCapita,
}

impl CurveMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveMode::Literal => "literal",
            CurveMode::PerCapita => "per_capita",
        }
    }
}

impl fmt::Display for CurveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CurveMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "literal" => Ok(CurveMode::Literal),
            "per_capita" | "per-capita" => Ok(CurveMode::PerCapita),
            other => Err(format!("unknown forgetting-curve mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForgettingCurve {
    pub citing_year: i32,
    pub mode: CurveMode,
    /// One value per proceedings year.
    pub values: BTreeMap<i32, Ratio<u64>>,
    /// Citations to years without a publication count, left out of `values`.
    pub excluded: BTreeMap<i32, u64>,
}

impl ForgettingCurve {
    pub fn values_f64(&self) -> Vec<(i32, f64)> {
        self.values
            .iter()
            .map(|(&y, v)| (y, ratio_to_f64(v)))
            .collect()
    }
}

pub fn ratio_to_f64(r: &Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Forgetting curve of one citing year from a precomputed citation curve.
pub fn forgetting_curve_from(
    corpus: &Corpus,
    curve: Option<&CitationCurve>,
    citing_year: i32,
    mode: CurveMode,
) -> Result<ForgettingCurve, ForgettingError> {
    forgetting_curve_counts(corpus.counts(), curve, citing_year, mode)
}

/// As [`forgetting_curve_from`], given only the articles per proceedings year.
pub fn forgetting_curve_counts(
    counts: &BTreeMap<i32, u64>,
    curve: Option<&CitationCurve>,
    citing_year: i32,
    mode: CurveMode,
) -> Result<ForgettingCurve, ForgettingError> {
    let total_articles: u64 = counts.values().sum();
    if total_articles == 0 {
        return Err(ForgettingError::EmptyCorpus);
    }
    if counts.get(&citing_year).copied().unwrap_or(0) == 0 {
        return Err(ForgettingError::MissingYear(citing_year));
    }
    let empty = BTreeMap::new();
    let cited = curve.map(|c| &c.counts).unwrap_or(&empty);

    let mut excluded = BTreeMap::new();
    let mut in_range_total = 0u64;
    for (&year, &c) in cited {
        if counts.contains_key(&year) {
            in_range_total += c;
        } else {
            excluded.insert(year, c);
        }
    }

    let values = counts
        .iter()
        .map(|(&year, &n_year)| {
            let value = match mode {
                CurveMode::Literal => Ratio::new(n_year * in_range_total, total_articles),
                CurveMode::PerCapita => {
                    let c = cited.get(&year).copied().unwrap_or(0);
                    Ratio::new(c * total_articles, n_year)
                }
            };
            (year, value)
        })
        .collect();

    Ok(ForgettingCurve {
        citing_year,
        mode,
        values,
        excluded,
    })
}

pub fn forgetting_curve(
    corpus: &Corpus,
    parsed: &ParsedCorpus,
    citing_year: i32,
    mode: CurveMode,
) -> Result<ForgettingCurve, ForgettingError> {
    let curves = build_citation_curves(parsed);
    forgetting_curve_from(corpus, curves.get(&citing_year), citing_year, mode)
}

pub fn forgetting_curves(
    corpus: &Corpus,
    parsed: &ParsedCorpus,
    mode: CurveMode,
) -> Result<BTreeMap<i32, ForgettingCurve>, ForgettingError> {
    let curves = build_citation_curves(parsed);
    corpus
        .counts()
        .keys()
        .map(|&year| {
            forgetting_curve_from(corpus, curves.get(&year), year, mode).map(|c| (year, c))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothnessStats {
    pub variance_of_derivative: f64,
    pub total_variation: f64,
}

/// First differences over ascending years; sample variance of the
/// differences and their absolute sum.
pub fn smoothness(curve: &ForgettingCurve) -> Result<SmoothnessStats, ForgettingError> {
    let values: Vec<f64> = curve.values.values().map(ratio_to_f64).collect();
    smoothness_of(&values)
}

pub fn smoothness_of(values: &[f64]) -> Result<SmoothnessStats, ForgettingError> {
    if values.len() < 2 {
        return Err(ForgettingError::TooShort(values.len()));
    }
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let total_variation = diffs.iter().map(|d| d.abs()).sum();
    // A single difference has no spread.
    let variance_of_derivative = if diffs.len() < 2 {
        0.0
    } else {
        let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
        diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (diffs.len() - 1) as f64
    };
    Ok(SmoothnessStats {
        variance_of_derivative,
        total_variation,
    })
}

/// Smoothness for every proceedings year that cites into the corpus range.
pub fn smoothness_trend(
    corpus: &Corpus,
    parsed: &ParsedCorpus,
    mode: CurveMode,
) -> Result<BTreeMap<i32, SmoothnessStats>, ForgettingError> {
    let curves = build_citation_curves(parsed);
    smoothness_trend_from(corpus, &curves, mode)
}

pub fn smoothness_trend_from(
    corpus: &Corpus,
    curves: &BTreeMap<i32, CitationCurve>,
    mode: CurveMode,
) -> Result<BTreeMap<i32, SmoothnessStats>, ForgettingError> {
    smoothness_trend_counts(corpus.counts(), curves, mode)
}

/// As [`smoothness_trend_from`], given only the articles per proceedings year.
pub fn smoothness_trend_counts(
    counts: &BTreeMap<i32, u64>,
    curves: &BTreeMap<i32, CitationCurve>,
    mode: CurveMode,
) -> Result<BTreeMap<i32, SmoothnessStats>, ForgettingError> {
    let mut out = BTreeMap::new();
    if counts.len() < 2 {
        return Ok(out);
    }
    for &year in counts.keys() {
        let curve = forgetting_curve_counts(counts, curves.get(&year), year, mode)?;
        let cites_in_range = curves
            .get(&year)
            .map(|c| c.counts.keys().any(|y| counts.contains_key(y)))
            .unwrap_or(false);
        if cites_in_range {
            out.insert(year, smoothness(&curve)?);
        }
    }
    Ok(out)
}

/// Total citations to the top-`top_n` papers, grouped by their publication year.
pub fn milestone_bars(
    series: &BTreeMap<PaperId, CitationSeries>,
    top_n: usize,
) -> Result<BTreeMap<i32, u64>, ForgettingError> {
    let ranked = rank_by_total(series, top_n).map_err(|_| ForgettingError::InvalidTopN)?;
    let mut bars = BTreeMap::new();
    for (id, total) in ranked {
        *bars.entry(id.year()).or_insert(0) += total;
    }
    Ok(bars)
}
