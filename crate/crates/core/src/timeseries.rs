//! Citation curves (citing year → cited year histogram) and per-paper
//! citation series, plus the milestone-citation summaries built on them.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::corpus::CorpusStats;
use crate::refparse::{ParsedCorpus, PaperId};

#[derive(Debug, Error, PartialEq)]
pub enum TimeseriesError {
    #[error("top-n must be at least 1")]
    InvalidTopN,
    #[error("milestone set is empty")]
    EmptyMilestones,
    #[error("no articles in citing year {0}")]
    MissingYear(i32),
    #[error("citing year {0} has no references")]
    NoReferences(i32),
}

/// Citations made in one proceedings year, by publication year of the cited work.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CitationCurve {
    pub citing_year: i32,
    pub counts: BTreeMap<i32, u64>,
}

impl CitationCurve {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// Citations received by one paper, by citing proceedings year.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CitationSeries {
    pub paper: PaperId,
    pub by_year: BTreeMap<i32, u64>,
    pub first_cited: i32,
}

impl CitationSeries {
    pub fn total(&self) -> u64 {
        self.by_year.values().sum()
    }

    pub fn years(&self) -> Vec<i32> {
        self.by_year.keys().copied().collect()
    }

    pub fn counts(&self) -> Vec<f64> {
        self.by_year.values().map(|&c| c as f64).collect()
    }
}

/// Counts every reference with a usable year, identified or not.
pub fn build_citation_curves(parsed: &ParsedCorpus) -> BTreeMap<i32, CitationCurve> {
    let mut curves: BTreeMap<i32, CitationCurve> = BTreeMap::new();
    for (citing_year, r) in parsed.refs_by_year() {
        let Some(cited) = r.year else { continue };
        let curve = curves.entry(citing_year).or_insert_with(|| CitationCurve {
            citing_year,
            counts: BTreeMap::new(),
        });
        *curve.counts.entry(cited).or_insert(0) += 1;
    }
    curves
}

pub fn build_citation_series(parsed: &ParsedCorpus) -> BTreeMap<PaperId, CitationSeries> {
    build_citation_series_where(parsed, |_| true)
}

/// Series restricted to citing years accepted by `include`.
pub fn build_citation_series_where(
    parsed: &ParsedCorpus,
    include: impl Fn(i32) -> bool,
) -> BTreeMap<PaperId, CitationSeries> {
    let mut counts: BTreeMap<&PaperId, BTreeMap<i32, u64>> = BTreeMap::new();
    for (citing_year, r) in parsed.refs_by_year() {
        if !include(citing_year) {
            continue;
        }
        if let Some(id) = &r.id {
            *counts.entry(id).or_default().entry(citing_year).or_insert(0) += 1;
        }
    }
    counts
        .into_iter()
        .map(|(id, by_year)| {
            let first_cited = *by_year.keys().next().expect("series has at least one year");
            (
                id.clone(),
                CitationSeries {
                    paper: id.clone(),
                    by_year,
                    first_cited,
                },
            )
        })
        .collect()
}

/// Top `n` papers by total citations; ties go to the smaller id.
pub fn rank_by_total(
    series: &BTreeMap<PaperId, CitationSeries>,
    n: usize,
) -> Result<Vec<(PaperId, u64)>, TimeseriesError> {
    if n == 0 {
        return Err(TimeseriesError::InvalidTopN);
    }
    let mut ranked: Vec<(PaperId, u64)> = series
        .values()
        .map(|s| (s.paper.clone(), s.total()))
        .collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(n);
    Ok(ranked)
}

/// Milestones ranked only on citations from proceedings before `citing_year`.
pub fn prior_milestones(
    parsed: &ParsedCorpus,
    citing_year: i32,
    n: usize,
) -> Result<BTreeSet<PaperId>, TimeseriesError> {
    let prior = build_citation_series_where(parsed, |y| y < citing_year);
    Ok(rank_by_total(&prior, n)?
        .into_iter()
        .map(|(id, _)| id)
        .collect())
}

/// [`prior_milestones`] for every proceedings year, in one pass.
pub fn prior_milestones_by_year(
    parsed: &ParsedCorpus,
    n: usize,
) -> Result<BTreeMap<i32, BTreeSet<PaperId>>, TimeseriesError> {
    if n == 0 {
        return Err(TimeseriesError::InvalidTopN);
    }
    let mut by_year: BTreeMap<i32, Vec<&PaperId>> = BTreeMap::new();
    for article in &parsed.articles {
        let ids = by_year.entry(article.venue_year).or_default();
        ids.extend(article.refs.iter().filter_map(|r| r.id.as_ref()));
    }
    let mut totals: HashMap<&PaperId, u64> = HashMap::new();
    let mut out = BTreeMap::new();
    for (&year, ids) in &by_year {
        let mut ranked: Vec<(&PaperId, u64)> = totals.iter().map(|(&id, &t)| (id, t)).collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        ranked.truncate(n);
        out.insert(year, ranked.into_iter().map(|(id, _)| id.clone()).collect());
        for &id in ids {
            *totals.entry(id).or_insert(0) += 1;
        }
    }
    Ok(out)
}

fn milestone_counts(
    parsed: &ParsedCorpus,
    citing_year: i32,
    milestones: &BTreeSet<PaperId>,
) -> Result<BTreeMap<i32, u64>, TimeseriesError> {
    if milestones.is_empty() {
        return Err(TimeseriesError::EmptyMilestones);
    }
    let mut seen_year = false;
    let mut by_cited_year = BTreeMap::new();
    for article in parsed.articles.iter().filter(|a| a.venue_year == citing_year) {
        seen_year = true;
        for id in article.refs.iter().filter_map(|r| r.id.as_ref()) {
            if milestones.contains(id) {
                *by_cited_year.entry(id.year()).or_insert(0) += 1;
            }
        }
    }
    if !seen_year {
        return Err(TimeseriesError::MissingYear(citing_year));
    }
    Ok(by_cited_year)
}

/// Percentage of the year's milestone-directed citations that go to works
/// published in `cited_year` or later.
pub fn cumulative_citation_share(
    parsed: &ParsedCorpus,
    citing_year: i32,
    milestones: &BTreeSet<PaperId>,
) -> Result<BTreeMap<i32, f64>, TimeseriesError> {
    let counts = milestone_counts(parsed, citing_year, milestones)?;
    let total: u64 = counts.values().sum();
    let mut out = BTreeMap::new();
    let mut running = 0u64;
    for (&year, &count) in counts.iter().rev() {
        running += count;
        out.insert(year, 100.0 * running as f64 / total as f64);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentStats {
    pub sd: f64,
    pub kurtosis: f64,
    pub skewness: f64,
}

/// Moments of the cited-year distribution weighted by `counts`: sample
/// standard deviation, excess kurtosis and Fisher skewness.
pub fn weighted_moments(counts: &BTreeMap<i32, u64>) -> MomentStats {
    let n: u64 = counts.values().sum();
    if n < 2 {
        return MomentStats {
            sd: 0.0,
            kurtosis: 0.0,
            skewness: 0.0,
        };
    }
    let nf = n as f64;
    let mean = counts
        .iter()
        .map(|(&y, &c)| y as f64 * c as f64)
        .sum::<f64>()
        / nf;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for (&y, &c) in counts {
        let d = y as f64 - mean;
        let w = c as f64;
        m2 += w * d * d;
        m3 += w * d * d * d;
        m4 += w * d * d * d * d;
    }
    let sd = (m2 / (nf - 1.0)).sqrt();
    let (m2, m3, m4) = (m2 / nf, m3 / nf, m4 / nf);
    if m2 == 0.0 {
        return MomentStats {
            sd,
            kurtosis: 0.0,
            skewness: 0.0,
        };
    }
    MomentStats {
        sd,
        kurtosis: m4 / (m2 * m2) - 3.0,
        skewness: m3 / m2.powf(1.5),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MilestonePanels {
    pub citing_year: i32,
    pub absolute: BTreeMap<i32, u64>,
    pub relative: BTreeMap<i32, f64>,
    pub year_total: u64,
    pub stats: MomentStats,
}

impl MilestonePanels {
    pub fn absolute_total(&self) -> u64 {
        self.absolute.values().sum()
    }
}

/// Citations from `citing_year` to the milestone set, absolute and as a
/// fraction of every reference made that year.
pub fn milestone_citation_panels(
    parsed: &ParsedCorpus,
    stats: &CorpusStats,
    citing_year: i32,
    milestones: &BTreeSet<PaperId>,
) -> Result<MilestonePanels, TimeseriesError> {
    let year_total = stats.total(citing_year);
    if year_total == 0 {
        return Err(TimeseriesError::NoReferences(citing_year));
    }
    let absolute = milestone_counts(parsed, citing_year, milestones)?;
    let relative = absolute
        .iter()
        .map(|(&y, &c)| (y, c as f64 / year_total as f64))
        .collect();
    let stats = weighted_moments(&absolute);
    Ok(MilestonePanels {
        citing_year,
        absolute,
        relative,
        year_total,
        stats,
    })
}
