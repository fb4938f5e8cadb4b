//! Milestone-type discovery: DTW distance, DTW k-means with barycenter
//! averaging, Ward hierarchical clustering, elbow diagnostics and the
//! super / fading super / milestone labelling.

mod dtw;
mod kmeans;
mod ward;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::milestone::sign_of_trend;
use crate::refparse::PaperId;
use crate::timeseries::CitationSeries;

pub use dtw::dtw_distance;
pub use kmeans::{
    dtw_kmeans, dtw_kmeans_restarts, elbow, KMeansResult, DEFAULT_MAX_ITER, DEFAULT_RESTARTS,
};
pub use ward::{resample_linear, ward_cluster, Dendrogram, Merge};

pub const DEFAULT_K: usize = 3;
pub const DEFAULT_LABEL_WINDOW: usize = 10;

#[derive(Debug, Error, PartialEq)]
pub enum ClusterError {
    #[error("series must be non-empty")]
    EmptySeries,
    #[error("k = {k} is outside 1..={n}")]
    InvalidK { k: usize, n: usize },
    #[error("need at least 2 series, got {0}")]
    TooFewSeries(usize),
    #[error("assignments cover {assignments} series but {series} were given")]
    LengthMismatch { assignments: usize, series: usize },
    #[error("clusters {0:?} tie for the super label; pass an explicit super cluster")]
    AmbiguousSuper(Vec<usize>),
    #[error("override names cluster {0}, which does not exist")]
    UnknownCluster(usize),
}

/// A paper's yearly share of all citations made that year.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelativeSeries {
    pub paper: PaperId,
    pub years: Vec<i32>,
    pub shares: Vec<f64>,
}

/// Shares from the first year the paper is cited through the last year with
/// citations, zero-filled where the paper is not cited.
pub fn relative_series(series: &CitationSeries, per_year_totals: &BTreeMap<i32, u64>) -> RelativeSeries {
    let mut years = Vec::new();
    let mut shares = Vec::new();
    for (&year, &total) in per_year_totals.range(series.first_cited..) {
        if total == 0 {
            continue;
        }
        let count = series.by_year.get(&year).copied().unwrap_or(0);
        years.push(year);
        shares.push(count as f64 / total as f64);
    }
    RelativeSeries {
        paper: series.paper.clone(),
        years,
        shares,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MilestoneLabel {
    Super,
    FadingSuper,
    Milestone,
}

impl MilestoneLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            MilestoneLabel::Super => "super",
            MilestoneLabel::FadingSuper => "fading_super",
            MilestoneLabel::Milestone => "milestone",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterAssignment {
    pub paper: PaperId,
    pub cluster: usize,
    pub label: MilestoneLabel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabelOptions {
    /// Number of most recent years used for the trend and recent mean.
    pub window: usize,
    /// Peak share a cluster must have exceeded to count as fading super.
    pub threshold: f64,
    /// Cluster to label super when the rule ties.
    pub super_cluster: Option<usize>,
}

impl Default for LabelOptions {
    fn default() -> Self {
        LabelOptions {
            window: DEFAULT_LABEL_WINDOW,
            threshold: crate::milestone::DEFAULT_SUPER_THRESHOLD,
            super_cluster: None,
        }
    }
}

/// Per-cluster statistics the labels are derived from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterProfile {
    pub cluster: usize,
    pub size: usize,
    pub recent_mean: f64,
    pub recent_slope: f64,
    pub peak_share: f64,
}

/// Mean member share per year over the union of all years.
fn cluster_profiles(
    assignments: &[usize],
    series: &[RelativeSeries],
    window: usize,
) -> Vec<ClusterProfile> {
    let grid: Vec<i32> = series
        .iter()
        .flat_map(|s| s.years.iter().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let k = assignments.iter().max().map_or(0, |m| m + 1);
    let start = grid.len().saturating_sub(window.max(1));
    (0..k)
        .map(|c| {
            let members: Vec<&RelativeSeries> = series
                .iter()
                .zip(assignments)
                .filter(|(_, &a)| a == c)
                .map(|(s, _)| s)
                .collect();
            let mut mean = vec![0.0; grid.len()];
            for m in &members {
                for (y, share) in m.years.iter().zip(&m.shares) {
                    let idx = grid.binary_search(y).unwrap();
                    mean[idx] += share;
                }
            }
            if !members.is_empty() {
                for v in &mut mean {
                    *v /= members.len() as f64;
                }
            }
            let recent = &mean[start..];
            let recent_mean = if recent.is_empty() {
                0.0
            } else {
                recent.iter().sum::<f64>() / recent.len() as f64
            };
            let recent_slope = if recent.is_empty() {
                0.0
            } else {
                sign_of_trend(&grid[start..], recent).map_or(0.0, |(m, _)| m)
            };
            ClusterProfile {
                cluster: c,
                size: members.len(),
                recent_mean,
                recent_slope,
                peak_share: mean.iter().copied().fold(0.0, f64::max),
            }
        })
        .collect()
}

/// Labels clusters: among clusters with a non-negative recent trend, the one
/// with the highest recent mean share is `super`; any other cluster whose
/// mean share once exceeded the threshold and now trends down is
/// `fading_super`; the rest are `milestone`.
pub fn label_clusters(
    assignments: &[usize],
    series: &[RelativeSeries],
    options: &LabelOptions,
) -> Result<(Vec<ClusterAssignment>, Vec<ClusterProfile>), ClusterError> {
    if assignments.len() != series.len() {
        return Err(ClusterError::LengthMismatch {
            assignments: assignments.len(),
            series: series.len(),
        });
    }
    let profiles = cluster_profiles(assignments, series, options.window);
    let super_cluster = match options.super_cluster {
        Some(c) if c < profiles.len() => Some(c),
        Some(c) => return Err(ClusterError::UnknownCluster(c)),
        None => {
            let rising: Vec<&ClusterProfile> = profiles
                .iter()
                .filter(|p| p.size > 0 && p.recent_slope >= 0.0)
                .collect();
            let top = rising.iter().map(|p| p.recent_mean).fold(f64::NEG_INFINITY, f64::max);
            let tied: Vec<usize> = rising
                .iter()
                .filter(|p| p.recent_mean == top)
                .map(|p| p.cluster)
                .collect();
            if tied.len() > 1 {
                return Err(ClusterError::AmbiguousSuper(tied));
            }
            tied.first().copied()
        }
    };
    let labels: Vec<MilestoneLabel> = profiles
        .iter()
        .map(|p| {
            if Some(p.cluster) == super_cluster {
                MilestoneLabel::Super
            } else if p.peak_share > options.threshold && p.recent_slope < 0.0 {
                MilestoneLabel::FadingSuper
            } else {
                MilestoneLabel::Milestone
            }
        })
        .collect();
    let out = series
        .iter()
        .zip(assignments)
        .map(|(s, &c)| ClusterAssignment {
            paper: s.paper.clone(),
            cluster: c,
            label: labels[c],
        })
        .collect();
    Ok((out, profiles))
}
