//! Author-level statistics over the milestone set: how many milestones each
//! author key appears on, and how much of the set the most prolific authors
//! jointly cover.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::refparse::{AuthorKey, PaperId, ParsedCorpus};

#[derive(Debug, Error, PartialEq)]
pub enum AuthorsError {
    #[error("min_count must be at least 1")]
    InvalidMinCount,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuthorMilestoneStats {
    pub author: AuthorKey,
    pub milestone_count: usize,
    pub milestones: Vec<PaperId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct AuthorCounts {
    /// Count descending, then author key ascending.
    pub stats: Vec<AuthorMilestoneStats>,
    /// Milestones for which no reference yielded any author key.
    pub unattributed: Vec<PaperId>,
}

/// Author set of each milestone. Different citing references may render a
/// paper's author list differently; the most frequent non-empty set wins,
/// ties going to the lexicographically smallest set.
pub fn milestone_authors(
    milestones: &[PaperId],
    parsed: &ParsedCorpus,
) -> BTreeMap<PaperId, BTreeSet<AuthorKey>> {
    let wanted: BTreeSet<&PaperId> = milestones.iter().collect();
    let mut variants: HashMap<&PaperId, BTreeMap<BTreeSet<AuthorKey>, usize>> = HashMap::new();
    for r in parsed.articles.iter().flat_map(|a| a.refs.iter()) {
        let Some(id) = r.id.as_ref().filter(|id| wanted.contains(id)) else {
            continue;
        };
        if r.authors.is_empty() {
            continue;
        }
        let set: BTreeSet<AuthorKey> = r.authors.iter().cloned().collect();
        *variants.entry(id).or_default().entry(set).or_default() += 1;
    }
    milestones
        .iter()
        .map(|m| {
            let modal = variants
                .get(m)
                .and_then(|v| {
                    v.iter()
                        .fold(None::<(&BTreeSet<AuthorKey>, usize)>, |best, (set, &n)| match best {
                            Some((_, b)) if b >= n => best,
                            _ => Some((set, n)),
                        })
                })
                .map(|(set, _)| set.clone())
                .unwrap_or_default();
            (m.clone(), modal)
        })
        .collect()
}

pub fn author_counts_from(authors: &BTreeMap<PaperId, BTreeSet<AuthorKey>>) -> AuthorCounts {
    let mut by_author: BTreeMap<&AuthorKey, Vec<PaperId>> = BTreeMap::new();
    let mut unattributed = Vec::new();
    for (paper, keys) in authors {
        if keys.is_empty() {
            unattributed.push(paper.clone());
        }
        for key in keys {
            by_author.entry(key).or_default().push(paper.clone());
        }
    }
    let mut stats: Vec<AuthorMilestoneStats> = by_author
        .into_iter()
        .map(|(author, milestones)| AuthorMilestoneStats {
            author: author.clone(),
            milestone_count: milestones.len(),
            milestones,
        })
        .collect();
    stats.sort_by(|a, b| {
        b.milestone_count
            .cmp(&a.milestone_count)
            .then_with(|| a.author.cmp(&b.author))
    });
    AuthorCounts {
        stats,
        unattributed,
    }
}

pub fn author_milestone_counts(milestones: &[PaperId], parsed: &ParsedCorpus) -> AuthorCounts {
    author_counts_from(&milestone_authors(milestones, parsed))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationPoint {
    pub author: AuthorKey,
    pub count: usize,
    /// Fraction of all milestones covered by this author and those before it.
    pub cumulative_share: f64,
}

/// Cumulative coverage of the milestone set by authors with at least
/// `min_count` milestones, in `stats` order. Coverage is a set union, so a
/// milestone shared by two listed authors counts once.
pub fn concentration_curve(
    stats: &[AuthorMilestoneStats],
    min_count: usize,
    total_milestones: usize,
) -> Result<Vec<ConcentrationPoint>, AuthorsError> {
    if min_count < 1 {
        return Err(AuthorsError::InvalidMinCount);
    }
    let mut covered: BTreeSet<&PaperId> = BTreeSet::new();
    Ok(stats
        .iter()
        .filter(|s| s.milestone_count >= min_count)
        .map(|s| {
            covered.extend(s.milestones.iter());
            ConcentrationPoint {
                author: s.author.clone(),
                count: s.milestone_count,
                cumulative_share: if total_milestones == 0 {
                    0.0
                } else {
                    covered.len() as f64 / total_milestones as f64
                },
            }
        })
        .collect())
}
