use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::dtw::{dtw, dtw_path};
use super::ClusterError;

pub const DEFAULT_MAX_ITER: usize = 50;
pub const DEFAULT_RESTARTS: usize = 10;
const DBA_ITERS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KMeansResult {
    pub assignments: Vec<usize>,
    pub barycenters: Vec<Vec<f64>>,
    /// Sum over series of the DTW distance to the assigned barycenter.
    pub inertia: f64,
    pub iterations: usize,
}

fn check(series: &[Vec<f64>], k: usize) -> Result<(), ClusterError> {
    if k < 1 || k > series.len() {
        return Err(ClusterError::InvalidK { k, n: series.len() });
    }
    if series.iter().any(|s| s.is_empty()) {
        return Err(ClusterError::EmptySeries);
    }
    Ok(())
}

/// Nearest barycenter for every series (ties go to the lower index).
fn assign(series: &[Vec<f64>], centers: &[Vec<f64>]) -> (Vec<usize>, Vec<f64>) {
    series
        .par_iter()
        .map(|s| {
            let mut best = (0, f64::INFINITY);
            for (c, center) in centers.iter().enumerate() {
                let d = dtw(s, center);
                if d < best.1 {
                    best = (c, d);
                }
            }
            best
        })
        .unzip()
}

/// Re-seeds empty clusters with the series farthest from its barycenter.
fn fill_empty(
    series: &[Vec<f64>],
    centers: &mut [Vec<f64>],
    assignments: &mut Vec<usize>,
    dists: &mut Vec<f64>,
) {
    let k = centers.len();
    for _ in 0..k {
        let mut sizes = vec![0usize; k];
        for &a in assignments.iter() {
            sizes[a] += 1;
        }
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return;
        };
        let donor = (0..series.len())
            .filter(|&i| sizes[assignments[i]] > 1)
            .fold(None::<usize>, |best, i| match best {
                Some(b) if dists[b] >= dists[i] => Some(b),
                _ => Some(i),
            });
        let Some(donor) = donor else { return };
        centers[empty] = series[donor].clone();
        let (a, d) = assign(series, centers);
        *assignments = a;
        *dists = d;
    }
}

/// DTW barycenter averaging, starting from `center`.
fn dba(center: &[f64], members: &[&Vec<f64>]) -> Vec<f64> {
    let mut current = center.to_vec();
    for _ in 0..DBA_ITERS {
        let mut sums = vec![0.0; current.len()];
        let mut counts = vec![0usize; current.len()];
        for m in members {
            let (_, path) = dtw_path(&current, m);
            for (i, j) in path {
                sums[i] += m[j];
                counts[i] += 1;
            }
        }
        let next: Vec<f64> = sums
            .iter()
            .zip(&counts)
            .zip(&current)
            .map(|((&s, &c), &old)| if c == 0 { old } else { s / c as f64 })
            .collect();
        if next == current {
            break;
        }
        current = next;
    }
    current
}

/// Lloyd iterations from the given barycenters; returns the lowest-inertia state visited.
fn lloyd(series: &[Vec<f64>], mut centers: Vec<Vec<f64>>, max_iter: usize) -> KMeansResult {
    let k = centers.len();
    let mut best: Option<KMeansResult> = None;
    let mut previous: Option<Vec<usize>> = None;
    for iteration in 0..=max_iter {
        let (mut assignments, mut dists) = assign(series, &centers);
        fill_empty(series, &mut centers, &mut assignments, &mut dists);
        let inertia: f64 = dists.iter().sum();
        if best.as_ref().is_none_or(|b| inertia < b.inertia) {
            best = Some(KMeansResult {
                assignments: assignments.clone(),
                barycenters: centers.clone(),
                inertia,
                iterations: iteration,
            });
        }
        if previous.as_ref() == Some(&assignments) || iteration == max_iter {
            break;
        }
        centers = (0..k)
            .into_par_iter()
            .map(|c| {
                let members: Vec<&Vec<f64>> = series
                    .iter()
                    .zip(&assignments)
                    .filter(|(_, &a)| a == c)
                    .map(|(s, _)| s)
                    .collect();
                if members.is_empty() {
                    centers[c].clone()
                } else {
                    dba(&centers[c], &members)
                }
            })
            .collect();
        previous = Some(assignments);
    }
    best.expect("at least one iteration runs")
}

/// Distance-weighted (k-means++) choice of initial barycenters.
fn seed_centers(series: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = series.len();
    let mut chosen = vec![rng.gen_range(0..n)];
    let mut nearest: Vec<f64> = series.iter().map(|s| dtw(s, &series[chosen[0]])).collect();
    while chosen.len() < k {
        let weights: Vec<f64> = nearest.iter().map(|d| d * d).collect();
        let total: f64 = weights.iter().sum();
        let next = if total > 0.0 {
            let target = rng.gen::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, w) in weights.iter().enumerate() {
                acc += w;
                if *w > 0.0 && acc > target {
                    pick = Some(i);
                    break;
                }
            }
            pick.unwrap_or_else(|| weights.iter().rposition(|&w| w > 0.0).unwrap())
        } else {
            (0..n).find(|i| !chosen.contains(i)).unwrap()
        };
        chosen.push(next);
        for (i, s) in series.iter().enumerate() {
            nearest[i] = nearest[i].min(dtw(s, &series[next]));
        }
    }
    chosen.into_iter().map(|i| series[i].clone()).collect()
}

pub fn dtw_kmeans(
    series: &[Vec<f64>],
    k: usize,
    seed: u64,
    max_iter: usize,
) -> Result<KMeansResult, ClusterError> {
    check(series, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(lloyd(series, seed_centers(series, k, &mut rng), max_iter))
}

/// Best of `restarts` seeded runs; restart seeds are drawn from `seed`.
pub fn dtw_kmeans_restarts(
    series: &[Vec<f64>],
    k: usize,
    seed: u64,
    max_iter: usize,
    restarts: usize,
) -> Result<KMeansResult, ClusterError> {
    check(series, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<KMeansResult> = None;
    for _ in 0..restarts.max(1) {
        let run = dtw_kmeans(series, k, rng.gen(), max_iter)?;
        if best.as_ref().is_none_or(|b| run.inertia < b.inertia) {
            best = Some(run);
        }
    }
    Ok(best.unwrap())
}

/// Inertia per k. Each k also tries the previous k's barycenters plus the
/// worst-fitting series, so the curve never increases.
pub fn elbow(
    series: &[Vec<f64>],
    ks: RangeInclusive<usize>,
    seed: u64,
    max_iter: usize,
    restarts: usize,
) -> Result<BTreeMap<usize, f64>, ClusterError> {
    let (&lo, &hi) = (ks.start(), ks.end());
    check(series, lo)?;
    check(series, hi)?;
    let mut out = BTreeMap::new();
    let mut previous: Option<KMeansResult> = None;
    for k in lo..=hi {
        let mut best = dtw_kmeans_restarts(series, k, seed.wrapping_add(k as u64), max_iter, restarts)?;
        if let Some(prev) = previous.filter(|p| p.barycenters.len() + 1 == k) {
            let (_, dists) = assign(series, &prev.barycenters);
            let far = (0..series.len())
                .fold(0, |b, i| if dists[i] > dists[b] { i } else { b });
            let mut centers = prev.barycenters;
            centers.push(series[far].clone());
            let warm = lloyd(series, centers, max_iter);
            if warm.inertia < best.inertia {
                best = warm;
            }
        }
        out.insert(k, best.inertia);
        previous = Some(best);
    }
    Ok(out)
}
