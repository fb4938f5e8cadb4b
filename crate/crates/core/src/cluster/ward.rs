use serde::Serialize;

use super::ClusterError;

/// One agglomeration step. Leaves are numbered `0..n`; the node created by
/// merge `t` is `n + t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    pub height: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dendrogram {
    pub n_leaves: usize,
    pub merges: Vec<Merge>,
    pub leaf_order: Vec<usize>,
}

impl Dendrogram {
    /// Flat clustering into `k` groups; labels are numbered by first leaf.
    pub fn cut(&self, k: usize) -> Result<Vec<usize>, ClusterError> {
        let n = self.n_leaves;
        if k < 1 || k > n {
            return Err(ClusterError::InvalidK { k, n });
        }
        let mut parent: Vec<usize> = (0..2 * n - 1).collect();
        fn root(parent: &[usize], mut x: usize) -> usize {
            while parent[x] != x {
                x = parent[x];
            }
            x
        }
        for (t, m) in self.merges.iter().take(n - k).enumerate() {
            parent[m.a] = n + t;
            parent[m.b] = n + t;
        }
        let mut labels = vec![usize::MAX; n];
        let mut ids: Vec<(usize, usize)> = Vec::new();
        for (leaf, label) in labels.iter_mut().enumerate() {
            let r = root(&parent, leaf);
            *label = match ids.iter().find(|(node, _)| *node == r) {
                Some(&(_, l)) => l,
                None => {
                    ids.push((r, ids.len()));
                    ids.len() - 1
                }
            };
        }
        Ok(labels)
    }
}

/// Linear interpolation of `s` onto `len` evenly spaced points.
pub fn resample_linear(s: &[f64], len: usize) -> Vec<f64> {
    if s.len() == 1 || len == 1 {
        return vec![s[0]; len];
    }
    let scale = (s.len() - 1) as f64 / (len - 1) as f64;
    (0..len)
        .map(|i| {
            let pos = i as f64 * scale;
            let lo = (pos.floor() as usize).min(s.len() - 2);
            let frac = pos - lo as f64;
            s[lo] + (s[lo + 1] - s[lo]) * frac
        })
        .collect()
}

/// Ward linkage on Euclidean distances between series resampled to the
/// longest length, using the Lance–Williams update.
pub fn ward_cluster(series: &[Vec<f64>]) -> Result<Dendrogram, ClusterError> {
    let n = series.len();
    if n < 2 {
        return Err(ClusterError::TooFewSeries(n));
    }
    if series.iter().any(|s| s.is_empty()) {
        return Err(ClusterError::EmptySeries);
    }
    let len = series.iter().map(Vec::len).max().unwrap();
    let points: Vec<Vec<f64>> = series.iter().map(|s| resample_linear(s, len)).collect();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let dist = points[i]
                .iter()
                .zip(&points[j])
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt();
            d[i * n + j] = dist;
            d[j * n + i] = dist;
        }
    }
    let mut node = (0..n).collect::<Vec<_>>();
    let mut size = vec![1usize; n];
    let mut active = vec![true; n];
    let mut merges = Vec::with_capacity(n - 1);
    for t in 0..n - 1 {
        let mut best = (usize::MAX, usize::MAX, f64::INFINITY);
        for i in (0..n).filter(|&i| active[i]) {
            for j in (i + 1..n).filter(|&j| active[j]) {
                if d[i * n + j] < best.2 {
                    best = (i, j, d[i * n + j]);
                }
            }
        }
        let (i, j, height) = best;
        let (ni, nj) = (size[i] as f64, size[j] as f64);
        for k in (0..n).filter(|&k| active[k] && k != i && k != j) {
            let nk = size[k] as f64;
            let dik = d[i * n + k];
            let djk = d[j * n + k];
            let v = ((ni + nk) * dik * dik + (nj + nk) * djk * djk - nk * height * height)
                / (ni + nj + nk);
            let v = v.max(0.0).sqrt();
            d[i * n + k] = v;
            d[k * n + i] = v;
        }
        active[j] = false;
        size[i] += size[j];
        let (a, b) = (node[i].min(node[j]), node[i].max(node[j]));
        merges.push(Merge {
            a,
            b,
            height,
            size: size[i],
        });
        node[i] = n + t;
    }
    let leaf_order = leaf_order(n, &merges);
    Ok(Dendrogram {
        n_leaves: n,
        merges,
        leaf_order,
    })
}

fn leaf_order(n: usize, merges: &[Merge]) -> Vec<usize> {
    let mut out = Vec::with_capacity(n);
    let mut stack = vec![2 * n - 2];
    while let Some(x) = stack.pop() {
        if x < n {
            out.push(x);
        } else {
            let m = merges[x - n];
            stack.push(m.b);
            stack.push(m.a);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separated_pairs_merge_first() {
        let s = vec![vec![0.0, 0.0], vec![10.0, 10.0], vec![0.1, 0.0], vec![10.0, 10.1]];
        let d = ward_cluster(&s).unwrap();
        let first: Vec<(usize, usize)> = d.merges[..2].iter().map(|m| (m.a, m.b)).collect();
        assert!(first.contains(&(0, 2)) && first.contains(&(1, 3)));
        assert_eq!(d.merges[2].size, 4);
        assert_eq!(d.cut(2).unwrap(), vec![0, 1, 0, 1]);
        assert_eq!(d.leaf_order.len(), 4);
    }

    #[test]
    fn identical_series_have_zero_heights() {
        let s = vec![vec![1.0, 2.0, 3.0]; 5];
        let d = ward_cluster(&s).unwrap();
        assert!(d.merges.iter().all(|m| m.height == 0.0));
    }

    #[test]
    fn heights_match_scipy_ward() {
        // scipy.cluster.hierarchy.ward([[0], [1], [5]]) gives heights 1 and sqrt(27).
        let s = vec![vec![0.0], vec![1.0], vec![5.0]];
        let d = ward_cluster(&s).unwrap();
        assert_eq!((d.merges[0].a, d.merges[0].b), (0, 1));
        assert_eq!(d.merges[0].height, 1.0);
        assert_eq!((d.merges[1].a, d.merges[1].b), (2, 3));
        assert!((d.merges[1].height - 27f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn resampling() {
        assert_eq!(resample_linear(&[0.0, 1.0], 3), vec![0.0, 0.5, 1.0]);
        assert_eq!(resample_linear(&[2.0], 3), vec![2.0; 3]);
        assert_eq!(resample_linear(&[1.0, 2.0, 4.0], 3), vec![1.0, 2.0, 4.0]);
    }

    #[test]
    fn too_few() {
        assert_eq!(ward_cluster(&[vec![1.0]]), Err(ClusterError::TooFewSeries(1)));
    }
}
