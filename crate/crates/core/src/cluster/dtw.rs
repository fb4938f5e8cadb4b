use super::ClusterError;

/// Dynamic time warping distance with absolute-difference local cost,
/// anchored at both ends and without a window constraint.
pub fn dtw_distance(a: &[f64], b: &[f64]) -> Result<f64, ClusterError> {
    if a.is_empty() || b.is_empty() {
        return Err(ClusterError::EmptySeries);
    }
    Ok(dtw(a, b))
}

pub(crate) fn dtw(a: &[f64], b: &[f64]) -> f64 {
    let m = b.len();
    let mut prev = vec![f64::INFINITY; m + 1];
    let mut cur = vec![f64::INFINITY; m + 1];
    prev[0] = 0.0;
    for &x in a {
        cur[0] = f64::INFINITY;
        for j in 1..=m {
            let best = prev[j - 1].min(prev[j]).min(cur[j - 1]);
            cur[j] = (x - b[j - 1]).abs() + best;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m]
}

/// Optimal warping path as `(index in a, index in b)` pairs from the start.
/// Ties prefer the diagonal step, then a step in `a`, then a step in `b`.
pub(crate) fn dtw_path(a: &[f64], b: &[f64]) -> (f64, Vec<(usize, usize)>) {
    let (n, m) = (a.len(), b.len());
    let w = m + 1;
    let mut d = vec![f64::INFINITY; (n + 1) * w];
    d[0] = 0.0;
    for i in 1..=n {
        for j in 1..=m {
            let best = d[(i - 1) * w + j - 1]
                .min(d[(i - 1) * w + j])
                .min(d[i * w + j - 1]);
            d[i * w + j] = (a[i - 1] - b[j - 1]).abs() + best;
        }
    }
    let mut path = Vec::with_capacity(n + m);
    let (mut i, mut j) = (n, m);
    while i > 0 && j > 0 {
        path.push((i - 1, j - 1));
        if i == 1 && j == 1 {
            break;
        }
        let diag = d[(i - 1) * w + j - 1];
        let up = d[(i - 1) * w + j];
        let left = d[i * w + j - 1];
        if diag <= up && diag <= left {
            i -= 1;
            j -= 1;
        } else if up <= left {
            i -= 1;
        } else {
            j -= 1;
        }
    }
    path.reverse();
    (d[n * w + m], path)
}
