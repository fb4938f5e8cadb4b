//! Discrete power-law tail fitting: maximum likelihood for the exponent,
//! Kolmogorov–Smirnov minimisation for the lower cutoff.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PowerLawError {
    #[error("need at least {needed} positive observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },
    #[error("all observations are equal; no tail to fit")]
    Degenerate,
}

/// Smallest tail considered when scanning cutoffs.
pub const MIN_TAIL: usize = 50;
/// Smallest sample accepted by [`fit_discrete`].
pub const MIN_OBSERVATIONS: usize = 100;

const ALPHA_LO: f64 = 1.0 + 1e-6;
const ALPHA_HI: f64 = 20.0;

// B_2k / (2k)!
const EM_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
];

/// Hurwitz zeta `sum_{k>=0} (q + k)^-s` for `s > 1`, `q > 0`, by
/// Euler–Maclaurin summation.
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    debug_assert!(s > 1.0 && q > 0.0);
    const N: usize = 12;
    let mut sum = 0.0;
    for k in 0..N {
        sum += (q + k as f64).powf(-s);
    }
    let a = q + N as f64;
    sum += a.powf(1.0 - s) / (s - 1.0) + 0.5 * a.powf(-s);
    // Rising factorial s (s+1) ... (s+2k-2) times a^(-s-2k+1).
    let mut term = s * a.powf(-s - 1.0);
    for (k, coeff) in EM_COEFFS.iter().enumerate() {
        sum += coeff * term;
        let j = 2.0 * k as f64;
        term *= (s + j + 1.0) * (s + j + 2.0) / (a * a);
    }
    sum
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFit {
    pub alpha: f64,
    pub xmin: u64,
    pub n_tail: usize,
    pub ks: f64,
}

/// MLE of the exponent for the tail `x >= xmin` (given as sorted values).
fn fit_alpha(tail: &[u64], xmin: u64) -> f64 {
    let n = tail.len() as f64;
    let sum_ln: f64 = tail.iter().map(|&x| (x as f64).ln()).sum();
    let q = xmin as f64;
    let neg_loglik = |alpha: f64| n * hurwitz_zeta(alpha, q).ln() + alpha * sum_ln;
    golden_min(neg_loglik, ALPHA_LO, ALPHA_HI, 1e-10)
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > tol {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

/// KS distance between the empirical tail CDF and the fitted model.
fn ks_distance(tail: &[u64], xmin: u64, alpha: f64) -> f64 {
    let n = tail.len() as f64;
    let z_min = hurwitz_zeta(alpha, xmin as f64);
    let mut worst: f64 = 0.0;
    let mut i = 0;
    while i < tail.len() {
        let v = tail[i];
        let mut j = i;
        while j < tail.len() && tail[j] == v {
            j += 1;
        }
        let emp = j as f64 / n;
        // Model CDF at v and just below the next observed value.
        let z_v = hurwitz_zeta(alpha, v as f64);
        let model_at_v = 1.0 - (z_v - (v as f64).powf(-alpha)) / z_min;
        worst = worst.max((emp - model_at_v).abs());
        if j < tail.len() {
            let next = tail[j];
            if next > v + 1 {
                let model_before_next = 1.0 - hurwitz_zeta(alpha, next as f64) / z_min;
                worst = worst.max((emp - model_before_next).abs());
            }
        }
        // Left limit at v.
        let emp_before = i as f64 / n;
        let model_before_v = 1.0 - z_v / z_min;
        worst = worst.max((emp_before - model_before_v).abs());
        i = j;
    }
    worst
}

/// Fits a discrete power law to positive integer observations, scanning
/// every distinct value with at least [`MIN_TAIL`] observations at or above
/// it as a candidate cutoff.
pub fn fit_discrete(sample: &[u64]) -> Result<TailFit, PowerLawError> {
    let mut values: Vec<u64> = sample.iter().copied().filter(|&x| x > 0).collect();
    if values.len() < MIN_OBSERVATIONS {
        return Err(PowerLawError::TooFewObservations {
            needed: MIN_OBSERVATIONS,
            got: values.len(),
        });
    }
    values.sort_unstable();
    if values.first() == values.last() {
        return Err(PowerLawError::Degenerate);
    }

    let mut best: Option<TailFit> = None;
    let mut start = 0;
    while start < values.len() {
        let xmin = values[start];
        let tail = &values[start..];
        if tail.len() < MIN_TAIL {
            break;
        }
        // A tail of one repeated value carries no slope information.
        if tail[0] != *tail.last().unwrap() {
            let alpha = fit_alpha(tail, xmin);
            let ks = ks_distance(tail, xmin, alpha);
            if best.is_none_or(|b| ks < b.ks) {
                best = Some(TailFit {
                    alpha,
                    xmin,
                    n_tail: tail.len(),
                    ks,
                });
            }
        }
        while start < values.len() && values[start] == xmin {
            start += 1;
        }
    }
    best.ok_or(PowerLawError::Degenerate)
}
