//! Bad-list probabilities: exact for the Gaussian ensemble, Monte Carlo for
//! the others, and least-squares extraction of their exponential rate.

mod chi2;

pub use chi2::{chi2_cdf, ln_chi2_cdf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensembles::{substream, unit_direction, EnsembleKind, EnsembleSpec};
use crate::error::{invalid, Error, Result};
use crate::geometry::search::within;

/// Samples drawn from one generator substream.
const CHUNK: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub ensemble: EnsembleKind,
    pub n: usize,
    pub list_size: usize,
    pub nn: f64,
    pub samples: u64,
    pub hits: u64,
    pub p_hat: f64,
    pub stderr: f64,
    /// `-ln(p_hat) / n`; infinite when no hit was observed.
    pub neg_log_rate: f64,
}

impl TailEstimate {
    fn from_counts(ensemble: EnsembleKind, n: usize, list_size: usize, nn: f64, samples: u64, hits: u64) -> Self {
        let p_hat = hits as f64 / samples as f64;
        TailEstimate {
            ensemble,
            n,
            list_size,
            nn,
            samples,
            hits,
            p_hat,
            stderr: (p_hat * (1.0 - p_hat) / samples as f64).sqrt(),
            neg_log_rate: -p_hat.ln() / n as f64,
        }
    }
}

fn check_tail_params(n: usize, list_size: usize, power: f64, noise: f64) -> Result<()> {
    if n == 0 {
        return Err(invalid("dimension must be positive"));
    }
    if list_size < 2 {
        return Err(invalid(format!("list size must be at least 2, got {list_size}")));
    }
    if !(power > 0.0 && power.is_finite()) {
        return Err(Error::Domain { name: "power", value: power, reason: "must be positive and finite" });
    }
    if !(noise >= 0.0) {
        return Err(Error::Domain { name: "noise", value: noise, reason: "must be non-negative" });
    }
    Ok(())
}

/// Probability that `L` i.i.d. `N(0, P)` vectors in `R^n` have average
/// squared radius at most `nN`: `P[chi2((L-1)n) <= L n N / P]`.
pub fn gaussian_tail_exact(n: usize, list_size: usize, power: f64, noise: f64) -> Result<f64> {
    Ok(ln_gaussian_tail_exact(n, list_size, power, noise)?.exp())
}

/// Natural logarithm of [`gaussian_tail_exact`].
pub fn ln_gaussian_tail_exact(n: usize, list_size: usize, power: f64, noise: f64) -> Result<f64> {
    check_tail_params(n, list_size, power, noise)?;
    let l = list_size as f64;
    ln_chi2_cdf((list_size - 1) * n, l * n as f64 * noise / power)
}

/// Monte Carlo estimate of the probability that `L` independent draws from
/// the ensemble have average squared radius at most `nn`.
///
/// Samples are split into fixed chunks, each drawn from its own substream
/// of `seed`, so the estimate does not depend on the thread count.
pub fn mc_tail(spec: &EnsembleSpec, list_size: usize, nn: f64, samples: u64, seed: u64) -> Result<TailEstimate> {
    spec.validate()?;
    check_tail_params(spec.n, list_size, spec.power, nn)?;
    if samples == 0 {
        return Err(invalid("at least one sample is required"));
    }
    let n = spec.n;
    let chunks = samples.div_ceil(CHUNK as u64);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let todo = (samples - c * CHUNK as u64).min(CHUNK as u64);
            let mut rng = substream(seed, c);
            let mut x = vec![0.0; n];
            let mut sum = vec![0.0; n];
            let mut hits = 0u64;
            for _ in 0..todo {
                sum.iter_mut().for_each(|v| *v = 0.0);
                let mut norms = 0.0;
                for _ in 0..list_size {
                    spec.draw(&mut rng, &mut x);
                    for (s, v) in sum.iter_mut().zip(&x) {
                        *s += v;
                    }
                    norms += x.iter().map(|v| v * v).sum::<f64>();
                }
                let l = list_size as f64;
                let centroid_sq = sum.iter().map(|v| v * v).sum::<f64>() / (l * l);
                let avg = (norms / l - centroid_sq).max(0.0);
                if within(avg, nn) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    Ok(TailEstimate::from_counts(spec.kind, n, list_size, nn, samples, hits))
}

/// Least-squares slope of `-ln p_hat` against `n`.
pub fn exponent_fit(estimates: &[TailEstimate]) -> Result<f64> {
    if let Some(e) = estimates.iter().find(|e| !(e.p_hat > 0.0)) {
        return Err(invalid(format!("estimate at n={} has no hits", e.n)));
    }
    let points: Vec<(f64, f64)> = estimates.iter().map(|e| (e.n as f64, e.p_hat.ln())).collect();
    exponent_fit_points(&points)
}

/// Least-squares slope of `-ln p` against `n` from `(n, ln p)` pairs.
pub fn exponent_fit_points(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 3 {
        return Err(invalid(format!("need at least 3 points, got {}", points.len())));
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(invalid("points must be finite"));
    }
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(invalid("points need at least two distinct n"));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Ok(-sxy / sxx)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
}

/// Monte Carlo estimate of `E ||u_1 + ... + u_L||^p` for independent
/// uniform unit vectors in `R^n`.
pub fn sphere_sum_moment(n: usize, list_size: usize, p: f64, samples: u64, seed: u64) -> Result<MomentEstimate> {
    if n < 2 || list_size == 0 || samples < 2 || !(p > 0.0 && p.is_finite()) {
        return Err(invalid("need n >= 2, L >= 1, p > 0 and at least two samples"));
    }
    let chunks = samples.div_ceil(CHUNK as u64);
    let (sum, sum_sq) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let todo = (samples - c * CHUNK as u64).min(CHUNK as u64);
            let mut rng = substream(seed, c);
            let mut u = vec![0.0; n];
            let mut acc = vec![0.0; n];
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..todo {
                acc.iter_mut().for_each(|v| *v = 0.0);
                for _ in 0..list_size {
                    unit_direction(&mut rng, &mut u);
                    for (a, v) in acc.iter_mut().zip(&u) {
                        *a += v;
                    }
                }
                let norm_sq: f64 = acc.iter().map(|v| v * v).sum();
                let val = norm_sq.powf(p / 2.0);
                s += val;
                s2 += val * val;
            }
            (s, s2)
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let m = samples as f64;
    let mean = sum / m;
    let var = ((sum_sq / m - mean * mean) * m / (m - 1.0)).max(0.0);
    Ok(MomentEstimate { mean, stderr: (var / m).sqrt(), samples })
}
