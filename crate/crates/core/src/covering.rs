//! Random spherical-cap coverings and the double-counting identity behind
//! the Plotkin-type bound for codes on a cap.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensembles::{substream, unit_direction};
use crate::error::{invalid, Error, Result};
use crate::geometry::{avg_sq_radius, centroid, code_min_radius, dist_sq, norm_sq, AvgRadiusForm, Code, RadiusNotion};

/// Largest covering [`build_covering`] will allocate.
pub const MAX_CENTERS: usize = 1 << 24;
/// Relative tolerance on `||x||^2 = nP` for codes on the sphere.
pub const SPHERE_TOL: f64 = 1e-9;
/// Above this many subsets the subset average is taken from pair sums only.
pub const ENUMERATION_LIMIT: u128 = 1_000_000;

const SAMPLE_CHUNK: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapCovering {
    pub n: usize,
    pub alpha: f64,
    /// `K x n` row-major unit vectors.
    pub centers: Vec<f64>,
    pub oversample: f64,
}

impl CapCovering {
    pub fn len(&self) -> usize {
        self.centers.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn center(&self, i: usize) -> &[f64] {
        &self.centers[i * self.n..(i + 1) * self.n]
    }

    /// Caps of angular radius `alpha` around the given unit vectors.
    pub fn from_centers(n: usize, alpha: f64, centers: &[Vec<f64>]) -> Result<Self> {
        check_angle(alpha)?;
        if n < 2 {
            return Err(invalid("coverings need n >= 2"));
        }
        if centers.is_empty() {
            return Err(invalid("a covering needs at least one centre"));
        }
        let mut flat = Vec::with_capacity(centers.len() * n);
        for (i, c) in centers.iter().enumerate() {
            if c.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: c.len() });
            }
            if (norm_sq(c) - 1.0).abs() > SPHERE_TOL {
                return Err(invalid(format!("centre {i} is not a unit vector")));
            }
            flat.extend_from_slice(c);
        }
        let oversample = centers.len() as f64 / base_size(n, alpha);
        Ok(CapCovering { n, alpha, centers: flat, oversample })
    }
}

fn check_angle(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < std::f64::consts::PI {
        Ok(())
    } else {
        Err(Error::Domain { name: "alpha", value: alpha, reason: "cap angle must lie in (0, pi)" })
    }
}

fn base_size(n: usize, alpha: f64) -> f64 {
    (n as f64 * (1.0 / alpha.sin()).ln()).exp()
}

/// `ceil(oversample * (1/sin alpha)^n)`.
pub fn covering_size(n: usize, alpha: f64, oversample: f64) -> Result<usize> {
    check_angle(alpha)?;
    if !(oversample >= 1.0 && oversample.is_finite()) {
        return Err(Error::Domain { name: "oversample", value: oversample, reason: "must be at least 1" });
    }
    let k = (oversample * base_size(n, alpha)).ceil();
    if !(k <= MAX_CENTERS as f64) {
        return Err(invalid(format!("covering would need {k:e} caps (limit {MAX_CENTERS})")));
    }
    Ok(k as usize)
}

/// Independent uniform centres, as many as [`covering_size`] prescribes.
pub fn build_covering(n: usize, alpha: f64, oversample: f64, seed: u64) -> Result<CapCovering> {
    if n < 2 {
        return Err(invalid("coverings need n >= 2"));
    }
    let k = covering_size(n, alpha, oversample)?;
    let mut centers = vec![0.0; k * n];
    centers.par_chunks_mut(n).enumerate().for_each(|(i, c)| {
        unit_direction(&mut substream(seed, i as u64), c);
    });
    Ok(CapCovering { n, alpha, centers, oversample })
}

/// Fraction of uniform points on the unit sphere within angle `alpha` of
/// some centre.
pub fn coverage_fraction(cov: &CapCovering, samples: u64, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(invalid("at least one sample is required"));
    }
    let n = cov.n;
    let threshold = cov.alpha.cos() - 1e-12;
    let chunks = samples.div_ceil(SAMPLE_CHUNK as u64);
    let covered: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let todo = (samples - c * SAMPLE_CHUNK as u64).min(SAMPLE_CHUNK as u64);
            let mut rng = substream(seed, c);
            let mut y = vec![0.0; n];
            let mut hits = 0;
            for _ in 0..todo {
                unit_direction(&mut rng, &mut y);
                if cov.centers.chunks_exact(n).any(|ctr| crate::geometry::dot(ctr, &y) >= threshold) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    Ok(covered as f64 / samples as f64)
}

/// Both sides of the subset-average identity for a code on a sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub size: usize,
    pub list_size: usize,
    /// Mean average squared radius over all `L`-subsets.
    pub lhs: f64,
    /// `(L-1)/L nP - (L-1)/(L M (M-1)) (M^2 ||xbar||^2 - M nP)`.
    pub rhs: f64,
    /// The same mean from the pair-distance sum alone.
    pub pair_sum_lhs: f64,
    /// Whether `lhs` came from enumerating every subset.
    pub enumerated: bool,
    pub holds: bool,
}

fn sphere_power(code: &Code) -> Result<f64> {
    let p = code.power_limit().ok_or_else(|| invalid("the code needs a power P (its rows must lie on the sphere of radius sqrt(nP))"))?;
    let target = code.n() as f64 * p;
    for (i, row) in code.rows().enumerate() {
        let r = norm_sq(row);
        if (r - target).abs() > SPHERE_TOL * target {
            return Err(invalid(format!("row {i} has squared norm {r}, expected {target}")));
        }
    }
    Ok(p)
}

fn check_list_size(code: &Code, list_size: usize) -> Result<()> {
    if list_size < 2 {
        return Err(invalid(format!("list size must be at least 2, got {list_size}")));
    }
    if code.len() < list_size {
        return Err(Error::TooFewPoints { size: code.len(), list_size });
    }
    Ok(())
}

fn binomial(m: usize, l: usize) -> u128 {
    let l = l.min(m - l);
    (0..l).fold(1u128, |acc, i| acc.saturating_mul((m - i) as u128) / (i as u128 + 1))
}

/// Mean over `L`-subsets of the average squared radius, from
/// `(1/L^2) * L(L-1)/(M(M-1)) * sum_{i<j} ||x_i - x_j||^2`.
pub fn subset_mean_from_pairs(code: &Code, list_size: usize) -> Result<f64> {
    check_list_size(code, list_size)?;
    let m = code.len();
    let pair_sum: f64 = (0..m)
        .into_par_iter()
        .map(|i| (i + 1..m).map(|j| dist_sq(code.row(i), code.row(j))).sum::<f64>())
        .collect::<Vec<_>>()
        .iter()
        .sum();
    let (l, mf) = (list_size as f64, m as f64);
    Ok(pair_sum * (l - 1.0) / (l * mf * (mf - 1.0)))
}

/// Mean over `L`-subsets of the average squared radius by enumeration.
fn subset_mean_enumerated(code: &Code, list_size: usize) -> Result<f64> {
    let m = code.len();
    let sums: Vec<Result<f64>> = (0..=m - list_size)
        .into_par_iter()
        .map(|first| {
            let mut total = 0.0;
            let mut idx: Vec<usize> = (first..first + list_size).collect();
            let mut rows: Vec<&[f64]> = Vec::with_capacity(list_size);
            loop {
                rows.clear();
                rows.extend(idx.iter().map(|&i| code.row(i)));
                total += avg_sq_radius(&rows, AvgRadiusForm::Definition)?;
                // advance the tail, keeping idx[0] fixed
                let mut k = list_size;
                while k > 1 && idx[k - 1] == m - list_size + k - 1 {
                    k -= 1;
                }
                if k == 1 {
                    break;
                }
                idx[k - 1] += 1;
                for t in k..list_size {
                    idx[t] = idx[t - 1] + 1;
                }
            }
            Ok(total)
        })
        .collect();
    let mut total = 0.0;
    for s in sums {
        total += s?;
    }
    Ok(total / binomial(m, list_size) as f64)
}

/// Checks that the mean average squared radius of the `L`-subsets of a
/// spherical code equals the closed form in its centroid.
///
/// Every subset is enumerated when there are at most [`ENUMERATION_LIMIT`]
/// of them; otherwise `lhs` is the pair-sum mean.
pub fn cap_code_identity(code: &Code, list_size: usize) -> Result<IdentityReport> {
    let p = sphere_power(code)?;
    check_list_size(code, list_size)?;
    let m = code.len();
    let (l, mf) = (list_size as f64, m as f64);
    let np = code.n() as f64 * p;
    let xbar = centroid(&code.rows().collect::<Vec<_>>())?;
    let rhs = (l - 1.0) / l * np - (l - 1.0) / (l * mf * (mf - 1.0)) * (mf * mf * norm_sq(&xbar) - mf * np);
    let pair_sum_lhs = subset_mean_from_pairs(code, list_size)?;
    let enumerated = binomial(m, list_size) <= ENUMERATION_LIMIT;
    let lhs = if enumerated { subset_mean_enumerated(code, list_size)? } else { pair_sum_lhs };
    let tol = 1e-9 * (1.0 + rhs.abs());
    let holds = (lhs - rhs).abs() <= tol && (pair_sum_lhs - rhs).abs() <= tol;
    Ok(IdentityReport { size: m, list_size, lhs, rhs, pair_sum_lhs, enumerated, holds })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotkinCheck {
    pub size: usize,
    pub list_size: usize,
    pub alpha: f64,
    pub min_avg_sq_radius: f64,
    pub mean_avg_sq_radius: f64,
    /// `(L-1)/L nP sin^2(alpha) (1 + 1/(M-1))`.
    pub bound: f64,
    pub ok: bool,
}

/// For a code on the cap of angular radius `alpha <= pi/2` around `e_1`,
/// compares the smallest average squared radius of an `L`-subset with the
/// bound obtained from the subset-average identity.
pub fn plotkin_cap_check(code: &Code, alpha: f64, list_size: usize) -> Result<PlotkinCheck> {
    if !(alpha > 0.0 && alpha <= std::f64::consts::FRAC_PI_2) {
        return Err(Error::Domain { name: "alpha", value: alpha, reason: "cap angle must lie in (0, pi/2]" });
    }
    let p = sphere_power(code)?;
    check_list_size(code, list_size)?;
    let np = code.n() as f64 * p;
    let floor = np.sqrt() * alpha.cos();
    for (i, row) in code.rows().enumerate() {
        if row[0] < floor - SPHERE_TOL * np.sqrt() {
            return Err(invalid(format!("row {i} lies outside the cap")));
        }
    }
    let (l, mf) = (list_size as f64, code.len() as f64);
    let bound = (l - 1.0) / l * np * alpha.sin().powi(2) * (1.0 + 1.0 / (mf - 1.0));
    let min = code_min_radius(code, list_size, RadiusNotion::AverageRadius)?.radius_sq;
    let mean = subset_mean_from_pairs(code, list_size)?;
    Ok(PlotkinCheck {
        size: code.len(),
        list_size,
        alpha,
        min_avg_sq_radius: min,
        mean_avg_sq_radius: mean,
        bound,
        ok: min <= bound * (1.0 + 1e-12),
    })
}
