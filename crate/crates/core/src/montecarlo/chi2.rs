//! Chi-square distribution function via the regularised incomplete gamma.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

const TERM_TOL: f64 = 1e-14;
const MAX_ITER: usize = 10_000;

/// `P[chi2(k) <= x]`.
pub fn chi2_cdf(k: usize, x: f64) -> Result<f64> {
    Ok(ln_chi2_cdf(k, x)?.exp())
}

/// `ln P[chi2(k) <= x]`; stays finite far into the lower tail where the
/// probability itself underflows.
pub fn ln_chi2_cdf(k: usize, x: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain { name: "chi2_cdf", value: 0.0, reason: "degrees of freedom must be at least 1" });
    }
    if !(x >= 0.0) {
        return Err(Error::Domain { name: "chi2_cdf", value: x, reason: "x must be non-negative" });
    }
    if x == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let a = k as f64 / 2.0;
    let z = x / 2.0;
    if x < k as f64 + 1.0 {
        ln_lower_series(a, z)
    } else {
        Ok((-upper_continued_fraction(a, z)?).ln_1p())
    }
}

fn ln_prefactor(a: f64, z: f64) -> f64 {
    a * z.ln() - z - ln_gamma(a)
}

/// `ln P(a, z)` from `P(a, z) = z^a e^-z / Gamma(a+1) * sum_n z^n / ((a+1)...(a+n))`.
fn ln_lower_series(a: f64, z: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut denom = a;
    for _ in 0..MAX_ITER {
        denom += 1.0;
        term *= z / denom;
        sum += term;
        if term < sum * TERM_TOL {
            return Ok(ln_prefactor(a, z) - a.ln() + sum.ln());
        }
    }
    Err(Error::Numerical(format!("incomplete gamma series did not converge (a={a}, z={z})")))
}

/// `Q(a, z)` by the modified Lentz evaluation of the continued fraction.
fn upper_continued_fraction(a: f64, z: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let mut b = z + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < TERM_TOL {
            return Ok((ln_prefactor(a, z)).exp() * h);
        }
    }
    Err(Error::Numerical(format!("incomplete gamma continued fraction did not converge (a={a}, z={z})")))
}
