//! Seedable samplers for the random code ensembles.
//!
//! Randomness comes from ChaCha8 with a 64-bit stream id: row `i` of a code
//! sampled with seed `s` is drawn from stream `i` of the generator keyed by
//! `s`. Rows are therefore independent of how the work is split across
//! threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::Code;

/// The generator used for substream `stream` of `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleKind {
    /// I.i.d. `N(0, power)` entries.
    Gaussian,
    /// Uniform on the sphere of squared radius `n * power`.
    Sphere,
    /// Uniform in the ball of squared radius `n * power`.
    Ball,
    /// Gaussian rows conditioned on `-delta <= sum_i (x_i^2 - power) <= 0`.
    TruncatedGaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub n: usize,
    pub power: f64,
    /// Shell thickness; present exactly for the truncated Gaussian.
    pub shell_delta: Option<f64>,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, n: usize, power: f64, seed: u64) -> Self {
        EnsembleSpec { kind, n, power, shell_delta: None, seed }
    }

    pub fn truncated_gaussian(n: usize, power: f64, delta: f64, seed: u64) -> Self {
        EnsembleSpec { kind: EnsembleKind::TruncatedGaussian, n, power, shell_delta: Some(delta), seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("dimension must be positive"));
        }
        if !(self.power > 0.0 && self.power.is_finite()) {
            return Err(invalid(format!("ensemble power must be positive, got {}", self.power)));
        }
        match (self.kind, self.shell_delta) {
            (EnsembleKind::TruncatedGaussian, Some(d)) if d > 0.0 && d.is_finite() => Ok(()),
            (EnsembleKind::TruncatedGaussian, Some(d)) => Err(invalid(format!("shell delta must be positive, got {d}"))),
            (EnsembleKind::TruncatedGaussian, None) => Err(invalid("truncated Gaussian needs a shell delta")),
            (_, Some(_)) => Err(invalid("shell delta only applies to the truncated Gaussian")),
            (_, None) => Ok(()),
        }
    }

    /// Power limit satisfied by every draw, if the ensemble guarantees one.
    pub fn power_limit(&self) -> Option<f64> {
        match self.kind {
            EnsembleKind::Gaussian => None,
            _ => Some(self.power),
        }
    }

    /// Writes one draw into `out` (length `n`).
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.n);
        let n = self.n as f64;
        match self.kind {
            EnsembleKind::Gaussian => {
                let sd = self.power.sqrt();
                out.iter_mut().for_each(|v| *v = sd * rng.sample::<f64, _>(StandardNormal));
            }
            EnsembleKind::Sphere => {
                unit_direction(rng, out);
                let r = (n * self.power).sqrt();
                out.iter_mut().for_each(|v| *v *= r);
            }
            EnsembleKind::Ball => {
                unit_direction(rng, out);
                let u: f64 = rng.random();
                let r = (n * self.power).sqrt() * u.powf(1.0 / n);
                out.iter_mut().for_each(|v| *v *= r);
            }
            EnsembleKind::TruncatedGaussian => {
                let delta = self.shell_delta.expect("validated spec");
                let sd = self.power.sqrt();
                loop {
                    out.iter_mut().for_each(|v| *v = sd * rng.sample::<f64, _>(StandardNormal));
                    let excess: f64 = out.iter().map(|v| v * v - self.power).sum();
                    if (-delta..=0.0).contains(&excess) {
                        break;
                    }
                }
            }
        }
    }
}

/// Uniform point on the unit sphere via a normalised Gaussian vector.
pub(crate) fn unit_direction<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    loop {
        out.iter_mut().for_each(|v| *v = rng.sample(StandardNormal));
        let norm = out.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            out.iter_mut().for_each(|v| *v /= norm);
            return;
        }
    }
}

/// Draws `count` independent codewords from the ensemble.
pub fn sample(spec: &EnsembleSpec, count: usize) -> Result<Code> {
    spec.validate()?;
    if count == 0 {
        return Err(invalid("sample size must be at least 1"));
    }
    let n = spec.n;
    let mut data = vec![0.0; count * n];
    data.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        let mut rng = substream(spec.seed, i as u64);
        spec.draw(&mut rng, row);
    });
    Code::from_flat(n, data, spec.power_limit())
}

/// Draws `count` points uniformly from the cap of angular radius `alpha`
/// around `e_1` on the sphere of squared radius `n * power`.
///
/// The polar angle is drawn by inverting its CDF (density proportional to
/// `sin^(n-2)`) with bisection; the remaining direction is uniform on the
/// orthogonal unit sphere.
pub fn sample_cap(n: usize, power: f64, alpha: f64, count: usize, seed: u64) -> Result<Code> {
    if n < 2 {
        return Err(invalid("cap sampling needs n >= 2"));
    }
    if !(power > 0.0 && power.is_finite()) {
        return Err(invalid(format!("power must be positive, got {power}")));
    }
    if !(alpha > 0.0 && alpha <= std::f64::consts::PI) {
        return Err(Error::Domain { name: "cap angle", value: alpha, reason: "must lie in (0, pi]" });
    }
    if count == 0 {
        return Err(invalid("sample size must be at least 1"));
    }
    let cdf = PolarCdf::new(n, alpha);
    let radius = (n as f64 * power).sqrt();
    let mut data = vec![0.0; count * n];
    data.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        let mut rng = substream(seed, i as u64);
        let u: f64 = rng.random();
        let theta = cdf.invert(u);
        unit_direction(&mut rng, &mut row[1..]);
        let s = radius * theta.sin();
        row[0] = radius * theta.cos();
        row[1..].iter_mut().for_each(|v| *v *= s);
    });
    Code::from_flat(n, data, Some(power))
}

// 8-point Gauss-Legendre on [-1, 1].
const GL_NODES: [f64; 4] = [0.183_434_642_495_649_8, 0.525_532_409_916_329_0, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
const GL_WEIGHTS: [f64; 4] = [0.362_683_783_378_362_0, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];

fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut s = 0.0;
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
        s += w * (f(mid - half * x) + f(mid + half * x));
    }
    s * half
}

/// Normalised CDF of the polar angle on `[0, alpha]`, density `sin^(n-2)`.
struct PolarCdf {
    exponent: i32,
    alpha: f64,
    step: f64,
    cumulative: Vec<f64>,
}

impl PolarCdf {
    const PANELS: usize = 2048;

    fn new(n: usize, alpha: f64) -> Self {
        let exponent = n as i32 - 2;
        let step = alpha / Self::PANELS as f64;
        let mut cumulative = Vec::with_capacity(Self::PANELS + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for k in 0..Self::PANELS {
            acc += gauss_legendre(|t| t.sin().powi(exponent), k as f64 * step, (k + 1) as f64 * step);
            cumulative.push(acc);
        }
        PolarCdf { exponent, alpha, step, cumulative }
    }

    fn eval(&self, theta: f64) -> f64 {
        let k = ((theta / self.step) as usize).min(Self::PANELS - 1);
        let left = k as f64 * self.step;
        let partial = gauss_legendre(|t| t.sin().powi(self.exponent), left, theta);
        (self.cumulative[k] + partial) / self.cumulative[Self::PANELS]
    }

    fn invert(&self, u: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, self.alpha);
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if self.eval(mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}
