use serde::{Deserialize, Serialize};

use super::search::{code_min_radius, within};
use super::{dist_sq, norm_sq, violations, Code, ListWitness, PackingParams, POWER_TOLERANCE};
use crate::error::{invalid, Error, Result};

/// Outcome of [`verify_packing`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingVerdict {
    /// Every `L`-subset has radius strictly above `nN` and no row breaks the
    /// power limit.
    pub ok: bool,
    /// A violating list (the one of minimum radius) when the radius test fails.
    pub witness: Option<ListWitness>,
    /// Rows whose squared norm exceeds `nP`.
    pub power_violations: Vec<usize>,
}

/// Checks that `code` is a multiple packing for `params`.
///
/// The radius test is strict: a list whose radius equals `nN` is a
/// violation. Codes with fewer than `L` points pass vacuously.
pub fn verify_packing(code: &Code, params: &PackingParams) -> Result<PackingVerdict> {
    params.validate()?;
    if code.n() != params.n {
        return Err(Error::DimensionMismatch { expected: params.n, found: code.n() });
    }
    let power_violations = params.power.map(|p| violations(code, p)).unwrap_or_default();
    let witness = if code.len() < params.list_size {
        None
    } else {
        let w = code_min_radius(code, params.list_size, params.notion.into())?;
        within(w.radius_sq, params.radius_sq()).then_some(w)
    };
    Ok(PackingVerdict { ok: witness.is_none() && power_violations.is_empty(), witness, power_violations })
}

/// Indices of codewords within squared distance `n * noise` of `y`.
pub fn list_decode(code: &Code, y: &[f64], noise: f64) -> Result<Vec<usize>> {
    if y.len() != code.n() {
        return Err(Error::DimensionMismatch { expected: code.n(), found: y.len() });
    }
    let r2 = code.n() as f64 * noise;
    Ok(code.rows().enumerate().filter(|(_, x)| within(dist_sq(x, y), r2)).map(|(i, _)| i).collect())
}

/// Lifts a code in the ball of radius `sqrt(nP)` to the sphere of radius
/// `sqrt((n+1)P)` in one more dimension by appending `sqrt((n+1)P - ||x||^2)`.
///
/// Radii of lifted lists never decrease under either notion.
pub fn lift_ball_to_sphere(code: &Code) -> Result<Code> {
    let p = code.power_limit().ok_or_else(|| invalid("lifting needs a code with a power limit"))?;
    let n = code.n();
    let target = (n + 1) as f64 * p;
    let mut data = Vec::with_capacity(code.len() * (n + 1));
    for (i, row) in code.rows().enumerate() {
        let norm = norm_sq(row);
        if norm > n as f64 * p * (1.0 + POWER_TOLERANCE) {
            return Err(Error::PowerViolation { row: i, norm_sq: norm, limit: n as f64 * p });
        }
        data.extend_from_slice(row);
        data.push((target - norm).max(0.0).sqrt());
    }
    // n*P' = (n+1)P with the same per-dimension power
    Code::from_flat_with_duplicates(n + 1, data, Some(p))
}

/// Average-radius floor guaranteed by the minimum distance of a code:
/// `((L-1)/(2L)) * d_min^2`. Every `L`-subset has average squared radius at
/// least this value.
pub fn bf_multipack_floor(code: &Code, list_size: usize) -> Result<f64> {
    if code.len() < 2 {
        return Err(Error::TooFewPoints { size: code.len(), list_size: 2 });
    }
    if list_size < 2 {
        return Err(invalid("list size must be at least 2"));
    }
    let mut dmin = f64::INFINITY;
    for i in 0..code.len() {
        for j in i + 1..code.len() {
            dmin = dmin.min(dist_sq(code.row(i), code.row(j)));
        }
    }
    let l = list_size as f64;
    Ok((l - 1.0) / (2.0 * l) * dmin)
}
