//! Radius computations, packing verification and list decoding.
//!
//! All radii are squared and expressed in the same units as squared norms
//! (that is, on the `n * power` scale). Divide by `n` for per-dimension values.

mod ball;
mod packing;
mod radius;
pub(crate) mod search;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub use ball::cheb_sq_radius;
pub use packing::{bf_multipack_floor, lift_ball_to_sphere, list_decode, verify_packing, PackingVerdict};
pub use radius::{avg_sq_radius, centroid, max_sq_radius, AvgRadiusForm};
pub use search::{code_min_radius, code_min_radius_exhaustive, find_bad_lists, SearchOptions};

/// Relative slack used when checking norms against a power limit.
pub const POWER_TOLERANCE: f64 = 1e-9;

/// Which radius of an `L`-list is being measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadiusNotion {
    /// Radius of the smallest enclosing ball.
    Chebyshev,
    /// Mean squared distance to the centroid.
    AverageRadius,
    /// Largest squared distance to the centroid.
    MaxToCentroid,
}

/// Packing notions: every `L`-subset must have radius strictly above `sqrt(nN)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PackingNotion {
    Chebyshev,
    AverageRadius,
}

impl From<PackingNotion> for RadiusNotion {
    fn from(n: PackingNotion) -> Self {
        match n {
            PackingNotion::Chebyshev => RadiusNotion::Chebyshev,
            PackingNotion::AverageRadius => RadiusNotion::AverageRadius,
        }
    }
}

/// A finite point set in `n` dimensions, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Code {
    n: usize,
    data: Vec<f64>,
    power_limit: Option<f64>,
}

impl Code {
    /// Builds a code from rows, rejecting non-finite entries, ragged rows,
    /// duplicate rows and (when `power_limit` is set) rows with squared norm
    /// above `n * P`.
    pub fn new(n: usize, rows: Vec<Vec<f64>>, power_limit: Option<f64>) -> Result<Self> {
        Self::from_flat(n, flatten(n, &rows)?, power_limit)
    }

    /// Same as [`Code::new`] on a row-major buffer.
    pub fn from_flat(n: usize, data: Vec<f64>, power_limit: Option<f64>) -> Result<Self> {
        let code = Self::from_flat_with_duplicates(n, data, power_limit)?;
        code.check_distinct()?;
        Ok(code)
    }

    /// Builds a multiset code: identical rows are allowed. Every other check of
    /// [`Code::new`] still applies.
    pub fn with_duplicates(n: usize, rows: Vec<Vec<f64>>, power_limit: Option<f64>) -> Result<Self> {
        Self::from_flat_with_duplicates(n, flatten(n, &rows)?, power_limit)
    }

    fn from_flat_with_duplicates(n: usize, data: Vec<f64>, power_limit: Option<f64>) -> Result<Self> {
        if n == 0 {
            return Err(invalid("dimension must be positive"));
        }
        if data.len() % n != 0 {
            return Err(Error::DimensionMismatch { expected: n, found: data.len() % n });
        }
        if let Some(p) = power_limit {
            if !(p > 0.0 && p.is_finite()) {
                return Err(invalid(format!("power limit must be positive and finite, got {p}")));
            }
        }
        let code = Code { n, data, power_limit };
        for (i, row) in code.rows().enumerate() {
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite { row: i });
            }
        }
        if let Some(&i) = code.power_violations().first() {
            return Err(Error::PowerViolation {
                row: i,
                norm_sq: norm_sq(code.row(i)),
                limit: code.n as f64 * power_limit.unwrap_or_default(),
            });
        }
        Ok(code)
    }

    fn check_distinct(&self) -> Result<()> {
        let mut seen: HashMap<Vec<u64>, usize> = HashMap::with_capacity(self.len());
        for (i, row) in self.rows().enumerate() {
            // +0.0 folds -0.0 into 0.0
            let key: Vec<u64> = row.iter().map(|v| (v + 0.0).to_bits()).collect();
            if let Some(&first) = seen.get(&key) {
                return Err(Error::DuplicateRow { first, second: i });
            }
            seen.insert(key, i);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of codewords `M`.
    pub fn len(&self) -> usize {
        self.data.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn power_limit(&self) -> Option<f64> {
        self.power_limit
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.n)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// Rate `ln(M) / n` in nats; `-inf` for an empty code.
    pub fn rate_nats(&self) -> f64 {
        (self.len() as f64).ln() / self.n as f64
    }

    /// Indices of rows whose squared norm exceeds `n * P` (with relative slack
    /// [`POWER_TOLERANCE`]). Empty when no power limit is attached.
    pub fn power_violations(&self) -> Vec<usize> {
        match self.power_limit {
            None => Vec::new(),
            Some(p) => violations(self, p),
        }
    }

    /// Rows listed by `indices`, in that order, keeping the power limit.
    pub fn select(&self, indices: &[usize]) -> Code {
        let mut data = Vec::with_capacity(indices.len() * self.n);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Code { n: self.n, data, power_limit: self.power_limit }
    }

    /// Replaces the attached power limit after checking every row against it.
    pub fn with_power_limit(self, power_limit: Option<f64>) -> Result<Code> {
        Self::from_flat_with_duplicates(self.n, self.data, power_limit)
    }

    pub(crate) fn from_parts_unchecked(n: usize, data: Vec<f64>, power_limit: Option<f64>) -> Code {
        debug_assert!(n > 0 && data.len() % n == 0);
        Code { n, data, power_limit }
    }
}

fn flatten(n: usize, rows: &[Vec<f64>]) -> Result<Vec<f64>> {
    let mut data = Vec::with_capacity(rows.len() * n);
    for row in rows {
        if row.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: row.len() });
        }
        data.extend_from_slice(row);
    }
    Ok(data)
}

pub(crate) fn violations(code: &Code, power: f64) -> Vec<usize> {
    let limit = code.n() as f64 * power;
    code.rows()
        .enumerate()
        .filter(|(_, r)| norm_sq(r) > limit * (1.0 + POWER_TOLERANCE))
        .map(|(i, _)| i)
        .collect()
}

/// An `L`-subset of a code together with its radius and centre.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ListWitness {
    pub indices: Vec<usize>,
    pub radius_sq: f64,
    pub center: Vec<f64>,
    pub notion: RadiusNotion,
}

impl ListWitness {
    /// Builds a witness for `indices` by recomputing the radius from the code.
    pub fn from_code(code: &Code, indices: Vec<usize>, notion: RadiusNotion) -> Result<Self> {
        let pts: Vec<&[f64]> = indices.iter().map(|&i| code.row(i)).collect();
        let (radius_sq, center) = list_radius(&pts, notion)?;
        Ok(ListWitness { indices, radius_sq, center, notion })
    }
}

/// Radius and centre of a list under `notion`.
pub fn list_radius<P: AsRef<[f64]>>(list: &[P], notion: RadiusNotion) -> Result<(f64, Vec<f64>)> {
    match notion {
        RadiusNotion::Chebyshev => cheb_sq_radius(list),
        RadiusNotion::AverageRadius => Ok((avg_sq_radius(list, AvgRadiusForm::Definition)?, centroid(list)?)),
        RadiusNotion::MaxToCentroid => Ok((max_sq_radius(list)?, centroid(list)?)),
    }
}

/// A multiple-packing problem instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PackingParams {
    pub n: usize,
    pub list_size: usize,
    pub power: Option<f64>,
    pub noise: f64,
    pub notion: PackingNotion,
}

impl PackingParams {
    pub fn new(n: usize, list_size: usize, power: Option<f64>, noise: f64, notion: PackingNotion) -> Result<Self> {
        let p = PackingParams { n, list_size, power, noise, notion };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("n must be positive"));
        }
        if self.list_size < 2 {
            return Err(invalid(format!("list size L must be at least 2, got {}", self.list_size)));
        }
        if !(self.noise > 0.0 && self.noise.is_finite()) {
            return Err(invalid(format!("noise N must be positive, got {}", self.noise)));
        }
        if let Some(p) = self.power {
            if !(p > 0.0 && p.is_finite()) {
                return Err(invalid(format!("power P must be positive, got {p}")));
            }
        }
        Ok(())
    }

    /// The squared decoding radius `n * N`.
    pub fn radius_sq(&self) -> f64 {
        self.n as f64 * self.noise
    }

    /// Whether `N / P` lies strictly below the Plotkin point `(L-1)/L`, the
    /// regime where positive-rate packings exist. Always true without a power
    /// limit.
    pub fn below_plotkin_point(&self) -> bool {
        match self.power {
            None => true,
            Some(p) => self.noise / p < (self.list_size as f64 - 1.0) / self.list_size as f64,
        }
    }
}

pub(crate) fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub(crate) fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn check_dims<P: AsRef<[f64]>>(list: &[P]) -> Result<usize> {
    let first = list.first().ok_or(Error::EmptyList)?.as_ref().len();
    for p in list {
        if p.as_ref().len() != first {
            return Err(Error::DimensionMismatch { expected: first, found: p.as_ref().len() });
        }
    }
    Ok(first)
}
