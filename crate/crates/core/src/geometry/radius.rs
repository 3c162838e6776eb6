use serde::{Deserialize, Serialize};

use super::{check_dims, dist_sq, dot, norm_sq};
use crate::error::Result;

/// Algebraically equivalent ways of computing the average squared radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AvgRadiusForm {
    /// `(1/L) sum ||x_i - centroid||^2`.
    Definition,
    /// `(1/L) sum ||x_i||^2 - ||centroid||^2`.
    NormMinusCentroid,
    /// `((L-1)/L^2) sum ||x_i||^2 - (1/L^2) sum_{i != j} <x_i, x_j>`.
    PowerMinusCorrelation,
    /// `(1/(2 L^2)) sum_{i != j} ||x_i - x_j||^2`.
    Pairwise,
}

impl AvgRadiusForm {
    pub const ALL: [AvgRadiusForm; 4] = [
        AvgRadiusForm::Definition,
        AvgRadiusForm::NormMinusCentroid,
        AvgRadiusForm::PowerMinusCorrelation,
        AvgRadiusForm::Pairwise,
    ];
}

/// Coordinate-wise mean of the list.
pub fn centroid<P: AsRef<[f64]>>(list: &[P]) -> Result<Vec<f64>> {
    let n = check_dims(list)?;
    let mut c = vec![0.0; n];
    for p in list {
        for (acc, v) in c.iter_mut().zip(p.as_ref()) {
            *acc += v;
        }
    }
    let inv = 1.0 / list.len() as f64;
    c.iter_mut().for_each(|v| *v *= inv);
    Ok(c)
}

/// Average squared radius of the list, computed through `form`.
pub fn avg_sq_radius<P: AsRef<[f64]>>(list: &[P], form: AvgRadiusForm) -> Result<f64> {
    check_dims(list)?;
    let l = list.len() as f64;
    let value = match form {
        AvgRadiusForm::Definition => {
            let c = centroid(list)?;
            list.iter().map(|p| dist_sq(p.as_ref(), &c)).sum::<f64>() / l
        }
        AvgRadiusForm::NormMinusCentroid => {
            let c = centroid(list)?;
            list.iter().map(|p| norm_sq(p.as_ref())).sum::<f64>() / l - norm_sq(&c)
        }
        AvgRadiusForm::PowerMinusCorrelation => {
            let power: f64 = list.iter().map(|p| norm_sq(p.as_ref())).sum();
            let mut corr = 0.0;
            for (i, a) in list.iter().enumerate() {
                for b in &list[i + 1..] {
                    corr += dot(a.as_ref(), b.as_ref());
                }
            }
            ((l - 1.0) * power - 2.0 * corr) / (l * l)
        }
        AvgRadiusForm::Pairwise => {
            let mut total = 0.0;
            for (i, a) in list.iter().enumerate() {
                for b in &list[i + 1..] {
                    total += dist_sq(a.as_ref(), b.as_ref());
                }
            }
            // unordered pairs counted once, hence 1/L^2 rather than 1/(2L^2)
            total / (l * l)
        }
    };
    Ok(value.max(0.0))
}

/// Largest squared distance from a list point to the centroid.
pub fn max_sq_radius<P: AsRef<[f64]>>(list: &[P]) -> Result<f64> {
    let c = centroid(list)?;
    Ok(list.iter().map(|p| dist_sq(p.as_ref(), &c)).fold(0.0, f64::max))
}
