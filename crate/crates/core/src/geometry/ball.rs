//! Smallest enclosing ball by move-to-front recursion.

use super::{check_dims, dist_sq, dot};
use crate::error::{Error, Result};

const BOUNDARY_TOL: f64 = 1e-12;
const HULL_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
struct Ball {
    center: Vec<f64>,
    radius_sq: f64,
    /// Affine weights of the centre with respect to the support points.
    weights: Vec<f64>,
}

impl Ball {
    fn contains(&self, p: &[f64]) -> bool {
        self.radius_sq >= 0.0 && dist_sq(&self.center, p) <= self.radius_sq + BOUNDARY_TOL * (1.0 + self.radius_sq)
    }
}

/// Squared Chebyshev radius of a list and the centre of its smallest
/// enclosing ball.
///
/// The returned radius is the largest squared distance from the returned
/// centre to a list point, so containment holds exactly.
pub fn cheb_sq_radius<P: AsRef<[f64]>>(list: &[P]) -> Result<(f64, Vec<f64>)> {
    let dim = check_dims(list)?;
    let pts: Vec<&[f64]> = list.iter().map(|p| p.as_ref()).collect();
    let max_support = (dim + 1).min(pts.len());

    let mut order: Vec<usize> = (0..pts.len()).collect();
    let mut support = Vec::with_capacity(max_support);
    let ball = move_to_front(&pts, &mut order, pts.len(), &mut support, max_support)
        .filter(|b| b.weights.iter().all(|&w| w >= -HULL_TOL))
        .or_else(|| exhaustive(&pts, max_support))
        .ok_or_else(|| Error::Numerical("no enclosing ball found".into()))?;

    let radius_sq = pts.iter().map(|p| dist_sq(p, &ball.center)).fold(0.0, f64::max);
    Ok((radius_sq, ball.center))
}

fn move_to_front(
    pts: &[&[f64]],
    order: &mut Vec<usize>,
    end: usize,
    support: &mut Vec<usize>,
    max_support: usize,
) -> Option<Ball> {
    let mut ball = if support.is_empty() {
        Ball { center: vec![0.0; pts[0].len()], radius_sq: -1.0, weights: Vec::new() }
    } else {
        let s: Vec<&[f64]> = support.iter().map(|&i| pts[i]).collect();
        circumball(&s)?
    };
    if support.len() == max_support {
        return Some(ball);
    }
    for i in 0..end {
        let idx = order[i];
        if !ball.contains(pts[idx]) {
            support.push(idx);
            let inner = move_to_front(pts, order, i, support, max_support);
            support.pop();
            ball = inner?;
            order.remove(i);
            order.insert(0, idx);
        }
    }
    Some(ball)
}

/// Smallest circumscribed ball of all supports of size at most
/// `max_support` that contains every point.
fn exhaustive(pts: &[&[f64]], max_support: usize) -> Option<Ball> {
    let m = pts.len();
    if m > 20 {
        return None;
    }
    let mut best: Option<Ball> = None;
    for mask in 1u32..(1u32 << m) {
        if mask.count_ones() as usize > max_support {
            continue;
        }
        let s: Vec<&[f64]> = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| pts[i]).collect();
        let Some(ball) = circumball(&s) else { continue };
        if best.as_ref().is_some_and(|b| b.radius_sq <= ball.radius_sq) {
            continue;
        }
        let r2 = pts.iter().map(|p| dist_sq(p, &ball.center)).fold(0.0, f64::max);
        if r2 <= ball.radius_sq * (1.0 + HULL_TOL) + BOUNDARY_TOL {
            best = Some(Ball { radius_sq: r2, ..ball });
        }
    }
    best
}

/// Ball whose boundary passes through every support point and whose centre
/// lies in their affine hull. `None` when the points are affinely dependent.
fn circumball(support: &[&[f64]]) -> Option<Ball> {
    let p0 = support[0];
    let k = support.len() - 1;
    if k == 0 {
        return Some(Ball { center: p0.to_vec(), radius_sq: 0.0, weights: vec![1.0] });
    }
    let diffs: Vec<Vec<f64>> = support[1..].iter().map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
    let mut gram = vec![0.0; k * k];
    let mut rhs = vec![0.0; k];
    for j in 0..k {
        for l in j..k {
            let g = 2.0 * dot(&diffs[j], &diffs[l]);
            gram[j * k + l] = g;
            gram[l * k + j] = g;
        }
        rhs[j] = dot(&diffs[j], &diffs[j]);
    }
    let lambda = solve(&mut gram, &mut rhs, k)?;
    let mut center = p0.to_vec();
    for (l, d) in lambda.iter().zip(&diffs) {
        for (c, v) in center.iter_mut().zip(d) {
            *c += l * v;
        }
    }
    let radius_sq = support.iter().map(|p| dist_sq(p, &center)).fold(0.0, f64::max);
    let mut weights = Vec::with_capacity(k + 1);
    weights.push(1.0 - lambda.iter().sum::<f64>());
    weights.extend_from_slice(&lambda);
    Some(Ball { center, radius_sq, weights })
}

/// Gaussian elimination with partial pivoting on a `k x k` row-major system.
fn solve(a: &mut [f64], b: &mut [f64], k: usize) -> Option<Vec<f64>> {
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    for col in 0..k {
        let pivot = (col..k).max_by(|&i, &j| a[i * k + col].abs().total_cmp(&a[j * k + col].abs()))?;
        if a[pivot * k + col].abs() <= 1e-13 * scale {
            return None;
        }
        if pivot != col {
            for c in 0..k {
                a.swap(pivot * k + c, col * k + c);
            }
            b.swap(pivot, col);
        }
        for row in col + 1..k {
            let f = a[row * k + col] / a[col * k + col];
            if f != 0.0 {
                for c in col..k {
                    a[row * k + c] -= f * a[col * k + c];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; k];
    for row in (0..k).rev() {
        let s: f64 = (row + 1..k).map(|c| a[row * k + c] * x[c]).sum();
        x[row] = (b[row] - s) / a[row * k + row];
    }
    Some(x)
}
