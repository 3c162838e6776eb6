//! Enumeration of `L`-subsets of a code with branch-and-bound pruning.
//!
//! Every radius notion is bounded below by the average squared radius, which
//! equals `(1/L^2) * sum_{i<j} ||x_i - x_j||^2`. The partial pair sum of a
//! prefix therefore certifies a lower bound for every completion. The
//! Chebyshev radius is also at least a quarter of any squared pairwise
//! distance.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use super::{dist_sq, list_radius, Code, ListWitness, RadiusNotion};
use crate::error::{Error, Result};

/// Relative slack applied to radius thresholds, both when pruning and when
/// deciding whether a list lies within `nN`.
pub(crate) const THRESHOLD_REL_TOL: f64 = 1e-12;

/// Above this many codewords pairwise distances are computed on demand
/// rather than cached in a matrix.
const MATRIX_LIMIT: usize = 2048;

/// Knobs for the subset searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Split the enumeration across rayon workers by leading index.
    pub parallel: bool,
    /// Restrict candidate extensions of a bad-list search to neighbourhoods
    /// found by a sort-and-sweep over the first coordinate.
    pub prefilter: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { parallel: true, prefilter: false }
    }
}

pub(crate) fn within(radius_sq: f64, threshold: f64) -> bool {
    radius_sq <= threshold * (1.0 + THRESHOLD_REL_TOL)
}

enum Distances<'a> {
    Matrix { m: usize, d: Vec<f64> },
    Rows(&'a Code),
    /// Sparse neighbour lists, sorted by index; absent pairs are too far apart.
    Neighbours(Vec<Vec<(usize, f64)>>),
}

impl Distances<'_> {
    fn get(&self, i: usize, j: usize) -> f64 {
        match self {
            Distances::Matrix { m, d } => d[i * m + j],
            Distances::Rows(code) => dist_sq(code.row(i), code.row(j)),
            Distances::Neighbours(nb) => {
                let (a, b) = if i < j { (i, j) } else { (j, i) };
                match nb[a].binary_search_by_key(&b, |&(k, _)| k) {
                    Ok(pos) => nb[a][pos].1,
                    Err(_) => f64::INFINITY,
                }
            }
        }
    }
}

fn dense<'a>(code: &'a Code) -> Distances<'a> {
    let m = code.len();
    if m > MATRIX_LIMIT {
        return Distances::Rows(code);
    }
    let mut d = vec![0.0; m * m];
    for i in 0..m {
        for j in i + 1..m {
            let v = dist_sq(code.row(i), code.row(j));
            d[i * m + j] = v;
            d[j * m + i] = v;
        }
    }
    Distances::Matrix { m, d }
}

/// Pairs within squared distance `cap`, found by sweeping over the points
/// sorted by their first coordinate.
fn neighbours(code: &Code, cap: f64) -> Vec<Vec<(usize, f64)>> {
    let m = code.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| code.row(a)[0].total_cmp(&code.row(b)[0]));
    let reach = cap.sqrt();
    let mut nb = vec![Vec::new(); m];
    for (pos, &i) in order.iter().enumerate() {
        let xi = code.row(i)[0];
        for &j in &order[pos + 1..] {
            if code.row(j)[0] - xi > reach {
                break;
            }
            let d = dist_sq(code.row(i), code.row(j));
            if d <= cap {
                let (a, b) = if i < j { (i, j) } else { (j, i) };
                nb[a].push((b, d));
            }
        }
    }
    nb.iter_mut().for_each(|v| v.sort_unstable_by_key(|&(k, _)| k));
    nb
}

fn lower_bound(notion: RadiusNotion, l: usize, pair_sum: f64, pair_max: f64) -> f64 {
    let avg = pair_sum / (l * l) as f64;
    match notion {
        RadiusNotion::Chebyshev => avg.max(pair_max / 4.0),
        RadiusNotion::AverageRadius | RadiusNotion::MaxToCentroid => avg,
    }
}

struct Enumerator<'a> {
    code: &'a Code,
    l: usize,
    notion: RadiusNotion,
    dist: Distances<'a>,
}

impl Enumerator<'_> {
    /// Depth-first walk over completions of `chosen`. `threshold` is read
    /// before each extension; a prefix whose certified lower bound exceeds it
    /// is abandoned. `complete` receives each full subset that survives.
    fn walk(
        &self,
        chosen: &mut Vec<usize>,
        pair_sum: f64,
        pair_max: f64,
        threshold: &dyn Fn() -> f64,
        complete: &mut dyn FnMut(&[usize]),
    ) {
        if chosen.len() == self.l {
            complete(chosen);
            return;
        }
        let m = self.code.len();
        let start = chosen.last().map_or(0, |&i| i + 1);
        let last_start = m - (self.l - chosen.len());
        let candidates: Box<dyn Iterator<Item = usize>> = match (&self.dist, chosen.first()) {
            (Distances::Neighbours(nb), Some(&first)) => Box::new(
                nb[first].iter().map(|&(k, _)| k).filter(move |&k| k >= start && k <= last_start),
            ),
            _ => Box::new(start..=last_start),
        };
        for j in candidates {
            let mut sum = pair_sum;
            let mut mx = pair_max;
            for &i in chosen.iter() {
                let d = self.dist.get(i, j);
                sum += d;
                mx = mx.max(d);
            }
            let lb = lower_bound(self.notion, self.l, sum, mx);
            if lb > threshold() * (1.0 + THRESHOLD_REL_TOL) {
                continue;
            }
            chosen.push(j);
            self.walk(chosen, sum, mx, threshold, complete);
            chosen.pop();
        }
    }

    fn radius(&self, indices: &[usize]) -> (f64, Vec<f64>) {
        let pts: Vec<&[f64]> = indices.iter().map(|&i| self.code.row(i)).collect();
        list_radius(&pts, self.notion).expect("rows of a code share one dimension")
    }

    fn leading_indices(&self) -> std::ops::RangeInclusive<usize> {
        0..=self.code.len() - self.l
    }
}

/// Minimum radius over all `L`-subsets of `code`, with the lexicographically
/// smallest minimising index set.
///
/// Pruning only discards prefixes whose certified lower bound exceeds the
/// incumbent, so the result equals that of [`code_min_radius_exhaustive`].
pub fn code_min_radius(code: &Code, list_size: usize, notion: RadiusNotion) -> Result<ListWitness> {
    code_min_radius_with(code, list_size, notion, SearchOptions::default())
}

pub(crate) fn code_min_radius_with(
    code: &Code,
    list_size: usize,
    notion: RadiusNotion,
    opts: SearchOptions,
) -> Result<ListWitness> {
    check_size(code, list_size)?;
    let en = Enumerator { code, l: list_size, notion, dist: dense(code) };
    // Non-negative f64 bit patterns order like the values they encode.
    let incumbent = AtomicU64::new(f64::INFINITY.to_bits());

    let search = |first: usize| -> Option<(f64, Vec<usize>, Vec<f64>)> {
        let mut best: Option<(f64, Vec<usize>, Vec<f64>)> = None;
        let threshold = || f64::from_bits(incumbent.load(Ordering::Relaxed));
        let mut complete = |idx: &[usize]| {
            let (r, c) = en.radius(idx);
            if best.as_ref().map_or(true, |(b, _, _)| r < *b) {
                incumbent.fetch_min(r.to_bits(), Ordering::Relaxed);
                best = Some((r, idx.to_vec(), c));
            }
        };
        let mut chosen = vec![first];
        en.walk(&mut chosen, 0.0, 0.0, &threshold, &mut complete);
        best
    };

    let candidates: Vec<(f64, Vec<usize>, Vec<f64>)> = if opts.parallel {
        en.leading_indices().into_par_iter().filter_map(search).collect()
    } else {
        en.leading_indices().filter_map(search).collect()
    };
    let (radius_sq, indices, center) = candidates
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)))
        .ok_or_else(|| Error::Numerical("subset search returned no candidate".into()))?;
    Ok(ListWitness { indices, radius_sq, center, notion })
}

/// Unpruned reference enumeration over every `L`-subset in lexicographic
/// order. Exponential; intended for small codes and cross-checks.
pub fn code_min_radius_exhaustive(code: &Code, list_size: usize, notion: RadiusNotion) -> Result<ListWitness> {
    check_size(code, list_size)?;
    let m = code.len();
    let mut idx: Vec<usize> = (0..list_size).collect();
    let mut best: Option<ListWitness> = None;
    loop {
        let w = ListWitness::from_code(code, idx.clone(), notion)?;
        if best.as_ref().map_or(true, |b| w.radius_sq < b.radius_sq) {
            best = Some(w);
        }
        // next combination
        let mut k = list_size;
        while k > 0 && idx[k - 1] == m - list_size + k - 1 {
            k -= 1;
        }
        if k == 0 {
            break;
        }
        idx[k - 1] += 1;
        for t in k..list_size {
            idx[t] = idx[t - 1] + 1;
        }
    }
    best.ok_or(Error::TooFewPoints { size: m, list_size })
}

/// Every `L`-subset whose radius under `notion` is at most `radius_sq`
/// (boundary included), in lexicographic order. Empty when the code has
/// fewer than `L` points.
pub fn find_bad_lists(code: &Code, list_size: usize, radius_sq: f64, notion: RadiusNotion) -> Vec<ListWitness> {
    find_bad_lists_with(code, list_size, radius_sq, notion, SearchOptions::default())
}

pub(crate) fn find_bad_lists_with(
    code: &Code,
    list_size: usize,
    radius_sq: f64,
    notion: RadiusNotion,
    opts: SearchOptions,
) -> Vec<ListWitness> {
    if list_size == 0 || code.len() < list_size {
        return Vec::new();
    }
    let dist = if opts.prefilter {
        let t = radius_sq * (1.0 + THRESHOLD_REL_TOL);
        let cap = match notion {
            RadiusNotion::Chebyshev => 4.0 * t,
            RadiusNotion::AverageRadius | RadiusNotion::MaxToCentroid => (list_size * list_size) as f64 * t,
        };
        Distances::Neighbours(neighbours(code, cap))
    } else {
        dense(code)
    };
    let en = Enumerator { code, l: list_size, notion, dist };
    let search = |first: usize| -> Vec<ListWitness> {
        let mut found = Vec::new();
        let threshold = || radius_sq;
        let mut complete = |idx: &[usize]| {
            let (r, c) = en.radius(idx);
            if within(r, radius_sq) {
                found.push(ListWitness { indices: idx.to_vec(), radius_sq: r, center: c, notion });
            }
        };
        let mut chosen = vec![first];
        en.walk(&mut chosen, 0.0, 0.0, &threshold, &mut complete);
        found
    };
    if opts.parallel {
        en.leading_indices().into_par_iter().flat_map_iter(search).collect()
    } else {
        en.leading_indices().flat_map(search).collect()
    }
}

fn check_size(code: &Code, list_size: usize) -> Result<()> {
    if list_size == 0 || code.len() < list_size {
        return Err(Error::TooFewPoints { size: code.len(), list_size });
    }
    Ok(())
}
