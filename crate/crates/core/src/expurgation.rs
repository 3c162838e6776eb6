//! Random coding with expurgation: sample a code, then delete points until
//! no list of `L` codewords is confined to a ball of squared radius `nN`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::ensembles::{sample, EnsembleSpec};
use crate::error::{invalid, Error, Result};
use crate::geometry::search::find_bad_lists_with;
use crate::geometry::{verify_packing, violations, Code, PackingParams, SearchOptions};

pub const DEFAULT_M_CAP: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpurgationReport {
    pub initial_size: usize,
    pub power_violations: usize,
    pub bad_lists_found: usize,
    pub points_removed: usize,
    pub final_size: usize,
    pub verified: bool,
    /// `ln(final_size) / n`; `None` when nothing survives.
    pub rate_nats: Option<f64>,
    /// Input rows that survive, in increasing order.
    pub kept: Vec<usize>,
}

/// Removes power violators, then greedily removes the point lying in the
/// most bad lists (lowest index on ties) until no bad list remains.
///
/// Bad lists are found once; deleting points cannot create new ones, so
/// membership is updated incrementally.
pub fn expurgate(code: &Code, params: &PackingParams) -> Result<(Code, ExpurgationReport)> {
    expurgate_with(code, params, SearchOptions::default())
}

pub fn expurgate_with(code: &Code, params: &PackingParams, opts: SearchOptions) -> Result<(Code, ExpurgationReport)> {
    params.validate()?;
    if code.n() != params.n {
        return Err(Error::DimensionMismatch { expected: params.n, found: code.n() });
    }
    let violators = params.power.map(|p| violations(code, p)).unwrap_or_default();
    let admissible: Vec<usize> = {
        let mut bad = violators.iter().peekable();
        (0..code.len())
            .filter(|i| {
                if bad.peek() == Some(&i) {
                    bad.next();
                    false
                } else {
                    true
                }
            })
            .collect()
    };
    let power_limit = params.power.or(code.power_limit());
    let pool = code.select(&admissible);

    let lists: Vec<Vec<usize>> = find_bad_lists_with(&pool, params.list_size, params.radius_sq(), params.notion.into(), opts)
        .into_iter()
        .map(|w| w.indices)
        .collect();
    let removed = greedy_hitting_set(pool.len(), &lists);

    let kept_local: Vec<usize> = (0..pool.len()).filter(|i| !removed[*i]).collect();
    let kept: Vec<usize> = kept_local.iter().map(|&i| admissible[i]).collect();
    let survivors = pool.select(&kept_local);
    // violators are gone, so the limit holds for every surviving row
    let survivors = Code::from_parts_unchecked(survivors.n(), survivors.as_flat().to_vec(), power_limit);

    let verified = verify_packing(&survivors, params)?.ok;
    let final_size = survivors.len();
    let report = ExpurgationReport {
        initial_size: code.len(),
        power_violations: violators.len(),
        bad_lists_found: lists.len(),
        points_removed: pool.len() - final_size,
        final_size,
        verified,
        rate_nats: (final_size > 0).then(|| (final_size as f64).ln() / code.n() as f64),
        kept,
    };
    Ok((survivors, report))
}

/// Marks points to delete so that every list loses at least one member.
fn greedy_hitting_set(m: usize, lists: &[Vec<usize>]) -> Vec<bool> {
    let mut member_of: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (k, list) in lists.iter().enumerate() {
        for &i in list {
            member_of[i].push(k);
        }
    }
    let mut degree: Vec<usize> = member_of.iter().map(Vec::len).collect();
    let mut alive = vec![true; lists.len()];
    let mut removed = vec![false; m];
    // stale entries are skipped when popped
    let mut heap: BinaryHeap<(usize, Reverse<usize>)> =
        degree.iter().enumerate().filter(|(_, &d)| d > 0).map(|(i, &d)| (d, Reverse(i))).collect();
    while let Some((d, Reverse(i))) = heap.pop() {
        if removed[i] || d != degree[i] || d == 0 {
            continue;
        }
        removed[i] = true;
        for &k in &member_of[i] {
            if !alive[k] {
                continue;
            }
            alive[k] = false;
            for &j in &lists[k] {
                if j != i {
                    degree[j] -= 1;
                    if degree[j] > 0 {
                        heap.push((degree[j], Reverse(j)));
                    }
                }
            }
        }
        degree[i] = 0;
    }
    removed
}

/// Number of codewords sampled for `rate` nats per dimension:
/// `min(ceil(e^(n * rate)), m_cap)`.
pub fn sample_size(n: usize, rate_nats: f64, m_cap: usize) -> Result<usize> {
    if !(rate_nats >= 0.0) || rate_nats.is_infinite() {
        return Err(Error::Domain { name: "rate", value: rate_nats, reason: "must be finite and non-negative" });
    }
    if m_cap == 0 {
        return Err(invalid("the size cap must be at least 1"));
    }
    let m = (n as f64 * rate_nats).exp().ceil();
    Ok(if m >= m_cap as f64 { m_cap } else { (m as usize).max(1) })
}

/// Samples `min(ceil(e^(n * rate)), m_cap)` codewords from `spec` and
/// expurgates them against `params`.
pub fn construct(spec: &EnsembleSpec, params: &PackingParams, rate_nats: f64, m_cap: usize) -> Result<(Code, ExpurgationReport)> {
    construct_with(spec, params, rate_nats, m_cap, SearchOptions::default())
}

pub fn construct_with(
    spec: &EnsembleSpec,
    params: &PackingParams,
    rate_nats: f64,
    m_cap: usize,
    opts: SearchOptions,
) -> Result<(Code, ExpurgationReport)> {
    if spec.n != params.n {
        return Err(Error::DimensionMismatch { expected: params.n, found: spec.n });
    }
    let m = sample_size(spec.n, rate_nats, m_cap)?;
    let code = sample(spec, m)?;
    expurgate_with(&code, params, opts)
}
