//! Text formats shared by the command-line tool and the tests.
//!
//! A code file is a header line `MPK1 n=<n> M=<M> [P=<P>]` followed by `M`
//! lines of `n` space-separated decimals. Values are written in the shortest
//! form that parses back to the same `f64`, so round trips are bit-exact.
//!
//! A curve file is CSV with an `x` column and one column per bound name.
//! Cells outside a bound's domain (and infinite values at `x = 0`) are empty.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundCurve, BoundFamily, BoundName};
use crate::error::{invalid, Error, Result};
use crate::geometry::Code;

pub const CODE_TAG: &str = "MPK1";

pub fn code_to_string(code: &Code) -> String {
    let mut out = format!("{CODE_TAG} n={} M={}", code.n(), code.len());
    if let Some(p) = code.power_limit() {
        write!(out, " P={p:?}").unwrap();
    }
    out.push('\n');
    for row in code.rows() {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            write!(out, "{v:?}").unwrap();
        }
        out.push('\n');
    }
    out
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Parses a code file. Identical rows are accepted so that degenerate codes
/// can be loaded and rejected by verification rather than by the parser.
pub fn parse_code(text: &str) -> Result<Code> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let mut fields = header.split_whitespace();
    if fields.next() != Some(CODE_TAG) {
        return Err(parse_err(1, format!("expected header starting with {CODE_TAG}")));
    }
    let (mut n, mut m, mut p) = (None, None, None);
    for field in fields {
        let (key, value) = field.split_once('=').ok_or_else(|| parse_err(1, format!("malformed header field {field:?}")))?;
        let bad = || parse_err(1, format!("bad value in header field {field:?}"));
        match key {
            "n" if n.is_none() => n = Some(value.parse::<usize>().map_err(|_| bad())?),
            "M" if m.is_none() => m = Some(value.parse::<usize>().map_err(|_| bad())?),
            "P" if p.is_none() => p = Some(value.parse::<f64>().map_err(|_| bad())?),
            _ => return Err(parse_err(1, format!("unexpected header field {field:?}"))),
        }
    }
    let n = n.ok_or_else(|| parse_err(1, "header lacks n"))?;
    let m = m.ok_or_else(|| parse_err(1, "header lacks M"))?;
    if n == 0 {
        return Err(parse_err(1, "n must be positive"));
    }

    let mut rows = Vec::with_capacity(m);
    let mut last_line = 1;
    for (line, body) in lines {
        last_line = line;
        if body.is_empty() {
            continue;
        }
        if rows.len() == m {
            return Err(parse_err(line, format!("more than M={m} rows")));
        }
        let row: Vec<f64> = body
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| parse_err(line, format!("not a number: {t:?}"))))
            .collect::<Result<_>>()?;
        if row.len() != n {
            return Err(parse_err(line, format!("expected {n} values, found {}", row.len())));
        }
        rows.push((line, row));
    }
    if rows.len() != m {
        return Err(parse_err(last_line, format!("expected M={m} rows, found {}", rows.len())));
    }
    let lines: Vec<usize> = rows.iter().map(|r| r.0).collect();
    Code::with_duplicates(n, rows.into_iter().map(|r| r.1).collect(), p).map_err(|e| match e {
        Error::NonFinite { row } => parse_err(lines[row], "non-finite value"),
        Error::PowerViolation { row, norm_sq, limit } => {
            parse_err(lines[row], format!("squared norm {norm_sq} exceeds n*P = {limit}"))
        }
        Error::InvalidParameter(msg) => parse_err(1, msg),
        other => other,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Units {
    #[default]
    Nats,
    Bits,
}

impl Units {
    pub fn convert(self, nats: f64) -> f64 {
        match self {
            Units::Nats => nats,
            Units::Bits => nats / std::f64::consts::LN_2,
        }
    }
}

/// Grid `lo, lo + step, ...` up to `hi` (inclusive up to rounding), each
/// point rounded to 12 decimals so that values print cleanly.
pub fn make_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && step.is_finite()) || step <= 0.0 || hi < lo {
        return Err(invalid(format!("bad grid {lo}:{hi}:{step}")));
    }
    let count = ((hi - lo) / step + 1e-9).floor() + 1.0;
    if count > 1e7 {
        return Err(invalid(format!("grid {lo}:{hi}:{step} has too many points")));
    }
    Ok((0..count as usize).map(|i| ((lo + i as f64 * step) * 1e12).round() / 1e12).collect())
}

/// Parses `lo:hi:step`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(invalid(format!("grid must be lo:hi:step, got {spec:?}")));
    }
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| invalid(format!("bad grid number {s:?}")));
    make_grid(num(parts[0])?, num(parts[1])?, num(parts[2])?)
}

/// Every bound of a family on a common grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveTable {
    pub family: BoundFamily,
    pub list_size: usize,
    pub units: Units,
    pub grid: Vec<f64>,
    pub curves: Vec<BoundCurve>,
}

impl CurveTable {
    /// Values are stored in nats; `units` only affects [`CurveTable::to_csv`].
    pub fn evaluate(family: BoundFamily, list_size: usize, grid: &[f64], units: Units) -> Result<Self> {
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(invalid("grid must be strictly increasing"));
        }
        let curves = BoundName::members(family)
            .iter()
            .map(|&b| BoundCurve::evaluate(b, list_size, grid))
            .collect::<Result<_>>()?;
        Ok(CurveTable { family, list_size, units, grid: grid.to_vec(), curves })
    }

    pub fn value(&self, name: BoundName, row: usize) -> Option<f64> {
        self.curves.iter().find(|c| c.name == name).and_then(|c| c.values[row])
    }

    /// Checks that every lower bound lies below the Elias-Bassalygo-type
    /// upper bound, which lies below the large-`L` capacity, and that the
    /// improved spherical bound dominates the plain one. Returns the
    /// offending `(x, description)` pairs.
    pub fn ordering_violations(&self) -> Vec<(f64, String)> {
        let (upper, cap) = match self.family {
            BoundFamily::Bounded => (BoundName::ub_eb, BoundName::cap_large_L),
            BoundFamily::Unbounded => (BoundName::ub_eb_unbdd, BoundName::cap_large_L_unbdd),
        };
        let le = |a: f64, b: f64| a <= b + 1e-12 * (1.0 + b.abs());
        let mut out = Vec::new();
        for (row, &x) in self.grid.iter().enumerate() {
            let Some(ub) = self.value(upper, row) else { continue };
            for c in self.curves.iter().filter(|c| c.name.is_lower_bound()) {
                if let Some(v) = c.values[row] {
                    if !le(v, ub) {
                        out.push((x, format!("{} = {v} exceeds {upper} = {ub}", c.name)));
                    }
                }
            }
            if let Some(cv) = self.value(cap, row) {
                if !le(ub, cv) {
                    out.push((x, format!("{upper} = {ub} exceeds {cap} = {cv}")));
                }
            }
            if let (Some(a), Some(b)) =
                (self.value(BoundName::lb_spherical, row), self.value(BoundName::lb_spherical_improved, row))
            {
                if !le(a, b) {
                    out.push((x, format!("lb_spherical = {a} exceeds lb_spherical_improved = {b}")));
                }
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x");
        for c in &self.curves {
            out.push(',');
            out.push_str(c.name.as_str());
        }
        out.push('\n');
        for (row, x) in self.grid.iter().enumerate() {
            write!(out, "{x}").unwrap();
            for c in &self.curves {
                out.push(',');
                if let Some(v) = c.values[row].filter(|v| v.is_finite()) {
                    write!(out, "{:?}", self.units.convert(v)).unwrap();
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Parses a curve CSV back into `(x, cells)` rows, `None` for empty cells.
pub fn parse_curve_csv(text: &str) -> Result<(Vec<String>, Vec<(f64, Vec<Option<f64>>)>)> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let names: Vec<String> = header.split(',').map(str::to_string).collect();
    if names.first().map(String::as_str) != Some("x") {
        return Err(parse_err(1, "first column must be x"));
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != names.len() {
            return Err(parse_err(i + 1, format!("expected {} cells, found {}", names.len(), cells.len())));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| parse_err(i + 1, format!("not a number: {s:?}")));
        let x = num(cells[0])?;
        let vals = cells[1..].iter().map(|c| if c.is_empty() { Ok(None) } else { num(c).map(Some) }).collect::<Result<_>>()?;
        rows.push((x, vals));
    }
    Ok((names[1..].to_vec(), rows))
}
