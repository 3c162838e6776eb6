//! Closed-form rate bounds for multiple packing, in nats per dimension.
//!
//! Bounded packings are parameterised by the noise-to-signal ratio
//! `x = N/P` and are meaningful on `0 <= x <= (L-1)/L`; unbounded packings
//! are parameterised by `x = N > 0`.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Tolerance used to snap an abscissa onto the Plotkin point.
const PLOTKIN_SNAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundFamily {
    Bounded,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[allow(non_camel_case_types)]
pub enum BoundName {
    lb_gaussian,
    lb_spherical,
    lb_spherical_improved,
    lb_blachman_few,
    ub_eb,
    cap_large_L,
    lb_ppp,
    lb_bf_unbdd,
    ub_eb_unbdd,
    cap_large_L_unbdd,
}

impl BoundName {
    pub const BOUNDED: [BoundName; 6] = [
        BoundName::lb_gaussian,
        BoundName::lb_spherical,
        BoundName::lb_spherical_improved,
        BoundName::lb_blachman_few,
        BoundName::ub_eb,
        BoundName::cap_large_L,
    ];
    pub const UNBOUNDED: [BoundName; 4] =
        [BoundName::lb_ppp, BoundName::lb_bf_unbdd, BoundName::ub_eb_unbdd, BoundName::cap_large_L_unbdd];

    pub fn family(self) -> BoundFamily {
        match self {
            BoundName::lb_ppp | BoundName::lb_bf_unbdd | BoundName::ub_eb_unbdd | BoundName::cap_large_L_unbdd => {
                BoundFamily::Unbounded
            }
            _ => BoundFamily::Bounded,
        }
    }

    pub fn members(family: BoundFamily) -> &'static [BoundName] {
        match family {
            BoundFamily::Bounded => &Self::BOUNDED,
            BoundFamily::Unbounded => &Self::UNBOUNDED,
        }
    }

    pub fn is_lower_bound(self) -> bool {
        self.as_str().starts_with("lb_")
    }

    /// The list-size-independent large-`L` capacity curves.
    pub fn is_capacity(self) -> bool {
        matches!(self, BoundName::cap_large_L | BoundName::cap_large_L_unbdd)
    }

    /// Whether the bound grows without limit as `N/P -> 0`.
    pub fn diverges_at_zero(self) -> bool {
        !matches!(self, BoundName::lb_spherical) && self.family() == BoundFamily::Bounded
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::lb_gaussian => "lb_gaussian",
            BoundName::lb_spherical => "lb_spherical",
            BoundName::lb_spherical_improved => "lb_spherical_improved",
            BoundName::lb_blachman_few => "lb_blachman_few",
            BoundName::ub_eb => "ub_eb",
            BoundName::cap_large_L => "cap_large_L",
            BoundName::lb_ppp => "lb_ppp",
            BoundName::lb_bf_unbdd => "lb_bf_unbdd",
            BoundName::ub_eb_unbdd => "ub_eb_unbdd",
            BoundName::cap_large_L_unbdd => "cap_large_L_unbdd",
        }
    }
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundName::BOUNDED
            .iter()
            .chain(BoundName::UNBOUNDED.iter())
            .copied()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| invalid(format!("unknown bound name {s:?}")))
    }
}

/// The Plotkin point `(L-1)/L`.
pub fn plotkin_point(list_size: usize) -> Result<f64> {
    if list_size < 2 {
        return Err(invalid(format!("list size must be at least 2, got {list_size}")));
    }
    Ok((list_size as f64 - 1.0) / list_size as f64)
}

/// Evaluates a bound at `x` (`N/P` for the bounded family, `N` for the
/// unbounded family).
///
/// Bounded-family bounds return exactly `0` at the Plotkin point and a
/// domain error beyond it. At `x = 0` the divergent bounds return
/// `f64::INFINITY` (see [`BoundName::diverges_at_zero`]). `cap_large_L`
/// ignores `L` and is defined on `0 <= x <= 1`.
pub fn eval_bound(name: BoundName, list_size: usize, x: f64) -> Result<f64> {
    let plotkin = plotkin_point(list_size)?;
    if !x.is_finite() {
        return Err(Error::Domain { name: name.as_str(), value: x, reason: "abscissa must be finite" });
    }
    match name.family() {
        BoundFamily::Unbounded => {
            if x <= 0.0 {
                return Err(Error::Domain { name: name.as_str(), value: x, reason: "N must be positive" });
            }
            Ok(formula(name, list_size, x))
        }
        BoundFamily::Bounded if name.is_capacity() => {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::Domain { name: name.as_str(), value: x, reason: "N/P must lie in [0, 1]" });
            }
            Ok(if x == 0.0 { f64::INFINITY } else { formula(name, list_size, x) })
        }
        BoundFamily::Bounded => {
            if x < 0.0 {
                return Err(Error::Domain { name: name.as_str(), value: x, reason: "N/P must be non-negative" });
            }
            if (x - plotkin).abs() <= PLOTKIN_SNAP {
                return Ok(0.0);
            }
            if x > plotkin {
                return Err(Error::Domain { name: name.as_str(), value: x, reason: "N/P is above the Plotkin point" });
            }
            if x == 0.0 {
                let l = list_size as f64;
                return Ok(match name {
                    BoundName::lb_spherical => 0.5 * (1.0 - l.ln() / (l - 1.0)),
                    _ => f64::INFINITY,
                });
            }
            Ok(formula(name, list_size, x))
        }
    }
}

/// The bare expressions, without domain handling. `x` is `N/P` (with
/// `P = 1`) or `N`.
pub(crate) fn formula(name: BoundName, list_size: usize, x: f64) -> f64 {
    let l = list_size as f64;
    let two_pi_e = 2.0 * PI * E;
    match name {
        BoundName::lb_gaussian => {
            let r = l * x / (l - 1.0);
            0.5 * (-r.ln() + r - 1.0)
        }
        BoundName::lb_spherical => 0.5 * (1.0 - l * x / (l - 1.0) + (1.0 / (l * (1.0 - x))).ln() / (l - 1.0)),
        BoundName::lb_spherical_improved => {
            0.5 * (((l - 1.0) / (l * x)).ln() + (1.0 / (l * (1.0 - x))).ln() / (l - 1.0))
        }
        BoundName::lb_blachman_few => {
            0.5 * ((l - 1.0).powi(2) / (l * x * (2.0 * (l - 1.0) - l * x))).ln()
        }
        BoundName::ub_eb => 0.5 * ((l - 1.0) / (l * x)).ln(),
        BoundName::cap_large_L => 0.5 * (1.0 / x).ln(),
        BoundName::lb_ppp => 0.5 * ((l - 1.0) / (two_pi_e * x * l)).ln() - l.ln() / (2.0 * (l - 1.0)),
        BoundName::lb_bf_unbdd => 0.5 * ((l - 1.0) / (2.0 * two_pi_e * x * l)).ln(),
        BoundName::ub_eb_unbdd => 0.5 * ((l - 1.0) / (two_pi_e * x * l)).ln(),
        BoundName::cap_large_L_unbdd => 0.5 * (1.0 / (two_pi_e * x)).ln(),
    }
}

/// A bound evaluated on a grid. Cells outside the domain are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCurve {
    pub name: BoundName,
    pub list_size: usize,
    pub grid: Vec<f64>,
    pub values: Vec<Option<f64>>,
}

impl BoundCurve {
    pub fn evaluate(name: BoundName, list_size: usize, grid: &[f64]) -> Result<Self> {
        plotkin_point(list_size)?;
        let values = grid.iter().map(|&x| eval_bound(name, list_size, x).ok()).collect();
        Ok(BoundCurve { name, list_size, grid: grid.to_vec(), values })
    }
}

/// Converts a bounded-packing rate to the normalised density of an
/// unbounded packing: `R - (1/2) ln(2 pi e P)`.
pub fn bounded_to_unbounded_rate(rate: f64, power: f64) -> Result<f64> {
    if !(power > 0.0) {
        return Err(invalid(format!("power must be positive, got {power}")));
    }
    Ok(rate - 0.5 * (2.0 * PI * E * power).ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailSide {
    Upper,
    Lower,
}

/// Normalised log-probability `lim (1/k) ln P[chi2(k) beyond (1 +/- delta) k]`.
pub fn chi2_tail_exponent(delta: f64, side: TailSide) -> Result<f64> {
    match side {
        TailSide::Upper if delta > 0.0 && delta.is_finite() => Ok(0.5 * (-delta + delta.ln_1p())),
        TailSide::Lower if delta > 0.0 && delta < 1.0 => Ok(0.5 * (delta + (-delta).ln_1p())),
        _ => Err(Error::Domain { name: "chi2_tail_exponent", value: delta, reason: "delta out of range for this side" }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KhinchinDomain {
    Sphere,
    Ball,
}

/// Best constant in the moment comparison
/// `(E||sum a_i x_i||^p)^(1/p) <= C ||a||` for independent uniform vectors
/// on the unit sphere or in the unit ball of `R^n`.
pub fn khinchin_constant(n: usize, p: f64, domain: KhinchinDomain) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Domain { name: "khinchin_constant", value: p, reason: "p must be at least 1" });
    }
    let min_n = match domain {
        KhinchinDomain::Sphere => 2,
        KhinchinDomain::Ball => 1,
    };
    if n < min_n {
        return Err(Error::Domain { name: "khinchin_constant", value: n as f64, reason: "dimension too small" });
    }
    let nf = n as f64;
    let ratio = (ln_gamma_ratio(nf / 2.0, p / 2.0) / p).exp();
    let lead = match domain {
        KhinchinDomain::Sphere => (2.0 / nf).sqrt(),
        KhinchinDomain::Ball => (2.0 / (nf + 2.0)).sqrt(),
    };
    Ok(lead * ratio)
}

/// `ln Gamma(a + h) - ln Gamma(a)` for `a > 0`, `h >= 0`.
///
/// Differencing two log-gamma values loses about `1e-12` absolute accuracy
/// once the arguments reach the thousands; here the Stirling series is
/// differenced term by term after shifting `a` up to at least 20.
pub(crate) fn ln_gamma_ratio(a: f64, h: f64) -> f64 {
    const SHIFT: f64 = 20.0;
    if h == 0.0 {
        return 0.0;
    }
    let mut a = a;
    let mut acc = 0.0;
    while a < SHIFT {
        // Gamma(a+h)/Gamma(a) = Gamma(a+1+h)/Gamma(a+1) * a/(a+h)
        acc -= (h / a).ln_1p();
        a += 1.0;
    }
    let b = a + h;
    let lead = (a - 0.5) * (h / a).ln_1p() + h * b.ln() - h;
    let series = |x: f64| {
        let x2 = x * x;
        (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * x2)) / x2) / x2) / x
    };
    acc + lead + series(b) - series(a)
}

/// A point `(s, lambda)` of the two-parameter exponent and its value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentPoint {
    pub s: f64,
    pub lambda: f64,
    pub value: f64,
}

/// The exponent
/// `E(s, lambda) = -lambda L N + s L P + (1/2) ln(1/(2P) - s)
///                 + ((L-1)/2) ln(1/(2P) - s + lambda) + (L/2) ln(2P)`
/// bounding the bad-list probability of a thin-shell Gaussian ensemble.
pub fn exponent_e(s: f64, lambda: f64, list_size: usize, power: f64, noise: f64) -> Result<f64> {
    check_exponent_params(list_size, power, noise)?;
    let a = 0.5 / power - s;
    let b = a + lambda;
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::Domain { name: "exponent_e", value: s, reason: "needs 1/(2P) - s > 0 and 1/(2P) - s + lambda > 0" });
    }
    Ok(exponent_unchecked(s, lambda, list_size as f64, power, noise))
}

fn exponent_unchecked(s: f64, lambda: f64, l: f64, power: f64, noise: f64) -> f64 {
    let a = 0.5 / power - s;
    let b = a + lambda;
    -lambda * l * noise + s * l * power + 0.5 * a.ln() + 0.5 * (l - 1.0) * b.ln() + 0.5 * l * (2.0 * power).ln()
}

fn check_exponent_params(list_size: usize, power: f64, noise: f64) -> Result<()> {
    plotkin_point(list_size)?;
    if !(power > 0.0 && power.is_finite()) || !(noise > 0.0 && noise.is_finite()) {
        return Err(invalid("P and N must be positive and finite"));
    }
    Ok(())
}

/// Closed-form maximiser of [`exponent_e`] over `s, lambda >= 0`:
/// `s* = (1/2)(1/P - 1/(L(P-N)))`, `lambda* = (L-1)/(2LN) - 1/(2P) + s*`.
///
/// Requires `0 < N/P < (L-1)/L`. The result is checked to dominate its
/// neighbours on a `1e-4` stencil.
pub fn maximize_e(list_size: usize, power: f64, noise: f64) -> Result<ExponentPoint> {
    check_exponent_params(list_size, power, noise)?;
    let plotkin = plotkin_point(list_size)?;
    let ratio = noise / power;
    if ratio >= plotkin {
        return Err(Error::Domain { name: "maximize_e", value: ratio, reason: "N/P must lie below the Plotkin point" });
    }
    let l = list_size as f64;
    let s = 0.5 * (1.0 / power - 1.0 / (l * (power - noise)));
    let lambda = (l - 1.0) / (2.0 * l * noise) - 0.5 / power + s;
    let value = exponent_unchecked(s, lambda, l, power, noise);

    let h = 1e-4;
    for (ds, dl) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h), (h, h), (-h, -h), (h, -h), (-h, h)] {
        let (s2, l2) = (s + ds, lambda + dl);
        if s2 < 0.0 || l2 < 0.0 {
            continue;
        }
        if let Ok(v) = exponent_e(s2, l2, list_size, power, noise) {
            if v > value + 1e-14 * (1.0 + value.abs()) {
                return Err(Error::Numerical(format!("stationary point ({s}, {lambda}) is not a local maximum")));
            }
        }
    }
    Ok(ExponentPoint { s, lambda, value })
}

/// Numerical maximiser of [`exponent_e`] by coordinate ascent with
/// golden-section line searches, started at half the closed-form optimum.
/// Independent of the closed form except for the starting point.
pub fn maximize_e_numeric(list_size: usize, power: f64, noise: f64) -> Result<ExponentPoint> {
    let start = maximize_e(list_size, power, noise)?;
    let l = list_size as f64;
    let f = |s: f64, lam: f64| exponent_unchecked(s, lam, l, power, noise);
    let (mut s, mut lam) = (start.s / 2.0, start.lambda / 2.0);
    // lambda beyond (L-1)/(2LN) makes dE/dlambda negative for every feasible s
    let lam_hi = (l - 1.0) / (2.0 * l * noise);
    let s_hi = 0.5 / power;
    for _ in 0..200 {
        let (s_prev, lam_prev) = (s, lam);
        // keep 1/(2P) - s > 0
        s = golden_max(|t| f(t, lam), 0.0, s_hi * (1.0 - 1e-12), 1e-12);
        lam = golden_max(|t| f(s, t), 0.0, lam_hi, 1e-12);
        if (s - s_prev).abs() < 1e-15 && (lam - lam_prev).abs() < 1e-15 {
            break;
        }
    }
    Ok(ExponentPoint { s, lambda: lam, value: f(s, lam) })
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol * (1.0 + a.abs() + b.abs()) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}
