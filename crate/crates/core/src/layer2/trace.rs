//! Counting intersecting families in `P([n]^(>=2))` whose trace on
//! `[n]^(2)` is a fixed star `S_r` or the triangle `T`.
//!
//! Such a family is the trace plus a set of members of size at least 3,
//! each meeting every trace edge and all pairwise intersecting. So `|I_B|`
//! at size `s` is coefficient `s - |B|` of the independence polynomial of
//! the disjointness graph on those compatible sets.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::bound::pow2;
use super::{Census, Layer2Error};
use crate::binom::binomial;
use crate::family::{SetFamily, SetMask};
use crate::indep::MAX_VERTICES;
use crate::profile::DisjointnessGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceKind {
    /// `S_r = {1t : 2 <= t <= r+1}`.
    Star(u32),
    /// `T = {12, 13, 23}`.
    Triangle,
}

impl TraceKind {
    pub fn size(self) -> usize {
        match self {
            TraceKind::Star(r) => r as usize,
            TraceKind::Triangle => 3,
        }
    }
}

impl fmt::Display for TraceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceKind::Star(r) => write!(f, "star:{r}"),
            TraceKind::Triangle => f.write_str("triangle"),
        }
    }
}

impl FromStr for TraceKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "triangle" {
            return Ok(TraceKind::Triangle);
        }
        s.strip_prefix("star:")
            .and_then(|r| r.parse().ok())
            .map(TraceKind::Star)
            .ok_or_else(|| format!("bad trace `{s}`"))
    }
}

impl Serialize for TraceKind {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

/// The trace itself as a family of 2-sets over `[n]`.
pub fn trace_family(n: u32, trace: TraceKind) -> Result<SetFamily, Layer2Error> {
    let edges: Vec<SetMask> = match trace {
        TraceKind::Star(r) => {
            if r + 1 > n {
                return Err(Layer2Error::StarTooLarge { r, n });
            }
            (2..=r + 1).map(|t| SetMask::from_elements([1, t])).collect()
        }
        TraceKind::Triangle => {
            if n < 3 {
                return Err(Layer2Error::GroundTooSmall { n, min: 3 });
            }
            vec![
                SetMask::from_elements([1, 2]),
                SetMask::from_elements([1, 3]),
                SetMask::from_elements([2, 3]),
            ]
        }
    };
    Ok(SetFamily::new(n, edges)?)
}

fn compatible_sets(n: u32, trace: &SetFamily) -> Result<Vec<SetMask>, Layer2Error> {
    if n > 24 {
        return Err(Layer2Error::OverBudget { space: format!("2^{n} candidate sets"), budget: 1 << 24 });
    }
    Ok((0..1u64 << n)
        .map(SetMask)
        .filter(|m| m.len() >= 3 && trace.iter().all(|t| t.intersects(*m)))
        .collect())
}

/// `|I_B|` for every size `0..=max_s`, `B` the given trace.
pub fn trace_count_series(n: u32, trace: TraceKind, max_s: usize) -> Result<Vec<BigUint>, Layer2Error> {
    let fixed = trace_family(n, trace)?;
    let cands = compatible_sets(n, &fixed)?;
    if cands.len() > MAX_VERTICES {
        return Err(Layer2Error::OverBudget {
            space: format!("{} compatible sets", cands.len()),
            budget: MAX_VERTICES as u64,
        });
    }
    let k = fixed.len();
    let mut series = vec![BigUint::zero(); max_s + 1];
    if max_s >= k {
        let pool = SetFamily::from_distinct(n, cands);
        let poly = DisjointnessGraph::new(&pool).independence_polynomial(max_s - k + 1);
        for (j, c) in poly.into_iter().enumerate() {
            series[j + k] = c;
        }
    }
    Ok(series)
}

/// `|I_r|` or `|I_T|` at family size `s`.
pub fn count_trace_families(n: u32, s: usize, trace: TraceKind) -> Result<BigUint, Layer2Error> {
    if s < trace.size() {
        return Err(Layer2Error::SizeBelowTrace { s, trace: trace.size() });
    }
    Ok(trace_count_series(n, trace, s)?.swap_remove(s))
}

/// `|I_r|` for `r = 0..n` and `|I_T|`, each for sizes `0..=max_s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceTable {
    pub n: u32,
    pub stars: Vec<Vec<BigUint>>,
    pub triangle: Vec<BigUint>,
}

impl TraceTable {
    pub fn build(n: u32, max_s: usize) -> Result<Self, Layer2Error> {
        use rayon::prelude::*;
        let stars = (0..n)
            .into_par_iter()
            .map(|r| trace_count_series(n, TraceKind::Star(r), max_s))
            .collect::<Result<Vec<_>, _>>()?;
        let triangle = trace_count_series(n, TraceKind::Triangle, max_s)?;
        Ok(TraceTable { n, stars, triangle })
    }
}

/// `sum_r a_r |I_r| + b |I_T|` at size `s`.
pub fn decomposition_sum(census: &Census, table: &TraceTable, s: usize) -> BigUint {
    let stars: BigUint = table
        .stars
        .iter()
        .enumerate()
        .map(|(r, series)| census.a(r) * series.get(s).cloned().unwrap_or_default())
        .sum();
    stars + BigUint::from(census.b) * table.triangle.get(s).cloned().unwrap_or_default()
}

/// The factor `2^(n-r-2) - (n-r)/2`, or `2^(n-5) - (n-1)/2` when `r = 3`.
pub fn stars_ratio_factor(n: u32, r: u32) -> BigRational {
    let (exp, sub) = if r == 3 { (n as i64 - 5, n - 1) } else { (n as i64 - r as i64 - 2, n - r) };
    pow2(exp) - BigRational::new(BigInt::from(sub), BigInt::from(2))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarsRatioReport {
    pub n: u32,
    pub r: u32,
    pub s: usize,
    /// `|I_(r-1)|`.
    #[serde(serialize_with = "crate::report::decimal")]
    pub smaller_star: BigUint,
    /// `|I_r|`.
    #[serde(serialize_with = "crate::report::decimal")]
    pub larger_star: BigUint,
    #[serde(serialize_with = "crate::report::rational")]
    pub factor: BigRational,
    pub passes: bool,
}

/// Checks `|I_(r-1)| >= factor * |I_r|` exactly.
pub fn stars_ratio_check(n: u32, r: u32, s: usize) -> Result<StarsRatioReport, Layer2Error> {
    if r < 3 || r + 2 > n {
        return Err(Layer2Error::StarTooLarge { r, n });
    }
    let smaller = trace_count_series(n, TraceKind::Star(r - 1), s)?.swap_remove(s);
    let larger = trace_count_series(n, TraceKind::Star(r), s)?.swap_remove(s);
    let factor = stars_ratio_factor(n, r);
    let lhs = BigRational::from_integer(BigInt::from(smaller.clone()));
    let rhs = &factor * BigRational::from_integer(BigInt::from(larger.clone()));
    Ok(StarsRatioReport { n, r, s, smaller_star: smaller, larger_star: larger, factor, passes: lhs >= rhs })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriangleReport {
    pub n: u32,
    pub s: usize,
    #[serde(serialize_with = "crate::report::decimal")]
    pub triangle: BigUint,
    #[serde(serialize_with = "crate::report::decimal")]
    pub closed_form: BigUint,
    #[serde(serialize_with = "crate::report::decimal")]
    pub star3: BigUint,
    pub passes: bool,
}

/// `|I_T| = C(2^(n-1) - 3, s - 3)` and `|I_T| <= |I_3|`.
pub fn triangle_check(n: u32, s: usize) -> Result<TriangleReport, Layer2Error> {
    if n < 4 {
        return Err(Layer2Error::GroundTooSmall { n, min: 4 });
    }
    let triangle = count_trace_families(n, s, TraceKind::Triangle)?;
    let closed_form = binomial((1u64 << (n - 1)) - 3, s as u64 - 3);
    let star3 = count_trace_families(n, s, TraceKind::Star(3))?;
    let passes = triangle == closed_form && triangle <= star3;
    Ok(TriangleReport { n, s, triangle, closed_form, star3, passes })
}
