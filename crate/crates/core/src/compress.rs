//! Up-set, `ij` and `(U,v,f)` compressions, a fixpoint driver, and a
//! profile-monotonicity checker.
//!
//! All three compressions use simultaneous-move semantics: every
//! move-or-stay decision is made against the original family. The move maps
//! are injective, so the result is duplicate-free and has the same size.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use serde::Serialize;
use thiserror::Error;

use crate::family::{SetFamily, SetMask};
use crate::profile::{intersecting_profile_upto, ProfileError, DEFAULT_MEMBER_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompressionError {
    #[error("invalid descriptor: {0}")]
    Invalid(String),
    #[error("up-set source {0} is not in the family")]
    SourceMissing(SetMask),
    #[error("up-set target {0} is already in the family")]
    TargetPresent(SetMask),
    #[error("cannot build a (U,v,f)-compression: {0}")]
    NoUvf(String),
    #[error("cannot parse descriptor `{0}`")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CompressionDescriptor {
    /// Replace `source` by the strict superset `target`.
    UpSet { source: SetMask, target: SetMask },
    /// Replace `j` by `i` in every member containing `j` but not `i`.
    Ij { i: u32, j: u32 },
    /// Move members avoiding `v` to `(A \ U) + v + f(A & U)`; `f` is the
    /// fixed-point-free involution on `u` given by `swaps`.
    Uvf { u: SetMask, v: u32, swaps: Vec<(u32, u32)> },
}

impl CompressionDescriptor {
    pub fn validate(&self, n: u32) -> Result<(), CompressionError> {
        let bad = |msg: String| Err(CompressionError::Invalid(msg));
        let in_ground = |e: u32| (1..=n).contains(&e);
        match self {
            CompressionDescriptor::UpSet { source, target } => {
                if target.max_element() > n {
                    return bad(format!("target {target} is not a subset of [{n}]"));
                }
                if !(source.is_subset(*target) && source != target) {
                    return bad(format!("{source} is not a proper subset of {target}"));
                }
            }
            CompressionDescriptor::Ij { i, j } => {
                if !in_ground(*i) || !in_ground(*j) {
                    return bad(format!("elements {i},{j} must lie in [{n}]"));
                }
                if i == j {
                    return bad("i and j must differ".into());
                }
            }
            CompressionDescriptor::Uvf { u, v, swaps } => {
                if !in_ground(*v) || u.max_element() > n {
                    return bad(format!("U and v must lie in [{n}]"));
                }
                if u.contains(*v) {
                    return bad(format!("v = {v} lies in U"));
                }
                if u.len() % 2 != 0 {
                    return bad(format!("|U| = {} is odd", u.len()));
                }
                let mut covered = SetMask::EMPTY;
                for &(a, b) in swaps {
                    if a == b || !u.contains(a) || !u.contains(b) {
                        return bad(format!("swap {a}-{b} is not a pair of distinct points of U"));
                    }
                    if covered.contains(a) || covered.contains(b) {
                        return bad(format!("swap {a}-{b} overlaps another swap"));
                    }
                    covered = covered.with(a).with(b);
                }
                if covered != *u {
                    return bad("swaps do not cover U".into());
                }
            }
        }
        Ok(())
    }

    /// Where `set` would move, ignoring whether the target is already present.
    /// `None` means the set is not eligible to move.
    pub fn image(&self, set: SetMask) -> Option<SetMask> {
        match self {
            CompressionDescriptor::UpSet { source, target } => (set == *source).then_some(*target),
            CompressionDescriptor::Ij { i, j } => {
                (set.contains(*j) && !set.contains(*i)).then(|| set.without(*j).with(*i))
            }
            CompressionDescriptor::Uvf { u, v, swaps } => {
                if set.contains(*v) {
                    return None;
                }
                let inside = set.intersection(*u);
                let swapped = swaps.iter().fold(SetMask::EMPTY, |acc, &(a, b)| {
                    let acc = if inside.contains(a) { acc.with(b) } else { acc };
                    if inside.contains(b) {
                        acc.with(a)
                    } else {
                        acc
                    }
                });
                Some(set.minus(*u).with(*v).union(swapped))
            }
        }
    }

    /// The involution `f` applied to a single point of `U`.
    pub fn swap_partner(&self, e: u32) -> Option<u32> {
        match self {
            CompressionDescriptor::Uvf { swaps, .. } => swaps.iter().find_map(|&(a, b)| {
                if a == e {
                    Some(b)
                } else if b == e {
                    Some(a)
                } else {
                    None
                }
            }),
            _ => None,
        }
    }
}

impl fmt::Display for CompressionDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = |m: &SetMask, sep: &str| {
            m.elements().map(|e| e.to_string()).collect::<Vec<_>>().join(sep)
        };
        match self {
            CompressionDescriptor::UpSet { source, target } => {
                write!(f, "up:src={};tgt={}", labels(source, " "), labels(target, " "))
            }
            CompressionDescriptor::Ij { i, j } => write!(f, "ij:{i},{j}"),
            CompressionDescriptor::Uvf { u, v, swaps } => {
                let pairs: Vec<String> = swaps.iter().map(|(a, b)| format!("{a}-{b}")).collect();
                write!(f, "uvf:U={};v={v};f={}", labels(u, ","), pairs.join(","))
            }
        }
    }
}

impl FromStr for CompressionDescriptor {
    type Err = CompressionError;

    /// `ij:i,j`, `up:src=1 2;tgt=1 2 3` or `uvf:U=1,5;v=6;f=1-5`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let fail = || CompressionError::Parse(text.to_string());
        let (kind, body) = text.trim().split_once(':').ok_or_else(fail)?;
        let label = |t: &str| -> Result<u32, CompressionError> {
            let t = t.trim();
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(fail());
            }
            t.parse::<u32>().ok().filter(|e| (1..=64).contains(e)).ok_or_else(fail)
        };
        let set = |t: &str, sep: char| -> Result<SetMask, CompressionError> {
            let mut m = SetMask::EMPTY;
            for tok in t.split(sep).map(str::trim).filter(|s| !s.is_empty()) {
                let e = label(tok)?;
                if m.contains(e) {
                    return Err(fail());
                }
                m = m.with(e);
            }
            Ok(m)
        };
        let fields = |body: &str| -> Vec<(String, String)> {
            body.split(';')
                .filter_map(|kv| kv.split_once('='))
                .map(|(k, v)| (k.trim().to_string(), v.to_string()))
                .collect()
        };
        let field = |fs: &[(String, String)], key: &str| -> Result<String, CompressionError> {
            let mut hits = fs.iter().filter(|(k, _)| k == key);
            let (_, v) = hits.next().ok_or_else(fail)?;
            if hits.next().is_some() {
                return Err(fail());
            }
            Ok(v.clone())
        };
        match kind.trim() {
            "ij" => {
                let (i, j) = body.split_once(',').ok_or_else(fail)?;
                Ok(CompressionDescriptor::Ij { i: label(i)?, j: label(j)? })
            }
            "up" => {
                let fs = fields(body);
                if fs.len() != 2 || body.split(';').count() != 2 {
                    return Err(fail());
                }
                Ok(CompressionDescriptor::UpSet {
                    source: set(&field(&fs, "src")?, ' ')?,
                    target: set(&field(&fs, "tgt")?, ' ')?,
                })
            }
            "uvf" => {
                let fs = fields(body);
                if fs.len() != 3 || body.split(';').count() != 3 {
                    return Err(fail());
                }
                let u = set(&field(&fs, "U")?, ',')?;
                let v = label(&field(&fs, "v")?)?;
                let mut swaps = Vec::new();
                for pair in field(&fs, "f")?.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let (a, b) = pair.split_once('-').ok_or_else(fail)?;
                    swaps.push((label(a)?, label(b)?));
                }
                Ok(CompressionDescriptor::Uvf { u, v, swaps })
            }
            _ => Err(fail()),
        }
    }
}

pub fn apply_compression(
    family: &SetFamily,
    c: &CompressionDescriptor,
) -> Result<SetFamily, CompressionError> {
    c.validate(family.n())?;
    if let CompressionDescriptor::UpSet { source, target } = c {
        if !family.contains(*source) {
            return Err(CompressionError::SourceMissing(*source));
        }
        if family.contains(*target) {
            return Err(CompressionError::TargetPresent(*target));
        }
    }
    Ok(apply_unchecked(family, c))
}

/// Applies a descriptor already validated against `family.n()`.
fn apply_unchecked(family: &SetFamily, c: &CompressionDescriptor) -> SetFamily {
    let members = family
        .iter()
        .map(|a| match c.image(a) {
            Some(t) if !family.contains(t) => t,
            _ => a,
        })
        .collect();
    SetFamily::from_distinct(family.n(), members)
}

/// `(U,v,f)`-compression moving `source` onto `target`, with
/// `U = source + (target - v)` and `f` pairing the k-th smallest element of
/// `source` with the k-th smallest of `target - v`.
pub fn build_uvf_for(
    source: SetMask,
    target: SetMask,
    v: u32,
) -> Result<CompressionDescriptor, CompressionError> {
    let fail = |msg: &str| Err(CompressionError::NoUvf(msg.to_string()));
    if !target.contains(v) {
        return fail("v is not in the target");
    }
    if source.contains(v) {
        return fail("v is in the source");
    }
    let rest = target.without(v);
    if rest.len() != source.len() {
        return fail("|target - v| differs from |source|");
    }
    if source.intersects(rest) {
        return fail("source meets target - v");
    }
    let swaps = source.elements().zip(rest.elements()).collect();
    Ok(CompressionDescriptor::Uvf { u: source.union(rest), v, swaps })
}

/// Every left-compression `ij` with `i < j` on `[n]`, ordered by `(i, j)`.
pub fn left_compressions(n: u32) -> Vec<CompressionDescriptor> {
    (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| CompressionDescriptor::Ij { i, j }))
        .collect()
}

/// Every `(U,v,f)`-compression on `[n]` with `2 <= |U| <= max_u`, ordered by
/// `v`, then `U` by mask, then the matching in lexicographic order.
pub fn uvf_compressions(n: u32, max_u: u32) -> Vec<CompressionDescriptor> {
    let mut out = Vec::new();
    for v in 1..=n {
        let others = SetMask::full(n).without(v);
        let mut sub = 0u64;
        loop {
            sub = sub.wrapping_sub(others.0) & others.0;
            if sub == 0 {
                break;
            }
            let u = SetMask(sub);
            if u.len().is_multiple_of(2) && u.len() <= max_u {
                let points: Vec<u32> = u.elements().collect();
                for swaps in perfect_matchings(&points) {
                    out.push(CompressionDescriptor::Uvf { u, v, swaps });
                }
            }
        }
    }
    out
}

fn perfect_matchings(points: &[u32]) -> Vec<Vec<(u32, u32)>> {
    if points.is_empty() {
        return vec![Vec::new()];
    }
    let first = points[0];
    let mut out = Vec::new();
    for k in 1..points.len() {
        let rest: Vec<u32> = points[1..]
            .iter()
            .enumerate()
            .filter(|&(idx, _)| idx + 1 != k)
            .map(|(_, &p)| p)
            .collect();
        for mut m in perfect_matchings(&rest) {
            m.insert(0, (first, points[k]));
            out.push(m);
        }
    }
    out
}

/// Candidate classes tried by [`compress_to_fixpoint`], in this order.
pub struct FixpointPolicy<'a> {
    pub upset: bool,
    pub left: bool,
    /// Produces the `(U,v,f)` candidates for the current family, in the order to try them.
    pub uvf: Option<&'a dyn Fn(&SetFamily) -> Vec<CompressionDescriptor>>,
}

impl FixpointPolicy<'_> {
    pub fn left_only() -> Self {
        FixpointPolicy { upset: false, left: true, uvf: None }
    }
}

#[derive(Debug, Clone)]
pub struct FixpointRun {
    pub family: SetFamily,
    pub steps: Vec<CompressionDescriptor>,
}

/// `(sum of (n - |A|), sum of element labels)`. Every up-set and `(U,v,f)`
/// move lowers the first component; every left-compression move keeps the
/// first and lowers the second.
pub fn fixpoint_measure(family: &SetFamily) -> (u64, u64) {
    let n = u64::from(family.n());
    let deficit = family.iter().map(|m| n - u64::from(m.len())).sum();
    let labels = family.iter().map(SetMask::label_sum).sum();
    (deficit, labels)
}

/// Repeatedly applies the first candidate (in policy order) that changes
/// the family and whose result satisfies `allowed`, until none does.
pub fn compress_to_fixpoint(
    family: &SetFamily,
    allowed: &dyn Fn(&SetFamily) -> bool,
    policy: &FixpointPolicy<'_>,
) -> FixpointRun {
    let mut current = family.clone();
    let mut steps = Vec::new();
    while let Some((next, c)) = first_move(&current, allowed, policy) {
        debug_assert!(fixpoint_measure(&next) < fixpoint_measure(&current));
        current = next;
        steps.push(c);
    }
    FixpointRun { family: current, steps }
}

fn first_move(
    family: &SetFamily,
    allowed: &dyn Fn(&SetFamily) -> bool,
    policy: &FixpointPolicy<'_>,
) -> Option<(SetFamily, CompressionDescriptor)> {
    let n = family.n();
    if policy.upset {
        let full = SetMask::full(n);
        for source in family.iter() {
            let free = full.minus(source);
            let mut sub = 0u64;
            loop {
                sub = sub.wrapping_sub(free.0) & free.0;
                if sub == 0 {
                    break;
                }
                let target = source.union(SetMask(sub));
                if family.contains(target) {
                    continue;
                }
                let c = CompressionDescriptor::UpSet { source, target };
                let next = apply_unchecked(family, &c);
                if allowed(&next) {
                    return Some((next, c));
                }
            }
        }
    }
    let mut others: Vec<CompressionDescriptor> = Vec::new();
    if policy.left {
        others.extend(left_compressions(n));
    }
    if let Some(generator) = policy.uvf {
        others.extend(generator(family));
    }
    for c in others {
        if c.validate(n).is_err() {
            continue;
        }
        let next = apply_unchecked(family, &c);
        if next != *family && allowed(&next) {
            return Some((next, c));
        }
    }
    None
}

#[derive(Debug, Clone, Serialize)]
pub struct ProfileDelta {
    pub s: usize,
    #[serde(serialize_with = "crate::report::decimal")]
    pub before: BigUint,
    #[serde(serialize_with = "crate::report::decimal")]
    pub after: BigUint,
    #[serde(serialize_with = "bigint_string")]
    pub delta: BigInt,
}

fn bigint_string<S: serde::Serializer>(v: &BigInt, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(&v.to_string())
}

#[derive(Debug, Clone, Serialize)]
pub struct MonotoneReport {
    pub descriptor: String,
    pub deltas: Vec<ProfileDelta>,
    /// Some `c_s` decreased: this would contradict monotonicity of compressions.
    pub falsified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonotoneError {
    #[error(transparent)]
    Compression(#[from] CompressionError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// `c_s(C(F)) - c_s(F)` for every `s` in `s_range`.
pub fn monotone_check(
    family: &SetFamily,
    c: &CompressionDescriptor,
    s_range: RangeInclusive<usize>,
) -> Result<MonotoneReport, MonotoneError> {
    let after_family = apply_compression(family, c)?;
    let top = *s_range.end();
    let before = intersecting_profile_upto(family, top, DEFAULT_MEMBER_LIMIT)?;
    let after = intersecting_profile_upto(&after_family, top, DEFAULT_MEMBER_LIMIT)?;
    let deltas: Vec<ProfileDelta> = s_range
        .map(|s| ProfileDelta {
            s,
            delta: BigInt::from(after[s].clone()) - BigInt::from(before[s].clone()),
            before: before[s].clone(),
            after: after[s].clone(),
        })
        .collect();
    let falsified = deltas.iter().any(|d| d.delta < BigInt::from(0));
    Ok(MonotoneReport { descriptor: c.to_string(), deltas, falsified })
}
