//! The map `Phi: [r+2,n]^(>=2) x I_r -> I_(r-1)` (into `I_(r-1) + I_T` when
//! `r = 3`) under which every image has at most two preimages.
//!
//! Complements of subsets of `[r+2,n]` are taken relative to `[r+2,n]`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::trace::{trace_family, TraceKind};
use super::Layer2Error;
use crate::family::{SetFamily, SetMask};
use crate::profile::is_intersecting;

/// Cap on the number of families `trace_class_members` will list.
pub const CLASS_BUDGET: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PhiError {
    #[error("the map needs 3 <= r <= n - 3, got r = {r}, n = {n}")]
    Range { r: u32, n: u32 },
    #[error("U = {0} must be a subset of [r+2,n] with at least two elements")]
    BadU(SetMask),
    #[error("family is not an intersecting family in P([n]^(>=2)) with trace S_{0}")]
    NotInClass(u32),
    #[error(transparent)]
    Layer2(#[from] Layer2Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PhiCase {
    One,
    Two,
}

/// Whether `family` is intersecting, avoids sets of size below 2, and has
/// trace exactly `trace` on `[n]^(2)`.
pub fn in_trace_class(family: &SetFamily, trace: TraceKind) -> bool {
    let Ok(t) = trace_family(family.n(), trace) else {
        return false;
    };
    family.iter().all(|m| m.len() >= 2) && family.layer_part(2) == t && is_intersecting(family)
}

/// Every family of size `s` in the class with the given trace.
pub fn trace_class_members(n: u32, trace: TraceKind, s: usize) -> Result<Vec<SetFamily>, Layer2Error> {
    let fixed = trace_family(n, trace)?;
    if s < fixed.len() {
        return Ok(Vec::new());
    }
    if n > 24 {
        return Err(Layer2Error::GroundTooSmall { n: 24, min: n });
    }
    let cands: Vec<SetMask> = (0..1u64 << n)
        .map(SetMask)
        .filter(|m| m.len() >= 3 && fixed.iter().all(|t| t.intersects(*m)))
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(s);
    let need = s - fixed.len();
    let overflow = extend(&cands, 0, need, &mut chosen, &mut |picked: &[SetMask]| {
        let mut members = fixed.members().to_vec();
        members.extend_from_slice(picked);
        out.push(SetFamily::from_distinct(n, members));
        out.len() <= CLASS_BUDGET
    });
    if overflow {
        return Err(Layer2Error::OverBudget {
            space: format!("more than {CLASS_BUDGET} families"),
            budget: CLASS_BUDGET as u64,
        });
    }
    Ok(out)
}

// depth-first over pairwise intersecting choices; returns true if `emit` asked to stop
fn extend(
    cands: &[SetMask],
    from: usize,
    need: usize,
    chosen: &mut Vec<SetMask>,
    emit: &mut dyn FnMut(&[SetMask]) -> bool,
) -> bool {
    if need == 0 {
        return !emit(chosen);
    }
    for k in from..cands.len() {
        if cands.len() - k < need {
            break;
        }
        let c = cands[k];
        if chosen.iter().all(|x| x.intersects(c)) {
            chosen.push(c);
            let stop = extend(cands, k + 1, need - 1, chosen, emit);
            chosen.pop();
            if stop {
                return true;
            }
        }
    }
    false
}

/// `Phi(U, E)`.
pub fn phi_map(u: SetMask, e: &SetFamily, r: u32) -> Result<SetFamily, PhiError> {
    phi_map_with_case(u, e, r).map(|(f, _)| f)
}

/// `Phi(U, E)` together with the case that produced it.
pub fn phi_map_with_case(u: SetMask, e: &SetFamily, r: u32) -> Result<(SetFamily, PhiCase), PhiError> {
    let n = e.n();
    if r < 3 || r + 3 > n {
        return Err(PhiError::Range { r, n });
    }
    let tail = SetMask::interval(r + 2, n);
    if !u.is_subset(tail) || u.len() < 2 {
        return Err(PhiError::BadU(u));
    }
    if !in_trace_class(e, TraceKind::Star(r)) {
        return Err(PhiError::NotInClass(r));
    }

    let edge = SetMask::from_elements([1, r + 1]);
    let mid = SetMask::interval(2, r);
    let low = SetMask::interval(2, r + 1);
    let one = SetMask::singleton(1);
    let u_prime = edge.union(u);
    let u_c = tail.minus(u);
    let comp = |x: SetMask| tail.minus(x);

    let mut bar = e.clone();
    if !bar.contains(u_prime) {
        bar.remove(edge);
        bar.insert(u_prime);
    }

    let mut e0 = Vec::new();
    let mut e1 = Vec::new();
    let mut e2 = Vec::new();
    let mut e3 = Vec::new();
    for x in bar.iter() {
        if !x.contains(1) {
            e2.push(x.intersection(tail));
        } else if x.intersects(mid) {
            e0.push(x);
        } else if x.contains(r + 1) {
            e3.push(x.intersection(tail));
        } else {
            e1.push(x.intersection(tail));
        }
    }

    let mut f = e0;
    let case = if e1.iter().all(|x| x.intersects(u_c)) {
        f.extend(e1.iter().map(|&x| one.union(x)));
        f.extend(e2.iter().map(|&x| low.union(x)));
        for &x in &e3 {
            if x.intersects(u_c) {
                f.push(edge.union(x));
            } else {
                f.push(mid.union(comp(x)));
            }
        }
        PhiCase::One
    } else {
        f.extend(e1.iter().map(|&x| edge.union(x)));
        f.extend(e2.iter().map(|&x| mid.union(x)));
        for &x in &e3 {
            if u.is_subset(x) {
                f.push(one.union(x));
            } else {
                f.push(low.union(comp(x)));
            }
        }
        PhiCase::Two
    };
    let family = SetFamily::new(n, f).expect("Phi produces distinct sets");
    Ok((family, case))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiReport {
    pub n: u32,
    pub r: u32,
    pub s: usize,
    /// Number of `(U, E)` pairs.
    pub domain: usize,
    pub images: usize,
    pub max_preimages: usize,
    pub case_one: usize,
    pub case_two: usize,
    pub size_preserving: bool,
    pub lands_in_target: bool,
    pub passes: bool,
}

/// Applies `Phi` to every `(U, E)` with `E` in `I_r` of size `s`.
pub fn enumerate_phi(n: u32, r: u32, s: usize) -> Result<PhiReport, PhiError> {
    if r < 3 || r + 3 > n {
        return Err(PhiError::Range { r, n });
    }
    let tail = SetMask::interval(r + 2, n);
    let us: Vec<SetMask> = (0..1u64 << n)
        .map(SetMask)
        .filter(|m| m.is_subset(tail) && m.len() >= 2)
        .collect();
    let class = trace_class_members(n, TraceKind::Star(r), s)?;

    let results: Vec<(SetFamily, PhiCase, bool)> = class
        .par_iter()
        .flat_map_iter(|e| us.iter().map(move |&u| (u, e)))
        .map(|(u, e)| {
            let (f, case) = phi_map_with_case(u, e, r)?;
            let ok = f.len() == e.len()
                && (in_trace_class(&f, TraceKind::Star(r - 1))
                    || (r == 3 && in_trace_class(&f, TraceKind::Triangle)));
            Ok((f, case, ok))
        })
        .collect::<Result<_, PhiError>>()?;

    let mut counts: HashMap<&SetFamily, usize> = HashMap::new();
    for (f, _, _) in &results {
        *counts.entry(f).or_default() += 1;
    }
    let max_preimages = counts.values().copied().max().unwrap_or(0);
    let case_one = results.iter().filter(|(_, c, _)| *c == PhiCase::One).count();
    let size_preserving = results.iter().all(|(f, _, _)| f.len() == s);
    let lands_in_target = results.iter().all(|(_, _, ok)| *ok);
    Ok(PhiReport {
        n,
        r,
        s,
        domain: results.len(),
        images: counts.len(),
        max_preimages,
        case_one,
        case_two: results.len() - case_one,
        size_preserving,
        lands_in_target,
        passes: size_preserving && lands_in_target && max_preimages <= 2,
    })
}
