//! Intersecting profiles: `c_s` = number of pairwise-intersecting
//! `s`-subfamilies of a family, for every `s`.
//!
//! Intersecting subfamilies are exactly the independent sets of the
//! [`DisjointnessGraph`], so the profile is its independence polynomial.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::family::SetFamily;
use crate::indep::{independence_polynomial, Poly, MAX_VERTICES};

/// Default member limit for [`intersecting_profile`].
pub const DEFAULT_MEMBER_LIMIT: usize = 64;

/// Member limit of the brute-force oracle.
pub const BRUTE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("family has {size} members, above the limit of {limit}")]
    TooLarge { size: usize, limit: usize },
}

/// `counts[s] = c_s` for `s = 0..=N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectingProfile {
    pub n: u32,
    #[serde(rename = "N")]
    pub size: usize,
    #[serde(serialize_with = "crate::report::decimal_vec")]
    pub counts: Vec<BigUint>,
}

impl IntersectingProfile {
    pub fn get(&self, s: usize) -> BigUint {
        self.counts.get(s).cloned().unwrap_or_default()
    }

    /// `sum_s c_s`: the number of intersecting subfamilies of any size.
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    fn from_poly(family: &SetFamily, mut poly: Poly) -> Self {
        poly.resize(family.len() + 1, BigUint::zero());
        IntersectingProfile { n: family.n(), size: family.len(), counts: poly }
    }
}

/// Vertices are family members (in mask order); `u ~ v` iff the members are disjoint.
/// The empty set, if present, is disjoint from itself and carries a loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjointnessGraph {
    rows: Vec<Vec<u64>>,
}

impl DisjointnessGraph {
    pub fn new(family: &SetFamily) -> Self {
        let members = family.members();
        let words = members.len().div_ceil(64).max(1);
        let mut rows = vec![vec![0u64; words]; members.len()];
        for (u, a) in members.iter().enumerate() {
            for (v, b) in members.iter().enumerate().skip(u) {
                if !a.intersects(*b) {
                    rows[u][v / 64] |= 1 << (v % 64);
                    rows[v][u / 64] |= 1 << (u % 64);
                }
            }
        }
        DisjointnessGraph { rows }
    }

    pub fn vertex_count(&self) -> usize {
        self.rows.len()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.rows[u][v / 64] >> (v % 64) & 1 == 1
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.adjacent(v, v)
    }

    pub fn degree(&self, v: usize) -> usize {
        (0..self.vertex_count()).filter(|&u| u != v && self.adjacent(u, v)).count()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let count = self.vertex_count();
        let mut seen = vec![false; count];
        let mut out = Vec::new();
        for start in 0..count {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut k = 0;
            while k < comp.len() {
                let u = comp[k];
                for v in 0..count {
                    if !seen[v] && self.adjacent(u, v) {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// The subgraph induced by `vertices` (relabelled `0..len` in the given order).
    pub fn induced(&self, vertices: &[usize]) -> DisjointnessGraph {
        let words = vertices.len().div_ceil(64).max(1);
        let mut rows = vec![vec![0u64; words]; vertices.len()];
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate() {
                if self.adjacent(u, v) {
                    rows[i][j / 64] |= 1 << (j % 64);
                }
            }
        }
        DisjointnessGraph { rows }
    }

    /// Independence polynomial truncated to `len` coefficients; looped
    /// vertices are never chosen.
    pub fn independence_polynomial(&self, len: usize) -> Poly {
        let looped: Vec<usize> = (0..self.vertex_count()).filter(|&v| self.has_loop(v)).collect();
        independence_polynomial(&self.rows, &looped, len)
    }
}

/// Whether every two members (and every member with itself) intersect.
pub fn is_intersecting(family: &SetFamily) -> bool {
    let m = family.members();
    m.iter().enumerate().all(|(i, a)| m[i..].iter().all(|b| a.intersects(*b)))
}

/// Full profile with the default member limit.
pub fn intersecting_profile(family: &SetFamily) -> Result<IntersectingProfile, ProfileError> {
    intersecting_profile_with_limit(family, DEFAULT_MEMBER_LIMIT)
}

pub fn intersecting_profile_with_limit(
    family: &SetFamily,
    limit: usize,
) -> Result<IntersectingProfile, ProfileError> {
    check_limit(family, limit)?;
    let poly = DisjointnessGraph::new(family).independence_polynomial(family.len() + 1);
    Ok(IntersectingProfile::from_poly(family, poly))
}

/// Profile truncated to `c_0..=c_max_s` (shorter work for large families).
pub fn intersecting_profile_upto(
    family: &SetFamily,
    max_s: usize,
    limit: usize,
) -> Result<Vec<BigUint>, ProfileError> {
    check_limit(family, limit)?;
    let mut poly = DisjointnessGraph::new(family).independence_polynomial(max_s + 1);
    poly.resize(max_s + 1, BigUint::zero());
    Ok(poly)
}

/// `c_s` alone.
pub fn intersecting_count(family: &SetFamily, s: usize) -> Result<BigUint, ProfileError> {
    Ok(intersecting_profile_upto(family, s, MAX_VERTICES)?.swap_remove(s))
}

fn check_limit(family: &SetFamily, limit: usize) -> Result<(), ProfileError> {
    let limit = limit.min(MAX_VERTICES);
    if family.len() > limit {
        return Err(ProfileError::TooLarge { size: family.len(), limit });
    }
    Ok(())
}

/// Oracle: enumerates all `2^N` subfamilies. Requires `N <= 20`.
pub fn brute_profile(family: &SetFamily) -> Result<IntersectingProfile, ProfileError> {
    let members = family.members();
    let size = members.len();
    if size > BRUTE_LIMIT {
        return Err(ProfileError::TooLarge { size, limit: BRUTE_LIMIT });
    }
    // meets[i] has bit j set iff members i and j intersect
    let meets: Vec<u32> = members
        .iter()
        .map(|a| {
            members
                .iter()
                .enumerate()
                .filter(|(_, b)| a.intersects(**b))
                .fold(0u32, |acc, (j, _)| acc | 1 << j)
        })
        .collect();
    let mut ok = vec![false; 1usize << size];
    let mut counts = vec![0u64; size + 1];
    ok[0] = true;
    counts[0] = 1;
    for sub in 1usize..1 << size {
        let low = sub.trailing_zeros() as usize;
        let rest = sub & (sub - 1);
        let fine = ok[rest] && (sub as u32) & !meets[low] == 0;
        ok[sub] = fine;
        if fine {
            counts[sub.count_ones() as usize] += 1;
        }
    }
    Ok(IntersectingProfile {
        n: family.n(),
        size,
        counts: counts.into_iter().map(BigUint::from).collect(),
    })
}
