//! Families inside the second layer `[n]^(2)`, viewed as graphs on `[n]`.
//!
//! Two edges of such a graph intersect iff they share a vertex, so the
//! intersecting pairs are counted by `sum_v C(deg v, 2)` and the intersecting
//! subfamilies are stars and triangles. The submodules count the
//! trace-constrained families used in the decomposition of the intersecting
//! families of `[n]^(>=3) + B`, implement the map that compares consecutive
//! star classes, and evaluate the closing numeric bound.

mod bound;
mod phi;
mod trace;

pub use bound::{bound_sweep, layer2_bound_value};
pub use phi::{enumerate_phi, phi_map, trace_class_members, PhiCase, PhiError, PhiReport};
pub use trace::{
    count_trace_families, decomposition_sum, stars_ratio_check, stars_ratio_factor, trace_count_series,
    trace_family, triangle_check, StarsRatioReport, TraceKind, TraceTable, TriangleReport,
};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::binom::{binomial, binomial_u128};
use crate::canon::{canonical_form, CanonError};
use crate::combin;
use crate::family::{FamilyError, SetFamily, SetMask};
use crate::profile::ProfileError;

/// Default cap on the number of edge sets `max_p2` scans.
pub const P2_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Layer2Error {
    #[error("{i} edges requested but [{n}]^(2) has only {max}")]
    EdgeCount { n: u32, i: usize, max: usize },
    #[error("member {0} is not a 2-set")]
    NotAnEdge(SetMask),
    #[error("need n >= {min}, got {n}")]
    GroundTooSmall { n: u32, min: u32 },
    #[error("star S_{r} does not fit in [{n}]^(2)")]
    StarTooLarge { r: u32, n: u32 },
    #[error("size {s} is smaller than the trace size {trace}")]
    SizeBelowTrace { s: usize, trace: usize },
    #[error("instance of {space} exceeds the budget of {budget}")]
    OverBudget { space: String, budget: u64 },
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Canon(#[from] CanonError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// A simple graph on `[n]` whose edges are 2-element sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Layer2Graph {
    n: u32,
    edges: Vec<SetMask>,
    degrees: Vec<u32>,
}

impl Layer2Graph {
    pub fn new(n: u32, edges: impl IntoIterator<Item = SetMask>) -> Result<Self, Layer2Error> {
        Self::from_family(&SetFamily::new(n, edges)?)
    }

    pub fn from_family(family: &SetFamily) -> Result<Self, Layer2Error> {
        if let Some(bad) = family.iter().find(|m| m.len() != 2) {
            return Err(Layer2Error::NotAnEdge(bad));
        }
        let n = family.n();
        let mut degrees = vec![0; n as usize];
        for e in family.iter() {
            for v in e.elements() {
                degrees[v as usize - 1] += 1;
            }
        }
        Ok(Layer2Graph { n, edges: family.members().to_vec(), degrees })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn edges(&self) -> &[SetMask] {
        &self.edges
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn to_family(&self) -> SetFamily {
        SetFamily::from_distinct(self.n, self.edges.clone())
    }

    pub fn complement(&self) -> Layer2Graph {
        let family = SetFamily::layer(self.n, 2).difference(&self.to_family());
        Layer2Graph::from_family(&family).expect("2-sets")
    }

    /// Unordered pairs of edges sharing a vertex.
    pub fn p2_count(&self) -> u64 {
        self.degrees.iter().map(|&d| u64::from(d) * u64::from(d.saturating_sub(1)) / 2).sum()
    }

    pub fn triangle_count(&self) -> u64 {
        let mut nbrs = vec![0u64; self.n as usize + 1];
        for e in &self.edges {
            let (u, v) = endpoints(*e);
            nbrs[u as usize] |= 1 << (v - 1);
            nbrs[v as usize] |= 1 << (u - 1);
        }
        // each triangle counted once, from its lowest edge {u,v}, u < v < w
        self.edges
            .iter()
            .map(|e| {
                let (u, v) = endpoints(*e);
                let above = !crate::family::ground_mask(v);
                u64::from((nbrs[u as usize] & nbrs[v as usize] & above).count_ones())
            })
            .sum()
    }

    pub fn census(&self) -> Census {
        let n = self.n as usize;
        let mut a = vec![BigUint::zero(); n.max(2)];
        a[0] = BigUint::one();
        a[1] = BigUint::from(self.edges.len());
        for (r, slot) in a.iter_mut().enumerate().skip(2) {
            *slot = self.degrees.iter().map(|&d| binomial(u64::from(d), r as u64)).sum();
        }
        a.truncate(n.max(1));
        Census { a, b: self.triangle_count() }
    }
}

fn endpoints(edge: SetMask) -> (u32, u32) {
    let mut it = edge.elements();
    let u = it.next().expect("2-set");
    let v = it.next().expect("2-set");
    (u, v)
}

/// `a_r` counts the sub-stars with `r` edges, `b` the triangles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Census {
    #[serde(serialize_with = "crate::report::decimal_vec")]
    pub a: Vec<BigUint>,
    pub b: u64,
}

impl Census {
    pub fn a(&self, r: usize) -> BigUint {
        self.a.get(r).cloned().unwrap_or_default()
    }
}

pub fn star_triangle_census(graph: &Layer2Graph) -> Census {
    graph.census()
}

pub fn p2_count(graph: &Layer2Graph) -> u64 {
    graph.p2_count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuasiKind {
    Complete,
    Star,
}

impl fmt::Display for QuasiKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuasiKind::Complete => "complete",
            QuasiKind::Star => "star",
        })
    }
}

impl FromStr for QuasiKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "complete" => Ok(QuasiKind::Complete),
            "star" => Ok(QuasiKind::Star),
            _ => Err(format!("unknown graph kind `{s}`")),
        }
    }
}

fn edge_total(n: u32) -> usize {
    (n as usize) * (n as usize).saturating_sub(1) / 2
}

/// The quasi-complete graph or quasi-star with `i` edges on `[n]`.
///
/// Quasi-complete: write `i = C(a,2) + b` with `0 <= b < a`; take `K_a` on
/// `{1..a}` and join `a+1` to `{1..b}`. Quasi-star: the complement of the
/// quasi-complete graph with `C(n,2) - i` edges.
pub fn quasi_graph(n: u32, i: usize, kind: QuasiKind) -> Result<Layer2Graph, Layer2Error> {
    let max = edge_total(n);
    if i > max {
        return Err(Layer2Error::EdgeCount { n, i, max });
    }
    match kind {
        QuasiKind::Complete => {
            let mut a = 1u32;
            while edge_total(a + 1) <= i {
                a += 1;
            }
            let b = (i - edge_total(a)) as u32;
            let mut edges = Vec::with_capacity(i);
            for v in 2..=a {
                for u in 1..v {
                    edges.push(SetMask::from_elements([u, v]));
                }
            }
            for u in 1..=b {
                edges.push(SetMask::from_elements([u, a + 1]));
            }
            Layer2Graph::new(n, edges)
        }
        QuasiKind::Star => Ok(quasi_graph(n, max - i, QuasiKind::Complete)?.complement()),
    }
}

/// Maximum of `p2_count` over all `i`-edge graphs on `[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct P2Max {
    pub n: u32,
    pub i: usize,
    pub value: u64,
    /// Canonical forms of all optimal graphs.
    pub optima: Vec<SetFamily>,
    pub scanned: u64,
}

pub fn max_p2(n: u32, i: usize) -> Result<P2Max, Layer2Error> {
    max_p2_with_budget(n, i, P2_BUDGET)
}

pub fn max_p2_with_budget(n: u32, i: usize, budget: u64) -> Result<P2Max, Layer2Error> {
    let pool = SetFamily::layer(n, 2);
    let m = pool.len();
    if i > m {
        return Err(Layer2Error::EdgeCount { n, i, max: m });
    }
    let space = binomial_u128(m as u64, i as u64).filter(|&c| c <= u128::from(budget));
    let Some(total) = space else {
        return Err(Layer2Error::OverBudget {
            space: binomial(m as u64, i as u64).to_string(),
            budget,
        });
    };
    let total = total as u64;
    let pool = pool.members();
    let parts = rayon::current_num_threads() as u64 * 8;

    let (value, optima) = combin::split_ranges(total, parts)
        .into_par_iter()
        .map(|(a, b)| {
            let mut best = 0u64;
            let mut optima: Vec<Vec<usize>> = Vec::new();
            let mut deg = vec![0u64; n as usize + 1];
            combin::for_each_in_range(m, i, a, b, |comb| {
                deg.iter_mut().for_each(|d| *d = 0);
                for &k in comb {
                    for v in pool[k].elements() {
                        deg[v as usize] += 1;
                    }
                }
                let p2: u64 = deg.iter().map(|&d| d * d.saturating_sub(1) / 2).sum();
                if p2 > best || optima.is_empty() {
                    best = p2;
                    optima.clear();
                }
                if p2 == best {
                    optima.push(comb.to_vec());
                }
            });
            (best, optima)
        })
        .reduce(
            || (0, Vec::new()),
            |(va, mut oa), (vb, ob)| {
                if oa.is_empty() || vb > va {
                    (vb, ob)
                } else if ob.is_empty() || va > vb {
                    (va, oa)
                } else {
                    oa.extend(ob);
                    (va, oa)
                }
            },
        );

    let canon: BTreeSet<SetFamily> = optima
        .par_iter()
        .map(|comb| canonical_form(&SetFamily::from_distinct(n, comb.iter().map(|&k| pool[k]).collect())))
        .collect::<Result<_, _>>()?;
    Ok(P2Max { n, i, value, optima: canon.into_iter().collect(), scanned: total })
}

/// Which quasi construction has more intersecting pairs at a given `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Winner {
    Star,
    Complete,
    Tie,
}

impl fmt::Display for Winner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Winner::Star => "star",
            Winner::Complete => "complete",
            Winner::Tie => "tie",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossoverRow {
    pub i: usize,
    pub p2_quasi_star: u64,
    pub p2_quasi_complete: u64,
    pub winner: Winner,
}

/// One row per `0 <= i <= C(n,2)`.
pub fn crossover_table(n: u32) -> Result<Vec<CrossoverRow>, Layer2Error> {
    (0..=edge_total(n))
        .map(|i| {
            let star = quasi_graph(n, i, QuasiKind::Star)?.p2_count();
            let complete = quasi_graph(n, i, QuasiKind::Complete)?.p2_count();
            let winner = match star.cmp(&complete) {
                std::cmp::Ordering::Greater => Winner::Star,
                std::cmp::Ordering::Less => Winner::Complete,
                std::cmp::Ordering::Equal => Winner::Tie,
            };
            Ok(CrossoverRow { i, p2_quasi_star: star, p2_quasi_complete: complete, winner })
        })
        .collect()
}

pub fn crossover_csv(rows: &[CrossoverRow]) -> String {
    let mut out = String::from("i,p2_quasi_star,p2_quasi_complete,winner\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.i, r.p2_quasi_star, r.p2_quasi_complete, r.winner));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_family;
    use crate::profile::brute_profile;

    fn graph(text: &str) -> Layer2Graph {
        Layer2Graph::from_family(&parse_family(text).unwrap()).unwrap()
    }

    #[test]
    fn quasi_complete_six_four() {
        let g = quasi_graph(6, 4, QuasiKind::Complete).unwrap();
        assert_eq!(g.to_family(), parse_family("n 6\n1 2\n1 3\n2 3\n1 4\n").unwrap());
        assert_eq!(g.degrees(), &[3, 2, 2, 1, 0, 0]);
        assert_eq!(g.p2_count(), 5);
    }

    #[test]
    fn quasi_star_six_four() {
        let g = quasi_graph(6, 4, QuasiKind::Star).unwrap();
        assert_eq!(g.edges().len(), 4);
        assert_eq!(g.degrees().iter().filter(|&&d| d == 4).count(), 1);
        assert_eq!(g.p2_count(), 6);
        assert_eq!(quasi_graph(6, 15, QuasiKind::Complete).unwrap().to_family(), SetFamily::layer(6, 2));
        assert!(quasi_graph(6, 16, QuasiKind::Star).is_err());
        assert!(quasi_graph(6, 0, QuasiKind::Complete).unwrap().edges().is_empty());
    }

    #[test]
    fn p2_small_graphs() {
        assert_eq!(graph("n 3\n1 2\n1 3\n2 3\n").p2_count(), 3);
        let star = graph("n 5\n1 2\n1 3\n1 4\n1 5\n");
        assert_eq!(star.p2_count(), 6);
    }

    #[test]
    fn census_examples() {
        let t = graph("n 4\n1 2\n1 3\n2 3\n").census();
        assert_eq!(t.a(2), BigUint::from(3u32));
        assert_eq!(t.a(3), BigUint::zero());
        assert_eq!(t.b, 1);
        let s = graph("n 4\n1 2\n1 3\n1 4\n").census();
        assert_eq!((s.a(2), s.a(3), s.b), (BigUint::from(3u32), BigUint::one(), 0));
        assert_eq!(s.a.len(), 4);
    }

    #[test]
    fn census_matches_brute_subfamilies() {
        let g = graph("n 5\n1 2\n1 3\n2 3\n3 4\n1 4\n4 5\n3 5\n");
        let c = g.census();
        let brute = brute_profile(&g.to_family()).unwrap();
        for m in 2..=g.edges().len() {
            let expect = c.a(m) + if m == 3 { BigUint::from(c.b) } else { BigUint::zero() };
            assert_eq!(brute.get(m), expect, "m = {m}");
        }
    }

    #[test]
    fn max_p2_small() {
        let r = max_p2(6, 4).unwrap();
        assert_eq!(r.value, 6);
        assert_eq!(r.scanned, 1365);
        let star = canonical_form(&quasi_graph(6, 4, QuasiKind::Star).unwrap().to_family()).unwrap();
        assert!(r.optima.contains(&star));

        let r = max_p2(5, 1).unwrap();
        assert_eq!((r.value, r.optima.len()), (0, 1));
        assert!(matches!(max_p2_with_budget(6, 7, 10), Err(Layer2Error::OverBudget { .. })));
    }

    #[test]
    fn crossover_rows() {
        let rows = crossover_table(6).unwrap();
        assert_eq!(rows.len(), 16);
        assert_eq!(rows[4].winner, Winner::Star);
        assert_eq!(rows[0].winner, Winner::Tie);
        let csv = crossover_csv(&rows);
        assert!(csv.starts_with("i,p2_quasi_star,p2_quasi_complete,winner\n0,0,0,tie\n"));
    }
}
