//! The bound `C(n-1,t-1) - (n-t)` on the number of minimal elements of an
//! intersecting `B` inside `[n]^(<=t)` that is not contained in `[n]^(t)`,
//! and the upper-shadow inequality behind it.
//!
//! The minimal elements of such a `B` form an intersecting antichain with a
//! member of size below `t`, and any such antichain is itself a valid `B`
//! whose minimal elements are all its members. So the largest number of
//! minimal elements equals the largest such antichain, which the
//! branch-and-bound mode searches for directly.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::binom::binomial_u128;
use crate::family::{SetFamily, SetMask};

/// Largest ground size for the exhaustive mode.
pub const EXHAUSTIVE_MAX_N: u32 = 5;
/// Largest ground size for the branch-and-bound mode.
pub const BNB_MAX_N: u32 = 8;
/// Largest `|[n]^(t-1)|` for the shadow scan (`2^this` subsets).
pub const SHADOW_MAX_SETS: usize = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinimalError {
    #[error("need 2 <= t <= n/2, got n = {n}, t = {t}")]
    Parameters { n: u32, t: u32 },
    #[error("{mode} mode supports n <= {max}, got {n}")]
    OverBudget { mode: MinimalMode, n: u32, max: u32 },
    #[error("shadow scan over 2^{sets} subfamilies is over budget")]
    ShadowOverBudget { sets: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MinimalMode {
    Exhaustive,
    BranchAndBound,
}

impl fmt::Display for MinimalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MinimalMode::Exhaustive => "exhaustive",
            MinimalMode::BranchAndBound => "branch-and-bound",
        })
    }
}

impl FromStr for MinimalMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exhaustive" => Ok(MinimalMode::Exhaustive),
            "branch-and-bound" | "bnb" => Ok(MinimalMode::BranchAndBound),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalReport {
    pub n: u32,
    pub t: u32,
    pub mode: MinimalMode,
    pub bound: i64,
    pub achieved: u64,
    /// A family attaining `achieved`.
    pub witness: SetFamily,
    /// Families (exhaustive) or search nodes (branch-and-bound) visited.
    pub explored: u64,
    pub passes: bool,
}

pub fn minimal_bound(n: u32, t: u32) -> i64 {
    binomial_u128(u64::from(n - 1), u64::from(t - 1)).expect("small") as i64 - i64::from(n - t)
}

fn check_params(n: u32, t: u32) -> Result<(), MinimalError> {
    if t < 2 || 2 * t > n {
        return Err(MinimalError::Parameters { n, t });
    }
    Ok(())
}

pub fn minimal_bound_check(n: u32, t: u32, mode: MinimalMode) -> Result<MinimalReport, MinimalError> {
    check_params(n, t)?;
    let (achieved, witness, explored) = match mode {
        MinimalMode::Exhaustive => {
            if n > EXHAUSTIVE_MAX_N {
                return Err(MinimalError::OverBudget { mode, n, max: EXHAUSTIVE_MAX_N });
            }
            exhaustive(n, t)
        }
        MinimalMode::BranchAndBound => {
            if n > BNB_MAX_N {
                return Err(MinimalError::OverBudget { mode, n, max: BNB_MAX_N });
            }
            branch_and_bound(n, t)
        }
    };
    let bound = minimal_bound(n, t);
    Ok(MinimalReport {
        n,
        t,
        mode,
        bound,
        achieved,
        witness,
        explored,
        passes: achieved as i64 <= bound,
    })
}

fn minimal_members(members: &[SetMask]) -> usize {
    members
        .iter()
        .filter(|a| !members.iter().any(|b| b != *a && b.is_subset(**a)))
        .count()
}

// every intersecting B in [n]^(<=t) \ {} with a member below size t
fn exhaustive(n: u32, t: u32) -> (u64, SetFamily, u64) {
    let pool = SetFamily::nonempty_at_most(n, t);
    let pool = pool.members();
    let m = pool.len();
    let best = (0..1u64 << m)
        .into_par_iter()
        .filter_map(|bits| {
            let members: Vec<SetMask> =
                (0..m).filter(|&k| bits >> k & 1 == 1).map(|k| pool[k]).collect();
            let valid = members.iter().any(|b| b.len() < t)
                && members.iter().enumerate().all(|(i, a)| members[i..].iter().all(|b| a.intersects(*b)));
            valid.then(|| (minimal_members(&members) as u64, std::cmp::Reverse(bits)))
        })
        .max()
        .map(|(k, std::cmp::Reverse(bits))| {
            let members = (0..m).filter(|&k| bits >> k & 1 == 1).map(|k| pool[k]);
            (k, SetFamily::new(n, members).expect("distinct"))
        })
        .unwrap_or((0, SetFamily::empty(n)));
    (best.0, best.1, 1u64 << m)
}

// By symmetry the antichain contains [k] for some 1 <= k < t; the rest is a
// maximum clique in the graph of sets compatible with [k] and each other.
fn branch_and_bound(n: u32, t: u32) -> (u64, SetFamily, u64) {
    let mut best = (0u64, SetFamily::empty(n), 0u64);
    for k in 1..t {
        let anchor = SetMask::interval(1, k);
        let cands: Vec<SetMask> = SetFamily::nonempty_at_most(n, t)
            .iter()
            .filter(|&c| compatible(c, anchor))
            .collect();
        let (clique, nodes) = max_clique(&cands);
        best.2 += nodes;
        if clique.len() as u64 + 1 > best.0 {
            let fam = SetFamily::new(n, clique.into_iter().chain([anchor])).expect("distinct");
            best.0 = fam.len() as u64;
            best.1 = fam;
        }
    }
    best
}

fn compatible(a: SetMask, b: SetMask) -> bool {
    a.intersects(b) && !a.is_subset(b) && !b.is_subset(a)
}

/// Maximum clique by greedy-colouring branch and bound over `u128` bitsets.
fn max_clique(cands: &[SetMask]) -> (Vec<SetMask>, u64) {
    assert!(cands.len() <= 128, "candidate set too large");
    let m = cands.len();
    let adj: Vec<u128> = (0..m)
        .map(|i| {
            (0..m)
                .filter(|&j| j != i && compatible(cands[i], cands[j]))
                .fold(0u128, |acc, j| acc | 1 << j)
        })
        .collect();

    struct Search<'a> {
        adj: &'a [u128],
        best: Vec<usize>,
        current: Vec<usize>,
        nodes: u64,
    }

    impl Search<'_> {
        fn expand(&mut self, mut pending: u128) {
            self.nodes += 1;
            // colour classes give an upper bound on what `pending` can add
            let mut order = Vec::new();
            let mut colour_of = Vec::new();
            let mut uncoloured = pending;
            let mut colour = 0;
            while uncoloured != 0 {
                colour += 1;
                let mut avail = uncoloured;
                while avail != 0 {
                    let v = avail.trailing_zeros() as usize;
                    avail &= !(1 << v) & !self.adj[v];
                    uncoloured &= !(1 << v);
                    order.push(v);
                    colour_of.push(colour);
                }
            }
            for idx in (0..order.len()).rev() {
                if self.current.len() + colour_of[idx] <= self.best.len() {
                    return;
                }
                let v = order[idx];
                self.current.push(v);
                let next = pending & self.adj[v];
                if next == 0 {
                    if self.current.len() > self.best.len() {
                        self.best = self.current.clone();
                    }
                } else {
                    self.expand(next);
                }
                self.current.pop();
                pending &= !(1 << v);
            }
        }
    }

    let mut search = Search { adj: &adj, best: Vec::new(), current: Vec::new(), nodes: 0 };
    let all = if m == 128 { u128::MAX } else { (1u128 << m) - 1 };
    if m > 0 {
        search.expand(all);
    }
    let clique = search.best.iter().map(|&i| cands[i]).collect();
    (clique, search.nodes)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShadowReport {
    pub n: u32,
    pub t: u32,
    /// Number of nonempty `U` checked.
    pub checked: u64,
    /// Smallest `|dU| - |U|` seen.
    pub min_excess: i64,
    pub required: i64,
    pub passes: bool,
}

/// Checks `|dU| >= |U| + n - t` for every nonempty `U` in `[n]^(t-1)`,
/// `dU` the upper shadow in `[n]^(t)`.
pub fn shadow_check(n: u32, t: u32) -> Result<ShadowReport, MinimalError> {
    check_params(n, t)?;
    let lower = SetFamily::layer(n, t - 1);
    let upper = SetFamily::layer(n, t);
    let sets = lower.len();
    if sets > SHADOW_MAX_SETS || upper.len() > 128 {
        return Err(MinimalError::ShadowOverBudget { sets });
    }
    let up: Vec<u128> = lower
        .iter()
        .map(|a| {
            upper
                .iter()
                .enumerate()
                .filter(|(_, b)| a.is_subset(*b))
                .fold(0u128, |acc, (j, _)| acc | 1 << j)
        })
        .collect();
    let min_excess = (1u64..1 << sets)
        .into_par_iter()
        .map(|u| {
            let shadow = (0..sets).filter(|&k| u >> k & 1 == 1).fold(0u128, |acc, k| acc | up[k]);
            i64::from(shadow.count_ones()) - i64::from(u.count_ones())
        })
        .min()
        .unwrap_or(i64::MAX);
    let required = i64::from(n - t);
    Ok(ShadowReport {
        n,
        t,
        checked: (1u64 << sets) - 1,
        min_excess,
        required,
        passes: min_excess >= required,
    })
}
