//! Named extremal families and the complementary-pair criterion.
//!
//! A family of size `N > 2^(n-1)` has at least `N - 2^(n-1)` complementary
//! pairs. One with exactly that many and no other disjoint pairs maximises
//! `c_s` for every `s` simultaneously; equivalently it meets every
//! complementary pair of `P([n])` and all its disjoint pairs are
//! complementary.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::binom::binomial_u128;
use crate::family::{SetFamily, SetMask};
use crate::layer2::{quasi_graph, QuasiKind};

/// Ground sizes above this are rejected (the families are listed explicitly).
pub const MAX_CONSTRUCT_GROUND: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("unknown construction `{0}`")]
    UnknownName(String),
    #[error("{name} needs {need}, got n = {n}")]
    Ground { name: Construction, n: u32, need: &'static str },
    #[error("{name} over [{n}] has sizes {lo}..={hi}, not {size}")]
    Size { name: Construction, n: u32, size: u128, lo: u128, hi: u128 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Construction {
    /// `[n]^(>=3)` plus the 2-sets through 1.
    Theorem1a,
    /// `[n]^(>=3)` plus the 2-sets avoiding `n`.
    Theorem1b,
    ConstructEven,
    ConstructOdd,
    /// The star at 1, plus `[2,n]` when one more set is wanted.
    StarMaximal,
    QuasiStarLayer,
    QuasiCompleteLayer,
}

impl Construction {
    pub const ALL: [Construction; 7] = [
        Construction::Theorem1a,
        Construction::Theorem1b,
        Construction::ConstructEven,
        Construction::ConstructOdd,
        Construction::StarMaximal,
        Construction::QuasiStarLayer,
        Construction::QuasiCompleteLayer,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Construction::Theorem1a => "theorem1a",
            Construction::Theorem1b => "theorem1b",
            Construction::ConstructEven => "construct-even",
            Construction::ConstructOdd => "construct-odd",
            Construction::StarMaximal => "star-maximal",
            Construction::QuasiStarLayer => "quasi-star-layer",
            Construction::QuasiCompleteLayer => "quasi-complete-layer",
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Construction {
    type Err = ConstructError;

    fn from_str(s: &str) -> Result<Self, ConstructError> {
        Construction::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| ConstructError::UnknownName(s.to_string()))
    }
}

fn binom(n: u32, k: u32) -> u128 {
    binomial_u128(u64::from(n), u64::from(k)).expect("n <= 20")
}

fn top3(n: u32) -> u128 {
    (1u128 << n) - 1 - u128::from(n) - binom(n, 2)
}

/// Largest size of the construct-even family, `2^(n-1) + C(n,t)/2 - t`.
pub fn even_top(n: u32) -> u128 {
    let t = n / 2;
    (1u128 << (n - 1)) + binom(n, t) / 2 - u128::from(t)
}

/// Largest size of the construct-odd family, `2^(n-1) + C(n-1,t-1) - t - 1`.
pub fn odd_top(n: u32) -> u128 {
    let t = n / 2;
    (1u128 << (n - 1)) + binom(n - 1, t - 1) - u128::from(t) - 1
}

/// The family called `name` over `[n]`; `size` selects `N` where the
/// construction admits a range, and defaults to the largest.
pub fn named_family(name: Construction, n: u32, size: Option<u128>) -> Result<SetFamily, ConstructError> {
    let ground = |need: &'static str, ok: bool| {
        if ok {
            Ok(())
        } else {
            Err(ConstructError::Ground { name, n, need })
        }
    };
    let check_size = |lo: u128, hi: u128| -> Result<u128, ConstructError> {
        let size = size.unwrap_or(hi);
        if (lo..=hi).contains(&size) {
            Ok(size)
        } else {
            Err(ConstructError::Size { name, n, size, lo, hi })
        }
    };
    ground("1 <= n <= 20", (1..=MAX_CONSTRUCT_GROUND).contains(&n))?;

    match name {
        Construction::Theorem1a | Construction::Theorem1b => {
            ground("n >= 3", n >= 3)?;
            let pairs = if name == Construction::Theorem1a {
                u128::from(n - 1)
            } else {
                binom(n - 1, 2)
            };
            check_size(top3(n) + pairs, top3(n) + pairs)?;
            Ok(SetFamily::by_sizes(n, |k| k >= 2).filter(|m| {
                m.len() >= 3
                    || match name {
                        Construction::Theorem1a => m.contains(1),
                        _ => !m.contains(n),
                    }
            }))
        }
        Construction::ConstructEven => {
            ground("even n >= 4", n >= 4 && n.is_multiple_of(2))?;
            let t = n / 2;
            let top = even_top(n);
            let size = check_size((1 << (n - 1)) + 1, top)?;
            let head = SetMask::interval(1, t - 1);
            let mut family = SetFamily::by_sizes(n, |k| k >= t)
                .filter(|m| m.len() > t || m.intersects(head));
            family.insert(head);
            delete_t_sets(&mut family, t, head, top - size);
            Ok(family)
        }
        Construction::ConstructOdd => {
            ground("odd n >= 5", n >= 5 && n % 2 == 1)?;
            let t = n / 2;
            let top = odd_top(n);
            let size = check_size((1 << (n - 1)) + 1, top)?;
            let head = SetMask::interval(1, t - 1);
            let mut family = SetFamily::by_sizes(n, |k| k >= t).filter(|m| match m.len() {
                k if k == t => m.contains(1),
                k if k == t + 1 => m.intersects(head),
                _ => true,
            });
            family.insert(head);
            delete_t_sets(&mut family, t, head, top - size);
            Ok(family)
        }
        Construction::StarMaximal => {
            ground("n >= 2", n >= 2)?;
            let half = 1u128 << (n - 1);
            let size = check_size(half, half + 1)?;
            let mut family = SetFamily::by_sizes(n, |_| true).filter(|m| m.contains(1));
            if size > half {
                family.insert(SetMask::interval(2, n));
            }
            Ok(family)
        }
        Construction::QuasiStarLayer | Construction::QuasiCompleteLayer => {
            ground("n >= 2", n >= 2)?;
            let size = check_size(top3(n), top3(n) + binom(n, 2))?;
            let kind = if name == Construction::QuasiStarLayer {
                QuasiKind::Star
            } else {
                QuasiKind::Complete
            };
            let graph = quasi_graph(n, (size - top3(n)) as usize, kind).expect("edge count in range");
            Ok(SetFamily::at_least(n, 3).union(&graph.to_family()))
        }
    }
}

// Removes `count` t-sets through 1 that do not contain all of `head`, lowest mask first.
// Their complements stay, so every complementary pair is still met.
fn delete_t_sets(family: &mut SetFamily, t: u32, head: SetMask, count: u128) {
    let victims: Vec<SetMask> = family
        .iter()
        .filter(|m| m.len() == t && m.contains(1) && !head.is_subset(*m))
        .take(count as usize)
        .collect();
    assert_eq!(victims.len() as u128, count, "deletion pool exhausted");
    for v in victims {
        family.remove(v);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KkkReport {
    #[serde(rename = "N")]
    pub size: usize,
    pub complementary_pairs: u64,
    pub other_disjoint_pairs: u64,
    pub meets_every_complementary_pair: bool,
    pub passes: bool,
}

/// Counts complementary and other disjoint member pairs. Requires `n <= 30`.
pub fn kkk_check(family: &SetFamily) -> KkkReport {
    let n = family.n();
    assert!(n <= 30, "complementary-pair scan limited to n <= 30");
    let mut complementary = 0u64;
    let mut other = 0u64;
    let m = family.members();
    for (i, a) in m.iter().enumerate() {
        for b in &m[i + 1..] {
            if !a.intersects(*b) {
                if a.union(*b) == SetMask::full(n) {
                    complementary += 1;
                } else {
                    other += 1;
                }
            }
        }
    }
    // one representative per pair: the side without n
    let meets = (0..1u64 << (n - 1))
        .map(SetMask)
        .all(|a| family.contains(a) || family.contains(a.complement(n)));
    let expected = family.len() as i128 - (1i128 << (n - 1));
    KkkReport {
        size: family.len(),
        complementary_pairs: complementary,
        other_disjoint_pairs: other,
        meets_every_complementary_pair: meets,
        passes: other == 0 && i128::from(complementary) == expected && meets,
    }
}
