//! Exhaustive search for families maximising `c_s` at fixed `(n, N, s)`,
//! plus a compression-driven hill climber for larger cases.
//!
//! The candidate space is cut into contiguous colex ranges scanned in
//! parallel. Each range yields its local maximum and optima; merging keeps
//! the larger maximum and concatenates tied optima, so the final (canonical,
//! deduplicated) report does not depend on scheduling.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::binom::binomial;
use crate::canon::{canonical_form, CanonError, MAX_CANON_GROUND};
use crate::combin;
use crate::compress::{apply_compression, left_compressions, uvf_compressions, CompressionDescriptor};
use crate::family::{SetFamily, SetMask};
use crate::profile::{intersecting_profile, intersecting_profile_upto, ProfileError};
use crate::indep::MAX_VERTICES;

/// Default cap on the number of candidate families in one scan.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search space of {space} families exceeds the budget of {budget}")]
    OverBudget { space: String, budget: u64 },
    #[error("no family of size {size} fits restriction {restriction} over [{n}]")]
    Infeasible { n: u32, size: usize, restriction: Restriction },
    #[error(transparent)]
    Canon(#[from] CanonError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// Which families a scan ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Restriction {
    None,
    /// Only up-sets (families closed under supersets).
    UpsetOnly,
    /// `[n]^(>=r+1)` plus any sets of size at most `r`.
    FixedTopLayers(u32),
    /// `[n]^(>=r+1)` plus sets of size exactly `r`.
    TopPlusLayer(u32),
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Restriction::None => f.write_str("none"),
            Restriction::UpsetOnly => f.write_str("upset-only"),
            Restriction::FixedTopLayers(r) => write!(f, "layers:{r}"),
            Restriction::TopPlusLayer(r) => write!(f, "layer:{r}"),
        }
    }
}

impl FromStr for Restriction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.parse::<u32>().map_err(|_| format!("bad restriction `{s}`"));
        match s {
            "none" => Ok(Restriction::None),
            "upset-only" => Ok(Restriction::UpsetOnly),
            _ => {
                if let Some(r) = s.strip_prefix("layers:") {
                    Ok(Restriction::FixedTopLayers(num(r)?))
                } else if let Some(r) = s.strip_prefix("layer:") {
                    Ok(Restriction::TopPlusLayer(num(r)?))
                } else {
                    Err(format!("bad restriction `{s}`"))
                }
            }
        }
    }
}

impl Serialize for Restriction {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Allow the empty set as a member.
    pub include_empty: bool,
    pub budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { include_empty: false, budget: DEFAULT_BUDGET }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub n: u32,
    #[serde(rename = "N")]
    pub size: usize,
    pub s: usize,
    #[serde(rename = "max", serialize_with = "crate::report::decimal")]
    pub max_count: BigUint,
    pub optima: Vec<SetFamily>,
    #[serde(rename = "scanned")]
    pub families_scanned: u64,
    pub restriction: Restriction,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// The shape of a scan: fixed members plus `choose` members from `pool`.
#[derive(Debug, Clone)]
pub struct SearchSpace {
    pub n: u32,
    pub fixed: SetFamily,
    pub pool: Vec<SetMask>,
    pub choose: usize,
    pub restriction: Restriction,
}

impl SearchSpace {
    pub fn new(
        n: u32,
        size: usize,
        restriction: Restriction,
        opts: &SearchOptions,
    ) -> Result<Self, SearchError> {
        if n > MAX_CANON_GROUND {
            // the pool alone has 2^n sets; report the space symbolically
            return Err(SearchError::OverBudget {
                space: format!("C(2^{n} - 1, {size})"),
                budget: opts.budget,
            });
        }
        let keep_empty = |m: SetMask| opts.include_empty || !m.is_empty();
        let all = SetFamily::by_sizes(n, |_| true);
        let (fixed, pool): (SetFamily, Vec<SetMask>) = match restriction {
            Restriction::None | Restriction::UpsetOnly => {
                (SetFamily::empty(n), all.iter().filter(|&m| keep_empty(m)).collect())
            }
            Restriction::FixedTopLayers(r) => (
                SetFamily::at_least(n, r + 1),
                all.iter().filter(|&m| m.len() <= r && keep_empty(m)).collect(),
            ),
            Restriction::TopPlusLayer(r) => (
                SetFamily::at_least(n, r + 1),
                all.iter().filter(|&m| m.len() == r && keep_empty(m)).collect(),
            ),
        };
        let choose = size
            .checked_sub(fixed.len())
            .filter(|&k| k <= pool.len())
            .ok_or(SearchError::Infeasible { n, size, restriction })?;
        let space = binomial(pool.len() as u64, choose as u64);
        if space > BigUint::from(opts.budget) {
            return Err(SearchError::OverBudget { space: space.to_string(), budget: opts.budget });
        }
        if size > MAX_VERTICES {
            return Err(ProfileError::TooLarge { size, limit: MAX_VERTICES }.into());
        }
        Ok(SearchSpace { n, fixed, pool, choose, restriction })
    }

    pub fn candidate_count(&self) -> u64 {
        combin::count(self.pool.len(), self.choose)
    }

    fn family_of(&self, comb: &[usize]) -> SetFamily {
        let mut members = self.fixed.members().to_vec();
        members.extend(comb.iter().map(|&k| self.pool[k]));
        SetFamily::from_distinct(self.n, members)
    }

    fn admits(&self, family: &SetFamily) -> bool {
        match self.restriction {
            Restriction::UpsetOnly => is_upset(family),
            _ => true,
        }
    }
}

/// Whether every superset of a member is a member.
pub fn is_upset(family: &SetFamily) -> bool {
    let n = family.n();
    family.iter().all(|m| (1..=n).all(|e| m.contains(e) || family.contains(m.with(e))))
}

/// Whether `family` equals `[n]^(>=r+1)` plus some sets of size exactly `r`.
pub fn has_layer_form(family: &SetFamily, r: u32) -> bool {
    family.iter().all(|m| m.len() >= r) && SetFamily::at_least(family.n(), r + 1).is_subfamily_of(family)
}

#[derive(Clone)]
struct Best {
    max: BigUint,
    optima: Vec<SetFamily>,
}

impl Best {
    fn new() -> Self {
        Best { max: BigUint::zero(), optima: Vec::new() }
    }

    fn offer(&mut self, value: &BigUint, family: &SetFamily) {
        match value.cmp(&self.max) {
            std::cmp::Ordering::Greater => {
                self.max = value.clone();
                self.optima.clear();
                self.optima.push(family.clone());
            }
            std::cmp::Ordering::Equal => self.optima.push(family.clone()),
            std::cmp::Ordering::Less => {}
        }
    }

    fn merge(mut self, other: Best) -> Best {
        match self.max.cmp(&other.max) {
            std::cmp::Ordering::Less => other,
            std::cmp::Ordering::Greater => self,
            std::cmp::Ordering::Equal => {
                self.optima.extend(other.optima);
                self
            }
        }
    }
}

/// Scans `space` once and reports the optima for every `s` in `s_list`.
pub fn scan(space: &SearchSpace, s_list: &[usize]) -> Result<Vec<SearchReport>, SearchError> {
    let top = s_list.iter().copied().max().unwrap_or(0);
    let total = space.candidate_count();
    let parts = (rayon::current_num_threads() as u64 * 8).max(1);

    type Local = Result<(Vec<Best>, u64), SearchError>;
    let merged: Local = combin::split_ranges(total, parts)
        .into_par_iter()
        .map(|(a, b)| -> Local {
            let mut best = vec![Best::new(); s_list.len()];
            let mut scanned = 0u64;
            let mut err = None;
            combin::for_each_in_range(space.pool.len(), space.choose, a, b, |comb| {
                if err.is_some() {
                    return;
                }
                let family = space.family_of(comb);
                if !space.admits(&family) {
                    return;
                }
                scanned += 1;
                match intersecting_profile_upto(&family, top, MAX_VERTICES) {
                    Ok(counts) => {
                        for (slot, &s) in best.iter_mut().zip(s_list) {
                            slot.offer(&counts[s], &family);
                        }
                    }
                    Err(e) => err = Some(e),
                }
            });
            match err {
                Some(e) => Err(e.into()),
                None => Ok((best, scanned)),
            }
        })
        .try_reduce(
            || (vec![Best::new(); s_list.len()], 0),
            |(a, sa), (b, sb)| {
                let best = a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect();
                Ok((best, sa + sb))
            },
        );
    let (best, scanned) = merged?;

    best.into_iter()
        .zip(s_list)
        .map(|(b, &s)| {
            let canon: BTreeSet<SetFamily> =
                b.optima.iter().map(canonical_form).collect::<Result<_, _>>()?;
            Ok(SearchReport {
                n: space.n,
                size: space.fixed.len() + space.choose,
                s,
                max_count: b.max,
                optima: canon.into_iter().collect(),
                families_scanned: scanned,
                restriction: space.restriction,
                note: None,
            })
        })
        .collect()
}

/// Maximum of `c_s` over families of size `size` in `P([n])` under `restriction`.
pub fn exhaustive_max(
    n: u32,
    size: usize,
    s: usize,
    restriction: Restriction,
    opts: &SearchOptions,
) -> Result<SearchReport, SearchError> {
    let space = SearchSpace::new(n, size, restriction, opts)?;
    Ok(scan(&space, &[s])?.remove(0))
}

/// Like [`exhaustive_max`] for several `s` with a single scan.
pub fn exhaustive_max_multi(
    n: u32,
    size: usize,
    s_list: &[usize],
    restriction: Restriction,
    opts: &SearchOptions,
) -> Result<Vec<SearchReport>, SearchError> {
    let space = SearchSpace::new(n, size, restriction, opts)?;
    scan(&space, s_list)
}

/// Optima of `[n]^(>=3) + B` over all `B` of `i` two-element sets.
pub fn restricted_layer_max(n: u32, i: usize, s: usize) -> Result<SearchReport, SearchError> {
    let top = SetFamily::at_least(n, 3).len();
    let mut report = exhaustive_max(
        n,
        top + i,
        s,
        Restriction::TopPlusLayer(2),
        &SearchOptions::default(),
    )?;
    report.note = Some(format!(
        "exploratory: n = {n} is below the range where the layer-two optimum is claimed"
    ));
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct HillclimbRun {
    pub family: SetFamily,
    pub steps: Vec<CompressionDescriptor>,
    /// Stopped because no candidate compression applies.
    pub at_fixpoint: bool,
}

/// Largest `|U|` among the `(U,v,f)` candidates the climber tries.
const HILLCLIMB_MAX_U: u32 = 4;

/// Applies randomly ordered compressions that leave every `c_s` at least as
/// large, until `budget` steps or until none applies. Candidates are
/// up-set, left and `(U,v,f)` compressions, so the climb always terminates.
pub fn hillclimb(family: &SetFamily, seed: u64, budget: usize) -> Result<HillclimbRun, SearchError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = family.n();
    let mut current = family.clone();
    let mut profile = intersecting_profile(&current)?.counts;
    let mut steps = Vec::new();
    let fixed_candidates: Vec<CompressionDescriptor> = left_compressions(n)
        .into_iter()
        .chain(uvf_compressions(n, HILLCLIMB_MAX_U))
        .collect();

    while steps.len() < budget {
        let mut candidates = upset_candidates(&current);
        candidates.extend(fixed_candidates.iter().cloned());
        candidates.shuffle(&mut rng);

        let mut moved = false;
        for c in candidates {
            let next = apply_compression(&current, &c).expect("candidates are valid");
            if next == current {
                continue;
            }
            let next_profile = intersecting_profile(&next)?.counts;
            if next_profile.iter().zip(&profile).all(|(a, b)| a >= b) {
                current = next;
                profile = next_profile;
                steps.push(c);
                moved = true;
                break;
            }
        }
        if !moved {
            return Ok(HillclimbRun { family: current, steps, at_fixpoint: true });
        }
    }
    Ok(HillclimbRun { family: current, steps, at_fixpoint: false })
}

fn upset_candidates(family: &SetFamily) -> Vec<CompressionDescriptor> {
    let n = family.n();
    let mut out = Vec::new();
    for source in family.iter() {
        for e in 1..=n {
            let target = source.with(e);
            if target != source && !family.contains(target) {
                out.push(CompressionDescriptor::UpSet { source, target });
            }
        }
    }
    out
}
