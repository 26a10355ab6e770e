//! Subsets of `[n]` as bit masks and duplicate-free families of them.
//!
//! Element `i` (1-based) is stored at bit `i - 1`. A [`SetFamily`] keeps its
//! members strictly sorted by mask value, so two families over the same ground
//! set are equal exactly when their member lists are equal.

use std::fmt;

use thiserror::Error;

/// Largest supported ground set size (one machine word).
pub const MAX_GROUND: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("ground size {0} is outside 1..={MAX_GROUND}")]
    GroundSize(u32),
    #[error("set {mask:#x} has elements outside [{n}]")]
    OutOfRange { mask: u64, n: u32 },
    #[error("duplicate set {0}")]
    Duplicate(SetMask),
}

/// One subset of `[n]`.
#[derive(Copy, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetMask(pub u64);

impl SetMask {
    pub const EMPTY: SetMask = SetMask(0);

    /// The full ground set `[n]`.
    pub fn full(n: u32) -> SetMask {
        SetMask(ground_mask(n))
    }

    /// The singleton `{e}`.
    pub fn singleton(e: u32) -> SetMask {
        debug_assert!((1..=MAX_GROUND).contains(&e));
        SetMask(1u64 << (e - 1))
    }

    /// Builds a set from 1-based element labels. Labels must lie in `1..=64`.
    pub fn from_elements<I: IntoIterator<Item = u32>>(elements: I) -> SetMask {
        SetMask(elements.into_iter().fold(0u64, |acc, e| acc | (1u64 << (e - 1))))
    }

    /// The interval `[lo, hi]`; empty when `lo > hi`.
    pub fn interval(lo: u32, hi: u32) -> SetMask {
        if lo > hi {
            return SetMask::EMPTY;
        }
        SetMask::from_elements(lo..=hi)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: u32) -> bool {
        (1..=MAX_GROUND).contains(&e) && self.0 >> (e - 1) & 1 == 1
    }

    pub fn is_subset(self, other: SetMask) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: SetMask) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: SetMask) -> SetMask {
        SetMask(self.0 | other.0)
    }

    pub fn intersection(self, other: SetMask) -> SetMask {
        SetMask(self.0 & other.0)
    }

    pub fn minus(self, other: SetMask) -> SetMask {
        SetMask(self.0 & !other.0)
    }

    pub fn with(self, e: u32) -> SetMask {
        self.union(SetMask::singleton(e))
    }

    pub fn without(self, e: u32) -> SetMask {
        self.minus(SetMask::singleton(e))
    }

    /// Complement relative to `[n]`.
    pub fn complement(self, n: u32) -> SetMask {
        SetMask(!self.0 & ground_mask(n))
    }

    /// Largest element, or 0 for the empty set.
    pub fn max_element(self) -> u32 {
        64 - self.0.leading_zeros()
    }

    /// Ascending 1-based element labels.
    pub fn elements(self) -> Elements {
        Elements(self.0)
    }

    /// Sum of the element labels.
    pub fn label_sum(self) -> u64 {
        self.elements().map(u64::from).sum()
    }
}

impl fmt::Debug for SetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, e) in self.elements().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// Serialised as the ascending list of element labels.
impl serde::Serialize for SetMask {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq(self.elements())
    }
}

/// Serialised in the family file format.
impl serde::Serialize for SetFamily {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_file_string())
    }
}

/// Iterator over the elements of a [`SetMask`].
#[derive(Clone)]
pub struct Elements(u64);

impl Iterator for Elements {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() + 1;
        self.0 &= self.0 - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for Elements {}

/// Bit mask with the low `n` bits set.
pub fn ground_mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A duplicate-free family of subsets of `[n]`, sorted by mask value.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetFamily {
    n: u32,
    members: Vec<SetMask>,
}

impl SetFamily {
    /// Validates and sorts `members`.
    pub fn new<I: IntoIterator<Item = SetMask>>(n: u32, members: I) -> Result<Self, FamilyError> {
        check_ground(n)?;
        let full = ground_mask(n);
        let mut members: Vec<SetMask> = members.into_iter().collect();
        if let Some(bad) = members.iter().find(|m| m.0 & !full != 0) {
            return Err(FamilyError::OutOfRange { mask: bad.0, n });
        }
        members.sort_unstable();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(FamilyError::Duplicate(w[0]));
        }
        Ok(SetFamily { n, members })
    }

    /// Builds a family from members already known to be distinct and in range.
    pub(crate) fn from_distinct(n: u32, mut members: Vec<SetMask>) -> Self {
        members.sort_unstable();
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.iter().all(|m| m.0 & !ground_mask(n) == 0));
        SetFamily { n, members }
    }

    pub fn empty(n: u32) -> Self {
        SetFamily { n, members: Vec::new() }
    }

    /// Every subset of `[n]` whose size lies in `sizes`.
    pub fn by_sizes(n: u32, sizes: impl Fn(u32) -> bool) -> Self {
        assert!(n <= 24, "power-set enumeration limited to n <= 24");
        let members = (0..1u64 << n)
            .map(SetMask)
            .filter(|m| sizes(m.len()))
            .collect();
        SetFamily { n, members }
    }

    /// The layer `[n]^(k)`.
    pub fn layer(n: u32, k: u32) -> Self {
        SetFamily::by_sizes(n, |s| s == k)
    }

    /// `[n]^(>=k)`.
    pub fn at_least(n: u32, k: u32) -> Self {
        SetFamily::by_sizes(n, |s| s >= k)
    }

    /// `[n]^(<=k)` without the empty set.
    pub fn nonempty_at_most(n: u32, k: u32) -> Self {
        SetFamily::by_sizes(n, |s| s >= 1 && s <= k)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[SetMask] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = SetMask> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, set: SetMask) -> bool {
        self.members.binary_search(&set).is_ok()
    }

    pub fn contains_empty(&self) -> bool {
        self.members.first() == Some(&SetMask::EMPTY)
    }

    /// Whether every member of `self` is a member of `other`.
    pub fn is_subfamily_of(&self, other: &SetFamily) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    /// Members satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(SetMask) -> bool) -> SetFamily {
        SetFamily {
            n: self.n,
            members: self.members.iter().copied().filter(|&m| keep(m)).collect(),
        }
    }

    pub fn union(&self, other: &SetFamily) -> SetFamily {
        assert_eq!(self.n, other.n, "ground sizes differ");
        let mut members = self.members.clone();
        members.extend(other.members.iter().copied().filter(|&m| !self.contains(m)));
        SetFamily::from_distinct(self.n, members)
    }

    pub fn difference(&self, other: &SetFamily) -> SetFamily {
        self.filter(|m| !other.contains(m))
    }

    /// Adds `set`; returns `false` if it was already present.
    pub fn insert(&mut self, set: SetMask) -> bool {
        debug_assert!(set.0 & !ground_mask(self.n) == 0);
        match self.members.binary_search(&set) {
            Ok(_) => false,
            Err(pos) => {
                self.members.insert(pos, set);
                true
            }
        }
    }

    /// Removes `set`; returns `false` if it was absent.
    pub fn remove(&mut self, set: SetMask) -> bool {
        match self.members.binary_search(&set) {
            Ok(pos) => {
                self.members.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    /// Members of size `k`.
    pub fn layer_part(&self, k: u32) -> SetFamily {
        self.filter(|m| m.len() == k)
    }

    /// Image under a relabelling of the ground set: element `e` goes to `perm[e - 1]`.
    pub fn relabel(&self, perm: &[u32]) -> SetFamily {
        assert_eq!(perm.len(), self.n as usize);
        let members = self.members.iter().map(|&m| permute_mask(m, perm)).collect();
        SetFamily::from_distinct(self.n, members)
    }

    pub fn total_size(&self) -> u64 {
        self.members.iter().map(|m| u64::from(m.len())).sum()
    }

    /// Serialises in the family file format (see [`crate::io`]).
    pub fn to_file_string(&self) -> String {
        crate::io::serialize_family(self)
    }
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetFamily[n={}]", self.n)?;
        f.debug_list().entries(self.members.iter()).finish()
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, m) in self.members.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

pub(crate) fn check_ground(n: u32) -> Result<(), FamilyError> {
    if (1..=MAX_GROUND).contains(&n) {
        Ok(())
    } else {
        Err(FamilyError::GroundSize(n))
    }
}

/// Applies `perm` (element `e` goes to `perm[e - 1]`) to a single set.
pub fn permute_mask(set: SetMask, perm: &[u32]) -> SetMask {
    SetMask(
        set.elements()
            .fold(0u64, |acc, e| acc | 1u64 << (perm[(e - 1) as usize] - 1)),
    )
}
