//! Canonical forms under relabelling of the ground set.
//!
//! The canonical form of a family is the image, over all `n!` coordinate
//! permutations, whose sorted member list is lexicographically smallest.

use thiserror::Error;

use crate::family::{permute_mask, SetFamily, SetMask};

/// Largest ground size accepted by the factorial scan.
pub const MAX_CANON_GROUND: u32 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("canonical form needs n <= {MAX_CANON_GROUND}, got n = {0}")]
pub struct CanonError(pub u32);

/// Calls `visit` with every permutation of `1..=n` (Heap's algorithm).
pub fn for_each_permutation(n: u32, mut visit: impl FnMut(&[u32])) {
    let mut perm: Vec<u32> = (1..=n).collect();
    let mut counters = vec![0usize; n as usize];
    visit(&perm);
    let mut i = 1;
    while i < n as usize {
        if counters[i] < i {
            let j = if i % 2 == 0 { 0 } else { counters[i] };
            perm.swap(j, i);
            visit(&perm);
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
}

pub fn canonical_form(family: &SetFamily) -> Result<SetFamily, CanonError> {
    let n = family.n();
    if n > MAX_CANON_GROUND {
        return Err(CanonError(n));
    }
    let mut best: Vec<SetMask> = family.members().to_vec();
    let mut image: Vec<SetMask> = Vec::with_capacity(family.len());
    for_each_permutation(n, |perm| {
        image.clear();
        image.extend(family.iter().map(|m| permute_mask(m, perm)));
        image.sort_unstable();
        if image < best {
            best.clone_from(&image);
        }
    });
    Ok(SetFamily::from_distinct(n, best))
}

/// Whether the two families are equal up to relabelling the ground set.
pub fn is_isomorphic(a: &SetFamily, b: &SetFamily) -> Result<bool, CanonError> {
    if a.n() != b.n() || a.len() != b.len() {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}
