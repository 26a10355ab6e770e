//! Independence polynomials of small graphs.
//!
//! `I(G) = I(G - v) + x * I(G - N[v])`, branching on a vertex of maximum
//! degree, splitting into connected components first and memoising on the
//! vertex set of every induced subgraph visited. Coefficients are exact and
//! may be truncated to the first `len` terms when only low orders are needed.

use std::collections::HashMap;
use std::hash::Hash;
use std::rc::Rc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::binom::pascal_row;

/// Largest vertex count the counter supports.
pub const MAX_VERTICES: usize = 256;

/// Coefficient vector, lowest order first.
pub type Poly = Vec<BigUint>;

/// Fixed-width vertex set.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
struct Bits<const W: usize>([u64; W]);

impl<const W: usize> Bits<W> {
    const EMPTY: Self = Bits([0; W]);

    fn from_row(row: &[u64]) -> Self {
        let mut b = [0u64; W];
        b[..row.len()].copy_from_slice(row);
        Bits(b)
    }

    fn with(mut self, i: usize) -> Self {
        self.0[i / 64] |= 1 << (i % 64);
        self
    }

    fn without(mut self, i: usize) -> Self {
        self.0[i / 64] &= !(1 << (i % 64));
        self
    }

    fn and(self, o: Self) -> Self {
        let mut b = self.0;
        b.iter_mut().zip(o.0).for_each(|(x, y)| *x &= y);
        Bits(b)
    }

    fn and_not(self, o: Self) -> Self {
        let mut b = self.0;
        b.iter_mut().zip(o.0).for_each(|(x, y)| *x &= !y);
        Bits(b)
    }

    fn or(self, o: Self) -> Self {
        let mut b = self.0;
        b.iter_mut().zip(o.0).for_each(|(x, y)| *x |= y);
        Bits(b)
    }

    fn is_empty(self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn count(self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn first(self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    fn iter(self) -> impl Iterator<Item = usize> {
        self.0.into_iter().enumerate().flat_map(|(k, mut w)| {
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let i = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + i)
            })
        })
    }
}

struct Counter<const W: usize> {
    adj: Vec<Bits<W>>,
    len: usize,
    memo: HashMap<Bits<W>, Rc<Poly>>,
}

impl<const W: usize> Counter<W>
where
    Bits<W>: Hash,
{
    fn poly(&mut self, set: Bits<W>) -> Rc<Poly> {
        if set.is_empty() {
            return Rc::new(vec![BigUint::one()]);
        }
        if let Some(p) = self.memo.get(&set) {
            return Rc::clone(p);
        }
        let result = self.compute(set);
        let result = Rc::new(result);
        self.memo.insert(set, Rc::clone(&result));
        result
    }

    fn compute(&mut self, set: Bits<W>) -> Poly {
        let start = set.first().expect("non-empty");
        let comp = self.component(start, set);
        if comp != set {
            let a = self.poly(comp);
            let b = self.poly(set.and_not(comp));
            return mul_trunc(&a, &b, self.len);
        }

        let (v, deg) = set
            .iter()
            .map(|v| (v, self.adj[v].and(set).count()))
            .max_by_key(|&(v, d)| (d, std::cmp::Reverse(v)))
            .expect("non-empty");
        if deg == 0 {
            return pascal_row(set.count(), self.len);
        }
        let without = self.poly(set.without(v));
        let closed = set.and_not(self.adj[v].with(v));
        let with = self.poly(closed);
        add_shifted(&without, &with, self.len)
    }

    fn component(&self, start: usize, set: Bits<W>) -> Bits<W> {
        let mut comp = Bits::EMPTY.with(start);
        let mut frontier = comp;
        while !frontier.is_empty() {
            let mut next = Bits::EMPTY;
            for u in frontier.iter() {
                next = next.or(self.adj[u]);
            }
            frontier = next.and(set).and_not(comp);
            comp = comp.or(frontier);
        }
        comp
    }
}

/// `a + x * b`, truncated to `len` coefficients.
fn add_shifted(a: &Poly, b: &Poly, len: usize) -> Poly {
    let size = a.len().max(b.len() + 1).min(len);
    let mut out = vec![BigUint::zero(); size];
    for (k, c) in a.iter().enumerate().take(size) {
        out[k] += c;
    }
    for (k, c) in b.iter().enumerate().take(size.saturating_sub(1)) {
        out[k + 1] += c;
    }
    trim(out)
}

fn mul_trunc(a: &Poly, b: &Poly, len: usize) -> Poly {
    let size = (a.len() + b.len() - 1).min(len);
    let mut out = vec![BigUint::zero(); size];
    for (i, x) in a.iter().enumerate().take(size) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(size - i) {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

/// Independence polynomial of the graph on `0..vertices` with adjacency bit
/// rows `rows` (row `v` has bit `u` set iff `uv` is an edge). Vertices listed
/// in `excluded` (e.g. those carrying a loop) never enter an independent set.
/// The result has at most `len` coefficients; trailing zeros are not stored.
pub fn independence_polynomial(
    rows: &[Vec<u64>],
    excluded: &[usize],
    len: usize,
) -> Poly {
    let vertices = rows.len();
    assert!(vertices <= MAX_VERTICES, "at most {MAX_VERTICES} vertices");
    if len == 0 {
        return Vec::new();
    }
    match vertices.div_ceil(64) {
        0 | 1 => run::<1>(rows, excluded, len),
        2 => run::<2>(rows, excluded, len),
        _ => run::<4>(rows, excluded, len),
    }
}

fn run<const W: usize>(rows: &[Vec<u64>], excluded: &[usize], len: usize) -> Poly
where
    Bits<W>: Hash,
{
    let adj: Vec<Bits<W>> = rows.iter().map(|r| Bits::from_row(r)).collect();
    let mut all = Bits::<W>::EMPTY;
    for v in 0..rows.len() {
        all = all.with(v);
    }
    for &v in excluded {
        all = all.without(v);
    }
    let mut counter = Counter { adj, len, memo: HashMap::new() };
    let p = counter.poly(all);
    Rc::try_unwrap(p).unwrap_or_else(|rc| (*rc).clone())
}
