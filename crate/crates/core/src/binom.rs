//! Binomial coefficients, exact.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `C(n, k)` as an arbitrary-precision integer; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` in `u128`, or `None` on overflow.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiplication
        let num = acc.checked_mul(u128::from(n - i))?;
        acc = num / u128::from(i + 1);
    }
    Some(acc)
}

/// Row `k = 0..=n` of Pascal's triangle, i.e. the coefficients of `(1 + x)^n`,
/// truncated to the first `len` entries.
pub fn pascal_row(n: usize, len: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(len.min(n + 1));
    let mut cur = BigUint::one();
    for k in 0..len.min(n + 1) {
        row.push(cur.clone());
        cur *= (n - k) as u64;
        cur /= (k + 1) as u64;
    }
    row
}
