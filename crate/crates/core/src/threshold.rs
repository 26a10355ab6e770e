//! The layer index `r(N, n)`: the unique `r` with
//! `sum_{k=r+1..n} C(n,k) <= N < sum_{k=r..n} C(n,k)`.

use serde::Serialize;
use thiserror::Error;

use crate::binom::binomial_u128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThresholdError {
    #[error("family size {size} is outside 1..=2^{n}")]
    SizeOutOfRange { size: u128, n: u32 },
    #[error("ground size {0} is outside 1..=64")]
    GroundSize(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Threshold {
    pub r: u32,
    /// Set when `N = 2^n`: the defining inequality has no solution and `r = 0`
    /// is returned by convention with `N` equal to the upper sum.
    pub saturated: bool,
}

/// `sum_{k=r..n} C(n,k)`.
pub fn top_sum(n: u32, r: u32) -> u128 {
    (r..=n)
        .map(|k| binomial_u128(n.into(), k.into()).expect("n <= 64 fits in u128"))
        .sum()
}

pub fn r_of(size: u128, n: u32) -> Result<Threshold, ThresholdError> {
    if !(1..=64).contains(&n) {
        return Err(ThresholdError::GroundSize(n));
    }
    let total = 1u128 << n;
    if size == 0 || size > total {
        return Err(ThresholdError::SizeOutOfRange { size, n });
    }
    if size == total {
        return Ok(Threshold { r: 0, saturated: true });
    }
    let mut upper = 0u128;
    for r in (0..=n).rev() {
        upper += binomial_u128(n.into(), r.into()).expect("n <= 64 fits in u128");
        if size < upper {
            return Ok(Threshold { r, saturated: false });
        }
    }
    unreachable!("size < 2^n is below the full sum")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_values() {
        // partial sums for n = 4: 1, 5, 11, 15, 16
        assert_eq!(r_of(9, 4).unwrap(), Threshold { r: 2, saturated: false });
        assert_eq!(r_of(11, 4).unwrap(), Threshold { r: 1, saturated: false });
        assert_eq!(r_of(1, 4).unwrap(), Threshold { r: 3, saturated: false });
        assert_eq!(r_of(16, 4).unwrap(), Threshold { r: 0, saturated: true });
    }

    #[test]
    fn out_of_range() {
        assert!(r_of(0, 4).is_err());
        assert!(r_of(17, 4).is_err());
        assert!(r_of(1, 0).is_err());
        assert_eq!(r_of(1u128 << 64, 64).unwrap().r, 0);
    }

    #[test]
    fn defining_inequality_and_monotone() {
        for n in 1..=12u32 {
            let mut prev = u32::MAX;
            for size in 1..(1u128 << n) {
                let t = r_of(size, n).unwrap();
                assert!(top_sum(n, t.r + 1) <= size && size < top_sum(n, t.r));
                assert!(t.r <= prev);
                prev = t.r;
            }
        }
    }
}
