use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::binom::binomial;

pub(super) fn pow2(exp: i64) -> BigRational {
    let p = BigInt::from(1) << exp.unsigned_abs();
    if exp >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::from(1), p)
    }
}

fn binom_q(n: u32, k: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(binomial(u64::from(n), u64::from(k))))
}

/// `n C(n-1,3) 2^(6-n) + C(n,3) 2^(6-n) + sum_{r=4}^{n-1} n C(n-1,r) 2^(13-2n)`,
/// an upper bound on the non-star part of the layer-two decomposition
/// relative to `|I_2|`. Requires `n >= 4`.
pub fn layer2_bound_value(n: u32) -> BigRational {
    assert!(n >= 4, "bound defined for n >= 4");
    let nn = BigRational::from_integer(BigInt::from(n));
    let head = (&nn * binom_q(n - 1, 3) + binom_q(n, 3)) * pow2(6 - i64::from(n));
    let tail: BigRational = (4..n).map(|r| &nn * binom_q(n - 1, r)).fold(BigRational::zero(), |a, b| a + b);
    head + tail * pow2(13 - 2 * i64::from(n))
}

/// `(n, value)` for every `n` in the range.
pub fn bound_sweep(range: std::ops::RangeInclusive<u32>) -> Vec<(u32, BigRational)> {
    range.map(|n| (n, layer2_bound_value(n))).collect()
}
