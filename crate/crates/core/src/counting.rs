//! Exact binomial coefficients.
//!
//! Counts are `BigUint`, so there is no overflow regime to worry about;
//! callers that need machine integers use [`binomial_u128`] and treat
//! `None` as "too large".

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// C(n, r) computed as a running product with exact division at each
/// step: after the i-th step the accumulator equals C(n - r + i, i),
/// which is always an integer.
pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 1..=r {
        acc = acc * (n - r + i) / i;
    }
    acc
}

/// C(n, r) as a `u128`, or `None` if it does not fit.
pub fn binomial_u128(n: u64, r: u64) -> Option<u128> {
    binomial(n, r).to_u128()
}
