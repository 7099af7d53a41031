use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `ceil(c · log2 n)`, exact: the bit length of `n^c - 1`.
pub fn ceil_mul_log2(c: u64, n: u64) -> u64 {
    if n <= 1 || c == 0 {
        return 0;
    }
    let p = BigUint::from(n).pow(c as u32);
    (p - BigUint::one()).bits()
}

/// Number of bits needed to write `v` (0 for zero).
pub fn bit_length(v: &BigUint) -> u64 {
    if v.is_zero() {
        0
    } else {
        v.bits()
    }
}
