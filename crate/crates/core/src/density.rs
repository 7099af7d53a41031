//! Pattern-dense strings: every window of `window` bits contains `pattern`.

use crate::bitstring::BitString;
use crate::error::Error;
use crate::math::ceil_mul_log2;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DensityConfig {
    pattern: BitString,
    window: usize,
}

impl DensityConfig {
    pub fn new(pattern: BitString, window: usize) -> Result<Self, Error> {
        if window == 0 || pattern.len() > window {
            return Err(Error::InvalidDensityConfig {
                pattern_len: pattern.len(),
                window,
            });
        }
        Ok(DensityConfig { pattern, window })
    }

    pub fn pattern(&self) -> &BitString {
        &self.pattern
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn is_dense(&self, x: &BitString) -> bool {
        dense_unchecked(x, &self.pattern, self.window)
    }
}

/// Whether every length-`window` substring of `x` contains `pattern`.
///
/// A string shorter than the window is judged as a single window: it is
/// dense iff it contains the pattern.
pub fn is_pattern_dense(x: &BitString, pattern: &BitString, window: usize) -> Result<bool, Error> {
    if window == 0 || pattern.len() > window {
        return Err(Error::InvalidDensityConfig {
            pattern_len: pattern.len(),
            window,
        });
    }
    Ok(dense_unchecked(x, pattern, window))
}

fn dense_unchecked(x: &BitString, pattern: &BitString, window: usize) -> bool {
    let n = x.len();
    if n < window {
        return x.contains(pattern);
    }
    let plen = pattern.len();
    // window starting at s holds an occurrence iff one starts in [s, s + slack]
    let slack = window - plen;
    let last_window = n - window;
    let mut covered_until = 0usize; // every window start < covered_until is satisfied
    for o in x.occurrences(pattern) {
        if o > covered_until + slack {
            return false;
        }
        // occurrence o satisfies windows s with o - slack <= s <= o
        covered_until = covered_until.max(o + 1);
        if covered_until > last_window {
            return true;
        }
    }
    covered_until > last_window
}

/// `p = 0^k 1^k` and `δ = ceil(k · 2^(2k+3) · log2 n)`.
pub fn density_preset(k: usize, n: usize) -> Result<DensityConfig, Error> {
    if k == 0 || n < 2 {
        return Err(Error::InvalidParams("density preset needs k >= 1 and n >= 2"));
    }
    let mut pattern = BitString::zeros(k);
    pattern.push_repeated(true, k);
    let coeff = (k as u64)
        .checked_shl(2 * k as u32 + 3)
        .filter(|_| 2 * k + 3 < 64)
        .ok_or(Error::InvalidParams("k too large for density preset"))?;
    let window = ceil_mul_log2(coeff, n as u64) as usize;
    DensityConfig::new(pattern, window)
}

/// `δ = ceil(alpha · log2 n)` for integer `alpha`.
pub fn alpha_window(alpha: u64, n: usize) -> usize {
    ceil_mul_log2(alpha, n as u64) as usize
}
