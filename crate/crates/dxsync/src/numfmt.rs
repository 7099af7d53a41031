//! Floating-point output rounded to six significant digits.

use serde::{Serialize, Serializer};

/// Rounds to six significant digits.
pub fn round6(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.5e}").parse().unwrap_or(v)
}

/// An `f64` that serializes rounded to six significant digits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Sig6(pub f64);

impl Serialize for Sig6 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(round6(self.0))
    }
}

impl std::fmt::Display for Sig6 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", round6(self.0))
    }
}
