//! `--labeling` values and seed rejection for hash labelings.

use std::fmt;
use std::str::FromStr;

use dxsync_core::{BitString, Error as CoreError, HashLabeling, IdentityLabeling, Labeling};
use num_bigint::BigUint;

pub const DEFAULT_RESEED_CAP: u32 = 64;

/// `identity` or `hash:R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelingChoice {
    Identity,
    Hash { width: u32 },
}

impl FromStr for LabelingChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "identity" {
            return Ok(LabelingChoice::Identity);
        }
        let width = s
            .strip_prefix("hash:")
            .ok_or_else(|| format!("unknown labeling {s:?} (expected identity or hash:R)"))?;
        let width: u32 = width.parse().map_err(|_| format!("bad hash width {width:?}"))?;
        if width == 0 {
            return Err("hash width must be at least 1".into());
        }
        Ok(LabelingChoice::Hash { width })
    }
}

impl fmt::Display for LabelingChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelingChoice::Identity => f.write_str("identity"),
            LabelingChoice::Hash { width } => write!(f, "hash:{width}"),
        }
    }
}

impl LabelingChoice {
    pub fn build(&self, seed: u64) -> AnyLabeling {
        match *self {
            LabelingChoice::Identity => AnyLabeling::Identity(IdentityLabeling),
            LabelingChoice::Hash { width } => {
                AnyLabeling::Hash(HashLabeling::new(width, seed).expect("width checked at parse time"))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnyLabeling {
    Identity(IdentityLabeling),
    Hash(HashLabeling),
}

impl AnyLabeling {
    pub fn seed(&self) -> Option<u64> {
        match self {
            AnyLabeling::Identity(_) => None,
            AnyLabeling::Hash(h) => Some(h.seed()),
        }
    }
}

impl Labeling for AnyLabeling {
    fn label(&self, x: &BitString) -> BigUint {
        match self {
            AnyLabeling::Identity(f) => f.label(x),
            AnyLabeling::Hash(f) => f.label(x),
        }
    }

    fn width(&self, n: usize) -> u64 {
        match self {
            AnyLabeling::Identity(f) => f.width(n),
            AnyLabeling::Hash(f) => f.width(n),
        }
    }
}

/// Runs `job` with the labeling built from `seed`, moving a hash labeling to
/// `seed + 1, seed + 2, ...` while it collides on the confusion set. Returns
/// the result, the accepted labeling and the number of rejected seeds.
pub fn with_reseed<T>(
    choice: LabelingChoice,
    seed: u64,
    cap: u32,
    mut job: impl FnMut(&AnyLabeling) -> Result<T, CoreError>,
) -> Result<(T, AnyLabeling, u32), CoreError> {
    let mut rejected = 0;
    loop {
        let f = choice.build(seed.wrapping_add(rejected as u64));
        match job(&f) {
            Err(CoreError::LabelingUnsound) if matches!(choice, LabelingChoice::Hash { .. }) && rejected < cap => {
                rejected += 1;
            }
            other => return other.map(|v| (v, f, rejected)),
        }
    }
}
