//! Harness around `dxsync-core`: end-to-end sync runs, ball and density
//! censuses, redundancy benchmarks and property suites, with CSV/JSON output.

pub mod bench;
pub mod census;
pub mod labelings;
pub mod numfmt;
pub mod output;
pub mod sync;
pub mod verify;

use std::fmt;

use dxsync_core::Error as CoreError;

/// Process exit status for each failure class.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VIOLATION: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const BUDGET: i32 = 3;
}

#[derive(Debug)]
pub enum HarnessError {
    Usage(String),
    /// A core error raised while running the named stage.
    Stage {
        stage: &'static str,
        source: CoreError,
    },
    Violation(String),
    Io(std::io::Error),
}

impl HarnessError {
    pub fn stage(stage: &'static str) -> impl FnOnce(CoreError) -> HarnessError {
        move |source| HarnessError::Stage { stage, source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Usage(_) => exit::USAGE,
            HarnessError::Violation(_) => exit::VIOLATION,
            HarnessError::Io(_) => exit::USAGE,
            HarnessError::Stage { source, .. } => match source {
                CoreError::BallTooLarge { .. } | CoreError::OracleTooLarge { .. } => exit::BUDGET,
                CoreError::InvalidBit { .. }
                | CoreError::InvalidEdit(_)
                | CoreError::InvalidParams(_)
                | CoreError::InvalidDensityConfig { .. } => exit::USAGE,
                _ => exit::VIOLATION,
            },
        }
    }
}

impl fmt::Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarnessError::Usage(m) => write!(f, "usage error: {m}"),
            HarnessError::Stage { stage, source } => write!(f, "{stage} failed: {source}"),
            HarnessError::Violation(m) => write!(f, "property violation: {m}"),
            HarnessError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for HarnessError {}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Io(e)
    }
}

/// Independent per-job seed derived from the run seed and a job key
/// (SplitMix64 finalizer over the combined words).
pub fn job_seed(seed: u64, a: u64, b: u64) -> u64 {
    let mut z = seed
        .wrapping_add(a.wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add(b.wrapping_mul(0xd1b5_4a32_d192_ed03));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
