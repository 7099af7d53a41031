//! Ball and density censuses.

use dxsync_core::balls::DEFAULT_ORACLE_LIMIT;
use dxsync_core::density::alpha_window;
use dxsync_core::edits::{random_bitstring, seeded_rng};
use dxsync_core::{
    ball_size_upper_bound, confusion_ball_oracle, density_preset, BallEnumerator, BitString, DensityConfig,
};
use serde::Serialize;

use crate::numfmt::Sig6;
use crate::{job_seed, HarnessError};

/// How the density window is chosen for each `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DensityRule {
    /// `δ = ceil(alpha · log2 n)` with the given pattern.
    Alpha { pattern: BitString, alpha: u64 },
    /// A fixed `δ`; `None` means `δ = n`.
    Fixed { pattern: BitString, window: Option<usize> },
    /// `p = 0^k 1^k`, `δ = ceil(k · 2^(2k+3) · log2 n)`.
    Preset { k: usize },
}

impl DensityRule {
    pub fn config(&self, n: usize) -> Result<DensityConfig, HarnessError> {
        let usage = |e: dxsync_core::Error| HarnessError::Usage(format!("density rule at n={n}: {e}"));
        match self {
            DensityRule::Alpha { pattern, alpha } => {
                DensityConfig::new(pattern.clone(), alpha_window(*alpha, n)).map_err(usage)
            }
            DensityRule::Fixed { pattern, window } => {
                DensityConfig::new(pattern.clone(), window.unwrap_or(n)).map_err(usage)
            }
            DensityRule::Preset { k } => density_preset(*k, n).map_err(usage),
        }
    }
}

impl Default for DensityRule {
    fn default() -> Self {
        DensityRule::Alpha {
            pattern: dxsync_core::bits("01"),
            alpha: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BallCensusRecord {
    pub n: usize,
    pub t: usize,
    pub k: usize,
    pub string: String,
    /// |B_2t(x)|, the quantity the bound covers.
    pub ball_size: usize,
    pub bound: String,
    /// Dense members of C_t(x), when x is dense under the census rule.
    pub restricted_size: Option<usize>,
    /// |B_t(x)|.
    pub edit_ball_size: usize,
    /// |C_t(x)|.
    pub confusion_size: usize,
    pub oracle_checked: bool,
}

#[derive(Debug, Clone)]
pub struct BallCensusConfig {
    pub n_grid: Vec<usize>,
    pub t: usize,
    pub k: usize,
    pub samples: usize,
    pub seed: u64,
    pub oracle: bool,
    pub density: DensityRule,
    pub budget: usize,
    /// Census these strings instead of sampling.
    pub strings: Option<Vec<BitString>>,
}

fn census_one(x: &BitString, cfg: &BallCensusConfig, balls: &BallEnumerator) -> Result<BallCensusRecord, HarnessError> {
    let (n, t, k) = (x.len(), cfg.t, cfg.k);
    let stage = HarnessError::stage;
    let bt = balls.edit_ball(x, t, k).map_err(stage("edit ball"))?;
    let b2t = balls.edit_ball(x, 2 * t, k).map_err(stage("edit ball"))?;
    let bound = ball_size_upper_bound(n, t, k);
    if num_bigint::BigUint::from(b2t.len()) > bound {
        return Err(HarnessError::Violation(format!(
            "|B_2t({x})| = {} exceeds the bound {bound}",
            b2t.len()
        )));
    }
    let conf = balls.confusion_ball(x, t, k).map_err(stage("confusion ball"))?;
    let oracle_checked = cfg.oracle && n <= DEFAULT_ORACLE_LIMIT;
    if oracle_checked {
        let oracle = confusion_ball_oracle(x, t, k).map_err(stage("oracle"))?;
        if oracle != conf {
            return Err(HarnessError::Violation(format!(
                "confusion ball of {x} differs from the oracle ({} vs {} members)",
                conf.len(),
                oracle.len()
            )));
        }
    }
    let density = cfg.density.config(n)?;
    let restricted_size = density
        .is_dense(x)
        .then(|| conf.iter().filter(|y| density.is_dense(y)).count());
    Ok(BallCensusRecord {
        n,
        t,
        k,
        string: x.to_string(),
        edit_ball_size: bt.len(),
        ball_size: b2t.len(),
        bound: bound.to_string(),
        confusion_size: conf.len(),
        restricted_size,
        oracle_checked,
    })
}

/// One row per sampled string, sorted by `(n, string)`.
pub fn ball_census(cfg: &BallCensusConfig) -> Result<Vec<BallCensusRecord>, HarnessError> {
    if cfg.k == 0 {
        return Err(HarnessError::Usage("k must be at least 1".into()));
    }
    if cfg.oracle {
        if let Some(&n) = cfg.n_grid.iter().find(|&&n| n > DEFAULT_ORACLE_LIMIT) {
            return Err(HarnessError::Stage {
                stage: "oracle",
                source: dxsync_core::Error::OracleTooLarge {
                    len: n,
                    limit: DEFAULT_ORACLE_LIMIT,
                },
            });
        }
    }
    let balls = BallEnumerator::with_budget(cfg.budget);
    let strings: Vec<BitString> = match &cfg.strings {
        Some(s) => s.clone(),
        None => cfg
            .n_grid
            .iter()
            .flat_map(|&n| {
                let mut rng = seeded_rng(job_seed(cfg.seed, n as u64, 0));
                (0..cfg.samples).map(move |_| random_bitstring(n, &mut rng))
            })
            .collect(),
    };
    let mut rows = strings
        .iter()
        .map(|x| census_one(x, cfg, &balls))
        .collect::<Result<Vec<_>, _>>()?;
    rows.sort_by(|a, b| (a.n, &a.string).cmp(&(b.n, &b.string)));
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityCensusRecord {
    pub n: usize,
    pub pattern: String,
    pub delta: usize,
    pub samples: u64,
    pub exhaustive: bool,
    pub non_dense: u64,
    pub non_dense_fraction: Sig6,
    pub std_error: Sig6,
    pub union_bound: Sig6,
    pub within_bound: bool,
}

#[derive(Debug, Clone)]
pub struct DensityCensusConfig {
    pub n_grid: Vec<usize>,
    pub rule: DensityRule,
    pub samples: u64,
    pub seed: u64,
    /// Enumerate all `2^n` strings instead of sampling (n ≤ 24).
    pub exhaustive: bool,
}

pub const EXHAUSTIVE_LIMIT: usize = 24;

/// `(n − δ + 1) · (1 − 2^−|p|)^⌊δ/|p|⌋`: a union bound over windows, each
/// split into ⌊δ/|p|⌋ disjoint blocks that must all miss `p`.
pub fn union_bound(n: usize, pattern_len: usize, delta: usize) -> f64 {
    let windows = n.saturating_sub(delta) + 1;
    let miss = 1.0 - 0.5f64.powi(pattern_len as i32);
    windows as f64 * miss.powi((delta / pattern_len) as i32)
}

pub fn density_census(cfg: &DensityCensusConfig) -> Result<Vec<DensityCensusRecord>, HarnessError> {
    let mut rows = Vec::with_capacity(cfg.n_grid.len());
    for &n in &cfg.n_grid {
        let density = cfg.rule.config(n)?;
        let (samples, non_dense) = if cfg.exhaustive {
            if n > EXHAUSTIVE_LIMIT {
                return Err(HarnessError::Usage(format!(
                    "exhaustive census is limited to n <= {EXHAUSTIVE_LIMIT}"
                )));
            }
            let total = 1u64 << n;
            let bad = (0..total)
                .filter(|&v| !density.is_dense(&BitString::from_u64(v, n)))
                .count() as u64;
            (total, bad)
        } else {
            if cfg.samples == 0 {
                return Err(HarnessError::Usage("samples must be at least 1".into()));
            }
            let mut rng = seeded_rng(job_seed(cfg.seed, n as u64, 1));
            let bad = (0..cfg.samples)
                .filter(|_| !density.is_dense(&random_bitstring(n, &mut rng)))
                .count() as u64;
            (cfg.samples, bad)
        };
        let frac = non_dense as f64 / samples as f64;
        let se = if cfg.exhaustive {
            0.0
        } else {
            (frac * (1.0 - frac) / samples as f64).sqrt()
        };
        let bound = union_bound(n, density.pattern().len(), density.window());
        rows.push(DensityCensusRecord {
            n,
            pattern: density.pattern().to_string(),
            delta: density.window(),
            samples,
            exhaustive: cfg.exhaustive,
            non_dense,
            non_dense_fraction: Sig6(frac),
            std_error: Sig6(se),
            union_bound: Sig6(bound),
            within_bound: frac <= bound + 3.0 * se,
        });
    }
    rows.sort_by_key(|r| (r.n, r.delta));
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use dxsync_core::bits;

    #[test]
    fn union_bound_values() {
        // (64 − 48 + 1) · (3/4)^24
        let expect = 17.0 * 0.75f64.powi(24);
        assert!((union_bound(64, 2, 48) - expect).abs() < 1e-15);
        assert_eq!(union_bound(4, 2, 4), 0.5625);
    }

    #[test]
    fn full_window_count_matches_closed_form() {
        // without 01 a string is 1^a 0^b: n + 1 of them
        let cfg = DensityCensusConfig {
            n_grid: (4..=10).collect(),
            rule: DensityRule::Fixed {
                pattern: bits("01"),
                window: None,
            },
            samples: 0,
            seed: 0,
            exhaustive: true,
        };
        for r in density_census(&cfg).unwrap() {
            assert_eq!(r.non_dense, r.n as u64 + 1);
            assert_eq!(r.samples, 1 << r.n);
        }
    }

    #[test]
    fn window_shorter_than_pattern_is_usage_error() {
        let rule = DensityRule::Fixed {
            pattern: bits("0011"),
            window: Some(3),
        };
        assert!(matches!(rule.config(16), Err(HarnessError::Usage(_))));
    }

    #[test]
    fn zero_string_census_row() {
        let cfg = BallCensusConfig {
            n_grid: vec![4],
            t: 1,
            k: 1,
            samples: 0,
            seed: 0,
            oracle: true,
            density: DensityRule::default(),
            budget: dxsync_core::balls::DEFAULT_MEMBER_BUDGET,
            strings: Some(vec![bits("0000")]),
        };
        let rows = ball_census(&cfg).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].edit_ball_size, 12);
        assert_eq!(rows[0].bound, "1080");
        assert!(rows[0].ball_size <= 1080);
        assert_eq!(rows[0].confusion_size, 11);
        assert_eq!(rows[0].restricted_size, None);
    }

    #[test]
    fn zero_rounds_row() {
        let cfg = BallCensusConfig {
            n_grid: vec![6],
            t: 0,
            k: 2,
            samples: 3,
            seed: 9,
            oracle: false,
            density: DensityRule::default(),
            budget: 1000,
            strings: None,
        };
        for r in ball_census(&cfg).unwrap() {
            assert_eq!((r.edit_ball_size, r.ball_size, r.confusion_size), (1, 1, 1));
        }
    }
}
