//! Redundancy benchmark: encoding length over random inputs, per `n`, with a
//! least-squares slope against `log2 n`.

use std::fmt;
use std::str::FromStr;

use dxsync_core::edits::{random_bitstring, seeded_rng};
use dxsync_core::{
    encoding_bit_length, sample_edit_trace, AverageCaseEncoding, BallEnumerator, Codec, EditParams, Encoding,
};
use serde::Serialize;

use crate::census::DensityRule;
use crate::labelings::{with_reseed, LabelingChoice};
use crate::numfmt::Sig6;
use crate::{job_seed, HarnessError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Worst,
    Average,
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "worst" => Ok(Scheme::Worst),
            "average" => Ok(Scheme::Average),
            _ => Err(format!("unknown scheme {s:?} (expected worst or average)")),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Worst => "worst",
            Scheme::Average => "average",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub n: usize,
    pub t: usize,
    pub k: usize,
    pub scheme: Scheme,
    pub labeling: String,
    pub trials: usize,
    pub mean_bits: Sig6,
    pub p95_bits: u64,
    pub min_bits: u64,
    pub max_bits: u64,
    pub mean_modulus_bits: Sig6,
    /// Average scheme only: trials that took the dense branch.
    pub dense_trials: Option<usize>,
    pub mean_dense_modulus_bits: Option<Sig6>,
    /// Hash seeds rejected for colliding on a confusion set.
    pub rejected_seeds: u64,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub n_grid: Vec<usize>,
    pub t: usize,
    pub k: usize,
    pub scheme: Scheme,
    pub labeling: LabelingChoice,
    pub trials: usize,
    pub seed: u64,
    pub density: DensityRule,
    pub budget: usize,
    pub reseed_cap: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    /// Slope of mean bits against log2 n.
    pub slope: Option<Sig6>,
    pub warning: Option<String>,
}

/// One trial's measurements.
#[derive(Debug, Clone, Copy)]
pub struct TrialResult {
    pub bits: u64,
    pub modulus_bits: u64,
    pub dense: bool,
    pub rejected_seeds: u32,
}

/// Encodes a random string, checks that a sampled edit of it decodes, and
/// measures the encoding.
pub fn run_trial(cfg: &BenchConfig, n: usize, trial: usize) -> Result<TrialResult, HarnessError> {
    let params = EditParams::new(n, cfg.t, cfg.k).map_err(HarnessError::stage("parameters"))?;
    let trial_seed = job_seed(cfg.seed, n as u64, 1000 + trial as u64);
    let x = random_bitstring(n, &mut seeded_rng(trial_seed));
    let balls = BallEnumerator::with_budget(cfg.budget);
    let density = match cfg.scheme {
        Scheme::Average => Some(cfg.density.config(n)?),
        Scheme::Worst => None,
    };
    let (enc, f, rejected) = with_reseed(cfg.labeling, trial_seed, cfg.reseed_cap, |f| {
        let codec = Codec::with_enumerator(f, balls);
        Ok(match &density {
            None => Encoding::Worst(codec.encode_worst(&x, params)?),
            Some(d) => Encoding::Average(codec.encode_average(&x, params, d)?),
        })
    })
    .map_err(HarnessError::stage("encode"))?;
    let (y, _) =
        sample_edit_trace(&x, cfg.t, cfg.k, job_seed(trial_seed, 0, 1)).map_err(HarnessError::stage("edit"))?;
    let decoded = Codec::with_enumerator(&f, balls)
        .decode(&y, &enc)
        .map_err(HarnessError::stage("decode"))?;
    if decoded != x {
        return Err(HarnessError::Violation(format!(
            "n={n} trial {trial}: decoded {decoded} for {x}"
        )));
    }
    let (modulus_bits, dense) = match &enc {
        Encoding::Worst(w) | Encoding::Average(AverageCaseEncoding::NonDense(w)) => (w.modulus.value().bits(), false),
        Encoding::Average(AverageCaseEncoding::Dense { modulus, .. }) => (modulus.value().bits(), true),
    };
    Ok(TrialResult {
        bits: encoding_bit_length(&enc),
        modulus_bits,
        dense,
        rejected_seeds: rejected,
    })
}

/// Nearest-rank 95th percentile of a sorted sample.
fn p95(sorted: &[u64]) -> u64 {
    let rank = (sorted.len() * 95).div_ceil(100).max(1);
    sorted[rank - 1]
}

fn mean(v: impl Iterator<Item = u64>) -> Option<f64> {
    let (sum, count) = v.fold((0u64, 0usize), |(s, c), x| (s + x, c + 1));
    (count > 0).then(|| sum as f64 / count as f64)
}

/// Ordinary least squares slope of `ys` against `xs`.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if xs.len() < 2 || sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}

pub fn redundancy_bench(cfg: &BenchConfig) -> Result<BenchReport, HarnessError> {
    if cfg.trials == 0 {
        return Err(HarnessError::Usage("trials must be at least 1".into()));
    }
    if cfg.n_grid.is_empty() {
        return Err(HarnessError::Usage("empty n grid".into()));
    }
    let mut grid = cfg.n_grid.clone();
    grid.sort_unstable();
    grid.dedup();
    let mut records = Vec::with_capacity(grid.len());
    for &n in &grid {
        let results = (0..cfg.trials)
            .map(|i| run_trial(cfg, n, i))
            .collect::<Result<Vec<_>, _>>()?;
        let mut bits: Vec<u64> = results.iter().map(|r| r.bits).collect();
        bits.sort_unstable();
        let dense: Vec<&TrialResult> = results.iter().filter(|r| r.dense).collect();
        let average = cfg.scheme == Scheme::Average;
        records.push(BenchRecord {
            n,
            t: cfg.t,
            k: cfg.k,
            scheme: cfg.scheme,
            labeling: cfg.labeling.to_string(),
            trials: cfg.trials,
            mean_bits: Sig6(mean(bits.iter().copied()).unwrap()),
            p95_bits: p95(&bits),
            min_bits: bits[0],
            max_bits: *bits.last().unwrap(),
            mean_modulus_bits: Sig6(mean(results.iter().map(|r| r.modulus_bits)).unwrap()),
            dense_trials: average.then_some(dense.len()),
            mean_dense_modulus_bits: mean(dense.iter().map(|r| r.modulus_bits)).filter(|_| average).map(Sig6),
            rejected_seeds: results.iter().map(|r| r.rejected_seeds as u64).sum(),
            seed: cfg.seed,
        });
    }
    let xs: Vec<f64> = records.iter().map(|r| (r.n as f64).log2()).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.mean_bits.0).collect();
    let slope = least_squares_slope(&xs, &ys);
    let warning = slope
        .is_none()
        .then(|| "slope fit skipped: fewer than two distinct n in the grid".to_string());
    Ok(BenchReport {
        records,
        slope: slope.map(Sig6),
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n_grid: Vec<usize>, t: usize, trials: usize) -> BenchConfig {
        BenchConfig {
            n_grid,
            t,
            k: 1,
            scheme: Scheme::Worst,
            labeling: LabelingChoice::Identity,
            trials,
            seed: 5,
            density: DensityRule::default(),
            budget: dxsync_core::balls::DEFAULT_MEMBER_BUDGET,
            reseed_cap: 64,
        }
    }

    #[test]
    fn slope_of_a_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [3.0, 7.0, 11.0, 15.0];
        assert!((least_squares_slope(&xs, &ys).unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(least_squares_slope(&[2.0], &[1.0]), None);
        assert_eq!(least_squares_slope(&[2.0, 2.0], &[1.0, 5.0]), None);
    }

    #[test]
    fn percentile() {
        let v: Vec<u64> = (1..=100).collect();
        assert_eq!(p95(&v), 95);
        assert_eq!(p95(&[7]), 7);
        assert_eq!(p95(&[1, 2, 3]), 3);
    }

    #[test]
    fn degenerate_grid_warns() {
        let report = redundancy_bench(&cfg(vec![16], 0, 1)).unwrap();
        assert_eq!(report.slope, None);
        assert!(report.warning.is_some());
        let r = &report.records[0];
        // no confusable strings: modulus 2, one residue bit
        assert_eq!((r.min_bits, r.max_bits), (3, 3));
    }

    #[test]
    fn records_are_consistent_and_reproducible() {
        let c = cfg(vec![24, 16], 1, 8);
        let a = redundancy_bench(&c).unwrap();
        assert_eq!(a, redundancy_bench(&c).unwrap());
        assert_eq!(a.records.iter().map(|r| r.n).collect::<Vec<_>>(), [16, 24]);
        for r in &a.records {
            assert!(r.min_bits as f64 <= r.mean_bits.0 && r.mean_bits.0 <= r.max_bits as f64);
            assert!(r.p95_bits <= r.max_bits);
        }
        assert!(a.slope.is_some());
    }

    #[test]
    fn average_scheme_with_hash_labeling() {
        let mut c = cfg(vec![12], 1, 6);
        c.scheme = Scheme::Average;
        c.labeling = LabelingChoice::Hash { width: 40 };
        c.density = DensityRule::Fixed {
            pattern: dxsync_core::bits("01"),
            window: Some(6),
        };
        let r = &redundancy_bench(&c).unwrap().records[0];
        assert!(r.dense_trials.is_some());
    }
}
