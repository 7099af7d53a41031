//! Acceptance criteria, one PASS/FAIL line each. Run with `--nocapture` to
//! see the lines; the test fails if any criterion fails.

use std::time::Instant;

use dxsync::bench::{redundancy_bench, BenchConfig, Scheme};
use dxsync::census::{ball_census, density_census, BallCensusConfig, DensityCensusConfig, DensityRule};
use dxsync::job_seed;
use dxsync::labelings::LabelingChoice;
use dxsync_core::balls::{ids_edit_ball, DEFAULT_MEMBER_BUDGET};
use dxsync_core::density::alpha_window;
use dxsync_core::edits::{random_bitstring, seeded_rng};
use dxsync_core::labeling::separates;
use dxsync_core::wire::{deserialize, serialize};
use dxsync_core::*;
use num_bigint::BigUint;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn all_strings(n: usize) -> impl Iterator<Item = BitString> {
    (0..1u64 << n).map(move |v| BitString::from_u64(v, n))
}

fn random_string(n: usize, seed: u64, i: u64) -> BitString {
    random_bitstring(n, &mut seeded_rng(job_seed(seed, n as u64, i)))
}

fn labels_except(set: &StringSet, x: &BitString) -> Vec<BigUint> {
    set.iter()
        .filter(|y| *y != x)
        .map(|y| IdentityLabeling.label(y))
        .collect()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = v.len();
    if m % 2 == 1 {
        v[m / 2]
    } else {
        (v[m / 2 - 1] + v[m / 2]) / 2.0
    }
}

fn worst_round_trips() -> Outcome {
    let codec = Codec::new(IdentityLabeling);
    let mut failures = 0u64;
    let mut pairs = 0u64;
    for n in 4..=8 {
        let params = EditParams::new(n, 1, 1).unwrap();
        for x in all_strings(n) {
            let enc = codec.encode_worst(&x, params).unwrap();
            for y in edit_ball(&x, 1, 1).unwrap().iter() {
                pairs += 1;
                failures += (codec.decode_worst(y, &enc).as_ref() != Ok(&x)) as u64;
            }
        }
    }
    let mut trials = 0u64;
    for (n, t, k) in [(32, 1, 2), (16, 2, 1)] {
        let params = EditParams::new(n, t, k).unwrap();
        for i in 0..1000u64 {
            let x = random_string(n, 1, i);
            let ok = codec.encode_worst(&x, params).and_then(|enc| {
                let (y, _) = sample_edit_trace(&x, t, k, job_seed(2, n as u64, i))?;
                codec.decode_worst(&y, &enc)
            });
            trials += 1;
            failures += (ok.as_ref() != Ok(&x)) as u64;
        }
    }
    outcome(
        failures == 0,
        format!(
            "{pairs} exhaustive pairs (n=4..8), {trials} random trials at (32,1,2) and (16,2,1); {failures} failures"
        ),
    )
}

fn average_round_trips() -> Outcome {
    let codec = Codec::new(IdentityLabeling);
    let density = DensityConfig::new(bits("01"), 5).unwrap();
    let params = EditParams::new(10, 1, 1).unwrap();
    let (mut pairs, mut failures, mut tag_errors, mut dense) = (0u64, 0u64, 0u64, 0u64);
    for x in all_strings(10) {
        let enc = codec.encode_average(&x, params, &density).unwrap();
        tag_errors += (enc.is_dense() != is_pattern_dense(&x, &bits("01"), 5).unwrap()) as u64;
        dense += enc.is_dense() as u64;
        for y in edit_ball(&x, 1, 1).unwrap().iter() {
            pairs += 1;
            failures += (codec.decode_average(y, &enc).as_ref() != Ok(&x)) as u64;
        }
    }
    outcome(
        failures == 0 && tag_errors == 0,
        format!("{pairs} pairs over 1024 strings ({dense} dense); {failures} failures, {tag_errors} tag mismatches"),
    )
}

fn oracle_equivalence() -> Outcome {
    let (mut checked, mut mismatches) = (0u64, 0u64);
    for n in 1..=8 {
        for x in all_strings(n) {
            for k in 1..=2 {
                checked += 1;
                mismatches += (confusion_ball(&x, 1, k).unwrap() != confusion_ball_oracle(&x, 1, k).unwrap()) as u64;
            }
        }
    }
    for n in [9, 10] {
        for i in 0..100u64 {
            let x = random_string(n, 3, i);
            let k = 1 + (i % 2) as usize;
            checked += 1;
            mismatches += (confusion_ball(&x, 1, k).unwrap() != confusion_ball_oracle(&x, 1, k).unwrap()) as u64;
        }
    }
    outcome(
        mismatches == 0,
        format!("{checked} balls compared; {mismatches} mismatches"),
    )
}

fn analytic_bounds() -> Outcome {
    let mut violations = 0u64;
    let mut rows = 0usize;
    for (t, k, grid) in [
        (1, 1, vec![4, 6, 8, 10, 12]),
        (1, 2, vec![4, 6, 8, 10]),
        (2, 1, vec![4, 6, 8]),
    ] {
        let cfg = BallCensusConfig {
            n_grid: grid,
            t,
            k,
            samples: 10,
            seed: 4,
            oracle: false,
            density: DensityRule::default(),
            budget: DEFAULT_MEMBER_BUDGET,
            strings: None,
        };
        // the census itself rejects a row above the bound
        match ball_census(&cfg) {
            Ok(r) => rows += r.len(),
            Err(e) => {
                eprintln!("census: {e}");
                violations += 1;
            }
        }
    }
    let zero = edit_ball(&bits("0000"), 2, 1).unwrap().len();
    let bound = ball_size_upper_bound(4, 1, 1);
    violations += (BigUint::from(zero) > bound) as u64;

    let mut containments = 0u64;
    for n in 1..=8 {
        for x in all_strings(n) {
            for k in 1..=2 {
                let conf = confusion_ball(&x, 1, k).unwrap();
                let double = edit_ball(&x, 2, k).unwrap();
                violations += (!conf.iter().all(|y| y.len() == n && double.contains(y))) as u64;
                let single = edit_ball(&x, 1, k).unwrap();
                violations += (!single.is_subset(&ids_edit_ball(&x, 2 * k).unwrap())) as u64;
                containments += 2;
            }
        }
    }
    outcome(
        violations == 0,
        format!(
            "{rows} census rows within the bound (|B_2(0000)| = {zero} <= {bound}), {containments} containment checks; {violations} violations"
        ),
    )
}

fn redundancy_slope() -> Outcome {
    let cfg = BenchConfig {
        n_grid: vec![64, 128, 256, 512],
        t: 1,
        k: 1,
        scheme: Scheme::Worst,
        labeling: LabelingChoice::Identity,
        trials: 200,
        seed: 5,
        density: DensityRule::default(),
        budget: DEFAULT_MEMBER_BUDGET,
        reseed_cap: 0,
    };
    match redundancy_bench(&cfg) {
        Ok(report) => {
            let means: Vec<String> = report
                .records
                .iter()
                .map(|r| format!("{}:{}", r.n, r.mean_bits))
                .collect();
            let slope = report.slope.map(|s| s.0).unwrap_or(f64::NAN);
            outcome(
                (3.0..=5.0).contains(&slope),
                format!(
                    "slope {slope:.4} over 200 trials per n (mean bits {}), target [3, 5]",
                    means.join(" ")
                ),
            )
        }
        Err(e) => outcome(false, format!("bench failed: {e}")),
    }
}

fn restricted_shrinkage() -> Outcome {
    let codec = Codec::new(IdentityLabeling);
    let (mut filtered_medians, mut literal_medians) = (Vec::new(), Vec::new());
    let mut violations = 0u64;
    let mut sampled = 0u64;
    for n in [32usize, 64, 128] {
        let density = DensityConfig::new(bits("01"), alpha_window(8, n)).unwrap();
        let params = EditParams::new(n, 1, 1).unwrap();
        let (mut filtered, mut literal) = (Vec::new(), Vec::new());
        let mut i = 0u64;
        while filtered.len() < 40 {
            let x = random_string(n, 6, i);
            i += 1;
            if !density.is_dense(&x) {
                continue;
            }
            sampled += 1;
            let report = codec.encode_average_report(&x, params, &density).unwrap();
            let worst = codec.encode_worst(&x, params).unwrap();
            let AverageCaseEncoding::Dense { modulus, .. } = &report.encoding else {
                violations += 1;
                continue;
            };
            violations += (modulus > &worst.modulus) as u64;
            let c = report.confusion_size as f64;
            filtered.push(report.filtered_size.unwrap() as f64 / c);
            literal.push(report.restricted_size.unwrap() as f64 / c);
        }
        filtered_medians.push(median(filtered));
        literal_medians.push(median(literal));
    }
    let decreasing = filtered_medians.windows(2).all(|w| w[1] < w[0]);
    let fmt = |v: &[f64]| v.iter().map(|m| format!("{m:.3e}")).collect::<Vec<_>>().join(" > ");
    outcome(
        decreasing && violations == 0,
        format!(
            "median hint-filtered/confusion ratio {} at n=32,64,128 (unfiltered dense ratio {}); {sampled} dense samples, {violations} modulus violations",
            fmt(&filtered_medians),
            literal_medians.iter().map(|m| format!("{m:.3}")).collect::<Vec<_>>().join(", "),
        ),
    )
}

fn density_probability() -> Outcome {
    let cfg = DensityCensusConfig {
        n_grid: vec![64, 256, 1024],
        rule: DensityRule::Alpha {
            pattern: bits("01"),
            alpha: 8,
        },
        samples: 10_000,
        seed: 7,
        exhaustive: false,
    };
    let rows = density_census(&cfg).unwrap();
    let within = rows.iter().all(|r| r.within_bound);
    let monotone = rows
        .windows(2)
        .all(|w| w[1].non_dense_fraction.0 <= w[0].non_dense_fraction.0);
    let exact = DensityCensusConfig {
        n_grid: (4..=10).collect(),
        rule: DensityRule::Fixed {
            pattern: bits("01"),
            window: None,
        },
        samples: 0,
        seed: 0,
        exhaustive: true,
    };
    let exact_rows = density_census(&exact).unwrap();
    let exact_ok = exact_rows
        .iter()
        .all(|r| r.non_dense_fraction.0 == (r.n as f64 + 1.0) / (1u64 << r.n) as f64 && r.non_dense == r.n as u64 + 1);
    let mc: Vec<String> = rows
        .iter()
        .map(|r| format!("n={} δ={} {}<= {}", r.n, r.delta, r.non_dense_fraction, r.union_bound))
        .collect();
    outcome(
        within && exact_ok,
        format!(
            "{} ({}non-increasing); exact (n+1)/2^n at n=4..10: {}",
            mc.join(", "),
            if monotone { "" } else { "not " },
            if exact_ok { "match" } else { "MISMATCH" }
        ),
    )
}

fn check_modulus(lx: &BigUint, others: &[BigUint], a: &BigUint, minimal: bool) -> (bool, bool, bool) {
    let sep = separates(lx, others, a);
    let max = others.iter().fold(lx, |m, l| m.max(l));
    let bounded = a <= &(max + 1u32);
    let min_ok = !minimal || others.len() > 10_000 || {
        let mut b = BigUint::from(2u32);
        let mut ok = true;
        while &b < a {
            if separates(lx, others, &b) {
                ok = false;
                break;
            }
            b += 1u32;
        }
        ok
    };
    (sep, min_ok, bounded)
}

fn modulus_properties() -> Outcome {
    let codec = Codec::new(IdentityLabeling);
    let (mut encodings, mut minimality_checked) = (0u64, 0u64);
    let (mut sep_fail, mut min_fail, mut bound_fail) = (0u64, 0u64, 0u64);
    let mut tally = |lx: &BigUint, others: &[BigUint], a: &Modulus, minimal: bool| {
        let (s, m, b) = check_modulus(lx, others, a.value(), minimal);
        encodings += 1;
        minimality_checked += (minimal && others.len() <= 10_000) as u64;
        sep_fail += !s as u64;
        min_fail += !m as u64;
        bound_fail += !b as u64;
    };
    let mut cases: Vec<(BitString, usize, usize)> = Vec::new();
    for n in 2..=8 {
        for x in all_strings(n) {
            cases.push((x.clone(), 1, 1));
            cases.push((x, 1, 2));
        }
    }
    for i in 0..100u64 {
        cases.push((random_string(32, 8, i), 1, 2));
        cases.push((random_string(14, 9, i), 2, 1));
    }
    for (x, t, k) in &cases {
        let enc = codec
            .encode_worst(x, EditParams::new(x.len(), *t, *k).unwrap())
            .unwrap();
        let others = labels_except(&confusion_ball(x, *t, *k).unwrap(), x);
        tally(&IdentityLabeling.label(x), &others, &enc.modulus, true);
    }
    // dense hints and reduced moduli, against the sets they were searched over
    let density = DensityConfig::new(bits("01"), 5).unwrap();
    for x in all_strings(10).filter(|x| density.is_dense(x)) {
        let lx = IdentityLabeling.label(&x);
        let params = EditParams::new(10, 1, 1).unwrap();
        let AverageCaseEncoding::Dense { hint, modulus, .. } = codec.encode_average(&x, params, &density).unwrap()
        else {
            unreachable!()
        };
        let dense_others = labels_except(&confusion_ball(&x, 1, 1).unwrap().filter(|y| density.is_dense(y)), &x);
        tally(&lx, &dense_others, &hint.modulus, true);
        let rx = hint.modulus.reduce(&lx);
        let filtered: Vec<BigUint> = dense_others
            .iter()
            .filter(|l| hint.modulus.reduce(l) == rx)
            .cloned()
            .collect();
        tally(&lx, &filtered, &modulus, true);
    }
    outcome(
        sep_fail + min_fail + bound_fail == 0,
        format!(
            "{encodings} moduli ({minimality_checked} checked for minimality); separation {sep_fail}, minimality {min_fail}, termination bound {bound_fail} violations"
        ),
    )
}

fn wire_format() -> Outcome {
    let codec = Codec::new(IdentityLabeling);
    let (mut lossless, mut rejected, mut total) = (0u64, 0u64, 0u64);
    let mut schemes = [0u64; 3];
    for i in 0..1000u64 {
        let n = 8 + (job_seed(10, i, 0) % 17) as usize;
        let k = 1 + (i % 2) as usize;
        let x = random_string(n, 11, i);
        let params = EditParams::new(n, 1, k).unwrap();
        let enc = if i % 3 == 0 {
            Encoding::Worst(codec.encode_worst(&x, params).unwrap())
        } else {
            let density = DensityConfig::new(bits("01"), 4 + (i % 4) as usize).unwrap();
            Encoding::Average(codec.encode_average(&x, params, &density).unwrap())
        };
        let bytes = serialize(&enc).unwrap();
        schemes[bytes[5] as usize] += 1;
        total += 1;
        let (y, _) = sample_edit_trace(&x, 1, k, job_seed(12, i, 0)).unwrap();
        let back = deserialize(&bytes);
        if back.as_ref() == Ok(&enc) && codec.decode(&y, back.as_ref().unwrap()).as_ref() == Ok(&x) {
            lossless += 1;
        }
        for (at, v) in [(0usize, bytes[0] ^ 0xff), (4, 0x02), (5, 0x03)] {
            let mut bad = bytes.clone();
            bad[at] = v;
            rejected += matches!(deserialize(&bad), Err(Error::Format(_))) as u64;
        }
    }
    outcome(
        lossless == total && rejected == 3 * total,
        format!(
            "{lossless}/{total} lossless (worst {}, dense {}, non-dense {}); {rejected}/{} corrupted headers rejected",
            schemes[0],
            schemes[1],
            schemes[2],
            3 * total
        ),
    )
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 9] = [
        ("worst-case round trip", worst_round_trips),
        ("average-case round trip", average_round_trips),
        ("oracle equivalence", oracle_equivalence),
        ("analytic bounds", analytic_bounds),
        ("redundancy slope", redundancy_slope),
        ("restricted shrinkage", restricted_shrinkage),
        ("density probability", density_probability),
        ("modulus properties", modulus_properties),
        ("wire format", wire_format),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {}: {status} {name}: {} [{:.1}s]",
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
        if !o.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
