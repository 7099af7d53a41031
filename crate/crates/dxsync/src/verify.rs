//! Property suites run by `dxsync verify`.
//!
//! Each check draws its cases from the run seed, so a failing case can be
//! replayed exactly. Sizes are chosen to finish in seconds.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use dxsync_core::balls::ids_edit_ball_naive;
use dxsync_core::edits::{random_bitstring, random_substring_edit, seeded_rng};
use dxsync_core::labeling::separates;
use dxsync_core::wire::{deserialize, serialize};
use dxsync_core::{
    apply_ids_edit, ball_size_upper_bound, confusion_ball, confusion_ball_oracle, edit_ball, find_separating_modulus,
    ids_edit_ball, ids_label_width_bound, sample_edit_trace, verify_labeling, AverageCaseEncoding, BitString, Codec,
    DensityConfig, EditParams, Encoding, Error as CoreError, HashLabeling, IdentityLabeling, Labeling, Modulus,
    StringSet, SubstringEdit,
};
use num_bigint::BigUint;

use crate::job_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Edits,
    Balls,
    Labeling,
    Docex,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "edits" => Ok(Suite::Edits),
            "balls" => Ok(Suite::Balls),
            "labeling" => Ok(Suite::Labeling),
            "docex" => Ok(Suite::Docex),
            "all" => Ok(Suite::All),
            _ => Err(format!(
                "unknown suite {s:?} (expected edits, balls, labeling, docex or all)"
            )),
        }
    }
}

impl Suite {
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Edits, Suite::Balls, Suite::Labeling, Suite::Docex],
            s => vec![s],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Edits => "edits",
            Suite::Balls => "balls",
            Suite::Labeling => "labeling",
            Suite::Docex => "docex",
            Suite::All => "all",
        }
    }
}

pub type ModulusSearch = fn(&BigUint, &[BigUint]) -> Result<Modulus, CoreError>;

/// Deliberately wrong search used to check that the suite notices: returns
/// one less than the minimal separating modulus.
pub fn off_by_one_search(label_x: &BigUint, others: &[BigUint]) -> Result<Modulus, CoreError> {
    let a = find_separating_modulus(label_x, others)?;
    let two = BigUint::from(2u32);
    Modulus::new((a.value() - 1u32).max(two))
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub seed: u64,
    pub modulus_search: ModulusSearch,
}

impl VerifyOptions {
    pub fn new(seed: u64) -> Self {
        VerifyOptions {
            seed,
            modulus_search: find_separating_modulus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub property: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: u64,
    pub violations: Vec<Violation>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "ok" } else { "FAILED" };
        write!(
            f,
            "{:<9} {status}: {} checks, {} violations",
            self.suite.name(),
            self.checks,
            self.violations.len()
        )?;
        for v in self.violations.iter().take(10) {
            write!(f, "\n  {}: {}", v.property, v.detail)?;
        }
        if self.violations.len() > 10 {
            write!(f, "\n  ... {} more", self.violations.len() - 10)?;
        }
        Ok(())
    }
}

struct Checker {
    checks: u64,
    violations: Vec<Violation>,
}

impl Checker {
    fn new() -> Self {
        Checker {
            checks: 0,
            violations: Vec::new(),
        }
    }

    fn check(&mut self, property: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations.push(Violation {
                property,
                detail: detail(),
            });
        }
    }

    fn ok<T>(&mut self, property: &'static str, r: Result<T, CoreError>, ctx: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(property, false, || format!("{}: {e}", ctx()));
                None
            }
        }
    }

    fn finish(self, suite: Suite) -> SuiteReport {
        SuiteReport {
            suite,
            checks: self.checks,
            violations: self.violations,
        }
    }
}

pub fn run(suite: Suite, opts: &VerifyOptions) -> Vec<SuiteReport> {
    suite
        .expand()
        .into_iter()
        .map(|s| match s {
            Suite::Edits => edits_suite(opts),
            Suite::Balls => balls_suite(opts),
            Suite::Labeling => labeling_suite(opts),
            Suite::Docex => docex_suite(opts),
            Suite::All => unreachable!(),
        })
        .collect()
}

fn all_strings(n: usize) -> impl Iterator<Item = BitString> {
    (0..1u64 << n).map(move |v| BitString::from_u64(v, n))
}

fn pick(seed: u64, i: u64, salt: u64, lo: usize, hi: usize) -> usize {
    lo + (job_seed(seed, i, salt) % (hi - lo + 1) as u64) as usize
}

fn edits_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut c = Checker::new();
    for i in 0..400u64 {
        let n = pick(opts.seed, i, 1, 0, 24);
        let k = pick(opts.seed, i, 2, 1, 4);
        let mut rng = seeded_rng(job_seed(opts.seed, i, 3));
        let x = random_bitstring(n, &mut rng);
        let e = random_substring_edit(&x, k, &mut rng);
        let Some(y) = c.ok("edit applies", e.apply(&x), || format!("{x} {e:?}")) else {
            continue;
        };
        let delta = y.len() as isize - x.len() as isize;
        c.check("length change within k", delta.unsigned_abs() <= k, || {
            format!("{x} -> {y}, k={k}")
        });
        c.check("inverse restores", e.inverse().apply(&y).as_ref() == Ok(&x), || {
            format!("{x} {e:?}")
        });
        let mut z = x.clone();
        for ids in e.to_ids_edits() {
            match apply_ids_edit(&z, &ids) {
                Ok(next) => z = next,
                Err(_) => break,
            }
        }
        c.check("IDS replay", z == y, || {
            format!("{x} {e:?}: replay gave {z}, expected {y}")
        });
        c.check(
            "IDS count at most |u| + |v|",
            e.to_ids_edits().len() <= e.size() * 2,
            || format!("{e:?}"),
        );
    }
    for i in 0..60u64 {
        let n = pick(opts.seed, i, 4, 1, 8);
        let t = pick(opts.seed, i, 5, 0, 2);
        let k = pick(opts.seed, i, 6, 1, 2);
        let x = random_bitstring(n, &mut seeded_rng(job_seed(opts.seed, i, 7)));
        let s = job_seed(opts.seed, i, 8);
        let (Some((y, trace)), Some(again)) = (
            c.ok("trace samples", sample_edit_trace(&x, t, k, s), || format!("{x}")),
            c.ok("trace samples", sample_edit_trace(&x, t, k, s), || format!("{x}")),
        ) else {
            continue;
        };
        c.check("trace is deterministic", (y.clone(), trace.clone()) == again, || {
            format!("{x} seed {s}")
        });
        c.check("trace has t edits", trace.len() == t, || {
            format!("{x}: {} edits", trace.len())
        });
        if let Some(ball) = c.ok("edit ball", edit_ball(&x, t, k), || format!("{x}")) {
            c.check("trace lands in the edit ball", ball.contains(&y), || {
                format!("{x} -> {y}, t={t} k={k}")
            });
        }
    }
    c.finish(Suite::Edits)
}

/// Every edit of `z` with |u|, |v| ≤ k.
fn all_edits(z: &BitString, k: usize) -> Vec<SubstringEdit> {
    let mut out = Vec::new();
    for start in 0..=z.len() {
        for ul in 0..=k.min(z.len() - start) {
            for vl in 0..=k {
                for v in 0..1u64 << vl {
                    out.push(SubstringEdit::new(
                        start + 1,
                        z.slice(start, ul),
                        BitString::from_u64(v, vl),
                    ));
                }
            }
        }
    }
    out
}

fn naive_ball(x: &BitString, t: usize, k: usize) -> BTreeSet<BitString> {
    let mut seen: BTreeSet<BitString> = [x.clone()].into();
    let mut frontier = vec![x.clone()];
    for _ in 0..t {
        let mut next = Vec::new();
        for z in &frontier {
            for e in all_edits(z, k) {
                let y = e.apply(z).expect("edit built from z");
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    seen
}

fn set_of(s: &StringSet) -> BTreeSet<BitString> {
    s.iter().cloned().collect()
}

fn balls_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut c = Checker::new();
    // fast enumeration against the definition
    for n in 0..=5 {
        for x in all_strings(n) {
            for (t, k) in [(1, 1), (1, 2), (2, 1)] {
                if let Some(b) = c.ok("edit ball", edit_ball(&x, t, k), || format!("{x}")) {
                    c.check(
                        "edit ball matches definition",
                        set_of(&b) == naive_ball(&x, t, k),
                        || format!("x={x} t={t} k={k}"),
                    );
                }
            }
        }
    }
    // confusion ball against the oracle
    let mut cases: Vec<(BitString, usize, usize)> = Vec::new();
    for n in 1..=6 {
        for x in all_strings(n) {
            cases.push((x.clone(), 1, 1));
            cases.push((x, 1, 2));
        }
    }
    for i in 0..12u64 {
        let n = pick(opts.seed, i, 9, 7, 9);
        cases.push((random_bitstring(n, &mut seeded_rng(job_seed(opts.seed, i, 10))), 1, 1));
    }
    for (x, t, k) in &cases {
        let (Some(fast), Some(oracle)) = (
            c.ok("confusion ball", confusion_ball(x, *t, *k), || format!("{x}")),
            c.ok("oracle", confusion_ball_oracle(x, *t, *k), || format!("{x}")),
        ) else {
            continue;
        };
        c.check("confusion ball matches oracle", fast == oracle, || {
            format!("x={x} t={t} k={k}: {} vs {} members", fast.len(), oracle.len())
        });
    }
    // containment in the 2t ball, the size bound and symmetry
    for i in 0..40u64 {
        let n = pick(opts.seed, i, 11, 2, 12);
        let (t, k) = if i % 4 == 3 {
            (2, 1)
        } else {
            (1, pick(opts.seed, i, 12, 1, 2))
        };
        let x = random_bitstring(n, &mut seeded_rng(job_seed(opts.seed, i, 13)));
        let (Some(conf), Some(b2t), Some(bt)) = (
            c.ok("confusion ball", confusion_ball(&x, t, k), || format!("{x}")),
            c.ok("edit ball", edit_ball(&x, 2 * t, k), || format!("{x}")),
            c.ok("edit ball", edit_ball(&x, t, k), || format!("{x}")),
        ) else {
            continue;
        };
        let slice = b2t.filter(|y| y.len() == n);
        c.check(
            "confusion ball inside length-n slice of 2t ball",
            conf.is_subset(&slice),
            || format!("x={x} t={t} k={k}"),
        );
        let bound = ball_size_upper_bound(n, t, k);
        c.check(
            "2t ball within the size bound",
            BigUint::from(b2t.len()) <= bound,
            || format!("x={x} t={t} k={k}: {} > {bound}", b2t.len()),
        );
        for y in bt.iter().take(25) {
            if let Some(back) = c.ok("edit ball", edit_ball(y, t, k), || format!("{y}")) {
                c.check("edit balls are symmetric", back.contains(&x), || {
                    format!("{x} -> {y}, t={t} k={k}")
                });
            }
        }
    }
    // substring edits as IDS edits
    for n in 0..=6 {
        for x in all_strings(n) {
            for k in 1..=2 {
                let (Some(b), Some(ids)) = (
                    c.ok("edit ball", edit_ball(&x, 1, k), || format!("{x}")),
                    c.ok("IDS ball", ids_edit_ball(&x, 2 * k), || format!("{x}")),
                ) else {
                    continue;
                };
                c.check("edit ball inside IDS ball of radius 2tk", b.is_subset(&ids), || {
                    format!("x={x} k={k}")
                });
                if n <= 4 {
                    c.check(
                        "IDS ball matches naive",
                        set_of(&ids) == set_of(&ids_edit_ball_naive(&x, 2 * k)),
                        || format!("x={x} tau={}", 2 * k),
                    );
                }
            }
        }
    }
    c.finish(Suite::Balls)
}

/// Separation, minimality (when affordable) and the termination bound.
fn check_modulus(c: &mut Checker, search: ModulusSearch, lx: &BigUint, others: &[BigUint], ctx: &dyn Fn() -> String) {
    let Some(a) = c.ok("modulus search", search(lx, others), ctx) else {
        return;
    };
    let a = a.value();
    c.check("modulus separates", separates(lx, others, a), || {
        format!("{}: a={a}", ctx())
    });
    let max = others.iter().fold(lx, |m, l| m.max(l));
    c.check("modulus at most max label + 1", a <= &(max + 1u32), || {
        format!("{}: a={a}", ctx())
    });
    if others.len() <= 10_000 && a <= &BigUint::from(100_000u32) {
        let mut b = BigUint::from(2u32);
        let mut smaller = None;
        while &b < a {
            if separates(lx, others, &b) {
                smaller = Some(b.clone());
                break;
            }
            b += 1u32;
        }
        c.check("modulus is minimal", smaller.is_none(), || {
            format!("{}: a={a} but {} separates", ctx(), smaller.unwrap())
        });
    }
}

fn labeling_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut c = Checker::new();
    let f = IdentityLabeling;
    let mut seen = BTreeSet::new();
    for n in 0..=10 {
        for x in all_strings(n) {
            let l = f.label(&x);
            c.check("identity label fits its width", l.bits() <= f.width(n), || {
                format!("{x}")
            });
            c.check("identity labels are injective", seen.insert(l), || format!("{x}"));
        }
    }
    let search = opts.modulus_search;
    for i in 0..100u64 {
        let size = pick(opts.seed, i, 14, 0, 60);
        let lx = BigUint::from(job_seed(opts.seed, i, 15) >> pick(opts.seed, i, 16, 0, 63));
        let others: Vec<BigUint> = (0..size as u64)
            .map(|j| BigUint::from(job_seed(opts.seed, i, 100 + j) >> pick(opts.seed, i, 17, 40, 63)))
            .filter(|l| l != &lx)
            .collect();
        check_modulus(&mut c, search, &lx, &others, &|| {
            format!("random set {i} (x label {lx}, {} others)", others.len())
        });
    }
    for i in 0..30u64 {
        let n = pick(opts.seed, i, 18, 4, 14);
        let k = pick(opts.seed, i, 19, 1, 2);
        let x = random_bitstring(n, &mut seeded_rng(job_seed(opts.seed, i, 20)));
        let Some(ball) = c.ok("confusion ball", confusion_ball(&x, 1, k), || format!("{x}")) else {
            continue;
        };
        let lx = f.label(&x);
        let others: Vec<BigUint> = ball.iter().filter(|y| **y != x).map(|y| f.label(y)).collect();
        check_modulus(&mut c, search, &lx, &others, &|| {
            format!("confusion ball of {x}, k={k}")
        });
        // hash labeling of the IDS width, reseeded until it separates the ball
        let Some(width) = c.ok("width bound", ids_label_width_bound(2 * k, n.max(2)), || {
            format!("n={n}")
        }) else {
            continue;
        };
        let base = job_seed(opts.seed, i, 21);
        let accepted = (0..64).map(|r| base + r).find(|&s| {
            let h = HashLabeling::new(width as u32, s).expect("positive width");
            verify_labeling(&h, &ball, &x)
        });
        c.check("hash labeling accepted within 64 seeds", accepted.is_some(), || {
            format!("x={x} k={k} width={width}")
        });
    }
    c.finish(Suite::Labeling)
}

fn post_hoc_separation(c: &mut Checker, x: &BitString, t: usize, k: usize, modulus: &Modulus) {
    let f = IdentityLabeling;
    if let Some(ball) = c.ok("confusion ball", confusion_ball(x, t, k), || format!("{x}")) {
        let others: Vec<BigUint> = ball.iter().filter(|y| *y != x).map(|y| f.label(y)).collect();
        c.check(
            "worst-case modulus separates",
            separates(&f.label(x), &others, modulus.value()),
            || format!("x={x} t={t} k={k} a={}", modulus.value()),
        );
    }
}

fn docex_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut c = Checker::new();
    let codec = Codec::new(IdentityLabeling);
    let round_trip = |c: &mut Checker, x: &BitString, t: usize, k: usize, ys: &mut dyn Iterator<Item = BitString>| {
        let params = EditParams::new(x.len(), t, k).expect("k >= 1");
        let Some(enc) = c.ok("encode", codec.encode_worst(x, params), || format!("{x}")) else {
            return;
        };
        c.check("residue below modulus", enc.residue < *enc.modulus.value(), || {
            format!("{x}")
        });
        post_hoc_separation(c, x, t, k, &enc.modulus);
        for y in ys {
            let got = codec.decode_worst(&y, &enc);
            c.check("worst-case round trip", got.as_ref() == Ok(x), || {
                format!("x={x} y={y} t={t} k={k}: {got:?}")
            });
        }
    };
    for n in 1..=7 {
        for x in all_strings(n) {
            let ball = edit_ball(&x, 1, 1).expect("small ball");
            round_trip(&mut c, &x, 1, 1, &mut ball.into_iter());
        }
    }
    for i in 0..30u64 {
        let (n, t, k) = if i % 3 == 0 { (12, 2, 1) } else { (24, 1, 2) };
        let x = random_bitstring(n, &mut seeded_rng(job_seed(opts.seed, i, 22)));
        let mut ys = (0..10u64).map(|j| {
            sample_edit_trace(&x, t, k, job_seed(opts.seed, i, 200 + j))
                .expect("k >= 1")
                .0
        });
        round_trip(&mut c, &x, t, k, &mut ys);
    }

    let density = DensityConfig::new(dxsync_core::bits("01"), 5).expect("valid");
    for i in 0..60u64 {
        let x = random_bitstring(10, &mut seeded_rng(job_seed(opts.seed, i, 23)));
        let params = EditParams::new(10, 1, 1).expect("valid");
        let (Some(enc), Some(worst)) = (
            c.ok("encode average", codec.encode_average(&x, params, &density), || {
                format!("{x}")
            }),
            c.ok("encode", codec.encode_worst(&x, params), || format!("{x}")),
        ) else {
            continue;
        };
        c.check("branch matches density", enc.is_dense() == density.is_dense(&x), || {
            format!("{x}")
        });
        match &enc {
            AverageCaseEncoding::Dense { modulus, .. } => {
                c.check(
                    "dense modulus at most worst-case modulus",
                    modulus <= &worst.modulus,
                    || format!("x={x}: {} > {}", modulus.value(), worst.modulus.value()),
                );
            }
            AverageCaseEncoding::NonDense(w) => {
                c.check("non-dense branch equals worst case", w == &worst, || format!("{x}"));
            }
        }
        for y in edit_ball(&x, 1, 1).expect("small ball").iter() {
            let got = codec.decode_average(y, &enc);
            c.check("average-case round trip", got.as_ref() == Ok(&x), || {
                format!("x={x} y={y}: {got:?}")
            });
        }
        for e in [Encoding::Worst(worst), Encoding::Average(enc)] {
            let back = serialize(&e).and_then(|b| deserialize(&b));
            c.check("wire round trip", back.as_ref() == Ok(&e), || format!("{x}: {back:?}"));
        }
    }
    c.finish(Suite::Docex)
}
