//! Edit balls, confusion balls and restricted confusion balls.
//!
//! Enumeration is breadth-first: level `r` holds the strings first reached
//! with `r` edits, and only those are expanded again. When a target length is
//! known, strings that can no longer reach it in the remaining rounds are
//! pruned before they are stored.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashSet;
use num_bigint::BigUint;
use rustc_hash::FxBuildHasher;

use crate::bitstring::BitString;
use crate::density::DensityConfig;
use crate::edits::{apply_ids_edit, apply_substring_edit, IdsEdit, SubstringEdit};
use crate::error::Error;

pub const DEFAULT_MEMBER_BUDGET: usize = 50_000_000;
pub const DEFAULT_ORACLE_LIMIT: usize = 12;

type FastSet = HashSet<BitString, FxBuildHasher>;

/// A deduplicated set of bit strings.
#[derive(Clone, Default)]
pub struct StringSet {
    members: FastSet,
}

impl StringSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: &BitString) -> bool {
        self.members.contains(s)
    }

    pub fn insert(&mut self, s: BitString) -> bool {
        self.members.insert(s)
    }

    pub fn remove(&mut self, s: &BitString) -> bool {
        self.members.remove(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = &BitString> + '_ {
        self.members.iter()
    }

    pub fn is_subset(&self, other: &StringSet) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn retain(&mut self, f: impl FnMut(&BitString) -> bool) {
        self.members.retain(f);
    }

    pub fn filter(&self, mut f: impl FnMut(&BitString) -> bool) -> StringSet {
        self.iter().filter(|s| f(s)).cloned().collect()
    }

    /// Members sorted by (length, value).
    pub fn to_sorted_vec(&self) -> Vec<BitString> {
        let mut v: Vec<BitString> = self.members.iter().cloned().collect();
        v.sort_unstable();
        v
    }
}

impl PartialEq for StringSet {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for StringSet {}

impl fmt::Debug for StringSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.to_sorted_vec()).finish()
    }
}

impl FromIterator<BitString> for StringSet {
    fn from_iter<I: IntoIterator<Item = BitString>>(iter: I) -> Self {
        StringSet {
            members: iter.into_iter().collect(),
        }
    }
}

impl IntoIterator for StringSet {
    type Item = BitString;
    type IntoIter = hashbrown::hash_set::IntoIter<BitString>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.into_iter()
    }
}

impl<'a> IntoIterator for &'a StringSet {
    type Item = &'a BitString;
    type IntoIter = hashbrown::hash_set::Iter<'a, BitString>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// All strings of length `0..=k`, grouped by length.
struct ShortStrings {
    by_len: Vec<Vec<BitString>>,
}

impl ShortStrings {
    fn new(k: usize) -> Self {
        assert!(k < 32, "substring size bound too large to enumerate");
        let by_len = (0..=k)
            .map(|l| (0..1u64 << l).map(|v| BitString::from_u64(v, l)).collect())
            .collect();
        ShortStrings { by_len }
    }
}

/// Calls `emit` for every single k-substring edit of `z` whose length change
/// lies in `[min_delta, max_delta]`, skipping identity edits.
fn for_each_substring_neighbor(
    z: &BitString,
    k: usize,
    short: &ShortStrings,
    min_delta: isize,
    max_delta: isize,
    mut emit: impl FnMut(BitString),
) {
    let len = z.len();
    for i in 0..=len {
        for ul in 0..=k.min(len - i) {
            for vl in 0..=k {
                let d = vl as isize - ul as isize;
                if d < min_delta || d > max_delta {
                    continue;
                }
                for v in &short.by_len[vl] {
                    if vl == ul && z.matches_at(i, v) {
                        continue;
                    }
                    emit(z.splice(i, ul, v));
                }
            }
        }
    }
}

fn for_each_ids_neighbor(z: &BitString, mut emit: impl FnMut(BitString)) {
    let zero = BitString::from_u64(0, 1);
    let one = BitString::from_u64(1, 1);
    let empty = BitString::new();
    for i in 0..=z.len() {
        emit(z.splice(i, 0, &zero));
        emit(z.splice(i, 0, &one));
        if i < z.len() {
            emit(z.splice(i, 1, &empty));
            let flip = if z.get(i) { &zero } else { &one };
            emit(z.splice(i, 1, flip));
        }
    }
}

/// Enumerates balls under a member budget.
#[derive(Debug, Clone, Copy)]
pub struct BallEnumerator {
    budget: usize,
}

impl Default for BallEnumerator {
    fn default() -> Self {
        BallEnumerator {
            budget: DEFAULT_MEMBER_BUDGET,
        }
    }
}

impl BallEnumerator {
    pub fn with_budget(budget: usize) -> Self {
        BallEnumerator { budget }
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    fn check(&self, len: usize) -> Result<(), Error> {
        if len > self.budget {
            Err(Error::BallTooLarge { budget: self.budget })
        } else {
            Ok(())
        }
    }

    /// Breadth-first substring-edit expansion of `sources` for `rounds` rounds.
    /// With `target = Some(n)`, only strings that can still reach length `n`
    /// in the remaining rounds are kept.
    fn expand(
        &self,
        sources: Vec<BitString>,
        rounds: usize,
        k: usize,
        target: Option<usize>,
    ) -> Result<FastSet, Error> {
        let short = ShortStrings::new(k);
        let kk = k as isize;
        let mut seen: FastSet = sources.iter().cloned().collect();
        self.check(seen.len())?;
        let mut frontier = sources;
        for r in 1..=rounds {
            let last = r == rounds;
            let mut next = Vec::new();
            for z in &frontier {
                let (lo, hi) = match target {
                    Some(n) => {
                        let slack = ((rounds - r) * k) as isize;
                        let gap = n as isize - z.len() as isize;
                        ((gap - slack).max(-kk), (gap + slack).min(kk))
                    }
                    None => (-kk, kk),
                };
                if lo > hi {
                    continue;
                }
                for_each_substring_neighbor(z, k, &short, lo, hi, |w| {
                    if !seen.contains(&w) {
                        if !last {
                            next.push(w.clone());
                        }
                        seen.insert(w);
                    }
                });
                self.check(seen.len())?;
            }
            frontier = next;
            if frontier.is_empty() {
                break;
            }
        }
        Ok(seen)
    }

    /// Every string reachable from `x` by at most `t` k-substring edits.
    pub fn edit_ball(&self, x: &BitString, t: usize, k: usize) -> Result<StringSet, Error> {
        check_k(k)?;
        let members = self.expand(alloc::vec![x.clone()], t, k, None)?;
        Ok(StringSet { members })
    }

    /// The length-`n` members of the t-round ball around `y`.
    pub fn ball_of_length(&self, y: &BitString, t: usize, k: usize, n: usize) -> Result<StringSet, Error> {
        check_k(k)?;
        if y.len().abs_diff(n) > t * k {
            return Ok(StringSet::new());
        }
        let mut members = self.expand(alloc::vec![y.clone()], t, k, Some(n))?;
        members.retain(|s| s.len() == n);
        Ok(StringSet { members })
    }

    /// Every string reachable from `x` by at most `tau` IDS edits.
    pub fn ids_edit_ball(&self, x: &BitString, tau: usize) -> Result<StringSet, Error> {
        let mut seen: FastSet = FastSet::default();
        seen.insert(x.clone());
        let mut frontier = alloc::vec![x.clone()];
        for _ in 0..tau {
            let mut next = Vec::new();
            for z in &frontier {
                for_each_ids_neighbor(z, |w| {
                    if !seen.contains(&w) {
                        next.push(w.clone());
                        seen.insert(w);
                    }
                });
                self.check(seen.len())?;
            }
            frontier = next;
        }
        Ok(StringSet { members: seen })
    }

    /// Length-`|x|` strings whose t-round ball meets that of `x`.
    ///
    /// Computed as the length-`|x|` part of the t-round expansion of the whole
    /// ball around `x`, which is exact because every edit can be undone by one
    /// edit of the same size.
    pub fn confusion_ball(&self, x: &BitString, t: usize, k: usize) -> Result<StringSet, Error> {
        check_k(k)?;
        if t == 0 {
            return Ok(core::iter::once(x.clone()).collect());
        }
        let inner = self.expand(alloc::vec![x.clone()], t, k, None)?;
        let n = x.len();
        let mut members = self.expand(inner.into_iter().collect(), t, k, Some(n))?;
        members.retain(|s| s.len() == n);
        Ok(StringSet { members })
    }

    /// The pattern-dense members of the confusion ball of a dense `x`.
    pub fn restricted_confusion_ball(
        &self,
        x: &BitString,
        t: usize,
        k: usize,
        density: &DensityConfig,
    ) -> Result<StringSet, Error> {
        if !density.is_dense(x) {
            return Err(Error::NotDense);
        }
        let mut ball = self.confusion_ball(x, t, k)?;
        ball.retain(|y| density.is_dense(y));
        Ok(ball)
    }
}

fn check_k(k: usize) -> Result<(), Error> {
    if k == 0 {
        Err(Error::InvalidParams("k must be at least 1"))
    } else {
        Ok(())
    }
}

pub fn edit_ball(x: &BitString, t: usize, k: usize) -> Result<StringSet, Error> {
    BallEnumerator::default().edit_ball(x, t, k)
}

pub fn ids_edit_ball(x: &BitString, tau: usize) -> Result<StringSet, Error> {
    BallEnumerator::default().ids_edit_ball(x, tau)
}

pub fn confusion_ball(x: &BitString, t: usize, k: usize) -> Result<StringSet, Error> {
    BallEnumerator::default().confusion_ball(x, t, k)
}

pub fn restricted_confusion_ball(
    x: &BitString,
    t: usize,
    k: usize,
    density: &DensityConfig,
) -> Result<StringSet, Error> {
    BallEnumerator::default().restricted_confusion_ball(x, t, k, density)
}

/// `(prod_{i=0}^{2t} (n + i k)) · k^(2t) · 3^(2kt)`.
pub fn ball_size_upper_bound(n: usize, t: usize, k: usize) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for i in 0..=2 * t {
        acc *= BigUint::from(n + i * k);
    }
    acc *= BigUint::from(k).pow(2 * t as u32);
    acc *= BigUint::from(3u32).pow((2 * k * t) as u32);
    acc
}

/// Reference ball: applies every valid `SubstringEdit` (including
/// identities) for `t` rounds. Slow; used only by the oracle.
fn naive_edit_ball(x: &BitString, t: usize, k: usize) -> BTreeSet<BitString> {
    let mut current: BTreeSet<BitString> = BTreeSet::new();
    current.insert(x.clone());
    let short = ShortStrings::new(k);
    for _ in 0..t {
        let mut next = current.clone();
        for z in &current {
            for pos in 1..=z.len() + 1 {
                for ul in 0..=k {
                    if ul > z.len() + 1 - pos {
                        break;
                    }
                    let deleted = z.slice(pos - 1, ul);
                    for v in short.by_len.iter().flatten() {
                        let e = SubstringEdit::new(pos, deleted.clone(), v.clone());
                        next.insert(apply_substring_edit(z, &e).expect("enumerated edit is valid"));
                    }
                }
            }
        }
        current = next;
    }
    current
}

/// Confusion ball by exhaustive scan of all `2^|x|` candidates, checking ball
/// intersection directly.
pub fn confusion_ball_oracle(x: &BitString, t: usize, k: usize) -> Result<StringSet, Error> {
    confusion_ball_oracle_with_limit(x, t, k, DEFAULT_ORACLE_LIMIT)
}

pub fn confusion_ball_oracle_with_limit(x: &BitString, t: usize, k: usize, limit: usize) -> Result<StringSet, Error> {
    let n = x.len();
    if n > limit || n >= 64 {
        return Err(Error::OracleTooLarge { len: n, limit });
    }
    check_k(k)?;
    let bx = naive_edit_ball(x, t, k);
    let mut out = StringSet::new();
    for v in 0..(1u64 << n) {
        let y = BitString::from_u64(v, n);
        let by = naive_edit_ball(&y, t, k);
        if by.iter().any(|z| bx.contains(z)) {
            out.insert(y);
        }
    }
    Ok(out)
}

/// IDS edit ball by applying every `IdsEdit` for `tau` rounds. Used only as
/// a cross-check of the fast enumerator.
pub fn ids_edit_ball_naive(x: &BitString, tau: usize) -> StringSet {
    let mut current: BTreeSet<BitString> = BTreeSet::new();
    current.insert(x.clone());
    for _ in 0..tau {
        let mut next = current.clone();
        for z in &current {
            for position in 1..=z.len() + 1 {
                for symbol in [false, true] {
                    let edits = [
                        IdsEdit::Insertion { position, symbol },
                        IdsEdit::Substitution { position, symbol },
                    ];
                    for e in edits {
                        if let Ok(w) = apply_ids_edit(z, &e) {
                            next.insert(w);
                        }
                    }
                }
                if let Ok(w) = apply_ids_edit(z, &IdsEdit::Deletion { position }) {
                    next.insert(w);
                }
            }
        }
        current = next;
    }
    current.into_iter().collect()
}
