//! Substring edits, single-symbol IDS edits and seeded edit traces.
//!
//! All positions in this module are 1-based.

use alloc::vec::Vec;

use rand::{RngExt, SeedableRng};
use rand_pcg::Pcg32;

use crate::bitstring::BitString;
use crate::error::Error;

/// Length `n`, edit rounds `t` and substring size bound `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EditParams {
    pub n: usize,
    pub t: usize,
    pub k: usize,
}

impl EditParams {
    pub fn new(n: usize, t: usize, k: usize) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::InvalidParams("n must be at least 1"));
        }
        if k == 0 {
            return Err(Error::InvalidParams("k must be at least 1"));
        }
        Ok(EditParams { n, t, k })
    }
}

/// Replace `deleted` (found at `position`) by `inserted`.
///
/// Either string may be empty: an empty `deleted` is a pure insertion before
/// `position`, an empty `inserted` a pure deletion.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubstringEdit {
    pub position: usize,
    pub deleted: BitString,
    pub inserted: BitString,
}

impl SubstringEdit {
    pub fn new(position: usize, deleted: BitString, inserted: BitString) -> Self {
        SubstringEdit {
            position,
            deleted,
            inserted,
        }
    }

    /// max(|u|, |v|): the smallest `k` for which this is a k-substring edit.
    pub fn size(&self) -> usize {
        self.deleted.len().max(self.inserted.len())
    }

    /// The edit that undoes this one on its output.
    pub fn inverse(&self) -> Self {
        SubstringEdit {
            position: self.position,
            deleted: self.inserted.clone(),
            inserted: self.deleted.clone(),
        }
    }

    pub fn apply(&self, x: &BitString) -> Result<BitString, Error> {
        apply_substring_edit(x, self)
    }

    /// The same edit as a sequence of at most `|u| + |v|` IDS edits.
    pub fn to_ids_edits(&self) -> Vec<IdsEdit> {
        let mut out = Vec::with_capacity(self.deleted.len() + self.inserted.len());
        for _ in 0..self.deleted.len() {
            out.push(IdsEdit::Deletion {
                position: self.position,
            });
        }
        for (j, symbol) in self.inserted.iter().enumerate() {
            out.push(IdsEdit::Insertion {
                position: self.position + j,
                symbol,
            });
        }
        out
    }
}

pub fn apply_substring_edit(x: &BitString, e: &SubstringEdit) -> Result<BitString, Error> {
    let ul = e.deleted.len();
    if e.position == 0 || ul > x.len() || e.position > x.len() - ul + 1 {
        return Err(Error::InvalidEdit("position out of range"));
    }
    let start = e.position - 1;
    if !x.matches_at(start, &e.deleted) {
        return Err(Error::InvalidEdit("deleted substring does not match"));
    }
    Ok(x.splice(start, ul, &e.inserted))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IdsEdit {
    /// Insert `symbol` so that it becomes the bit at `position` (in `[1, n+1]`).
    Insertion {
        position: usize,
        symbol: bool,
    },
    Deletion {
        position: usize,
    },
    Substitution {
        position: usize,
        symbol: bool,
    },
}

pub fn apply_ids_edit(x: &BitString, e: &IdsEdit) -> Result<BitString, Error> {
    let n = x.len();
    match *e {
        IdsEdit::Insertion { position, symbol } => {
            if position == 0 || position > n + 1 {
                return Err(Error::InvalidEdit("insertion position out of range"));
            }
            Ok(x.splice(position - 1, 0, &BitString::from_u64(symbol as u64, 1)))
        }
        IdsEdit::Deletion { position } => {
            if position == 0 || position > n {
                return Err(Error::InvalidEdit("deletion position out of range"));
            }
            Ok(x.splice(position - 1, 1, &BitString::new()))
        }
        IdsEdit::Substitution { position, symbol } => {
            if position == 0 || position > n {
                return Err(Error::InvalidEdit("substitution position out of range"));
            }
            let mut y = x.clone();
            y.set(position - 1, symbol);
            Ok(y)
        }
    }
}

/// The deterministic generator used for every seeded experiment: PCG32
/// (64-bit LCG state, XSH-RR output) seeded through `seed_from_u64`.
pub type SeedRng = Pcg32;

pub fn seeded_rng(seed: u64) -> SeedRng {
    Pcg32::seed_from_u64(seed)
}

pub fn random_bitstring<R: RngExt + ?Sized>(n: usize, rng: &mut R) -> BitString {
    let mut s = BitString::with_capacity(n);
    let mut left = n;
    while left > 0 {
        let c = left.min(32);
        s.push_bits(rng.random::<u32>() as u64, c);
        left -= c;
    }
    s
}

/// Draws one k-substring edit uniformly from all valid
/// (position, |u|, v) triples on `x`.
pub fn random_substring_edit<R: RngExt + ?Sized>(x: &BitString, k: usize, rng: &mut R) -> SubstringEdit {
    let n = x.len();
    let max_ul = k.min(n);
    // placements of a deleted block of length ul: n - ul + 1
    let placements: u64 = (0..=max_ul).map(|ul| (n - ul + 1) as u64).sum();
    let mut r = rng.random_range(0..placements);
    let mut ul = 0;
    loop {
        let here = (n - ul + 1) as u64;
        if r < here {
            break;
        }
        r -= here;
        ul += 1;
    }
    let start = r as usize;
    // v ranges over all strings of length 0..=k: 2^(k+1) - 1 of them
    let inserted = random_short_string(k, rng);
    SubstringEdit::new(start + 1, x.slice(start, ul), inserted)
}

fn random_short_string<R: RngExt + ?Sized>(k: usize, rng: &mut R) -> BitString {
    assert!(k < 63, "k too large for edit sampling");
    let count = (1u64 << (k + 1)) - 1;
    let s = rng.random_range(0..count);
    // s in [2^l - 1, 2^(l+1) - 1) picks length l
    let l = (64 - (s + 1).leading_zeros() - 1) as usize;
    BitString::from_u64(s + 1 - (1u64 << l), l)
}

/// Applies `t` uniformly sampled k-substring edits in sequence.
///
/// Deterministic in `(x, t, k, seed)` on every platform.
pub fn sample_edit_trace(
    x: &BitString,
    t: usize,
    k: usize,
    seed: u64,
) -> Result<(BitString, Vec<SubstringEdit>), Error> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be at least 1"));
    }
    let mut rng = seeded_rng(seed);
    let mut y = x.clone();
    let mut trace = Vec::with_capacity(t);
    for _ in 0..t {
        let e = random_substring_edit(&y, k, &mut rng);
        y = apply_substring_edit(&y, &e)?;
        trace.push(e);
    }
    Ok((y, trace))
}
