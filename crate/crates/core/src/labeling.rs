//! Labeling functions and the separating-modulus search of syndrome
//! compression.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use sha2::{Digest, Sha256};

use crate::balls::StringSet;
use crate::bitstring::BitString;
use crate::error::Error;
use crate::math::ceil_mul_log2;

/// Assigns each string an integer label below `2^width(|x|)`.
pub trait Labeling {
    fn label(&self, x: &BitString) -> BigUint;
    fn width(&self, n: usize) -> u64;
}

impl<L: Labeling + ?Sized> Labeling for &L {
    fn label(&self, x: &BitString) -> BigUint {
        (**self).label(x)
    }

    fn width(&self, n: usize) -> u64 {
        (**self).width(n)
    }
}

/// The string itself read as a binary number, behind a leading `1` and the
/// length in `ceil(log2(n+1))` bits. Injective over all lengths.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IdentityLabeling;

fn length_field_bits(n: usize) -> u64 {
    ceil_mul_log2(1, n as u64 + 1)
}

/// `x` as an unsigned integer, most significant bit first.
pub fn bits_to_biguint(x: &BitString) -> BigUint {
    if x.is_empty() {
        return BigUint::zero();
    }
    let mut bytes = Vec::with_capacity(x.as_words().len() * 8);
    for w in x.as_words() {
        bytes.extend_from_slice(&w.to_be_bytes());
    }
    let pad = x.as_words().len() * 64 - x.len();
    BigUint::from_bytes_be(&bytes) >> pad
}

impl Labeling for IdentityLabeling {
    fn label(&self, x: &BitString) -> BigUint {
        let n = x.len();
        let lbits = length_field_bits(n);
        let mut head = BigUint::one() << lbits;
        head |= BigUint::from(n);
        (head << n) | bits_to_biguint(x)
    }

    fn width(&self, n: usize) -> u64 {
        n as u64 + length_field_bits(n) + 1
    }
}

/// A seeded `width`-bit digest of the string (SHA-256 in counter mode over
/// seed, length and packed bits).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HashLabeling {
    width: u32,
    seed: u64,
}

impl HashLabeling {
    pub fn new(width: u32, seed: u64) -> Result<Self, Error> {
        if width == 0 {
            return Err(Error::InvalidParams("hash labeling width must be at least 1"));
        }
        Ok(HashLabeling { width, seed })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        HashLabeling { seed, ..*self }
    }
}

impl Labeling for HashLabeling {
    fn label(&self, x: &BitString) -> BigUint {
        let nbytes = (self.width as usize).div_ceil(8);
        let mut out = Vec::with_capacity(nbytes + 32);
        let mut counter = 0u32;
        while out.len() < nbytes {
            let mut h = Sha256::new();
            h.update(self.seed.to_be_bytes());
            h.update((x.len() as u64).to_be_bytes());
            h.update(counter.to_be_bytes());
            for w in x.as_words() {
                h.update(w.to_be_bytes());
            }
            out.extend_from_slice(&h.finalize());
            counter += 1;
        }
        out.truncate(nbytes);
        BigUint::from_bytes_be(&out) >> (nbytes * 8 - self.width as usize)
    }

    fn width(&self, _n: usize) -> u64 {
        self.width as u64
    }
}

/// `ceil(((τ²+1)(2τ²+1) + 2τ²(τ−1)) · log2 n)`.
pub fn ids_label_width_bound(tau: usize, n: usize) -> Result<u64, Error> {
    if tau == 0 || n < 2 {
        return Err(Error::InvalidParams("width bound needs tau >= 1 and n >= 2"));
    }
    let t2 = (tau * tau) as u64;
    let coeff = (t2 + 1) * (2 * t2 + 1) + 2 * t2 * (tau as u64 - 1);
    Ok(ceil_mul_log2(coeff, n as u64))
}

/// Whether `f` gives `x` a label distinct from every other member of `ball`.
pub fn verify_labeling<L: Labeling + ?Sized>(f: &L, ball: &StringSet, x: &BitString) -> bool {
    let lx = f.label(x);
    ball.iter().filter(|y| *y != x).all(|y| f.label(y) != lx)
}

/// An integer modulus, at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(BigUint);

impl Modulus {
    pub fn new(value: BigUint) -> Result<Self, Error> {
        if value < BigUint::from(2u32) {
            return Err(Error::InvalidParams("modulus must be at least 2"));
        }
        Ok(Modulus(value))
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    /// Bits needed for a residue: `ceil(log2 a)`.
    pub fn residue_bits(&self) -> u64 {
        (&self.0 - 1u32).bits()
    }

    pub fn reduce(&self, v: &BigUint) -> BigUint {
        v % &self.0
    }
}

impl From<u32> for Modulus {
    fn from(v: u32) -> Self {
        Modulus::new(BigUint::from(v)).expect("modulus must be at least 2")
    }
}

/// Whether `label_x mod a` differs from `l mod a` for every `l` in `others`.
pub fn separates(label_x: &BigUint, others: &[BigUint], a: &BigUint) -> bool {
    let rx = label_x % a;
    others.iter().all(|l| l % a != rx)
}

const KILLER_CACHE: usize = 16;

/// Labels flattened into little-endian 64-bit digits of equal count.
struct DigitTable {
    width: usize,
    digits: Vec<u64>,
}

impl DigitTable {
    fn new(labels: &[BigUint], width: usize) -> Self {
        let mut digits = Vec::with_capacity(labels.len() * width);
        for l in labels {
            let d = l.to_u64_digits();
            digits.extend_from_slice(&d);
            digits.resize(digits.len() + width - d.len(), 0);
        }
        DigitTable { width, digits }
    }

    #[inline]
    fn row(&self, i: usize) -> &[u64] {
        &self.digits[i * self.width..(i + 1) * self.width]
    }
}

#[inline]
fn residue(row: &[u64], powers: &[u64], a: u64) -> u64 {
    let mut acc: u128 = 0;
    for (d, p) in row.iter().zip(powers) {
        acc += (*d as u128) * (*p as u128);
    }
    (acc % a as u128) as u64
}

/// The smallest `a >= 2` with `label_x mod a` outside `{l mod a : l in others}`.
///
/// Candidates are tried in increasing order. The answer never exceeds the
/// largest label plus one, where residues equal the (distinct) labels.
pub fn find_separating_modulus(label_x: &BigUint, others: &[BigUint]) -> Result<Modulus, Error> {
    if others.iter().any(|l| l == label_x) {
        return Err(Error::NotSeparable);
    }
    let max = others.iter().fold(label_x, |m, l| if l > m { l } else { m });
    let limit = max + 1u32;
    let width = others
        .iter()
        .chain(core::iter::once(label_x))
        .map(|l| l.to_u64_digits().len())
        .max()
        .unwrap_or(0)
        .max(1);
    let table = DigitTable::new(others, width);
    let x_row = DigitTable::new(core::slice::from_ref(label_x), width);
    let fast_end = limit.to_u64().map_or(1u64 << 32, |l| l.min(1 << 32));

    let mut powers = alloc::vec![0u64; width];
    let mut killers: Vec<usize> = Vec::with_capacity(KILLER_CACHE);
    let mut next_slot = 0usize;
    let mut a = 2u64;
    while a <= fast_end {
        let mut p = 1 % a;
        let base = ((1u128 << 64) % a as u128) as u64;
        for slot in powers.iter_mut() {
            *slot = p;
            p = p * base % a;
        }
        let rx = residue(x_row.row(0), &powers, a);
        let cached = killers.iter().any(|&i| residue(table.row(i), &powers, a) == rx);
        if !cached {
            let hit = (0..others.len()).find(|&i| residue(table.row(i), &powers, a) == rx);
            match hit {
                None => return Modulus::new(BigUint::from(a)),
                Some(i) => {
                    if killers.len() < KILLER_CACHE {
                        killers.push(i);
                    } else {
                        killers[next_slot] = i;
                        next_slot = (next_slot + 1) % KILLER_CACHE;
                    }
                }
            }
        }
        a += 1;
    }

    let mut a = BigUint::from(a);
    loop {
        if separates(label_x, others, &a) {
            return Modulus::new(a);
        }
        debug_assert!(a <= limit);
        a += 1u32;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balls::edit_ball;
    use crate::bitstring::bits;

    fn b(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn naive_search(lx: &BigUint, others: &[BigUint]) -> BigUint {
        let mut a = b(2);
        while !separates(lx, others, &a) {
            a += 1u32;
        }
        a
    }

    #[test]
    fn modulus_examples() {
        assert_eq!(
            find_separating_modulus(&b(0), &[b(1), b(2), b(3)]).unwrap(),
            Modulus::from(4)
        );
        assert_eq!(find_separating_modulus(&b(5), &[]).unwrap(), Modulus::from(2));
        assert_eq!(find_separating_modulus(&b(5), &[b(3)]).unwrap(), Modulus::from(3));
        assert_eq!(find_separating_modulus(&b(5), &[b(3), b(5)]), Err(Error::NotSeparable));
    }

    #[test]
    fn modulus_search_reaches_termination_bound() {
        // residues of 0..=m collide with 0 for every a <= m
        let others: Vec<BigUint> = (1..=50).map(b).collect();
        assert_eq!(find_separating_modulus(&b(0), &others).unwrap(), Modulus::from(51));
    }

    #[test]
    fn modulus_search_matches_naive_on_random_sets() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for round in 0..200 {
            let size = (next() % 40) as usize;
            let bits_wide = 1 + (next() % 100) as u32;
            let mk = |v: u64, w: u64| (BigUint::from(v) << (w as usize)) | BigUint::from(w);
            let lx = mk(next() >> (64 - bits_wide.min(64)), round);
            let mut others: Vec<BigUint> = (0..size).map(|_| mk(next(), next() % 90)).collect();
            others.retain(|l| l != &lx);
            let fast = find_separating_modulus(&lx, &others).unwrap();
            assert_eq!(fast.value(), &naive_search(&lx, &others));
            assert!(fast.value() <= &(others.iter().chain([&lx]).max().unwrap() + 1u32));
        }
    }

    #[test]
    fn identity_labels_are_injective() {
        let f = IdentityLabeling;
        assert_ne!(f.label(&bits("01")), f.label(&bits("10")));
        assert_eq!(f.label(&bits("0110")), f.label(&bits("0110")));
        let mut all = Vec::new();
        for n in 0..=8usize {
            for v in 0..(1u64 << n) {
                let x = BitString::from_u64(v, n);
                let l = f.label(&x);
                assert!(l.bits() <= f.width(n));
                all.push(l);
            }
        }
        let count = all.len();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), count);
        assert_eq!(f.width(4), 4 + 3 + 1);
    }

    #[test]
    #[allow(clippy::unusual_byte_groupings)]
    fn identity_label_layout() {
        // 1 | 100 | 0110
        assert_eq!(IdentityLabeling.label(&bits("0110")), b(0b1_100_0110));
        assert_eq!(IdentityLabeling.label(&bits("")), b(1));
        let long: BitString = (0..130).map(|i| i % 7 == 0).collect();
        assert_eq!(bits_to_biguint(&long).bits(), 130);
    }

    #[test]
    fn hash_labels_are_deterministic_and_narrow() {
        let f = HashLabeling::new(12, 7).unwrap();
        let x = bits("0110100");
        assert_eq!(f.label(&x), f.label(&x));
        assert_ne!(f.label(&x), f.with_seed(8).label(&x));
        for n in [0, 1, 10, 500] {
            assert_eq!(f.width(n), 12);
        }
        let wide = HashLabeling::new(300, 1).unwrap();
        for v in 0..64u64 {
            let x = BitString::from_u64(v, 6);
            assert!(f.label(&x).bits() <= 12);
            assert!(wide.label(&x).bits() <= 300);
        }
        assert!(HashLabeling::new(0, 1).is_err());
    }

    #[test]
    fn width_bound_values() {
        assert_eq!(ids_label_width_bound(1, 256).unwrap(), 48);
        assert_eq!(ids_label_width_bound(2, 2).unwrap(), 53);
        assert_eq!(ids_label_width_bound(2, 4).unwrap(), 106);
        assert!(ids_label_width_bound(0, 4).is_err());
    }

    struct Constant;
    impl Labeling for Constant {
        fn label(&self, _: &BitString) -> BigUint {
            BigUint::zero()
        }
        fn width(&self, _: usize) -> u64 {
            1
        }
    }

    #[test]
    fn verify_labeling_cases() {
        let x = bits("0000");
        let ball = edit_ball(&x, 1, 1).unwrap();
        assert!(verify_labeling(&IdentityLabeling, &ball, &x));
        assert!(!verify_labeling(&Constant, &ball, &x));
        let single: StringSet = core::iter::once(x.clone()).collect();
        assert!(verify_labeling(&Constant, &single, &x));
    }

    #[test]
    fn hash_labeling_on_small_ball_matches_pairwise_check() {
        let x = bits("0000");
        let ball = edit_ball(&x, 1, 1).unwrap();
        assert_eq!(ball.len(), 12);
        for seed in 0..20 {
            let f = HashLabeling::new(4, seed).unwrap();
            let lx = f.label(&x);
            let collide = ball.iter().filter(|y| **y != x).any(|y| f.label(y) == lx);
            assert_eq!(verify_labeling(&f, &ball, &x), !collide);
        }
    }

    #[test]
    fn residue_bits() {
        assert_eq!(Modulus::from(2).residue_bits(), 1);
        assert_eq!(Modulus::from(4).residue_bits(), 2);
        assert_eq!(Modulus::from(5).residue_bits(), 3);
        assert!(Modulus::new(b(1)).is_err());
    }
}
