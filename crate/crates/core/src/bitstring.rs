//! Packed binary strings.
//!
//! Bits are stored most-significant-first inside 64-bit words, so bit `i`
//! (0-based) lives in word `i / 64` at shift `63 - i % 64`. Unused trailing
//! bits of the last word are always zero; equality, hashing and ordering can
//! therefore work on the words directly.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, FormatError};

const WORD: usize = 64;

/// A length-tracked sequence of bits.
///
/// Ordering is by length first, then numerically (which for equal lengths is
/// the lexicographic order of the bits).
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    len: usize,
    words: Vec<u64>,
}

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[inline]
fn low_mask(cnt: usize) -> u64 {
    if cnt >= WORD {
        u64::MAX
    } else {
        (1u64 << cnt) - 1
    }
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        BitString {
            len: 0,
            words: Vec::with_capacity(words_for(bits)),
        }
    }

    pub fn zeros(len: usize) -> Self {
        BitString {
            len,
            words: alloc::vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut s = Self::with_capacity(len);
        s.push_repeated(true, len);
        s
    }

    /// Builds a string from the low `len` bits of `value`, most significant first.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= WORD, "from_u64 takes at most 64 bits");
        let mut s = Self::with_capacity(len);
        s.push_bits(value, len);
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit at 0-based index `i`.
    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (WORD - 1 - i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (WORD - 1 - i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn push(&mut self, bit: bool) {
        self.push_bits(bit as u64, 1);
    }

    pub fn push_repeated(&mut self, bit: bool, count: usize) {
        let fill = if bit { u64::MAX } else { 0 };
        let mut left = count;
        while left > 0 {
            let c = left.min(WORD);
            self.push_bits(fill, c);
            left -= c;
        }
    }

    /// Appends the low `cnt` bits of `value` (most significant of those first).
    #[inline]
    pub fn push_bits(&mut self, value: u64, cnt: usize) {
        debug_assert!(cnt <= WORD);
        if cnt == 0 {
            return;
        }
        let value = value & low_mask(cnt);
        let offset = self.len % WORD;
        if offset == 0 {
            self.words.push(value << (WORD - cnt));
        } else {
            let free = WORD - offset;
            let last = self.words.len() - 1;
            if cnt <= free {
                self.words[last] |= value << (free - cnt);
            } else {
                self.words[last] |= value >> (cnt - free);
                self.words.push(value << (WORD - (cnt - free)));
            }
        }
        self.len += cnt;
    }

    /// Reads `cnt <= 64` bits starting at 0-based `start`, right-aligned.
    #[inline]
    pub fn get_bits(&self, start: usize, cnt: usize) -> u64 {
        debug_assert!(cnt <= WORD && start + cnt <= self.len);
        if cnt == 0 {
            return 0;
        }
        let w = start / WORD;
        let off = start % WORD;
        let hi = self.words[w] << off;
        let combined = if off + cnt > WORD {
            hi | (self.words[w + 1] >> (WORD - off))
        } else {
            hi
        };
        combined >> (WORD - cnt)
    }

    /// Appends `len` bits of `src` starting at 0-based `start`.
    pub fn extend_from_range(&mut self, src: &BitString, start: usize, len: usize) {
        assert!(start + len <= src.len, "range out of bounds");
        let mut pos = start;
        let end = start + len;
        while pos < end {
            let c = (end - pos).min(WORD);
            self.push_bits(src.get_bits(pos, c), c);
            pos += c;
        }
    }

    pub fn extend_from(&mut self, src: &BitString) {
        if self.len.is_multiple_of(WORD) {
            self.words.extend_from_slice(&src.words);
            self.len += src.len;
        } else {
            self.extend_from_range(src, 0, src.len);
        }
    }

    /// Substring of `len` bits starting at 0-based `start`.
    pub fn slice(&self, start: usize, len: usize) -> BitString {
        let mut s = BitString::with_capacity(len);
        s.extend_from_range(self, start, len);
        s
    }

    /// Replaces `del_len` bits at 0-based `start` with `ins`.
    pub fn splice(&self, start: usize, del_len: usize, ins: &BitString) -> BitString {
        assert!(start + del_len <= self.len, "splice range out of bounds");
        let mut s = BitString::with_capacity(self.len - del_len + ins.len);
        s.extend_from_range(self, 0, start);
        s.extend_from(ins);
        s.extend_from_range(self, start + del_len, self.len - start - del_len);
        s
    }

    /// Whether `len(other)` bits at 0-based `start` equal `other`.
    pub fn matches_at(&self, start: usize, other: &BitString) -> bool {
        if start + other.len > self.len {
            return false;
        }
        let mut pos = 0;
        while pos < other.len {
            let c = (other.len - pos).min(WORD);
            if self.get_bits(start + pos, c) != other.get_bits(pos, c) {
                return false;
            }
            pos += c;
        }
        true
    }

    /// 0-based start positions of every occurrence of `pattern`, ascending.
    pub fn occurrences(&self, pattern: &BitString) -> Vec<usize> {
        if pattern.len > self.len {
            return Vec::new();
        }
        let last = self.len - pattern.len;
        if pattern.len <= WORD {
            let want = pattern.get_bits(0, pattern.len);
            (0..=last).filter(|&i| self.get_bits(i, pattern.len) == want).collect()
        } else {
            (0..=last).filter(|&i| self.matches_at(i, pattern)).collect()
        }
    }

    pub fn contains(&self, pattern: &BitString) -> bool {
        if pattern.len > self.len {
            return false;
        }
        (0..=self.len - pattern.len).any(|i| self.matches_at(i, pattern))
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// The packed words, most significant bit first, trailing bits zero.
    pub fn as_words(&self) -> &[u64] {
        &self.words
    }

    /// Binary form: 2-byte big-endian bit length, then the bits packed
    /// most-significant-first with the final byte zero-padded.
    pub fn to_bytes(&self) -> Result<Vec<u8>, Error> {
        let len = u16::try_from(self.len).map_err(|_| Error::FieldTooLarge {
            field: "bit string",
            limit: u16::MAX as usize,
        })?;
        let nbytes = self.len.div_ceil(8);
        let mut out = Vec::with_capacity(2 + nbytes);
        out.extend_from_slice(&len.to_be_bytes());
        for b in 0..nbytes {
            let start = b * 8;
            let cnt = (self.len - start).min(8);
            out.push((self.get_bits(start, cnt) << (8 - cnt)) as u8);
        }
        Ok(out)
    }

    /// Parses the binary form from the front of `bytes`; returns the string
    /// and the number of bytes consumed.
    pub fn from_bytes(bytes: &[u8]) -> Result<(BitString, usize), FormatError> {
        if bytes.len() < 2 {
            return Err(FormatError::Truncated);
        }
        let len = u16::from_be_bytes([bytes[0], bytes[1]]) as usize;
        let nbytes = len.div_ceil(8);
        let body = bytes.get(2..2 + nbytes).ok_or(FormatError::Truncated)?;
        let mut s = BitString::with_capacity(len);
        for (b, &byte) in body.iter().enumerate() {
            let cnt = (len - b * 8).min(8);
            if cnt < 8 && byte & ((1u8 << (8 - cnt)) - 1) != 0 {
                return Err(FormatError::NonZeroPadding);
            }
            s.push_bits((byte >> (8 - cnt)) as u64, cnt);
        }
        Ok((s, 2 + nbytes))
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut s = BitString::new();
        for b in iter {
            s.push(b);
        }
        s
    }
}

impl FromStr for BitString {
    type Err = Error;

    /// Parses ASCII `'0'`/`'1'` text, most significant first.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut s = BitString::with_capacity(text.len());
        for (i, c) in text.bytes().enumerate() {
            match c {
                b'0' => s.push(false),
                b'1' => s.push(true),
                _ => return Err(Error::InvalidBit { index: i }),
            }
        }
        Ok(s)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("ε");
        }
        let mut buf = String::with_capacity(self.len);
        for b in self.iter() {
            buf.push(if b { '1' } else { '0' });
        }
        f.write_str(&buf)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

/// Parses a bit string literal; panics on anything but `0`/`1`.
///
/// Intended for tests and constants.
pub fn bits(text: &str) -> BitString {
    text.parse().expect("bit string literal")
}
