//! Byte layout of an encoding (all integers big-endian):
//!
//! ```text
//! "DXSE" | version 0x01 | scheme | n: u32 | t: u8 | k: u8 | payload
//! scheme 0x00 worst-case, 0x02 average non-dense: modulus, residue
//! scheme 0x01 average dense: pattern (u16 bit length + packed bits), window: u32,
//!                            hint modulus, hint residue, modulus, residue
//! integer field: u16 byte length L, then L magnitude bytes
//! ```

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::bitstring::BitString;
use crate::density::DensityConfig;
use crate::docex::{AverageCaseEncoding, Encoding, Hint, WorstCaseEncoding};
use crate::edits::EditParams;
use crate::error::{Error, FormatError};
use crate::labeling::Modulus;

pub const MAGIC: [u8; 4] = *b"DXSE";
pub const VERSION: u8 = 0x01;
pub const SCHEME_WORST: u8 = 0x00;
pub const SCHEME_DENSE: u8 = 0x01;
pub const SCHEME_NON_DENSE: u8 = 0x02;
pub const HEADER_LEN: usize = 12;

fn put_int(out: &mut Vec<u8>, v: &BigUint) -> Result<(), Error> {
    let bytes = if v.is_zero() { Vec::new() } else { v.to_bytes_be() };
    let len = u16::try_from(bytes.len()).map_err(|_| Error::FieldTooLarge {
        field: "integer",
        limit: u16::MAX as usize,
    })?;
    out.extend_from_slice(&len.to_be_bytes());
    out.extend_from_slice(&bytes);
    Ok(())
}

fn put_pair(out: &mut Vec<u8>, modulus: &Modulus, residue: &BigUint) -> Result<(), Error> {
    put_int(out, modulus.value())?;
    put_int(out, residue)
}

pub fn serialize(enc: &Encoding) -> Result<Vec<u8>, Error> {
    let params = enc.params();
    let scheme = match enc {
        Encoding::Worst(_) => SCHEME_WORST,
        Encoding::Average(AverageCaseEncoding::Dense { .. }) => SCHEME_DENSE,
        Encoding::Average(AverageCaseEncoding::NonDense(_)) => SCHEME_NON_DENSE,
    };
    let n = u32::try_from(params.n).map_err(|_| Error::FieldTooLarge {
        field: "n",
        limit: u32::MAX as usize,
    })?;
    let t = u8::try_from(params.t).map_err(|_| Error::FieldTooLarge { field: "t", limit: 255 })?;
    let k = u8::try_from(params.k).map_err(|_| Error::FieldTooLarge { field: "k", limit: 255 })?;

    let mut out = Vec::with_capacity(64);
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(scheme);
    out.extend_from_slice(&n.to_be_bytes());
    out.push(t);
    out.push(k);
    match enc {
        Encoding::Worst(w) | Encoding::Average(AverageCaseEncoding::NonDense(w)) => {
            put_pair(&mut out, &w.modulus, &w.residue)?;
        }
        Encoding::Average(AverageCaseEncoding::Dense {
            density,
            hint,
            residue,
            modulus,
            ..
        }) => {
            out.extend_from_slice(&density.pattern().to_bytes()?);
            let window = u32::try_from(density.window()).map_err(|_| Error::FieldTooLarge {
                field: "window",
                limit: u32::MAX as usize,
            })?;
            out.extend_from_slice(&window.to_be_bytes());
            put_pair(&mut out, &hint.modulus, &hint.residue)?;
            put_pair(&mut out, modulus, residue)?;
        }
    }
    Ok(out)
}

struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], FormatError> {
        if self.buf.len() < n {
            return Err(FormatError::Truncated);
        }
        let (head, rest) = self.buf.split_at(n);
        self.buf = rest;
        Ok(head)
    }

    fn u8(&mut self) -> Result<u8, FormatError> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32, FormatError> {
        let b = self.take(4)?;
        Ok(u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn int(&mut self) -> Result<BigUint, FormatError> {
        let b = self.take(2)?;
        let len = u16::from_be_bytes([b[0], b[1]]) as usize;
        Ok(BigUint::from_bytes_be(self.take(len)?))
    }

    fn pair(&mut self) -> Result<(Modulus, BigUint), FormatError> {
        let modulus = Modulus::new(self.int()?).map_err(|_| FormatError::InvalidField("modulus"))?;
        let residue = self.int()?;
        if &residue >= modulus.value() {
            return Err(FormatError::InvalidField("residue"));
        }
        Ok((modulus, residue))
    }

    fn bitstring(&mut self) -> Result<BitString, FormatError> {
        let (s, used) = BitString::from_bytes(self.buf)?;
        self.buf = &self.buf[used..];
        Ok(s)
    }
}

pub fn deserialize(bytes: &[u8]) -> Result<Encoding, Error> {
    let mut r = Reader { buf: bytes };
    if r.take(4).map_err(|_| FormatError::BadMagic)? != MAGIC {
        return Err(FormatError::BadMagic.into());
    }
    let version = r.u8()?;
    if version != VERSION {
        return Err(FormatError::UnsupportedVersion(version).into());
    }
    let scheme = r.u8()?;
    if !matches!(scheme, SCHEME_WORST | SCHEME_DENSE | SCHEME_NON_DENSE) {
        return Err(FormatError::UnknownScheme(scheme).into());
    }
    let n = r.u32()? as usize;
    let t = r.u8()? as usize;
    let k = r.u8()? as usize;
    let params = EditParams::new(n, t, k).map_err(|_| FormatError::InvalidField("parameters"))?;
    let enc = match scheme {
        SCHEME_DENSE => {
            let pattern = r.bitstring()?;
            let window = r.u32()? as usize;
            let density = DensityConfig::new(pattern, window).map_err(|_| FormatError::InvalidField("density"))?;
            let (hint_modulus, hint_residue) = r.pair()?;
            let (modulus, residue) = r.pair()?;
            Encoding::Average(AverageCaseEncoding::Dense {
                params,
                density,
                hint: Hint {
                    residue: hint_residue,
                    modulus: hint_modulus,
                },
                residue,
                modulus,
            })
        }
        _ => {
            let (modulus, residue) = r.pair()?;
            let w = WorstCaseEncoding {
                residue,
                modulus,
                params,
            };
            if scheme == SCHEME_WORST {
                Encoding::Worst(w)
            } else {
                Encoding::Average(AverageCaseEncoding::NonDense(w))
            }
        }
    };
    if !r.buf.is_empty() {
        return Err(FormatError::TrailingBytes.into());
    }
    Ok(enc)
}
