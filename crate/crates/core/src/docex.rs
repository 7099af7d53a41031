//! Syndrome-compression document exchange: a worst-case scheme sending
//! `(f(x) mod a_x, a_x)`, and an average-case scheme that gives
//! pattern-dense strings a one-edit hint plus a modulus that only has to
//! separate `x` from the dense strings the hint does not already rule out.

use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::balls::{BallEnumerator, StringSet};
use crate::bitstring::BitString;
use crate::density::DensityConfig;
use crate::edits::EditParams;
use crate::error::Error;
use crate::labeling::{find_separating_modulus, Labeling, Modulus};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorstCaseEncoding {
    pub residue: BigUint,
    pub modulus: Modulus,
    pub params: EditParams,
}

impl WorstCaseEncoding {
    /// Payload bits: the modulus plus a residue of `ceil(log2 a)` bits.
    pub fn bit_length(&self) -> u64 {
        self.modulus.value().bits() + self.modulus.residue_bits()
    }
}

/// Residue/modulus pair that singles a dense string out of its one-edit
/// restricted confusion set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hint {
    pub residue: BigUint,
    pub modulus: Modulus,
}

impl Hint {
    pub fn bit_length(&self) -> u64 {
        self.modulus.value().bits() + self.modulus.residue_bits()
    }

    fn accepts(&self, label: &BigUint) -> bool {
        self.modulus.reduce(label) == self.residue
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AverageCaseEncoding {
    Dense {
        params: EditParams,
        density: DensityConfig,
        hint: Hint,
        residue: BigUint,
        modulus: Modulus,
    },
    NonDense(WorstCaseEncoding),
}

impl AverageCaseEncoding {
    pub fn params(&self) -> EditParams {
        match self {
            AverageCaseEncoding::Dense { params, .. } => *params,
            AverageCaseEncoding::NonDense(w) => w.params,
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self, AverageCaseEncoding::Dense { .. })
    }

    /// One branch bit plus the branch payload. The density parameters are
    /// fixed per deployment and are not counted.
    pub fn bit_length(&self) -> u64 {
        1 + match self {
            AverageCaseEncoding::Dense { hint, modulus, .. } => {
                hint.bit_length() + modulus.value().bits() + modulus.residue_bits()
            }
            AverageCaseEncoding::NonDense(w) => w.bit_length(),
        }
    }
}

/// Either encoding, as carried on the wire.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Encoding {
    Worst(WorstCaseEncoding),
    Average(AverageCaseEncoding),
}

impl Encoding {
    pub fn params(&self) -> EditParams {
        match self {
            Encoding::Worst(w) => w.params,
            Encoding::Average(a) => a.params(),
        }
    }
}

/// Measured redundancy of an encoding, in bits.
pub fn encoding_bit_length(enc: &Encoding) -> u64 {
    match enc {
        Encoding::Worst(w) => w.bit_length(),
        Encoding::Average(a) => a.bit_length(),
    }
}

/// Sizes of the sets an average-case encoding was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AverageReport {
    pub encoding: AverageCaseEncoding,
    /// |C_t(x)|.
    pub confusion_size: usize,
    /// |dense members of C_t(x)|, for dense `x`.
    pub restricted_size: Option<usize>,
    /// Dense members of C_t(x) the hint cannot tell from `x`, plus `x` itself.
    pub filtered_size: Option<usize>,
}

/// Encoder/decoder pair for a fixed labeling.
#[derive(Debug, Clone)]
pub struct Codec<L> {
    labeling: L,
    balls: BallEnumerator,
}

/// Labels of a set's members other than `x`, in iteration order.
struct Labeled {
    strings: Vec<BitString>,
    labels: Vec<BigUint>,
}

impl<L: Labeling> Codec<L> {
    pub fn new(labeling: L) -> Self {
        Codec {
            labeling,
            balls: BallEnumerator::default(),
        }
    }

    pub fn with_enumerator(labeling: L, balls: BallEnumerator) -> Self {
        Codec { labeling, balls }
    }

    pub fn labeling(&self) -> &L {
        &self.labeling
    }

    pub fn enumerator(&self) -> &BallEnumerator {
        &self.balls
    }

    fn label_others(&self, set: &StringSet, x: &BitString) -> Labeled {
        let strings: Vec<BitString> = set.iter().filter(|y| *y != x).cloned().collect();
        let labels = strings.iter().map(|y| self.labeling.label(y)).collect();
        Labeled { strings, labels }
    }

    fn compress(label_x: &BigUint, others: &[BigUint]) -> Result<(BigUint, Modulus), Error> {
        let modulus = find_separating_modulus(label_x, others).map_err(|e| match e {
            Error::NotSeparable => Error::LabelingUnsound,
            other => other,
        })?;
        Ok((modulus.reduce(label_x), modulus))
    }

    fn check_length(x: &BitString, params: &EditParams) -> Result<(), Error> {
        if x.len() != params.n {
            return Err(Error::InvalidParams("string length differs from n"));
        }
        Ok(())
    }

    pub fn encode_worst(&self, x: &BitString, params: EditParams) -> Result<WorstCaseEncoding, Error> {
        Self::check_length(x, &params)?;
        let ball = self.balls.confusion_ball(x, params.t, params.k)?;
        let others = self.label_others(&ball, x);
        let (residue, modulus) = Self::compress(&self.labeling.label(x), &others.labels)?;
        Ok(WorstCaseEncoding {
            residue,
            modulus,
            params,
        })
    }

    fn unique(candidates: impl Iterator<Item = BitString>) -> Result<BitString, Error> {
        let matches: Vec<BitString> = candidates.collect();
        match matches.len() {
            0 => Err(Error::NoCandidate),
            1 => Ok(matches.into_iter().next().unwrap()),
            n => Err(Error::Ambiguous { candidates: n }),
        }
    }

    pub fn decode_worst(&self, y: &BitString, enc: &WorstCaseEncoding) -> Result<BitString, Error> {
        let EditParams { n, t, k } = enc.params;
        let candidates = self.balls.ball_of_length(y, t, k, n)?;
        Self::unique(
            candidates
                .into_iter()
                .filter(|c| enc.modulus.reduce(&self.labeling.label(c)) == enc.residue),
        )
    }

    pub fn dense_hint(&self, x: &BitString, k: usize, density: &DensityConfig) -> Result<Hint, Error> {
        let restricted = self.balls.restricted_confusion_ball(x, 1, k, density)?;
        let others = self.label_others(&restricted, x);
        let (residue, modulus) = Self::compress(&self.labeling.label(x), &others.labels)?;
        Ok(Hint { residue, modulus })
    }

    /// Recovers a dense length-`n` string from one k-substring edit of it.
    pub fn decode_one_edit_dense(
        &self,
        y: &BitString,
        n: usize,
        k: usize,
        density: &DensityConfig,
        hint: &Hint,
    ) -> Result<BitString, Error> {
        let candidates = self.balls.ball_of_length(y, 1, k, n)?;
        Self::unique(
            candidates
                .into_iter()
                .filter(|c| density.is_dense(c) && hint.accepts(&self.labeling.label(c))),
        )
    }

    pub fn encode_average(
        &self,
        x: &BitString,
        params: EditParams,
        density: &DensityConfig,
    ) -> Result<AverageCaseEncoding, Error> {
        Ok(self.encode_average_report(x, params, density)?.encoding)
    }

    /// `encode_average` together with the set sizes it went through.
    pub fn encode_average_report(
        &self,
        x: &BitString,
        params: EditParams,
        density: &DensityConfig,
    ) -> Result<AverageReport, Error> {
        Self::check_length(x, &params)?;
        let EditParams { t, k, .. } = params;
        if !density.is_dense(x) {
            let ball = self.balls.confusion_ball(x, t, k)?;
            let others = self.label_others(&ball, x);
            let (residue, modulus) = Self::compress(&self.labeling.label(x), &others.labels)?;
            return Ok(AverageReport {
                encoding: AverageCaseEncoding::NonDense(WorstCaseEncoding {
                    residue,
                    modulus,
                    params,
                }),
                confusion_size: ball.len(),
                restricted_size: None,
                filtered_size: None,
            });
        }

        let label_x = self.labeling.label(x);
        let ball_t = self.balls.confusion_ball(x, t, k)?;
        let one_edit = if t == 1 {
            None
        } else {
            Some(self.balls.confusion_ball(x, 1, k)?)
        };
        let others = self.label_others(&ball_t, x);
        let dense_idx: Vec<usize> = (0..others.strings.len())
            .filter(|&i| density.is_dense(&others.strings[i]))
            .collect();
        let hint_set: Vec<BigUint> = match &one_edit {
            None => dense_idx.iter().map(|&i| others.labels[i].clone()).collect(),
            Some(c1) => c1
                .iter()
                .filter(|y| *y != x && density.is_dense(y))
                .map(|y| self.labeling.label(y))
                .collect(),
        };
        let restricted_size = dense_idx.len() + 1;
        let (hint_residue, hint_modulus) = Self::compress(&label_x, &hint_set)?;
        let hint = Hint {
            residue: hint_residue,
            modulus: hint_modulus,
        };
        let filtered: Vec<BigUint> = dense_idx
            .iter()
            .map(|&i| &others.labels[i])
            .filter(|l| hint.accepts(l))
            .cloned()
            .collect();
        let (residue, modulus) = Self::compress(&label_x, &filtered)?;
        Ok(AverageReport {
            encoding: AverageCaseEncoding::Dense {
                params,
                density: density.clone(),
                hint,
                residue,
                modulus,
            },
            confusion_size: ball_t.len(),
            restricted_size: Some(restricted_size),
            filtered_size: Some(filtered.len() + 1),
        })
    }

    pub fn decode_average(&self, y: &BitString, enc: &AverageCaseEncoding) -> Result<BitString, Error> {
        match enc {
            AverageCaseEncoding::NonDense(w) => self.decode_worst(y, w),
            AverageCaseEncoding::Dense {
                params,
                density,
                hint,
                residue,
                modulus,
            } => {
                let EditParams { n, t, k } = *params;
                let candidates = self.balls.ball_of_length(y, t, k, n)?;
                Self::unique(candidates.into_iter().filter(|c| {
                    if !density.is_dense(c) {
                        return false;
                    }
                    let l = self.labeling.label(c);
                    hint.accepts(&l) && &modulus.reduce(&l) == residue
                }))
            }
        }
    }

    pub fn decode(&self, y: &BitString, enc: &Encoding) -> Result<BitString, Error> {
        match enc {
            Encoding::Worst(w) => self.decode_worst(y, w),
            Encoding::Average(a) => self.decode_average(y, a),
        }
    }
}

pub fn encode_worst<L: Labeling>(x: &BitString, params: EditParams, f: L) -> Result<WorstCaseEncoding, Error> {
    Codec::new(f).encode_worst(x, params)
}

pub fn decode_worst<L: Labeling>(y: &BitString, enc: &WorstCaseEncoding, f: L) -> Result<BitString, Error> {
    Codec::new(f).decode_worst(y, enc)
}

pub fn dense_hint<L: Labeling>(x: &BitString, k: usize, density: &DensityConfig, f: L) -> Result<Hint, Error> {
    Codec::new(f).dense_hint(x, k, density)
}

pub fn decode_one_edit_dense<L: Labeling>(
    y: &BitString,
    n: usize,
    k: usize,
    density: &DensityConfig,
    f: L,
    hint: &Hint,
) -> Result<BitString, Error> {
    Codec::new(f).decode_one_edit_dense(y, n, k, density, hint)
}

pub fn encode_average<L: Labeling>(
    x: &BitString,
    params: EditParams,
    f: L,
    density: &DensityConfig,
) -> Result<AverageCaseEncoding, Error> {
    Codec::new(f).encode_average(x, params, density)
}

pub fn decode_average<L: Labeling>(y: &BitString, enc: &AverageCaseEncoding, f: L) -> Result<BitString, Error> {
    Codec::new(f).decode_average(y, enc)
}
