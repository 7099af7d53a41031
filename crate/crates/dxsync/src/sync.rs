//! One end-to-end exchange: the sender encodes `x` and serializes it, the
//! receiver deserializes and decodes against its edited copy `y`.

use std::fmt;
use std::str::FromStr;

use dxsync_core::edits::{random_bitstring, seeded_rng};
use dxsync_core::wire::{deserialize, serialize};
use dxsync_core::{
    apply_substring_edit, encoding_bit_length, sample_edit_trace, AverageCaseEncoding, BallEnumerator, BitString,
    Codec, DensityConfig, EditParams, Encoding, SubstringEdit,
};

use crate::bench::Scheme;
use crate::labelings::{with_reseed, LabelingChoice};
use crate::HarnessError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum XSource {
    Literal(BitString),
    Random { n: usize },
}

/// How `y` is obtained from `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Trace {
    /// `t` sampled edits.
    Sampled,
    /// These edits, in order.
    Fixed(Vec<SubstringEdit>),
    /// This string, taken as given.
    Received(BitString),
}

/// Header byte to damage after serialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corruption {
    Magic,
    Version,
    Scheme,
}

impl FromStr for Corruption {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "magic" => Ok(Corruption::Magic),
            "version" => Ok(Corruption::Version),
            "scheme" => Ok(Corruption::Scheme),
            _ => Err(format!("unknown corruption {s:?} (expected magic, version or scheme)")),
        }
    }
}

impl Corruption {
    pub fn apply(self, wire: &mut [u8]) {
        match self {
            Corruption::Magic => wire[0] ^= 0xff,
            Corruption::Version => wire[4] = wire[4].wrapping_add(1),
            Corruption::Scheme => wire[5] = 0x7f,
        }
    }
}

/// Parses `POS:U:V` with 1-based `POS` and possibly empty `U`, `V`.
pub fn parse_edit(s: &str) -> Result<SubstringEdit, String> {
    let mut parts = s.split(':');
    let (Some(pos), Some(u), Some(v), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
        return Err(format!("edit {s:?} is not POS:U:V"));
    };
    let position: usize = pos.parse().map_err(|_| format!("bad edit position {pos:?}"))?;
    let u: BitString = u.parse().map_err(|e| format!("edit {s:?}: {e}"))?;
    let v: BitString = v.parse().map_err(|e| format!("edit {s:?}: {e}"))?;
    Ok(SubstringEdit::new(position, u, v))
}

#[derive(Debug, Clone)]
pub struct SyncConfig {
    pub x: XSource,
    pub t: usize,
    pub k: usize,
    pub seed: u64,
    pub scheme: Scheme,
    pub labeling: LabelingChoice,
    pub density: Option<DensityConfig>,
    pub trace: Trace,
    pub corrupt: Option<Corruption>,
    pub budget: usize,
    pub reseed_cap: u32,
}

#[derive(Debug, Clone)]
pub struct SyncReport {
    pub x: BitString,
    pub y: BitString,
    pub edits: Option<Vec<SubstringEdit>>,
    pub params: EditParams,
    pub encoding: Encoding,
    pub labeling: String,
    pub labeling_seed: Option<u64>,
    pub redundancy_bits: u64,
    pub wire: Vec<u8>,
    pub decoded: BitString,
}

impl fmt::Display for SyncReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let EditParams { n, t, k } = self.params;
        writeln!(f, "params    n={n} t={t} k={k}")?;
        writeln!(f, "x         {}", self.x)?;
        if let Some(edits) = &self.edits {
            for e in edits {
                writeln!(f, "edit      at {}: {} -> {}", e.position, e.deleted, e.inserted)?;
            }
        }
        writeln!(f, "y         {}", self.y)?;
        let branch = match &self.encoding {
            Encoding::Worst(_) => "worst",
            Encoding::Average(AverageCaseEncoding::Dense { .. }) => "average/dense",
            Encoding::Average(AverageCaseEncoding::NonDense(_)) => "average/non-dense",
        };
        writeln!(f, "scheme    {branch}")?;
        match self.labeling_seed {
            Some(s) => writeln!(f, "labeling  {} (seed {s})", self.labeling)?,
            None => writeln!(f, "labeling  {}", self.labeling)?,
        }
        match &self.encoding {
            Encoding::Worst(w) | Encoding::Average(AverageCaseEncoding::NonDense(w)) => {
                writeln!(f, "encoding  residue {} modulus {}", w.residue, w.modulus.value())?
            }
            Encoding::Average(AverageCaseEncoding::Dense {
                hint, residue, modulus, ..
            }) => writeln!(
                f,
                "encoding  hint {} mod {}, residue {} modulus {}",
                hint.residue,
                hint.modulus.value(),
                residue,
                modulus.value()
            )?,
        }
        writeln!(
            f,
            "redundancy {} bits ({} wire bytes)",
            self.redundancy_bits,
            self.wire.len()
        )?;
        writeln!(f, "decoded   {}", self.decoded)?;
        write!(f, "result    ok")
    }
}

pub fn run_sync(cfg: &SyncConfig) -> Result<SyncReport, HarnessError> {
    use HarnessError as H;
    let x = match &cfg.x {
        XSource::Literal(x) => x.clone(),
        XSource::Random { n } => random_bitstring(*n, &mut seeded_rng(cfg.seed)),
    };
    let params = EditParams::new(x.len(), cfg.t, cfg.k).map_err(H::stage("parameters"))?;
    let (y, edits) = match &cfg.trace {
        Trace::Sampled => {
            let (y, e) = sample_edit_trace(&x, cfg.t, cfg.k, cfg.seed).map_err(H::stage("edit"))?;
            (y, Some(e))
        }
        Trace::Fixed(edits) => {
            if edits.len() > cfg.t || edits.iter().any(|e| e.size() > cfg.k) {
                return Err(H::Usage(format!(
                    "fixed trace exceeds t={} edits of size k={}",
                    cfg.t, cfg.k
                )));
            }
            let mut y = x.clone();
            for e in edits {
                y = apply_substring_edit(&y, e).map_err(H::stage("edit"))?;
            }
            (y, Some(edits.clone()))
        }
        Trace::Received(y) => (y.clone(), None),
    };
    let density = match (cfg.scheme, &cfg.density) {
        (Scheme::Average, None) => return Err(H::Usage("average scheme needs a density rule".into())),
        (Scheme::Average, Some(d)) => Some(d),
        (Scheme::Worst, _) => None,
    };

    let balls = BallEnumerator::with_budget(cfg.budget);
    let (encoding, f, _) = with_reseed(cfg.labeling, cfg.seed, cfg.reseed_cap, |f| {
        let codec = Codec::with_enumerator(f, balls);
        Ok(match density {
            None => Encoding::Worst(codec.encode_worst(&x, params)?),
            Some(d) => Encoding::Average(codec.encode_average(&x, params, d)?),
        })
    })
    .map_err(H::stage("encode"))?;
    let mut wire = serialize(&encoding).map_err(H::stage("serialize"))?;
    if let Some(c) = cfg.corrupt {
        c.apply(&mut wire);
    }

    let received = deserialize(&wire).map_err(H::stage("deserialize"))?;
    let decoded = Codec::with_enumerator(&f, balls)
        .decode(&y, &received)
        .map_err(H::stage("decode"))?;
    if decoded != x {
        return Err(H::Violation(format!("decoded {decoded}, expected {x}")));
    }
    Ok(SyncReport {
        redundancy_bits: encoding_bit_length(&encoding),
        x,
        y,
        edits,
        params,
        encoding,
        labeling: cfg.labeling.to_string(),
        labeling_seed: f.seed(),
        wire,
        decoded,
    })
}
