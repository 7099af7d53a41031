//! Document exchange for binary strings that differ by a bounded number of
//! substring edits.
//!
//! A sender holding `x` transmits a short encoding; a receiver holding `y`,
//! obtained from `x` by at most `t` edits that each replace a substring of
//! length at most `k` by another string of length at most `k`, recovers `x`
//! from `y` and the encoding.
//!
//! * [`bitstring`], [`edits`], [`density`]: strings, edit models and
//!   pattern-dense windows.
//! * [`balls`]: exact edit/confusion ball enumeration with a brute-force oracle.
//! * [`labeling`]: labeling functions and the separating-modulus search.
//! * [`docex`]: the worst-case and average-case encoders and decoders.
//! * [`wire`]: the byte format of an encoding.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod balls;
pub mod bitstring;
pub mod density;
pub mod docex;
pub mod edits;
mod error;
pub mod labeling;
mod math;
pub mod wire;

pub use balls::{
    ball_size_upper_bound, confusion_ball, confusion_ball_oracle, edit_ball, ids_edit_ball, restricted_confusion_ball,
    BallEnumerator, StringSet,
};
pub use bitstring::{bits, BitString};
pub use density::{density_preset, is_pattern_dense, DensityConfig};
pub use docex::{
    decode_average, decode_one_edit_dense, decode_worst, dense_hint, encode_average, encode_worst, encoding_bit_length,
    AverageCaseEncoding, Codec, Encoding, Hint, WorstCaseEncoding,
};
pub use edits::{apply_ids_edit, apply_substring_edit, sample_edit_trace, EditParams, IdsEdit, SubstringEdit};
pub use error::{Error, FormatError};
pub use labeling::{
    find_separating_modulus, ids_label_width_bound, verify_labeling, HashLabeling, IdentityLabeling, Labeling, Modulus,
};
pub use math::{bit_length, ceil_mul_log2};
