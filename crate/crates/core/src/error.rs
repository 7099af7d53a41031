use core::fmt;

/// Errors from the wire decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormatError {
    BadMagic,
    UnsupportedVersion(u8),
    UnknownScheme(u8),
    Truncated,
    TrailingBytes,
    NonZeroPadding,
    /// A decoded field violates its invariant (modulus < 2, residue >= modulus, ...).
    InvalidField(&'static str),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::BadMagic => write!(f, "bad magic bytes"),
            FormatError::UnsupportedVersion(v) => write!(f, "unsupported version {v:#04x}"),
            FormatError::UnknownScheme(s) => write!(f, "unknown scheme {s:#04x}"),
            FormatError::Truncated => write!(f, "input truncated"),
            FormatError::TrailingBytes => write!(f, "trailing bytes after payload"),
            FormatError::NonZeroPadding => write!(f, "non-zero padding bits"),
            FormatError::InvalidField(name) => write!(f, "invalid field: {name}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A character other than `0`/`1` in bit string text.
    InvalidBit {
        index: usize,
    },
    /// Edit position out of range or deleted substring mismatch.
    InvalidEdit(&'static str),
    InvalidParams(&'static str),
    InvalidDensityConfig {
        pattern_len: usize,
        window: usize,
    },
    /// A ball enumeration would exceed the member budget.
    BallTooLarge {
        budget: usize,
    },
    OracleTooLarge {
        len: usize,
        limit: usize,
    },
    NotDense,
    /// The label of `x` also occurs among the other labels.
    NotSeparable,
    /// The labeling maps `x` and a confusable string to the same label.
    LabelingUnsound,
    NoCandidate,
    Ambiguous {
        candidates: usize,
    },
    Format(FormatError),
    FieldTooLarge {
        field: &'static str,
        limit: usize,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidBit { index } => write!(f, "invalid bit character at index {index}"),
            Error::InvalidEdit(why) => write!(f, "invalid edit: {why}"),
            Error::InvalidParams(why) => write!(f, "invalid parameters: {why}"),
            Error::InvalidDensityConfig { pattern_len, window } => write!(
                f,
                "invalid density config: pattern length {pattern_len} exceeds window {window}"
            ),
            Error::BallTooLarge { budget } => {
                write!(f, "ball enumeration exceeds member budget of {budget}")
            }
            Error::OracleTooLarge { len, limit } => {
                write!(f, "oracle limited to length {limit}, got {len}")
            }
            Error::NotDense => write!(f, "string is not pattern-dense"),
            Error::NotSeparable => write!(f, "label of x occurs among the other labels"),
            Error::LabelingUnsound => {
                write!(f, "labeling assigns x the label of a confusable string")
            }
            Error::NoCandidate => write!(f, "no candidate matches the encoding"),
            Error::Ambiguous { candidates } => {
                write!(f, "{candidates} candidates match the encoding")
            }
            Error::Format(e) => write!(f, "format error: {e}"),
            Error::FieldTooLarge { field, limit } => {
                write!(f, "{field} does not fit the wire format (limit {limit})")
            }
        }
    }
}

impl core::error::Error for Error {}
impl core::error::Error for FormatError {}

impl From<FormatError> for Error {
    fn from(e: FormatError) -> Self {
        Error::Format(e)
    }
}
