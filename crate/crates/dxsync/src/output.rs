//! Record emitters.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format {s:?} (expected csv or json)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// CSV with a header row.
pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> HarnessError {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => HarnessError::Io(e),
        other => HarnessError::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

pub fn write_json<T: Serialize + ?Sized, W: Write>(value: &T, mut out: W) -> Result<(), HarnessError> {
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| HarnessError::Io(e.into()))?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn write_rows<T: Serialize, W: Write>(rows: &[T], format: Format, out: W) -> Result<(), HarnessError> {
    match format {
        Format::Csv => write_csv(rows, out),
        Format::Json => write_json(rows, out),
    }
}
