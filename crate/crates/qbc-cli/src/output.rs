//! Row-oriented emission: every command produces a list of serializable
//! records that can go out as CSV (schema-stable headers) or as the JSON
//! array carrying the same fields.

use std::io::Write;
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub struct Sink {
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Sink {
    pub fn write<T: Serialize>(&self, rows: &[T]) -> Result<(), CliError> {
        let bytes = match self.format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in rows {
                    w.serialize(row)
                        .map_err(|e| CliError::usage(format!("csv encoding failed: {e}")))?;
                }
                w.into_inner()
                    .map_err(|e| CliError::usage(format!("csv flush failed: {e}")))?
            }
            Format::Json => {
                let mut v = serde_json::to_vec_pretty(rows)
                    .map_err(|e| CliError::usage(format!("json encoding failed: {e}")))?;
                v.push(b'\n');
                v
            }
        };
        match &self.out {
            None => std::io::stdout()
                .write_all(&bytes)
                .map_err(|e| CliError::usage(format!("cannot write stdout: {e}"))),
            Some(path) => std::fs::write(path, bytes)
                .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display()))),
        }
    }
}
