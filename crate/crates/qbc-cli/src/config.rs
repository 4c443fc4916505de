//! Flat key-value config files and the flags > file > defaults precedence.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

/// Parsed `key = value` lines; `#` starts a comment, blank lines are
/// skipped.
#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    values: HashMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::usage(format!(
                    "config line {}: expected key = value, got {line:?}",
                    idx + 1
                )));
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    /// Resolves one setting: explicit flag wins, then the file, then the
    /// default.
    pub fn resolve<T: FromStr + Copy>(
        &self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T, CliError> {
        self.resolve_opt(flag, key)
            .map(|v| v.unwrap_or(default))
    }

    /// Like [`resolve`](Self::resolve) but with no default.
    pub fn resolve_opt<T: FromStr + Copy>(
        &self,
        flag: Option<T>,
        key: &str,
    ) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|_| {
                CliError::usage(format!("config key {key}: cannot parse {raw:?}"))
            }),
        }
    }
}
