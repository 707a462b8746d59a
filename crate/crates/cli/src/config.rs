//! Optional `key=value` config file. Precedence everywhere is:
//! explicit flag > config file > built-in default. Keys are the long flag
//! names with hyphens replaced by underscores (`lr`, `epochs`, `out_dir`,
//! ...). Blank lines and `#` comments are ignored.

use crate::cli_error::{CliError, CliResult};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
        let mut values = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::usage(format!(
                    "{}:{}: expected key=value, got '{line}'",
                    path.display(),
                    lineno + 1
                )));
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn get_parsed<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                CliError::usage(format!("config key '{key}': cannot parse '{raw}'"))
            }),
        }
    }

    /// Flag value if given, else config value, else the default.
    pub fn resolve<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> CliResult<T> {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.get_parsed(key)?.unwrap_or(default)),
        }
    }

    /// Like [`ConfigFile::resolve`] but without a default.
    pub fn resolve_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get_parsed(key),
        }
    }
}

/// Output directory: flag > config `out_dir` > `CONE_OUT_DIR` env var > ".".
pub fn resolve_out_dir(flag: Option<PathBuf>, config: &ConfigFile) -> PathBuf {
    flag.or_else(|| config.get_str("out_dir").map(PathBuf::from))
        .or_else(|| std::env::var_os("CONE_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}
