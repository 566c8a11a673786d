//! `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Function-valued keys
//! hold either inline pieces separated by `;` or `@path`, resolved relative
//! to the configuration file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::CliError;

pub const KNOWN_KEYS: &[&str] = &[
    "poly", "fn", "f2", "domain", "x", "target", "k", "r", "t", "mode", "h", "n", "x0", "quoted_delta",
    "claimed_c", "witness", "y", "grid", "pairs", "q", "domain2", "hbar", "hbar_t", "alpha",
];

#[derive(Debug, Clone, Default)]
pub struct Config {
    dir: PathBuf,
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, dir)
    }

    pub fn parse(text: &str, dir: PathBuf) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| CliError::Config { line: i + 1, message };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err("expected `key = value`".into()))?;
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(err(format!("unknown key `{key}`")));
            }
            if entries.insert(key.to_owned(), value.trim().to_owned()).is_some() {
                return Err(err(format!("duplicate key `{key}`")));
            }
        }
        Ok(Config { dir, entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// The text of a function-valued key, reading `@path` references.
    pub fn function_text(&self, key: &str) -> Result<Option<String>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => match v.strip_prefix('@') {
                Some(rel) => {
                    let path = self.dir.join(rel.trim());
                    fs::read_to_string(&path).map(Some).map_err(|e| CliError::io(&path, e))
                }
                None => Ok(Some(v.to_owned())),
            },
        }
    }
}
