//! Flat key=value configuration with flag precedence.
//!
//! A config file supplies defaults; command-line flags override it key by
//! key. Every key consumed is recorded with its final value so the run
//! metadata can state exactly what was used; leftover keys are an error so
//! typos never pass silently.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

pub struct Settings {
    values: BTreeMap<String, String>,
    resolved: BTreeMap<String, String>,
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Usage(format!("cannot read config {}: {e}", path.display()))
            })?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| {
                    CliError::Usage(format!(
                        "{}:{}: expected key = value, got '{line}'",
                        path.display(),
                        lineno + 1
                    ))
                })?;
                values.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        Ok(Settings { values, resolved: BTreeMap::new() })
    }

    /// Final value for `key`: the flag if given, else the config file
    /// entry, else `default`.
    pub fn take<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T, CliError>
    where
        T: FromStr + ToString,
    {
        let value = match flag {
            Some(v) => {
                self.values.remove(key);
                v
            }
            None => match self.values.remove(key) {
                Some(s) => s.parse().map_err(|_| {
                    CliError::Usage(format!("config key '{key}': cannot parse '{s}'"))
                })?,
                None => default,
            },
        };
        self.resolved.insert(key.to_string(), value.to_string());
        Ok(value)
    }

    /// Like `take` but with no default; absent everywhere stays `None`.
    pub fn take_opt<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError>
    where
        T: FromStr + ToString,
    {
        let value = match flag {
            Some(v) => {
                self.values.remove(key);
                Some(v)
            }
            None => match self.values.remove(key) {
                Some(s) => Some(s.parse().map_err(|_| {
                    CliError::Usage(format!("config key '{key}': cannot parse '{s}'"))
                })?),
                None => None,
            },
        };
        if let Some(v) = &value {
            self.resolved.insert(key.to_string(), v.to_string());
        }
        Ok(value)
    }

    /// Rejects any keys nothing consumed.
    pub fn finish(self) -> Result<BTreeMap<String, String>, CliError> {
        if let Some(key) = self.values.keys().next() {
            return Err(CliError::Usage(format!("unknown config key '{key}'")));
        }
        Ok(self.resolved)
    }
}
