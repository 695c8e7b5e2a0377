//! Atomic file emission with fixed formatting.
//!
//! Every data file is written to a temp file in the destination directory
//! and renamed into place, so readers never see a partial file. Floats are
//! always formatted to 12 significant digits, which makes identical runs
//! byte-identical.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::CliError;

/// 12 significant digits, exponent form.
pub fn fmt(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn atomic_write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Run(format!("cannot create {}: {e}", dir.display())))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| CliError::Run(format!("cannot create temp file in {}: {e}", dir.display())))?;
    tmp.write_all(contents.as_bytes())
        .map_err(|e| CliError::Run(format!("cannot write {name}: {e}")))?;
    let path = dir.join(name);
    tmp.persist(&path)
        .map_err(|e| CliError::Run(format!("cannot persist {}: {e}", path.display())))?;
    Ok(path)
}

/// CSV from pre-formatted cells; callers choose per-column formatting.
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn write_json(dir: &Path, name: &str, value: &serde_json::Value) -> Result<PathBuf, CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Run(format!("cannot encode {name}: {e}")))?;
    text.push('\n');
    atomic_write(dir, name, &text)
}
