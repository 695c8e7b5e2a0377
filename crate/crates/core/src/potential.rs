//! Interaction potentials shared by every solver module.
//!
//! Values are the particle's potential energy in hartree (negative for
//! attraction), not the source's electric potential; scattering code owns
//! any conversion.

use crate::{Error, Result};
use std::fmt;
use std::path::Path;

/// Potential-energy function V(r) in atomic units.
#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    /// −strength/r
    Coulomb { strength: f64 },
    /// −strength·e^{−screening·r}/r
    Yukawa { strength: f64, screening: f64 },
    /// ½·omega²·r²
    Harmonic { omega: f64 },
    /// Linear interpolation through (node, value) pairs with strictly
    /// increasing nodes.
    Tabulated { table: Vec<(f64, f64)> },
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::Coulomb { strength } => write!(f, "coulomb(strength={strength})"),
            Potential::Yukawa { strength, screening } => {
                write!(f, "yukawa(strength={strength}, screening={screening})")
            }
            Potential::Harmonic { omega } => write!(f, "harmonic(omega={omega})"),
            Potential::Tabulated { table } => write!(f, "tabulated({} rows)", table.len()),
        }
    }
}

impl Potential {
    pub fn coulomb(strength: f64) -> Result<Self> {
        if !strength.is_finite() {
            return Err(Error::NonFinite("coulomb strength"));
        }
        Ok(Potential::Coulomb { strength })
    }

    pub fn yukawa(strength: f64, screening: f64) -> Result<Self> {
        if !strength.is_finite() {
            return Err(Error::NonFinite("yukawa strength"));
        }
        if !screening.is_finite() || screening < 0.0 {
            return Err(Error::Domain(format!(
                "yukawa screening must be finite and >= 0, got {screening}"
            )));
        }
        Ok(Potential::Yukawa { strength, screening })
    }

    pub fn harmonic(omega: f64) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::Domain(format!(
                "harmonic frequency must be finite and positive, got {omega}"
            )));
        }
        Ok(Potential::Harmonic { omega })
    }

    pub fn tabulated(table: Vec<(f64, f64)>) -> Result<Self> {
        if table.len() < 2 {
            return Err(Error::Domain(format!(
                "tabulated potential needs at least 2 rows, got {}",
                table.len()
            )));
        }
        for pair in table.windows(2) {
            if !(pair[1].0 > pair[0].0) {
                return Err(Error::Domain(format!(
                    "tabulated nodes must increase strictly: {} then {}",
                    pair[0].0, pair[1].0
                )));
            }
        }
        if table.iter().any(|&(r, v)| !r.is_finite() || !v.is_finite()) {
            return Err(Error::NonFinite("tabulated potential entry"));
        }
        Ok(Potential::Tabulated { table })
    }

    /// Loads a tabulated potential from a two-column text file: one
    /// whitespace-separated "node value" pair per line, '#' starts a
    /// comment, blank lines are skipped.
    pub fn tabulated_from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::tabulated(parse_table(&text)?)
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Potential::Coulomb { .. } => "coulomb",
            Potential::Yukawa { .. } => "yukawa",
            Potential::Harmonic { .. } => "harmonic",
            Potential::Tabulated { .. } => "tabulated",
        }
    }

    /// Potential energy at `r`.  Singular kinds reject r ≤ 0; tabulated
    /// kinds reject points outside the table range.
    pub fn evaluate(&self, r: f64) -> Result<f64> {
        if !r.is_finite() {
            return Err(Error::NonFinite("evaluation point"));
        }
        match self {
            Potential::Coulomb { strength } => {
                if r <= 0.0 {
                    return Err(Error::Domain(format!("coulomb potential undefined at r = {r}")));
                }
                Ok(-strength / r)
            }
            Potential::Yukawa { strength, screening } => {
                if r <= 0.0 {
                    return Err(Error::Domain(format!("yukawa potential undefined at r = {r}")));
                }
                Ok(-strength * (-screening * r).exp() / r)
            }
            Potential::Harmonic { omega } => Ok(0.5 * omega * omega * r * r),
            Potential::Tabulated { table } => {
                let first = table[0].0;
                let last = table[table.len() - 1].0;
                if r < first || r > last {
                    return Err(Error::Domain(format!(
                        "point {r} outside tabulated range [{first}, {last}]"
                    )));
                }
                let hi = table.partition_point(|&(x, _)| x < r).max(1).min(table.len() - 1);
                let (x0, v0) = table[hi - 1];
                let (x1, v1) = table[hi];
                let t = (r - x0) / (x1 - x0);
                Ok(v0 + t * (v1 - v0))
            }
        }
    }

    /// Evaluates at every node, failing on the first bad point.
    pub fn evaluate_many(&self, nodes: &[f64]) -> Result<Vec<f64>> {
        nodes.iter().map(|&r| self.evaluate(r)).collect()
    }
}

fn parse_table(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut table = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<f64> {
            tok.ok_or_else(|| {
                Error::Domain(format!("line {}: expected \"node value\"", lineno + 1))
            })?
            .parse::<f64>()
            .map_err(|e| Error::Domain(format!("line {}: {e}", lineno + 1)))
        };
        let r = parse(parts.next())?;
        let v = parse(parts.next())?;
        if parts.next().is_some() {
            return Err(Error::Domain(format!(
                "line {}: expected exactly two columns",
                lineno + 1
            )));
        }
        table.push((r, v));
    }
    Ok(table)
}
