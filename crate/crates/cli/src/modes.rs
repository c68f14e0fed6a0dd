//! Plain-text mode table: one `omega_cm1 d` pair per line.

use std::path::Path;

use ringcurrent_core::operators::ModeParams;

use crate::{CliError, CliResult};

/// Parses a mode table. `#` starts a comment; blank lines are ignored.
pub fn parse_modes(text: &str) -> CliResult<Vec<ModeParams>> {
    let mut modes = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = |why: &str| CliError::Usage(format!("modes line {}: {why}: {raw:?}", lineno + 1));
        if fields.len() != 2 {
            return Err(bad("expected two columns `omega_cm1 d`"));
        }
        let omega: f64 = fields[0].parse().map_err(|_| bad("omega_cm1 is not a number"))?;
        let d: f64 = fields[1].parse().map_err(|_| bad("d is not a number"))?;
        modes.push(ModeParams::new(omega, d).map_err(|e| bad(&e.to_string()))?);
    }
    if modes.is_empty() {
        return Err(CliError::Usage("modes table lists no modes".into()));
    }
    Ok(modes)
}

pub fn read_modes(path: &Path) -> CliResult<Vec<ModeParams>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read modes file {}: {e}", path.display())))?;
    parse_modes(&text)
}
