//! Reading observations: one real per line, optionally under a single header
//! line, as plain text or a one-column CSV.

use std::path::Path;

use sslud::Sample;

use crate::{CliError, CliResult};

pub const BUILTINS: [&str; 1] = ["nifty50"];

pub fn builtin(name: &str) -> CliResult<Sample> {
    match name {
        "nifty50" => Ok(sslud::data::nifty50()),
        other => Err(CliError::Usage(format!(
            "unknown built-in dataset '{other}' (available: {})",
            BUILTINS.join(", ")
        ))),
    }
}

/// Parses `text`. The first non-blank line may be a header if it does not
/// parse as a number; a trailing newline is fine but blank lines between
/// values are rejected, as are NaN and infinities.
pub fn parse(text: &str, source: &str) -> CliResult<Sample> {
    let mut values = Vec::new();
    let mut header_allowed = true;
    let lines: Vec<&str> = text.lines().collect();
    let last = lines.iter().rposition(|l| !l.trim().is_empty());
    let Some(last) = last else {
        return Err(CliError::Data(format!("{source}: no observations")));
    };
    for (i, raw) in lines[..=last].iter().enumerate() {
        let line = i + 1;
        let field = raw.trim().trim_end_matches(',').trim();
        let field = field.trim_matches('"');
        if field.is_empty() {
            return Err(CliError::Data(format!("{source}:{line}: empty line")));
        }
        match field.parse::<f64>() {
            Ok(x) if x.is_finite() => values.push(x),
            Ok(_) => {
                return Err(CliError::Data(format!(
                    "{source}:{line}: '{field}' is not a finite number"
                )));
            }
            Err(_) if header_allowed && values.is_empty() => {}
            Err(_) => return Err(CliError::Data(format!("{source}:{line}: '{field}' is not a number"))),
        }
        header_allowed = false;
    }
    if values.is_empty() {
        return Err(CliError::Data(format!("{source}: no observations")));
    }
    Sample::new(values).map_err(|e| CliError::Data(format!("{source}: {e}")))
}

pub fn read(path: &Path) -> CliResult<Sample> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: shown.clone(),
        source,
    })?;
    parse(&text, &shown)
}
