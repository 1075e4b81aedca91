use std::path::Path;

use khwp::{Caps, Error, Result};

/// Reads cap overrides from a TOML file of `key = integer` lines. Unknown
/// keys and non-integer values are rejected.
pub fn load_caps(path: &Path) -> Result<Caps> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    parse_caps(&text)
}

pub fn parse_caps(text: &str) -> Result<Caps> {
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::Parse { line: 0, msg: e.message().to_string() })?;
    let mut caps = Caps::default();
    for (key, value) in &table {
        let v = value
            .as_integer()
            .and_then(|v| usize::try_from(v).ok())
            .ok_or_else(|| Error::InvalidArgument(format!("{key} must be a non-negative integer")))?;
        caps.set(key, v)?;
    }
    Ok(caps)
}
