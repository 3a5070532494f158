//! Entity catalog files: UTF-8, one label per line. Blank lines and lines
//! starting with `#` are skipped; a label is the whole trimmed line.

use std::fs;
use std::path::Path;

use evalign_core::pipeline::EntityCatalog;

use crate::error::CliError;

pub fn parse_catalog(ontology_id: &str, text: &str) -> Result<EntityCatalog, evalign_core::Error> {
    let labels = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    EntityCatalog::new(ontology_id, labels)
}

/// Reads a catalog; its ontology id is the file stem.
pub fn read_catalog(path: &Path) -> Result<EntityCatalog, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_catalog(&id, &text).map_err(|source| CliError::Input {
        path: path.into(),
        source,
    })
}
