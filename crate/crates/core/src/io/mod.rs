//! Binary field and doublet dumps, the diagnostics CSV and atomic file
//! output.

mod csv;
mod dump;

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

pub use self::csv::{parse_diagnostics_csv, write_diagnostics_csv};
pub use dump::{
    decode_doublet, decode_field, encode_doublet, encode_field, read_doublet, read_field, write_doublet,
    write_field, DOUBLET_MAGIC, FIELD_MAGIC, HEADER_LEN,
};

/// Writes `bytes` to a temporary file beside `path` and renames it into
/// place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error.to_string()))?;
    Ok(())
}
