use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use helmwave::diagnostics::CSV_COLUMNS;
use helmwave::io::{parse_diagnostics_csv, write_atomic};

use crate::error::{CliError, CliResult};

/// Splits a diagnostics CSV into one `<column>.dat` file per quantity, each
/// holding whitespace-separated `z value` rows.
pub fn cmd_report(csv: &Path, out: &Path) -> CliResult<Vec<PathBuf>> {
    let text = std::fs::read_to_string(csv).map_err(|e| CliError::Io(format!("{}: {e}", csv.display())))?;
    let rows = parse_diagnostics_csv(&text).map_err(|e| CliError::Io(format!("{}: {e}", csv.display())))?;
    std::fs::create_dir_all(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    let values: Vec<[f64; 12]> = rows.iter().map(|r| r.csv_values()).collect();
    let mut files = Vec::with_capacity(CSV_COLUMNS.len() - 1);
    for (c, name) in CSV_COLUMNS.iter().enumerate().skip(1) {
        let mut body = format!("# z {name}\n");
        for v in &values {
            writeln!(body, "{:.16e} {:.16e}", v[0], v[c]).expect("write to String");
        }
        let path = out.join(format!("{name}.dat"));
        write_atomic(&path, body.as_bytes())?;
        files.push(path);
    }
    Ok(files)
}
