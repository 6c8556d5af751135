use std::io::Write;

use crate::diagnostics::{DiagnosticsReport, CSV_COLUMNS};
use crate::error::{Error, Result};

/// Header row plus one row per report, 17 significant digits per value.
pub fn write_diagnostics_csv<W: Write>(out: W, reports: &[DiagnosticsReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_COLUMNS).map_err(io_err)?;
    for r in reports {
        w.write_record(r.csv_values().iter().map(|v| format!("{v:.16e}"))).map_err(io_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a diagnostics table. The header must match [`CSV_COLUMNS`] and at
/// least one row must follow.
pub fn parse_diagnostics_csv(text: &str) -> Result<Vec<DiagnosticsReport>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| Error::Malformed(e.to_string()))?.clone();
    if header.iter().map(str::trim).ne(CSV_COLUMNS.iter().copied()) {
        return Err(Error::Malformed(format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    let mut out = Vec::new();
    for (n, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Error::Malformed(e.to_string()))?;
        if rec.len() != CSV_COLUMNS.len() {
            return Err(Error::Malformed(format!("row {} has {} fields", n + 1, rec.len())));
        }
        let mut v = [0.0; 12];
        for (slot, field) in v.iter_mut().zip(rec.iter()) {
            *slot = field
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Malformed(format!("row {}: bad number {field:?}", n + 1)))?;
        }
        out.push(DiagnosticsReport::from_csv_values(v));
    }
    if out.is_empty() {
        return Err(Error::Malformed("diagnostics table has no rows".into()));
    }
    Ok(out)
}
