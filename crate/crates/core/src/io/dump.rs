use std::path::Path;

use num_complex::Complex64;

use crate::dirac::DoubletField;
use crate::error::{Error, Result};
use crate::field::Field2D;
use crate::grid::Grid2D;

pub const FIELD_MAGIC: &[u8; 4] = b"MBF1";
pub const DOUBLET_MAGIC: &[u8; 4] = b"MBD1";

/// Magic, `nx`, `ny`, `dx`, `dy`, `k0`, `z`.
pub const HEADER_LEN: usize = 4 + 2 * 8 + 4 * 8;

fn encode_header(out: &mut Vec<u8>, magic: &[u8; 4], grid: &Grid2D, z: f64) {
    out.extend_from_slice(magic);
    out.extend_from_slice(&(grid.nx() as u64).to_le_bytes());
    out.extend_from_slice(&(grid.ny() as u64).to_le_bytes());
    for v in [grid.dx(), grid.dy(), grid.k0(), z] {
        out.extend_from_slice(&v.to_le_bytes());
    }
}

fn encode_samples(out: &mut Vec<u8>, values: &[Complex64]) {
    for v in values {
        out.extend_from_slice(&v.re.to_le_bytes());
        out.extend_from_slice(&v.im.to_le_bytes());
    }
}

pub fn encode_field(f: &Field2D) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 16 * f.values().len());
    encode_header(&mut out, FIELD_MAGIC, f.grid(), f.z());
    encode_samples(&mut out, f.values());
    out
}

pub fn encode_doublet(d: &DoubletField) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 32 * d.psi1().len());
    encode_header(&mut out, DOUBLET_MAGIC, d.grid(), d.z());
    encode_samples(&mut out, d.psi1());
    encode_samples(&mut out, d.psi2());
    out
}

fn u64_at(b: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(b[at..at + 8].try_into().expect("slice of length 8"))
}

fn f64_at(b: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(b[at..at + 8].try_into().expect("slice of length 8"))
}

/// Validates the header and the total length; returns the grid, `z` and the
/// sample payload.
fn decode_header<'a>(bytes: &'a [u8], magic: &[u8; 4], blocks: usize) -> Result<(Grid2D, f64, &'a [u8])> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Malformed(format!("dump is {} bytes, header needs {HEADER_LEN}", bytes.len())));
    }
    if &bytes[..4] != magic {
        return Err(Error::Malformed(format!(
            "bad magic {:?}, expected {:?}",
            String::from_utf8_lossy(&bytes[..4]),
            String::from_utf8_lossy(magic)
        )));
    }
    let too_big = || Error::Malformed("grid dimensions overflow".into());
    let nx = usize::try_from(u64_at(bytes, 4)).map_err(|_| too_big())?;
    let ny = usize::try_from(u64_at(bytes, 12)).map_err(|_| too_big())?;
    let (dx, dy, k0, z) = (f64_at(bytes, 20), f64_at(bytes, 28), f64_at(bytes, 36), f64_at(bytes, 44));
    let payload = nx
        .checked_mul(ny)
        .and_then(|n| n.checked_mul(16 * blocks))
        .ok_or_else(too_big)?;
    let body = &bytes[HEADER_LEN..];
    if body.len() != payload {
        return Err(Error::Malformed(format!(
            "header announces {nx} x {ny} samples ({payload} bytes), payload has {} bytes",
            body.len()
        )));
    }
    let grid = Grid2D::new(nx, ny, dx, dy, k0).map_err(|e| Error::Malformed(e.to_string()))?;
    if !z.is_finite() {
        return Err(Error::Malformed("non-finite z in header".into()));
    }
    Ok((grid, z, body))
}

fn decode_samples(body: &[u8]) -> Vec<Complex64> {
    body.chunks_exact(16).map(|c| Complex64::new(f64_at(c, 0), f64_at(c, 8))).collect()
}

pub fn decode_field(bytes: &[u8]) -> Result<Field2D> {
    let (grid, z, body) = decode_header(bytes, FIELD_MAGIC, 1)?;
    Field2D::new(grid, z, decode_samples(body)).map_err(|e| Error::Malformed(e.to_string()))
}

pub fn decode_doublet(bytes: &[u8]) -> Result<DoubletField> {
    let (grid, z, body) = decode_header(bytes, DOUBLET_MAGIC, 2)?;
    let (a, b) = body.split_at(body.len() / 2);
    DoubletField::new(grid, z, decode_samples(a), decode_samples(b)).map_err(|e| Error::Malformed(e.to_string()))
}

pub fn write_field(path: &Path, f: &Field2D) -> Result<()> {
    super::write_atomic(path, &encode_field(f))
}

pub fn read_field(path: &Path) -> Result<Field2D> {
    decode_field(&std::fs::read(path)?)
}

pub fn write_doublet(path: &Path, d: &DoubletField) -> Result<()> {
    super::write_atomic(path, &encode_doublet(d))
}

pub fn read_doublet(path: &Path) -> Result<DoubletField> {
    decode_doublet(&std::fs::read(path)?)
}
