//! `FTF1` binary field format.
//!
//! Layout, all little-endian: magic `FTF1`; `u8 d`; `u64 N`; `f64 L`;
//! `f64 domain_offset[d]`; `f64 domain_side`; `f64 cutoff_width`; then `N^d`
//! `f64` values in row-major order.

use crate::error::{Error, Result};
use crate::field::RealField;
use crate::grid::Grid;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

const MAGIC: &[u8; 4] = b"FTF1";

pub fn encode(f: &RealField) -> Vec<u8> {
    let g = f.grid();
    let mut out = Vec::with_capacity(4 + 1 + 8 * (4 + g.d() + g.len()));
    out.extend_from_slice(MAGIC);
    out.push(g.d() as u8);
    out.extend_from_slice(&(g.n() as u64).to_le_bytes());
    out.extend_from_slice(&g.side().to_le_bytes());
    for a in g.domain_offset() {
        out.extend_from_slice(&a.to_le_bytes());
    }
    out.extend_from_slice(&g.domain_side().to_le_bytes());
    out.extend_from_slice(&g.cutoff_width().to_le_bytes());
    for v in f.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.buf.len() {
            return Err(Error::Format(format!(
                "truncated at byte {} (wanted {n} more)",
                self.pos
            )));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

pub fn decode(buf: &[u8]) -> Result<RealField> {
    let mut c = Cursor { buf, pos: 0 };
    if c.take(4)? != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let d = c.take(1)?[0] as usize;
    if d != 1 && d != 2 {
        return Err(Error::Format(format!("unsupported dimension {d}")));
    }
    let n = u64::from_le_bytes(c.take(8)?.try_into().unwrap());
    let n = usize::try_from(n).map_err(|_| Error::Format("N overflows".into()))?;
    let side = c.f64()?;
    let mut offset = Vec::with_capacity(d);
    for _ in 0..d {
        offset.push(c.f64()?);
    }
    let ell = c.f64()?;
    let w = c.f64()?;
    let grid = Grid::new(d, n, side, &offset, ell, w)
        .map_err(|e| Error::Format(format!("header describes an invalid grid: {e}")))?;
    let count = grid.len();
    let body = c.take(count * 8)?;
    if c.pos != buf.len() {
        return Err(Error::Format(format!(
            "{} trailing bytes",
            buf.len() - c.pos
        )));
    }
    let values = body
        .chunks_exact(8)
        .map(|b| f64::from_le_bytes(b.try_into().unwrap()))
        .collect();
    RealField::new(grid, values).map_err(|e| Error::Format(e.to_string()))
}

pub fn write(path: &Path, f: &RealField) -> Result<()> {
    let mut file = fs::File::create(path)?;
    file.write_all(&encode(f))?;
    Ok(())
}

pub fn read(path: &Path) -> Result<RealField> {
    let mut buf = Vec::new();
    fs::File::open(path)?.read_to_end(&mut buf)?;
    decode(&buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bitwise() {
        let g = Grid::centered(2, 16).unwrap();
        let f = RealField::from_fn(g, |x| (x[0] * 3.0).sin() - x[1] * 1e-300);
        let back = decode(&encode(&f)).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn rejects_corruption() {
        let g = Grid::centered(1, 16).unwrap();
        let bytes = encode(&RealField::zeros(g));
        assert!(decode(&bytes[..bytes.len() - 1]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(decode(&bad).is_err());
        let mut extra = bytes;
        extra.push(0);
        assert!(decode(&extra).is_err());
    }
}
