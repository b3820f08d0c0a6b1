//! On-disk formats for excursion paths.
//!
//! Binary column file: magic "LTEX", version u32, sample count u64, grid
//! step f64, then the samples as little-endian f64 — compact enough for
//! million-sample paths. A two-column CSV writer is provided for eyeball
//! inspection of small paths.

use super::{ExcursionPath, PathOrigin};
use crate::error::{LabError, Result};
use std::io::{Read, Write};

const MAGIC: &[u8; 4] = b"LTEX";
const VERSION: u32 = 1;

impl ExcursionPath {
    pub fn write_ltex<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&(self.samples().len() as u64).to_le_bytes())?;
        w.write_all(&self.dt().to_le_bytes())?;
        for &x in self.samples() {
            w.write_all(&x.to_le_bytes())?;
        }
        Ok(())
    }

    /// Reads a path written by `write_ltex`; the result is tagged
    /// `Synthetic` unless re-tagged by the caller.
    pub fn read_ltex<R: Read>(r: &mut R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(LabError::Format(format!("bad magic {magic:?}")));
        }
        let mut b4 = [0u8; 4];
        r.read_exact(&mut b4)?;
        let version = u32::from_le_bytes(b4);
        if version != VERSION {
            return Err(LabError::Format(format!("unsupported version {version}")));
        }
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b8)?;
        let n = u64::from_le_bytes(b8) as usize;
        r.read_exact(&mut b8)?;
        let dt = f64::from_le_bytes(b8);
        let mut samples = Vec::with_capacity(n);
        for _ in 0..n {
            r.read_exact(&mut b8)?;
            samples.push(f64::from_le_bytes(b8));
        }
        ExcursionPath::new(samples, dt, PathOrigin::Synthetic)
    }

    /// Two-column CSV (t, h) for inspection.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "t,h")?;
        for (i, &x) in self.samples().iter().enumerate() {
            writeln!(w, "{},{}", i as f64 * self.dt(), x)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ltex_round_trip() {
        let path = ExcursionPath::new(vec![0.0, 0.5, 1.0, 0.25, 0.0], 0.1, PathOrigin::Synthetic)
            .unwrap();
        let mut buf = Vec::new();
        path.write_ltex(&mut buf).unwrap();
        let back = ExcursionPath::read_ltex(&mut buf.as_slice()).unwrap();
        assert_eq!(back.samples(), path.samples());
        assert_eq!(back.dt(), path.dt());
    }

    #[test]
    fn rejects_garbage() {
        let mut buf = b"NOPE".to_vec();
        buf.extend_from_slice(&[0u8; 32]);
        assert!(ExcursionPath::read_ltex(&mut buf.as_slice()).is_err());
    }

    #[test]
    fn csv_shape() {
        let path =
            ExcursionPath::new(vec![0.0, 1.0, 0.0], 0.5, PathOrigin::Synthetic).unwrap();
        let mut buf = Vec::new();
        path.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.starts_with("t,h\n0,0\n"));
    }
}
