//! Sparse on-disk surface format (`.fsurf`), little-endian:
//!
//! ```text
//! magic   b"FSRF"
//! version u16 = 1
//! n       u32   timesteps
//! d       u32   descriptor dimension
//! n times:
//!   count u32
//!   count times: threshold f64, d x f64
//! ```

use crate::error::{Error, Result};
use crate::filtration::FiltrationCurve;

pub const FSURF_EXTENSION: &str = "fsurf";
const MAGIC: &[u8; 4] = b"FSRF";
const VERSION: u16 = 1;

pub fn encode_curves(curves: &[FiltrationCurve]) -> Result<Vec<u8>> {
    let d = curves.first().map_or(0, FiltrationCurve::dim);
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(curves.len() as u32).to_le_bytes());
    out.extend_from_slice(&(d as u32).to_le_bytes());
    for c in curves {
        if c.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: c.dim(),
            });
        }
        out.extend_from_slice(&(c.entries().len() as u32).to_le_bytes());
        for (t, v) in c.entries() {
            out.extend_from_slice(&t.to_le_bytes());
            for x in v {
                out.extend_from_slice(&x.to_le_bytes());
            }
        }
    }
    Ok(out)
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| Error::Format {
                what: "fsurf",
                msg: format!("truncated at byte {}", self.pos),
            })?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().expect("2 bytes")))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}

pub fn decode_curves(bytes: &[u8]) -> Result<Vec<FiltrationCurve>> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.take(4)? != MAGIC {
        return Err(Error::Format {
            what: "fsurf",
            msg: "bad magic".into(),
        });
    }
    let version = r.u16()?;
    if version != VERSION {
        return Err(Error::Format {
            what: "fsurf",
            msg: format!("unsupported version {version}"),
        });
    }
    let n = r.u32()? as usize;
    let d = r.u32()? as usize;
    let mut curves = Vec::with_capacity(n.min(1 << 16));
    for _ in 0..n {
        let count = r.u32()? as usize;
        let mut entries = Vec::with_capacity(count.min(1 << 16));
        for _ in 0..count {
            let t = r.f64()?;
            let v = (0..d).map(|_| r.f64()).collect::<Result<Vec<_>>>()?;
            entries.push((t, v));
        }
        curves.push(FiltrationCurve::new(d, entries)?);
    }
    if r.pos != bytes.len() {
        return Err(Error::Format {
            what: "fsurf",
            msg: format!("{} trailing bytes", bytes.len() - r.pos),
        });
    }
    Ok(curves)
}
