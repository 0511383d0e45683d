//! Signal file formats for the harness.
//!
//! Binary: little-endian magic "SFT1", u64 length n, then n interleaved
//! float64 (re, im) pairs. A JSON array-of-[re, im] variant exists for
//! small fixtures.

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::error::{ensure_power_of_two, Error, Result};

const MAGIC: &[u8; 4] = b"SFT1";

pub fn write_signal<W: Write>(w: &mut W, values: &[Complex64]) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(values.len() as u64).to_le_bytes())?;
    for v in values {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_signal<R: Read>(r: &mut R) -> Result<Vec<Complex64>> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::BadSignalFile(format!(
            "bad magic {:?}, expected {:?}",
            magic, MAGIC
        )));
    }
    let mut len_bytes = [0u8; 8];
    r.read_exact(&mut len_bytes)?;
    let n = u64::from_le_bytes(len_bytes) as usize;
    ensure_power_of_two(n)?;
    let mut buf = vec![0u8; 16];
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        r.read_exact(&mut buf)?;
        let re = f64::from_le_bytes(buf[0..8].try_into().unwrap());
        let im = f64::from_le_bytes(buf[8..16].try_into().unwrap());
        out.push(Complex64::new(re, im));
    }
    Ok(out)
}

pub fn write_signal_json<W: Write>(w: &mut W, values: &[Complex64]) -> Result<()> {
    let arr: Vec<[f64; 2]> = values.iter().map(|v| [v.re, v.im]).collect();
    serde_json::to_writer(w, &arr)?;
    Ok(())
}

pub fn read_signal_json<R: Read>(r: &mut R) -> Result<Vec<Complex64>> {
    let arr: Vec<[f64; 2]> = serde_json::from_reader(r)?;
    Ok(arr.iter().map(|p| Complex64::new(p[0], p[1])).collect())
}
