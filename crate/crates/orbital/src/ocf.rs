//! OCF1: a compact binary container for orbit census records.
//!
//! Layout (all integers little-endian):
//!   magic  b"OCF1"
//!   u32    m   (variables)
//!   u32    d   (degree)
//!   u32    q   (field size)
//!   u64    record count
//! then per record:
//!   coeffs: for q = 2, ceil(N/8) bytes, coefficient i at bit (i % 8) of
//!           byte (i / 8); otherwise N bytes, one coefficient per byte
//!   u64    stabilizer order
//!   u32    stabilizer generator count
//!   per generator: m*m bytes, row-major, one entry per byte
//! where N is the number of degree-d monomials in m variables.

use crate::run::OrbitRecord;
use crate::OrbitalError;
use ffla::{Field, GfMatrix};
use std::io::{Read, Write};
use std::sync::Arc;
use symspace::{Form, MonomialBasis};

const MAGIC: &[u8; 4] = b"OCF1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OcfHeader {
    pub m: u32,
    pub d: u32,
    pub q: u32,
    pub count: u64,
}

/// A record as stored: coefficients in monomial order plus stabilizer data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OcfRecord {
    pub coeffs: Vec<u16>,
    pub stab_order: u64,
    pub stab_gens: Vec<Vec<u16>>,
}

impl OcfRecord {
    pub fn from_orbit(r: &OrbitRecord) -> Self {
        OcfRecord {
            coeffs: r.rep.to_vec(),
            stab_order: r.stab_order,
            stab_gens: r
                .stab_gens
                .iter()
                .map(|g| {
                    let m = g.rows();
                    (0..m * m).map(|i| g.get(i / m, i % m)).collect()
                })
                .collect(),
        }
    }

    pub fn to_form(&self, basis: &Arc<MonomialBasis>, field: &Arc<Field>) -> Form {
        Form::from_coeffs(Arc::clone(basis), Arc::clone(field), &self.coeffs)
    }

    pub fn gens_matrices(&self, field: &Arc<Field>, m: usize) -> Vec<GfMatrix> {
        self.stab_gens
            .iter()
            .map(|g| GfMatrix::from_fn(Arc::clone(field), m, m, |r, c| g[r * m + c]))
            .collect()
    }
}

fn coeff_bytes(n: usize, q: u32) -> usize {
    if q == 2 {
        n.div_ceil(8)
    } else {
        n
    }
}

/// Streams records to a writer. `count` must match the number the iterator
/// yields; the header is written first.
pub fn write_ocf1(
    mut out: impl Write,
    header: OcfHeader,
    records: impl IntoIterator<Item = OcfRecord>,
) -> Result<(), OrbitalError> {
    out.write_all(MAGIC)?;
    out.write_all(&header.m.to_le_bytes())?;
    out.write_all(&header.d.to_le_bytes())?;
    out.write_all(&header.q.to_le_bytes())?;
    out.write_all(&header.count.to_le_bytes())?;
    let basis = MonomialBasis::new(header.m as usize, header.d);
    let n = basis.size();
    let cb = coeff_bytes(n, header.q);
    let m = header.m as usize;
    let mut written = 0u64;
    for rec in records {
        if rec.coeffs.len() != n {
            return Err(OrbitalError::Format(format!(
                "record has {} coefficients, expected {n}",
                rec.coeffs.len()
            )));
        }
        let mut buf = vec![0u8; cb];
        if header.q == 2 {
            for (i, &c) in rec.coeffs.iter().enumerate() {
                if c != 0 {
                    buf[i / 8] |= 1 << (i % 8);
                }
            }
        } else {
            for (i, &c) in rec.coeffs.iter().enumerate() {
                buf[i] = c as u8;
            }
        }
        out.write_all(&buf)?;
        out.write_all(&rec.stab_order.to_le_bytes())?;
        out.write_all(&(rec.stab_gens.len() as u32).to_le_bytes())?;
        for g in &rec.stab_gens {
            if g.len() != m * m {
                return Err(OrbitalError::Format(format!(
                    "generator has {} entries, expected {}",
                    g.len(),
                    m * m
                )));
            }
            let bytes: Vec<u8> = g.iter().map(|&v| v as u8).collect();
            out.write_all(&bytes)?;
        }
        written += 1;
    }
    if written != header.count {
        return Err(OrbitalError::Format(format!(
            "header promised {} records, wrote {written}",
            header.count
        )));
    }
    Ok(())
}

pub fn read_ocf1(mut input: impl Read) -> Result<(OcfHeader, Vec<OcfRecord>), OrbitalError> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(OrbitalError::Format(format!(
            "bad magic {magic:?}, expected {MAGIC:?}"
        )));
    }
    let mut u32buf = [0u8; 4];
    let mut u64buf = [0u8; 8];
    input.read_exact(&mut u32buf)?;
    let m = u32::from_le_bytes(u32buf);
    input.read_exact(&mut u32buf)?;
    let d = u32::from_le_bytes(u32buf);
    input.read_exact(&mut u32buf)?;
    let q = u32::from_le_bytes(u32buf);
    input.read_exact(&mut u64buf)?;
    let count = u64::from_le_bytes(u64buf);
    let header = OcfHeader { m, d, q, count };
    let basis = MonomialBasis::new(m as usize, d);
    let n = basis.size();
    let cb = coeff_bytes(n, q);
    let msz = (m * m) as usize;
    let mut records = Vec::with_capacity(count.min(1 << 24) as usize);
    for _ in 0..count {
        let mut buf = vec![0u8; cb];
        input.read_exact(&mut buf)?;
        let coeffs: Vec<u16> = if q == 2 {
            (0..n).map(|i| ((buf[i / 8] >> (i % 8)) & 1) as u16).collect()
        } else {
            buf.iter().map(|&b| b as u16).collect()
        };
        input.read_exact(&mut u64buf)?;
        let stab_order = u64::from_le_bytes(u64buf);
        input.read_exact(&mut u32buf)?;
        let gen_count = u32::from_le_bytes(u32buf);
        let mut stab_gens = Vec::with_capacity(gen_count as usize);
        for _ in 0..gen_count {
            let mut gbuf = vec![0u8; msz];
            input.read_exact(&mut gbuf)?;
            stab_gens.push(gbuf.iter().map(|&b| b as u16).collect());
        }
        records.push(OcfRecord {
            coeffs,
            stab_order,
            stab_gens,
        });
    }
    // trailing garbage is an error
    let mut probe = [0u8; 1];
    if input.read(&mut probe)? != 0 {
        return Err(OrbitalError::Format("trailing bytes after records".into()));
    }
    Ok((header, records))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_q2() {
        let header = OcfHeader {
            m: 3,
            d: 2,
            q: 2,
            count: 2,
        };
        let recs = vec![
            OcfRecord {
                coeffs: vec![1, 0, 1, 0, 0, 1],
                stab_order: 42,
                stab_gens: vec![vec![1, 0, 0, 0, 1, 0, 0, 0, 1], vec![0, 1, 0, 1, 0, 0, 0, 0, 1]],
            },
            OcfRecord {
                coeffs: vec![0; 6],
                stab_order: 168,
                stab_gens: vec![],
            },
        ];
        let mut buf = Vec::new();
        write_ocf1(&mut buf, header, recs.clone()).unwrap();
        let (h2, r2) = read_ocf1(buf.as_slice()).unwrap();
        assert_eq!(h2, header);
        assert_eq!(r2, recs);
    }

    #[test]
    fn round_trip_q3() {
        let header = OcfHeader {
            m: 2,
            d: 2,
            q: 3,
            count: 1,
        };
        let recs = vec![OcfRecord {
            coeffs: vec![2, 1, 0],
            stab_order: 8,
            stab_gens: vec![vec![2, 0, 0, 2]],
        }];
        let mut buf = Vec::new();
        write_ocf1(&mut buf, header, recs.clone()).unwrap();
        let (h2, r2) = read_ocf1(buf.as_slice()).unwrap();
        assert_eq!(h2, header);
        assert_eq!(r2, recs);
    }

    #[test]
    fn rejects_bad_magic_and_count_mismatch() {
        let header = OcfHeader {
            m: 2,
            d: 2,
            q: 2,
            count: 5,
        };
        let mut buf = Vec::new();
        assert!(write_ocf1(&mut buf, header, vec![]).is_err());
        assert!(read_ocf1(&b"NOPE"[..]).is_err());
    }
}
