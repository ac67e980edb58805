//! Binary on-disk cache of enumerated lattices.
//!
//! Layout, little-endian: magic `CXLT`, format version (u32), the type
//! string (u32 length + bytes), rank (u32), number of positive roots (u32),
//! number of flats (u64), SHA-256 of the root order (32 bytes), a covers
//! flag (u8), one u128 key per flat, and if flagged the cover count (u64)
//! followed by `(lo, hi)` pairs of u32.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use coxstrata::{IntersectionLattice, RootSet, RootSystem};
use sha2::{Digest, Sha256};

pub const MAGIC: &[u8; 4] = b"CXLT";
pub const VERSION: u32 = 1;

/// Fingerprint of the deterministic root ordering of `rs`.
pub fn root_order_checksum(rs: &RootSystem) -> [u8; 32] {
    let mut h = Sha256::new();
    for i in 0..rs.num_positive() {
        for &x in rs.root(i) {
            h.update(x.to_le_bytes());
        }
    }
    h.finalize().into()
}

pub fn cache_path(dir: &Path, rs: &RootSystem) -> PathBuf {
    dir.join(format!("{}.cxlt", rs.ctype()))
}

pub fn write(path: &Path, lat: &IntersectionLattice) -> io::Result<()> {
    let rs = lat.root_system();
    let mut buf = Vec::with_capacity(64 + 16 * lat.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    let name = rs.ctype().to_string();
    buf.extend_from_slice(&(name.len() as u32).to_le_bytes());
    buf.extend_from_slice(name.as_bytes());
    buf.extend_from_slice(&(rs.rank() as u32).to_le_bytes());
    buf.extend_from_slice(&(rs.num_positive() as u32).to_le_bytes());
    buf.extend_from_slice(&(lat.len() as u64).to_le_bytes());
    buf.extend_from_slice(&root_order_checksum(rs));
    buf.push(u8::from(lat.covers().is_some()));
    for f in lat.flats() {
        buf.extend_from_slice(&f.subsystem.bits().to_le_bytes());
    }
    if let Some(covers) = lat.covers() {
        buf.extend_from_slice(&(covers.len() as u64).to_le_bytes());
        for &(lo, hi) in covers {
            buf.extend_from_slice(&(lo as u32).to_le_bytes());
            buf.extend_from_slice(&(hi as u32).to_le_bytes());
        }
    }
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    // Write then rename so readers never see a partial file.
    let tmp = path.with_extension("cxlt.tmp");
    fs::File::create(&tmp)?.write_all(&buf)?;
    fs::rename(tmp, path)
}

struct Reader<'a>(&'a [u8]);

impl Reader<'_> {
    fn take<const N: usize>(&mut self) -> Option<[u8; N]> {
        let mut out = [0u8; N];
        (&mut self.0).read_exact(&mut out).ok()?;
        Some(out)
    }

    fn u32(&mut self) -> Option<u32> {
        self.take().map(u32::from_le_bytes)
    }

    fn u64(&mut self) -> Option<u64> {
        self.take().map(u64::from_le_bytes)
    }
}

/// Loads a cached lattice for `rs`, or `None` if the file is missing,
/// corrupt, or was written for a different version or root order.
pub fn read(path: &Path, rs: &Arc<RootSystem>) -> Option<IntersectionLattice> {
    let bytes = fs::read(path).ok()?;
    let mut r = Reader(&bytes);
    if &r.take::<4>()? != MAGIC || r.u32()? != VERSION {
        return None;
    }
    let name_len = r.u32()? as usize;
    if r.0.len() < name_len {
        return None;
    }
    let (name, rest) = r.0.split_at(name_len);
    r.0 = rest;
    if name != rs.ctype().to_string().as_bytes()
        || r.u32()? as usize != rs.rank()
        || r.u32()? as usize != rs.num_positive()
    {
        return None;
    }
    let count = usize::try_from(r.u64()?).ok()?;
    if r.take::<32>()? != root_order_checksum(rs) {
        return None;
    }
    let has_covers = r.take::<1>()?[0] == 1;
    if r.0.len() < count.checked_mul(16)? {
        return None;
    }
    let keys: Vec<RootSet> = (0..count)
        .map(|_| {
            r.take::<16>()
                .map(|b| RootSet::from_bits(u128::from_le_bytes(b)))
        })
        .collect::<Option<_>>()?;
    let covers = if has_covers {
        let n = usize::try_from(r.u64()?).ok()?;
        if r.0.len() != n.checked_mul(8)? {
            return None;
        }
        Some(
            (0..n)
                .map(|_| Some((r.u32()? as usize, r.u32()? as usize)))
                .collect::<Option<Vec<_>>>()?,
        )
    } else {
        None
    };
    if !r.0.is_empty() {
        return None;
    }
    let lat = IntersectionLattice::from_parts(rs.clone(), keys.clone(), covers).ok()?;
    // Stored ids must already be canonical.
    lat.flats()
        .iter()
        .map(|f| f.subsystem)
        .eq(keys)
        .then_some(lat)
}
