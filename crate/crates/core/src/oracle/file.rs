//! Flat binary format: `"ROPC"`, then little-endian `u32` version, `u32` p,
//! `u32` n, `u64` count, followed by `count` sorted `u64` member codes.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use super::RopClass;
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"ROPC";
const VERSION: u32 = 1;

impl RopClass {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(24 + 8 * self.members.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(self.p() as u32).to_le_bytes());
        out.extend_from_slice(&(self.n() as u32).to_le_bytes());
        out.extend_from_slice(&(self.members.len() as u64).to_le_bytes());
        for m in &self.members {
            out.extend_from_slice(&m.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |msg: &str| Error::Io(format!("malformed class file: {msg}"));
        let mut r = bytes;
        let mut take = |k: usize| -> Result<&[u8]> {
            if r.len() < k {
                return Err(bad("truncated"));
            }
            let (head, tail) = r.split_at(k);
            r = tail;
            Ok(head)
        };
        if take(4)? != MAGIC {
            return Err(bad("bad magic"));
        }
        let u32_at = |b: &[u8]| u32::from_le_bytes(b.try_into().expect("4 bytes"));
        let version = u32_at(take(4)?);
        if version != VERSION {
            return Err(bad(&format!("unsupported version {version}")));
        }
        let p = u32_at(take(4)?) as u64;
        let n = u32_at(take(4)?) as usize;
        let count = u64::from_le_bytes(take(8)?.try_into().expect("8 bytes")) as usize;
        let body = take(count.checked_mul(8).ok_or_else(|| bad("count overflow"))?)?;
        let members: Vec<u64> = body
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        if !members.windows(2).all(|w| w[0] < w[1]) {
            return Err(bad("members not strictly increasing"));
        }
        if bytes.len() != 24 + 8 * count {
            return Err(bad("trailing bytes"));
        }
        RopClass::from_codes(p, n, members)
    }

    /// Writes to a temporary file next to `path` and renames it into place.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = Path::new(&tmp);
        let mut f = fs::File::create(tmp)?;
        f.write_all(&self.to_bytes())?;
        f.sync_all()?;
        drop(f);
        fs::rename(tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut bytes = Vec::new();
        fs::File::open(path)?.read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::super::enumerate_rops;
    use super::*;

    #[test]
    fn bytes_round_trip() {
        let c = enumerate_rops(3, 2).unwrap();
        let bytes = c.to_bytes();
        assert_eq!(&bytes[..4], b"ROPC");
        assert_eq!(bytes.len(), 24 + 8 * c.len());
        assert_eq!(RopClass::from_bytes(&bytes).unwrap(), c);
    }

    #[test]
    fn rejects_corruption() {
        let c = enumerate_rops(2, 2).unwrap();
        let mut bytes = c.to_bytes();
        assert!(RopClass::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        bytes.push(0);
        assert!(RopClass::from_bytes(&bytes).is_err());
        bytes[0] = b'X';
        assert!(RopClass::from_bytes(&bytes).is_err());
    }
}
