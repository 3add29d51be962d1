//! On-disk snapshots of a universe's comparison and strength memos.
//!
//! A snapshot starts with the magic `MSRC`, a format version and the
//! universe fingerprint; anything that does not match is ignored, so cache
//! files are always safe to delete. Forms are stored in printed notation.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use crate::augmented::AugId;
use crate::games::GameId;
use crate::notation::{parse_aug, parse_game, print, print_game};
use crate::order::{Condition, Failure, TriVerdict};
use crate::universes::{StrongVerdict, Universe};

const MAGIC: &[u8; 4] = b"MSRC";
pub const FORMAT_VERSION: u32 = 1;

/// File name used for a universe inside a cache directory.
pub fn cache_path(dir: &Path, u: &Universe) -> PathBuf {
    let name: String = u
        .spec()
        .fingerprint()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    let digest = u
        .spec()
        .fingerprint()
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
            (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
        });
    dir.join(format!(
        "{}-{digest:016x}.msrc",
        &name[..name.len().min(40)]
    ))
}

/// Writes both memos; returns the number of entries written.
pub fn save(u: &Universe, path: &Path) -> io::Result<usize> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    put_u32(&mut out, FORMAT_VERSION);
    put_str(&mut out, &u.spec().fingerprint());
    let geq: Vec<((AugId, AugId), TriVerdict)> =
        u.geq_memo.lock().iter().map(|(k, v)| (*k, *v)).collect();
    let strong: Vec<(AugId, StrongVerdict)> =
        u.strong.lock().iter().map(|(k, v)| (*k, *v)).collect();
    put_u32(&mut out, geq.len() as u32);
    for ((g, h), v) in &geq {
        put_str(&mut out, &print(*g));
        put_str(&mut out, &print(*h));
        put_tri(&mut out, *v);
    }
    put_u32(&mut out, strong.len() as u32);
    for (a, v) in &strong {
        put_str(&mut out, &print(*a));
        match v {
            StrongVerdict::ProvenStrong => out.push(0),
            StrongVerdict::BoundedStrong(b) => {
                out.push(1);
                put_u32(&mut out, *b);
            }
            StrongVerdict::ProvenNotStrong(x) => {
                out.push(2);
                put_str(&mut out, &print_game(*x));
            }
        }
    }
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tmp");
    fs::File::create(&tmp)?.write_all(&out)?;
    fs::rename(tmp, path)?;
    Ok(geq.len() + strong.len())
}

/// Loads a snapshot into the memos. Returns `Ok(0)` when the file is
/// missing or belongs to another universe or format version.
pub fn load(u: &Universe, path: &Path) -> io::Result<usize> {
    let mut bytes = Vec::new();
    match fs::File::open(path) {
        Ok(mut f) => f.read_to_end(&mut bytes)?,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(0),
        Err(e) => return Err(e),
    };
    let mut r = Reader {
        bytes: &bytes,
        pos: 0,
    };
    if r.take(4)? != MAGIC || r.u32()? != FORMAT_VERSION || r.string()? != u.spec().fingerprint() {
        return Ok(0);
    }
    let mut geq = Vec::new();
    for _ in 0..r.u32()? {
        let g = r.aug()?;
        let h = r.aug()?;
        geq.push(((g, h), r.tri()?));
    }
    let mut strong = Vec::new();
    for _ in 0..r.u32()? {
        let a = r.aug()?;
        let v = match r.byte()? {
            0 => StrongVerdict::ProvenStrong,
            1 => StrongVerdict::BoundedStrong(r.u32()?),
            2 => StrongVerdict::ProvenNotStrong(r.game()?),
            _ => return Err(invalid("strength tag")),
        };
        strong.push((a, v));
    }
    let n = geq.len() + strong.len();
    u.geq_memo.lock().extend(geq);
    u.strong.lock().extend(strong);
    Ok(n)
}

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_str(out: &mut Vec<u8>, s: &str) {
    put_u32(out, s.len() as u32);
    out.extend_from_slice(s.as_bytes());
}

fn put_opt(out: &mut Vec<u8>, s: Option<String>) {
    match s {
        Some(s) => {
            out.push(1);
            put_str(out, &s);
        }
        None => out.push(0),
    }
}

fn put_tri(out: &mut Vec<u8>, v: TriVerdict) {
    match v {
        TriVerdict::ProvenTrue => out.push(0),
        TriVerdict::BoundedTrue(b) => {
            out.push(1);
            put_u32(out, b);
        }
        TriVerdict::ProvenFalse(f) => {
            out.push(2);
            out.push(match f.condition {
                Condition::A => 0,
                Condition::B => 1,
                Condition::C => 2,
                Condition::D => 3,
            });
            put_opt(out, f.option.map(print));
            put_opt(out, f.end.map(print_game));
        }
    }
}

fn invalid(what: &str) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, format!("corrupt cache: {what}"))
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> io::Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| invalid("truncated"))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn byte(&mut self) -> io::Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> io::Result<u32> {
        Ok(u32::from_le_bytes(
            self.take(4)?.try_into().expect("four bytes"),
        ))
    }

    fn string(&mut self) -> io::Result<String> {
        let n = self.u32()? as usize;
        String::from_utf8(self.take(n)?.to_vec()).map_err(|_| invalid("utf-8"))
    }

    fn aug(&mut self) -> io::Result<AugId> {
        parse_aug(&self.string()?).map_err(|_| invalid("form"))
    }

    fn game(&mut self) -> io::Result<GameId> {
        parse_game(&self.string()?).map_err(|_| invalid("form"))
    }

    fn opt<T>(&mut self, f: impl FnOnce(&mut Self) -> io::Result<T>) -> io::Result<Option<T>> {
        match self.byte()? {
            0 => Ok(None),
            1 => f(self).map(Some),
            _ => Err(invalid("option tag")),
        }
    }

    fn tri(&mut self) -> io::Result<TriVerdict> {
        Ok(match self.byte()? {
            0 => TriVerdict::ProvenTrue,
            1 => TriVerdict::BoundedTrue(self.u32()?),
            2 => {
                let condition = match self.byte()? {
                    0 => Condition::A,
                    1 => Condition::B,
                    2 => Condition::C,
                    3 => Condition::D,
                    _ => return Err(invalid("condition")),
                };
                let option = self.opt(Self::aug)?;
                let end = self.opt(Self::game)?;
                TriVerdict::ProvenFalse(Failure {
                    condition,
                    option,
                    end,
                })
            }
            _ => return Err(invalid("verdict tag")),
        })
    }
}
