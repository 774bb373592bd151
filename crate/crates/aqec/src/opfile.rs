//! Dense binary operator files, used to cache recovery channels.
//!
//! Layout, all little-endian:
//!
//! ```text
//! b"AQOP"  u32 version (=1)  u32 kind  u64 count
//! count × { u64 rows  u64 cols  rows·cols × (f64 re, f64 im) row-major }
//! ```
//!
//! `kind` 0 is a plain operator list. `kind` 1 is a Kraus channel whose last
//! two operators are the completion `P⊥` and its target state.

use std::io::{Read, Write};
use std::path::Path;

use aqec_core::lindblad::{CMat, Completion, KrausChannel};
use num_complex::Complex64;

use crate::error::{io_err, AppError, AppResult};

pub const MAGIC: [u8; 4] = *b"AQOP";
pub const VERSION: u32 = 1;
const KIND_LIST: u32 = 0;
const KIND_CHANNEL: u32 = 1;
/// Refuse headers that would allocate more than this many entries.
const MAX_ENTRIES: u64 = 1 << 28;

fn put_u32(w: &mut impl Write, v: u32) -> std::io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

fn put_u64(w: &mut impl Write, v: u64) -> std::io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

fn get<const N: usize>(r: &mut impl Read) -> AppResult<[u8; N]> {
    let mut b = [0u8; N];
    r.read_exact(&mut b).map_err(|e| AppError::Format(format!("truncated operator file: {}", e)))?;
    Ok(b)
}

fn write_ops(w: &mut impl Write, kind: u32, ops: &[&CMat]) -> std::io::Result<()> {
    w.write_all(&MAGIC)?;
    put_u32(w, VERSION)?;
    put_u32(w, kind)?;
    put_u64(w, ops.len() as u64)?;
    for m in ops {
        put_u64(w, m.nrows() as u64)?;
        put_u64(w, m.ncols() as u64)?;
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                w.write_all(&z.re.to_le_bytes())?;
                w.write_all(&z.im.to_le_bytes())?;
            }
        }
    }
    Ok(())
}

fn read_ops(r: &mut impl Read) -> AppResult<(u32, Vec<CMat>)> {
    if get::<4>(r)? != MAGIC {
        return Err(AppError::Format("not an operator file (bad magic)".into()));
    }
    let version = u32::from_le_bytes(get(r)?);
    if version != VERSION {
        return Err(AppError::Format(format!("unsupported operator file version {}", version)));
    }
    let kind = u32::from_le_bytes(get(r)?);
    let count = u64::from_le_bytes(get(r)?);
    let mut ops = Vec::new();
    let mut budget = MAX_ENTRIES;
    for _ in 0..count {
        let rows = u64::from_le_bytes(get(r)?);
        let cols = u64::from_le_bytes(get(r)?);
        let n = rows.checked_mul(cols).filter(|&n| n <= budget).ok_or_else(|| {
            AppError::Format(format!("operator of {}×{} exceeds the size limit", rows, cols))
        })?;
        budget -= n;
        let mut m = CMat::zeros(rows as usize, cols as usize);
        for i in 0..rows as usize {
            for j in 0..cols as usize {
                let re = f64::from_le_bytes(get(r)?);
                let im = f64::from_le_bytes(get(r)?);
                m[(i, j)] = Complex64::new(re, im);
            }
        }
        ops.push(m);
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest).map_err(|e| AppError::Format(e.to_string()))? != 0 {
        return Err(AppError::Format("trailing bytes after last operator".into()));
    }
    Ok((kind, ops))
}

pub fn encode(ops: &[CMat]) -> Vec<u8> {
    let mut buf = Vec::new();
    let refs: Vec<&CMat> = ops.iter().collect();
    write_ops(&mut buf, KIND_LIST, &refs).expect("writing to a Vec cannot fail");
    buf
}

pub fn decode(bytes: &[u8]) -> AppResult<Vec<CMat>> {
    match read_ops(&mut &bytes[..])? {
        (KIND_LIST, ops) => Ok(ops),
        (k, _) => Err(AppError::Format(format!("expected an operator list, found kind {}", k))),
    }
}

pub fn encode_channel(ch: &KrausChannel) -> Vec<u8> {
    let mut refs: Vec<&CMat> = ch.kraus().iter().collect();
    let kind = match ch.completion() {
        Some(c) => {
            refs.push(&c.complement);
            refs.push(&c.target);
            KIND_CHANNEL
        }
        None => KIND_LIST,
    };
    let mut buf = Vec::new();
    write_ops(&mut buf, kind, &refs).expect("writing to a Vec cannot fail");
    buf
}

pub fn decode_channel(bytes: &[u8]) -> AppResult<KrausChannel> {
    let (kind, mut ops) = read_ops(&mut &bytes[..])?;
    let completion = match kind {
        KIND_LIST => None,
        KIND_CHANNEL if ops.len() >= 3 => {
            let target = ops.pop().expect("length checked");
            let complement = ops.pop().expect("length checked");
            Some(Completion { complement, target })
        }
        KIND_CHANNEL => return Err(AppError::Format("channel file needs at least three operators".into())),
        k => return Err(AppError::Format(format!("unknown operator file kind {}", k))),
    };
    Ok(KrausChannel::new(ops, completion)?)
}

pub fn save_channel(path: &Path, ch: &KrausChannel) -> AppResult<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    std::fs::write(path, encode_channel(ch)).map_err(io_err(path))
}

pub fn load_channel(path: &Path) -> AppResult<KrausChannel> {
    decode_channel(&std::fs::read(path).map_err(io_err(path))?)
}
