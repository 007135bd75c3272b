//! Serialisation of space-time fields.
//!
//! JSON mirrors the structs: `{"times": {"start", "step", "len"}, "frames":
//! [{"grid": {"dim", "n", "length"}, "values": [[re, im], ...]}, ...]}`.
//!
//! The binary layout is little-endian throughout:
//!
//! | bytes | content                                   |
//! |-------|-------------------------------------------|
//! | 4     | magic `STFB`                              |
//! | 4     | format version (`u32`, currently 1)       |
//! | 4     | dimension `n` (`u32`)                     |
//! | 4     | samples per axis `N` (`u32`)              |
//! | 8     | box length `L` (`f64`)                    |
//! | 8     | first time (`f64`)                        |
//! | 8     | time step (`f64`)                         |
//! | 8     | number of frames (`u64`)                  |
//! | …     | frames in time order, each `N^n` pairs of `f64` (re, im), row-major |

use std::io::{Read, Write};

use num_complex::Complex64;

use super::{Field, PropagatorError, SpaceTimeField, SpatialGrid, TimeGrid};

const MAGIC: &[u8; 4] = b"STFB";
const VERSION: u32 = 1;

fn io_err(e: std::io::Error) -> PropagatorError {
    PropagatorError::Format(e.to_string())
}

pub fn write_binary(field: &SpaceTimeField, mut w: impl Write) -> Result<(), PropagatorError> {
    let grid = field.grid();
    let mut header = Vec::with_capacity(48);
    header.extend_from_slice(MAGIC);
    header.extend_from_slice(&VERSION.to_le_bytes());
    header.extend_from_slice(&(grid.dim() as u32).to_le_bytes());
    header.extend_from_slice(&(grid.points_per_axis() as u32).to_le_bytes());
    header.extend_from_slice(&grid.length().to_le_bytes());
    header.extend_from_slice(&field.times.start.to_le_bytes());
    header.extend_from_slice(&field.times.step.to_le_bytes());
    header.extend_from_slice(&(field.times.len as u64).to_le_bytes());
    w.write_all(&header).map_err(io_err)?;
    let mut buf = Vec::with_capacity(grid.len() * 16);
    for frame in &field.frames {
        buf.clear();
        for z in &frame.values {
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
        w.write_all(&buf).map_err(io_err)?;
    }
    Ok(())
}

fn take<const K: usize>(r: &mut impl Read) -> Result<[u8; K], PropagatorError> {
    let mut b = [0u8; K];
    r.read_exact(&mut b).map_err(io_err)?;
    Ok(b)
}

pub fn read_binary(mut r: impl Read) -> Result<SpaceTimeField, PropagatorError> {
    if &take::<4>(&mut r)? != MAGIC {
        return Err(PropagatorError::Format("bad magic".into()));
    }
    let version = u32::from_le_bytes(take(&mut r)?);
    if version != VERSION {
        return Err(PropagatorError::Format(format!("unsupported version {version}")));
    }
    let dim = u32::from_le_bytes(take(&mut r)?) as usize;
    let n = u32::from_le_bytes(take(&mut r)?) as usize;
    let length = f64::from_le_bytes(take(&mut r)?);
    let start = f64::from_le_bytes(take(&mut r)?);
    let step = f64::from_le_bytes(take(&mut r)?);
    let len = u64::from_le_bytes(take(&mut r)?) as usize;
    let grid = SpatialGrid::new(dim, n, length)?;
    let times = TimeGrid::new(start, step, len)?;
    let mut frames = Vec::with_capacity(len);
    let mut raw = vec![0u8; grid.len() * 16];
    for _ in 0..len {
        r.read_exact(&mut raw).map_err(io_err)?;
        let values = raw
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
                let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
                Complex64::new(re, im)
            })
            .collect();
        frames.push(Field::new(grid, values)?);
    }
    SpaceTimeField::new(times, frames)
}

pub fn to_json(field: &SpaceTimeField) -> String {
    serde_json::to_string(field).expect("space-time fields always serialise")
}

/// Parses and re-validates a field written by [`to_json`].
pub fn from_json(text: &str) -> Result<SpaceTimeField, PropagatorError> {
    let raw: SpaceTimeField =
        serde_json::from_str(text).map_err(|e| PropagatorError::Format(e.to_string()))?;
    let times = TimeGrid::new(raw.times.start, raw.times.step, raw.times.len)?;
    let frames = raw
        .frames
        .into_iter()
        .map(|f| {
            let g = f.grid;
            Field::new(SpatialGrid::new(g.dim(), g.points_per_axis(), g.length())?, f.values)
        })
        .collect::<Result<Vec<_>, _>>()?;
    SpaceTimeField::new(times, frames)
}
