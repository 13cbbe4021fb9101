//! Precomputed corner angles for integer intensity differences.
//!
//! With unit pixel size and 8-bit intensities every difference lies in
//! `[-255, 255]`, so the corner angle is a function on a 511 x 511 grid.
//! [`AngleLut::full`] stores all of it. [`AngleLut::partial`] stores only the
//! band where at least one difference is below a threshold `T` and replaces
//! the rest with the limiting value of the angle (0 for same-sign pairs, pi
//! for opposite-sign pairs).

use std::f64::consts::PI;
use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::curvature::corner_angle;
use crate::error::{CurvatureError, IoError};

/// Largest magnitude of an 8-bit intensity difference.
pub const MAX_DIFF: i32 = 255;
/// Table side: every difference in `[-255, 255]`.
pub const SIDE: usize = 511;
/// Threshold suggested for natural images.
pub const DEFAULT_THRESHOLD: u32 = 31;

/// Value substituted outside the partial band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LimitOrientation {
    /// 0 when `d_i*d_next > 0`, pi when `< 0`: the limit of the angle as both
    /// differences grow.
    #[default]
    AnalyticLimit,
    /// pi when `d_i*d_next > 0`, 0 when `< 0`. Inverted with respect to the
    /// limit; only useful for reproducing that convention.
    PaperLiteral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LutVariant {
    Full,
    Partial {
        threshold: u32,
        orientation: LimitOrientation,
    },
}

/// Number of stored entries of a partial table with threshold `t`:
/// `2*511*(2t-1) - (2t-1)^2`.
pub const fn partial_entry_count(threshold: u32) -> usize {
    let band = 2 * threshold as usize - 1;
    2 * SIDE * band - band * band
}

#[inline]
fn full_index(d_i: i32, d_next: i32) -> usize {
    (d_i + MAX_DIFF) as usize * SIDE + (d_next + MAX_DIFF) as usize
}

fn check_diff(d: i32) -> Result<(), CurvatureError> {
    if (-MAX_DIFF..=MAX_DIFF).contains(&d) {
        Ok(())
    } else {
        Err(CurvatureError::DifferenceOutOfRange(d))
    }
}

/// Every angle on the 511 x 511 grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FullTable {
    data: Vec<f64>,
}

impl FullTable {
    fn build() -> Self {
        let mut data = vec![0.0; SIDE * SIDE];
        data.par_chunks_mut(SIDE)
            .enumerate()
            .for_each(|(row, out)| {
                let a = f64::from(row as i32 - MAX_DIFF);
                for (col, v) in out.iter_mut().enumerate() {
                    *v = corner_angle(a, f64::from(col as i32 - MAX_DIFF), 1.0);
                }
            });
        Self { data }
    }

    /// Unchecked lookup; both differences must lie in `[-255, 255]`.
    #[inline(always)]
    pub fn angle(&self, d_i: i32, d_next: i32) -> f64 {
        debug_assert!(d_i.abs() <= MAX_DIFF && d_next.abs() <= MAX_DIFF);
        self.data[full_index(d_i, d_next)]
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }
}

/// Band of the table where `|d_i| < T` or `|d_next| < T`.
///
/// `rows` holds the `2T-1` full rows with `|d_i| < T`; `cols` holds, for the
/// remaining `511-(2T-1)` rows, the `2T-1` columns with `|d_next| < T`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialTable {
    threshold: i32,
    band: usize,
    orientation: LimitOrientation,
    rows: Vec<f64>,
    cols: Vec<f64>,
}

impl PartialTable {
    fn build(threshold: u32, orientation: LimitOrientation) -> Self {
        let t = threshold as i32;
        let band = (2 * t - 1) as usize;
        let mut rows = Vec::with_capacity(band * SIDE);
        for a in (1 - t)..t {
            for b in -MAX_DIFF..=MAX_DIFF {
                rows.push(corner_angle(f64::from(a), f64::from(b), 1.0));
            }
        }
        let mut cols = Vec::with_capacity((SIDE - band) * band);
        for a in (-MAX_DIFF..=-t).chain(t..=MAX_DIFF) {
            for b in (1 - t)..t {
                cols.push(corner_angle(f64::from(a), f64::from(b), 1.0));
            }
        }
        Self {
            threshold: t,
            band,
            orientation,
            rows,
            cols,
        }
    }

    #[inline(always)]
    fn outer_row(&self, d_i: i32) -> usize {
        if d_i < 0 {
            (d_i + MAX_DIFF) as usize
        } else {
            (MAX_DIFF + 1 - self.threshold + d_i - self.threshold) as usize
        }
    }

    /// Unchecked lookup; both differences must lie in `[-255, 255]`.
    #[inline(always)]
    pub fn angle(&self, d_i: i32, d_next: i32) -> f64 {
        debug_assert!(d_i.abs() <= MAX_DIFF && d_next.abs() <= MAX_DIFF);
        let t = self.threshold;
        if d_i.abs() < t {
            self.rows[(d_i + t - 1) as usize * SIDE + (d_next + MAX_DIFF) as usize]
        } else if d_next.abs() < t {
            self.cols[self.outer_row(d_i) * self.band + (d_next + t - 1) as usize]
        } else {
            // Both magnitudes are at least T >= 1, so the product is nonzero.
            let same_sign = (d_i > 0) == (d_next > 0);
            match (self.orientation, same_sign) {
                (LimitOrientation::AnalyticLimit, true) => 0.0,
                (LimitOrientation::AnalyticLimit, false) => PI,
                (LimitOrientation::PaperLiteral, true) => PI,
                (LimitOrientation::PaperLiteral, false) => 0.0,
            }
        }
    }

    /// True when `(d_i, d_next)` is stored rather than approximated.
    #[inline]
    pub fn is_materialized(&self, d_i: i32, d_next: i32) -> bool {
        d_i.abs() < self.threshold || d_next.abs() < self.threshold
    }

    pub fn len(&self) -> usize {
        self.rows.len() + self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LutTable {
    Full(FullTable),
    Partial(PartialTable),
}

/// Read-only angle table, shareable across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleLut {
    table: LutTable,
}

impl AngleLut {
    pub fn full() -> Self {
        Self {
            table: LutTable::Full(FullTable::build()),
        }
    }

    pub fn partial(threshold: u32) -> Result<Self, CurvatureError> {
        Self::partial_with(threshold, LimitOrientation::AnalyticLimit)
    }

    pub fn partial_with(
        threshold: u32,
        orientation: LimitOrientation,
    ) -> Result<Self, CurvatureError> {
        if !(1..=MAX_DIFF as u32).contains(&threshold) {
            return Err(CurvatureError::InvalidThreshold(threshold));
        }
        Ok(Self {
            table: LutTable::Partial(PartialTable::build(threshold, orientation)),
        })
    }

    pub fn build(variant: LutVariant) -> Result<Self, CurvatureError> {
        match variant {
            LutVariant::Full => Ok(Self::full()),
            LutVariant::Partial {
                threshold,
                orientation,
            } => Self::partial_with(threshold, orientation),
        }
    }

    pub fn variant(&self) -> LutVariant {
        match &self.table {
            LutTable::Full(_) => LutVariant::Full,
            LutTable::Partial(t) => LutVariant::Partial {
                threshold: t.threshold as u32,
                orientation: t.orientation,
            },
        }
    }

    pub fn table(&self) -> &LutTable {
        &self.table
    }

    /// Number of stored angles.
    pub fn materialized_len(&self) -> usize {
        match &self.table {
            LutTable::Full(t) => t.len(),
            LutTable::Partial(t) => t.len(),
        }
    }

    /// Angle for the difference pair, range-checked.
    pub fn lookup_angle(&self, d_i: i32, d_next: i32) -> Result<f64, CurvatureError> {
        check_diff(d_i)?;
        check_diff(d_next)?;
        Ok(self.angle(d_i, d_next))
    }

    #[inline]
    pub(crate) fn angle(&self, d_i: i32, d_next: i32) -> f64 {
        match &self.table {
            LutTable::Full(t) => t.angle(d_i, d_next),
            LutTable::Partial(t) => t.angle(d_i, d_next),
        }
    }

    /// Writes the table as a dump file; see [`write_dump`].
    pub fn dump(&self, path: impl AsRef<Path>) -> Result<(), IoError> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| IoError::io(path, e))?;
        let mut w = std::io::BufWriter::new(file);
        write_dump(self, &mut w).map_err(|e| IoError::io(path, e))?;
        w.flush().map_err(|e| IoError::io(path, e))
    }
}

/// Magic bytes opening a table dump.
pub const DUMP_MAGIC: &[u8; 8] = b"WGCANGLE";
/// Dump header length in bytes.
pub const DUMP_HEADER_LEN: usize = 16;

/// Contents of a table dump.
#[derive(Debug, Clone, PartialEq)]
pub struct LutDump {
    pub variant: LutVariant,
    /// `SIDE * SIDE` angles, row index `d_i + 255`, column index `d_next + 255`.
    pub values: Vec<f64>,
}

impl LutDump {
    pub fn get(&self, d_i: i32, d_next: i32) -> f64 {
        self.values[full_index(d_i, d_next)]
    }
}

/// Serializes every lookup value of `lut`.
///
/// Layout (all integers little-endian):
///
/// | offset | size | field                                         |
/// |--------|------|-----------------------------------------------|
/// | 0      | 8    | magic `WGCANGLE`                              |
/// | 8      | 1    | variant: 0 full, 1 partial                    |
/// | 9      | 1    | orientation: 0 analytic limit, 1 inverted     |
/// | 10     | 2    | threshold `T` (0 for full)                    |
/// | 12     | 4    | side length, always 511                       |
/// | 16     | 8*511*511 | `f64` angles, row-major, `d_i` major     |
///
/// For the partial variant entries outside the stored band hold the
/// substituted constant, so a reader sees exactly what lookups return.
pub fn write_dump(lut: &AngleLut, w: &mut impl Write) -> std::io::Result<()> {
    let (tag, orientation, threshold) = match lut.variant() {
        LutVariant::Full => (0u8, 0u8, 0u16),
        LutVariant::Partial {
            threshold,
            orientation,
        } => (
            1,
            match orientation {
                LimitOrientation::AnalyticLimit => 0,
                LimitOrientation::PaperLiteral => 1,
            },
            threshold as u16,
        ),
    };
    w.write_all(DUMP_MAGIC)?;
    w.write_all(&[tag, orientation])?;
    w.write_all(&threshold.to_le_bytes())?;
    w.write_all(&(SIDE as u32).to_le_bytes())?;
    let mut row = Vec::with_capacity(SIDE * 8);
    for a in -MAX_DIFF..=MAX_DIFF {
        row.clear();
        for b in -MAX_DIFF..=MAX_DIFF {
            row.extend_from_slice(&lut.angle(a, b).to_le_bytes());
        }
        w.write_all(&row)?;
    }
    Ok(())
}

pub fn read_dump(r: &mut impl Read) -> Result<LutDump, IoError> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)
        .map_err(|e| IoError::io("<lut dump>", e))?;
    parse_dump(&bytes)
}

pub fn read_dump_file(path: impl AsRef<Path>) -> Result<LutDump, IoError> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| IoError::io(path, e))?;
    parse_dump(&bytes)
}

fn parse_dump(bytes: &[u8]) -> Result<LutDump, IoError> {
    let malformed = |m: &str| IoError::Malformed(format!("angle table dump: {m}"));
    if bytes.len() < DUMP_HEADER_LEN || &bytes[..8] != DUMP_MAGIC {
        return Err(malformed("bad magic"));
    }
    let threshold = u16::from_le_bytes([bytes[10], bytes[11]]) as u32;
    let orientation = match bytes[9] {
        0 => LimitOrientation::AnalyticLimit,
        1 => LimitOrientation::PaperLiteral,
        _ => return Err(malformed("unknown orientation")),
    };
    let variant = match bytes[8] {
        0 => LutVariant::Full,
        1 => LutVariant::Partial {
            threshold,
            orientation,
        },
        _ => return Err(malformed("unknown variant")),
    };
    let side = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
    if side != SIDE {
        return Err(malformed("side length is not 511"));
    }
    let payload = &bytes[DUMP_HEADER_LEN..];
    if payload.len() != SIDE * SIDE * 8 {
        return Err(malformed("payload length does not match the header"));
    }
    let values = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(LutDump { variant, values })
}
