//! File formats: binary PGM for images, a raw `f64` dump for fields, and
//! `metric,value` CSV for statistics.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::IoError;
use crate::image::{GrayImage, ScalarField};

/// Affine map from curvature to display intensity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisualizationParams {
    pub offset: f64,
    pub gain: f64,
}

impl Default for VisualizationParams {
    fn default() -> Self {
        Self {
            offset: 128.0,
            gain: 20.0,
        }
    }
}

/// `round(offset + gain * v)` clamped to `[0, 255]`, rounding half away
/// from zero.
pub fn visualize_curvature(field: &ScalarField, params: VisualizationParams) -> GrayImage {
    let data = field
        .values()
        .iter()
        .map(|&v| (params.offset + params.gain * v).round().clamp(0.0, 255.0) as u8)
        .collect();
    GrayImage::new(field.width(), field.height(), data).expect("shape copied from a valid field")
}

/// Decodes a binary PGM (P5) with maxval at most 255.
pub fn decode_pgm(bytes: &[u8]) -> Result<GrayImage, IoError> {
    let mut pos = 0;
    if bytes.get(..2) != Some(b"P5") {
        return Err(IoError::Malformed("missing P5 magic".into()));
    }
    pos += 2;
    let width = header_field(bytes, &mut pos, "width")?;
    let height = header_field(bytes, &mut pos, "height")?;
    let maxval = header_field(bytes, &mut pos, "maxval")?;
    // exactly one whitespace byte separates maxval from the raster
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(IoError::Malformed("no whitespace after maxval".into())),
    }
    if maxval == 0 {
        return Err(IoError::Malformed("maxval is zero".into()));
    }
    if maxval > 255 {
        return Err(IoError::UnsupportedDepth(maxval as u32));
    }
    if width == 0 || height == 0 {
        return Err(IoError::Malformed(format!("empty image {width}x{height}")));
    }
    let len = width
        .checked_mul(height)
        .ok_or_else(|| IoError::Malformed("dimensions overflow".into()))?;
    let payload = &bytes[pos..];
    if payload.len() < len {
        return Err(IoError::Malformed(format!(
            "pixel payload truncated: {} of {len} bytes",
            payload.len()
        )));
    }
    Ok(GrayImage::new(width, height, payload[..len].to_vec())?)
}

fn header_field(bytes: &[u8], pos: &mut usize, name: &str) -> Result<usize, IoError> {
    loop {
        match bytes.get(*pos) {
            Some(b'#') => {
                while bytes.get(*pos).is_some_and(|&b| b != b'\n') {
                    *pos += 1;
                }
            }
            Some(b) if b.is_ascii_whitespace() => *pos += 1,
            _ => break,
        }
    }
    let start = *pos;
    while bytes.get(*pos).is_some_and(u8::is_ascii_digit) {
        *pos += 1;
    }
    std::str::from_utf8(&bytes[start..*pos])
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| IoError::Malformed(format!("bad {name} in header")))
}

/// Encodes a binary PGM: `P5`, width, height and maxval 255 on their own
/// lines, then the raster.
pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{}\n{}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}

pub fn read_image(path: impl AsRef<Path>) -> Result<GrayImage, IoError> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| IoError::io(path, e))?;
    decode_pgm(&bytes)
}

pub fn write_image(img: &GrayImage, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_bytes(path.as_ref(), &encode_pgm(img))
}

/// First line of a field dump.
pub const FIELD_MAGIC: &str = "WGCFIELD";

/// Encodes a field as `WGCFIELD\n<width> <height>\n` followed by
/// `width * height` little-endian `f64`, row-major.
pub fn encode_field(field: &ScalarField) -> Vec<u8> {
    let header = format!("{FIELD_MAGIC}\n{} {}\n", field.width(), field.height());
    let mut out = Vec::with_capacity(header.len() + field.values().len() * 8);
    out.extend_from_slice(header.as_bytes());
    for v in field.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_field(bytes: &[u8]) -> Result<ScalarField, IoError> {
    let malformed = |m: &str| IoError::Malformed(format!("field dump: {m}"));
    let mut lines = bytes.splitn(3, |&b| b == b'\n');
    if lines.next() != Some(FIELD_MAGIC.as_bytes()) {
        return Err(malformed("bad magic"));
    }
    let dims = lines
        .next()
        .and_then(|l| std::str::from_utf8(l).ok())
        .ok_or_else(|| malformed("missing dimensions"))?;
    let (w, h) = dims
        .split_once(' ')
        .and_then(|(w, h)| Some((w.parse::<usize>().ok()?, h.parse::<usize>().ok()?)))
        .ok_or_else(|| malformed("bad dimensions"))?;
    let payload = lines.next().unwrap_or(&[]);
    let expected = w
        .checked_mul(h)
        .and_then(|n| n.checked_mul(8))
        .ok_or_else(|| malformed("dimensions overflow"))?;
    if payload.len() != expected {
        return Err(malformed(&format!(
            "payload is {} bytes, header implies {expected}",
            payload.len()
        )));
    }
    let data = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(ScalarField::new(w, h, data)?)
}

pub fn write_field(field: &ScalarField, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_bytes(path.as_ref(), &encode_field(field))
}

pub fn read_field(path: impl AsRef<Path>) -> Result<ScalarField, IoError> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| IoError::io(path, e))?;
    decode_field(&bytes)
}

/// `metric,value` CSV.
pub fn metrics_csv<'a>(rows: impl IntoIterator<Item = (&'a str, String)>) -> String {
    let mut out = String::from("metric,value\n");
    for (k, v) in rows {
        out.push_str(k);
        out.push(',');
        out.push_str(&v);
        out.push('\n');
    }
    out
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<(), IoError> {
    write_bytes(path.as_ref(), text.as_bytes())
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), IoError> {
    let file = File::create(path).map_err(|e| IoError::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(bytes).map_err(|e| IoError::io(path, e))?;
    w.flush().map_err(|e| IoError::io(path, e))
}
