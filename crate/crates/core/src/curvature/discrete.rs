//! Angle-deficit curvature on the pixel grid.
//!
//! Each pixel and its four axis neighbours span four triangles. With the
//! neighbour differences `d1..d4` (next row, next column, previous row,
//! previous column), triangle `i` has legs `(h, 0, d_i)` and `(0, h, d_next)`
//! in a local frame, and
//!
//! ```text
//! Kw = 2*pi - (theta(d1,d2) + theta(d2,d3) + theta(d3,d4) + theta(d4,d1))
//! ```
//!
//! The result depends only on triangle shapes, not on their size, and needs
//! nothing beyond the raw intensities.

use std::f64::consts::TAU;

use super::{is_interior, require_dims, BoundaryPolicy, SchemeConfig};
use crate::error::CurvatureError;
use crate::image::{GrayImage, Raster, ScalarField};
use crate::lut::{AngleLut, LutTable};

/// The four signed intensity differences around a pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct NeighborDiffs {
    /// `I(x, y+1) - I(x, y)`
    pub d1: i16,
    /// `I(x+1, y) - I(x, y)`
    pub d2: i16,
    /// `I(x, y-1) - I(x, y)`
    pub d3: i16,
    /// `I(x-1, y) - I(x, y)`
    pub d4: i16,
}

impl NeighborDiffs {
    /// Consecutive pairs `(d1,d2), (d2,d3), (d3,d4), (d4,d1)`, one per triangle.
    pub fn pairs(&self) -> [(i16, i16); 4] {
        [
            (self.d1, self.d2),
            (self.d2, self.d3),
            (self.d3, self.d4),
            (self.d4, self.d1),
        ]
    }

    /// Angle deficit from these differences with pixel size `h`.
    pub fn deficit(&self, h: f64) -> f64 {
        deficit(
            f64::from(self.d1),
            f64::from(self.d2),
            f64::from(self.d3),
            f64::from(self.d4),
            |a, b| corner_angle(a, b, h),
        )
    }
}

/// Differences `d1..d4` at `(x, y)`.
///
/// Under [`BoundaryPolicy::Replicate`] missing neighbours are replaced by the
/// nearest edge pixel; under [`BoundaryPolicy::InteriorOnly`] border pixels
/// are rejected.
pub fn neighbor_diffs(
    img: &GrayImage,
    x: usize,
    y: usize,
    policy: BoundaryPolicy,
) -> Result<NeighborDiffs, CurvatureError> {
    let (w, h) = (img.width(), img.height());
    let inside = x < w && y < h;
    let allowed = match policy {
        BoundaryPolicy::Replicate => inside,
        BoundaryPolicy::InteriorOnly => is_interior(x, y, w, h),
    };
    if !allowed {
        return Err(CurvatureError::OutOfBounds {
            x,
            y,
            width: w,
            height: h,
        });
    }
    let c = i16::from(img.get(x, y));
    let p = |xx: usize, yy: usize| i16::from(img.get(xx, yy)) - c;
    Ok(NeighborDiffs {
        d1: p(x, (y + 1).min(h - 1)),
        d2: p((x + 1).min(w - 1), y),
        d3: p(x, y.saturating_sub(1)),
        d4: p(x.saturating_sub(1), y),
    })
}

/// Angle at the pixel between the legs `(h, 0, d_i)` and `(0, h, d_next)`.
///
/// Equal to `arccos(d_i*d_next / sqrt((h^2 + d_i^2)(h^2 + d_next^2)))`, but
/// evaluated as `atan2(|u x v|, u . v)`, which stays accurate near 0 and pi
/// where arccos loses half its digits. Always in `[0, pi]` for `h > 0`.
#[inline]
pub fn corner_angle(d_i: f64, d_next: f64, h: f64) -> f64 {
    let cross = h * (h * h + d_i * d_i + d_next * d_next).sqrt();
    cross.atan2(d_i * d_next)
}

#[inline(always)]
fn deficit(d1: f64, d2: f64, d3: f64, d4: f64, angle: impl Fn(f64, f64) -> f64) -> f64 {
    let sum = angle(d1, d2) + angle(d2, d3) + angle(d3, d4) + angle(d4, d1);
    TAU - sum
}

#[inline(always)]
fn deficit_int(d1: i32, d2: i32, d3: i32, d4: i32, angle: &impl Fn(i32, i32) -> f64) -> f64 {
    let sum = angle(d1, d2) + angle(d2, d3) + angle(d3, d4) + angle(d4, d1);
    TAU - sum
}

/// Discrete weighted Gaussian curvature of an 8-bit image.
///
/// With `lut = Some(..)` the angles come from the table, which requires unit
/// pixel size. The full table reproduces the direct evaluation bit for bit.
pub fn weighted_curvature_discrete(
    img: &GrayImage,
    cfg: &SchemeConfig,
    lut: Option<&AngleLut>,
) -> Result<ScalarField, CurvatureError> {
    cfg.validate()?;
    require_dims(img, 3, 3)?;
    match lut {
        None => {
            let h = cfg.pixel_size;
            Ok(integer_kernel(img, cfg.boundary, |a, b| {
                corner_angle(f64::from(a), f64::from(b), h)
            }))
        }
        Some(lut) => {
            if cfg.pixel_size != 1.0 {
                return Err(CurvatureError::LutIncompatibleConfig(cfg.pixel_size));
            }
            Ok(match lut.table() {
                LutTable::Full(t) => integer_kernel(img, cfg.boundary, |a, b| t.angle(a, b)),
                LutTable::Partial(t) => integer_kernel(img, cfg.boundary, |a, b| t.angle(a, b)),
            })
        }
    }
}

/// Discrete weighted Gaussian curvature of a real-valued surface, evaluated
/// directly (no table).
pub fn weighted_curvature_discrete_real<R: Raster>(
    img: &R,
    cfg: &SchemeConfig,
) -> Result<ScalarField, CurvatureError> {
    cfg.validate()?;
    require_dims(img, 3, 3)?;
    let (w, hgt) = (img.width(), img.height());
    let h = cfg.pixel_size;
    let interior_only = cfg.boundary == BoundaryPolicy::InteriorOnly;
    Ok(ScalarField::from_rows(w, hgt, |y, row| {
        let yn = (y + 1).min(hgt - 1);
        let yp = y.saturating_sub(1);
        for (x, out) in row.iter_mut().enumerate() {
            if interior_only && !is_interior(x, y, w, hgt) {
                continue;
            }
            let c = img.sample(x, y);
            let d1 = img.sample(x, yn) - c;
            let d2 = img.sample((x + 1).min(w - 1), y) - c;
            let d3 = img.sample(x, yp) - c;
            let d4 = img.sample(x.saturating_sub(1), y) - c;
            *out = deficit(d1, d2, d3, d4, |a, b| corner_angle(a, b, h));
        }
    }))
}

fn integer_kernel(
    img: &GrayImage,
    boundary: BoundaryPolicy,
    angle: impl Fn(i32, i32) -> f64 + Sync,
) -> ScalarField {
    let (w, h) = (img.width(), img.height());
    let px = img.pixels();
    let interior_only = boundary == BoundaryPolicy::InteriorOnly;
    ScalarField::from_rows(w, h, |y, out| {
        if interior_only && (y == 0 || y + 1 == h) {
            return;
        }
        let row = &px[y * w..(y + 1) * w];
        let next = &px[(y + 1).min(h - 1) * w..][..w];
        let prev = &px[y.saturating_sub(1) * w..][..w];
        let (start, end) = if interior_only { (1, w - 1) } else { (0, w) };
        for x in start..end {
            let c = i32::from(row[x]);
            let d1 = i32::from(next[x]) - c;
            let d2 = i32::from(row[(x + 1).min(w - 1)]) - c;
            let d3 = i32::from(prev[x]) - c;
            let d4 = i32::from(row[x.saturating_sub(1)]) - c;
            out[x] = deficit_int(d1, d2, d3, d4, &angle);
        }
    })
}
