//! Finite-difference stencils on the image surface.
//!
//! First derivatives are forward differences. Second derivatives follow
//! [`StencilMode`]. All stencils read neighbours through
//! [`Raster::sample_clamped`], so under [`BoundaryPolicy::Replicate`] every
//! pixel gets a value.

use super::{require_dims, BoundaryPolicy, SchemeConfig, StencilMode};
use crate::error::CurvatureError;
use crate::image::{Raster, ScalarField};

/// The five derivative estimates at a single pixel.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Derivatives {
    pub ix: f64,
    pub iy: f64,
    pub ixx: f64,
    pub iyy: f64,
    pub ixy: f64,
}

impl Derivatives {
    /// `Ixx*Iyy - Ixy^2`, the Hessian determinant.
    #[inline]
    pub fn hessian_det(&self) -> f64 {
        self.ixx * self.iyy - self.ixy * self.ixy
    }

    /// `1 + Ix^2 + Iy^2`, the metric determinant of the graph surface.
    #[inline]
    pub fn metric_det(&self) -> f64 {
        1.0 + self.ix * self.ix + self.iy * self.iy
    }
}

/// How far a stencil reaches from the centre pixel, per side.
#[derive(Clone, Copy)]
pub(crate) struct Reach {
    left: usize,
    right: usize,
    up: usize,
    down: usize,
}

const FORWARD_X: Reach = Reach {
    left: 0,
    right: 1,
    up: 0,
    down: 0,
};
const FORWARD_Y: Reach = Reach {
    left: 0,
    right: 0,
    up: 0,
    down: 1,
};
const CENTRAL_X: Reach = Reach {
    left: 1,
    right: 1,
    up: 0,
    down: 0,
};
const CENTRAL_Y: Reach = Reach {
    left: 0,
    right: 0,
    up: 1,
    down: 1,
};
pub(crate) const WINDOW: Reach = Reach {
    left: 1,
    right: 1,
    up: 1,
    down: 1,
};

impl Reach {
    #[inline]
    fn covers(&self, x: usize, y: usize, width: usize, height: usize) -> bool {
        x >= self.left && y >= self.up && x + self.right < width && y + self.down < height
    }
}

#[inline]
fn at<R: Raster>(img: &R, x: usize, y: usize, dx: isize, dy: isize) -> f64 {
    img.sample_clamped(x as isize + dx, y as isize + dy)
}

#[inline]
pub(crate) fn dx_forward<R: Raster>(img: &R, x: usize, y: usize, h: f64) -> f64 {
    (at(img, x, y, 1, 0) - at(img, x, y, 0, 0)) / h
}

#[inline]
pub(crate) fn dy_forward<R: Raster>(img: &R, x: usize, y: usize, h: f64) -> f64 {
    (at(img, x, y, 0, 1) - at(img, x, y, 0, 0)) / h
}

#[inline]
pub(crate) fn dxx<R: Raster>(img: &R, x: usize, y: usize, h: f64, mode: StencilMode) -> f64 {
    let centre = at(img, x, y, 0, 0);
    let weight = match mode {
        StencilMode::Standard => 2.0,
        StencilMode::PaperLiteral => 1.0,
    };
    (at(img, x, y, 1, 0) + at(img, x, y, -1, 0) - weight * centre) / (h * h)
}

#[inline]
pub(crate) fn dyy<R: Raster>(img: &R, x: usize, y: usize, h: f64, mode: StencilMode) -> f64 {
    let centre = at(img, x, y, 0, 0);
    let weight = match mode {
        StencilMode::Standard => 2.0,
        StencilMode::PaperLiteral => 1.0,
    };
    (at(img, x, y, 0, 1) + at(img, x, y, 0, -1) - weight * centre) / (h * h)
}

#[inline]
pub(crate) fn dxy<R: Raster>(img: &R, x: usize, y: usize, h: f64, mode: StencilMode) -> f64 {
    let diag = at(img, x, y, 1, 1) + at(img, x, y, -1, -1);
    let anti = at(img, x, y, 1, -1) + at(img, x, y, -1, 1);
    let scale = match mode {
        StencilMode::Standard => 4.0 * h * h,
        StencilMode::PaperLiteral => h * h,
    };
    (diag - anti) / scale
}

/// All five stencils at `(x, y)`, boundary handled by replication.
#[inline]
pub fn derivatives_at<R: Raster>(img: &R, x: usize, y: usize, cfg: &SchemeConfig) -> Derivatives {
    let h = cfg.pixel_size;
    Derivatives {
        ix: dx_forward(img, x, y, h),
        iy: dy_forward(img, x, y, h),
        ixx: dxx(img, x, y, h, cfg.stencil),
        iyy: dyy(img, x, y, h, cfg.stencil),
        ixy: dxy(img, x, y, h, cfg.stencil),
    }
}

/// Evaluates `point` at every pixel the boundary policy admits.
pub(crate) fn map_pixels<R: Raster>(
    img: &R,
    cfg: &SchemeConfig,
    reach: Reach,
    point: impl Fn(usize, usize) -> f64 + Sync,
) -> ScalarField {
    let (w, h) = (img.width(), img.height());
    let interior_only = cfg.boundary == BoundaryPolicy::InteriorOnly;
    ScalarField::from_rows(w, h, |y, row| {
        for (x, out) in row.iter_mut().enumerate() {
            if !interior_only || reach.covers(x, y, w, h) {
                *out = point(x, y);
            }
        }
    })
}

/// Forward difference `(I(x+h, y) - I(x, y)) / h`.
pub fn gradient_x<R: Raster>(img: &R, cfg: &SchemeConfig) -> Result<ScalarField, CurvatureError> {
    cfg.validate()?;
    require_dims(img, 2, 1)?;
    let h = cfg.pixel_size;
    Ok(map_pixels(img, cfg, FORWARD_X, |x, y| {
        dx_forward(img, x, y, h)
    }))
}

/// Forward difference `(I(x, y+h) - I(x, y)) / h`.
pub fn gradient_y<R: Raster>(img: &R, cfg: &SchemeConfig) -> Result<ScalarField, CurvatureError> {
    cfg.validate()?;
    require_dims(img, 1, 2)?;
    let h = cfg.pixel_size;
    Ok(map_pixels(img, cfg, FORWARD_Y, |x, y| {
        dy_forward(img, x, y, h)
    }))
}

pub fn second_xx<R: Raster>(img: &R, cfg: &SchemeConfig) -> Result<ScalarField, CurvatureError> {
    cfg.validate()?;
    require_dims(img, 3, 1)?;
    let h = cfg.pixel_size;
    Ok(map_pixels(img, cfg, CENTRAL_X, |x, y| {
        dxx(img, x, y, h, cfg.stencil)
    }))
}

pub fn second_yy<R: Raster>(img: &R, cfg: &SchemeConfig) -> Result<ScalarField, CurvatureError> {
    cfg.validate()?;
    require_dims(img, 1, 3)?;
    let h = cfg.pixel_size;
    Ok(map_pixels(img, cfg, CENTRAL_Y, |x, y| {
        dyy(img, x, y, h, cfg.stencil)
    }))
}

/// Mixed derivative from the four diagonal neighbours.
pub fn second_xy<R: Raster>(img: &R, cfg: &SchemeConfig) -> Result<ScalarField, CurvatureError> {
    cfg.validate()?;
    require_dims(img, 3, 3)?;
    let h = cfg.pixel_size;
    Ok(map_pixels(img, cfg, WINDOW, |x, y| {
        dxy(img, x, y, h, cfg.stencil)
    }))
}
