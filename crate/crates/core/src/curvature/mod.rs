//! Weighted Gaussian curvature of image surfaces.
//!
//! An image `I(x, y)` is treated as the graph surface `(x, y, I(x, y))`.
//! Two estimators are provided:
//!
//! - [`classical`]: finite-difference derivatives composed into
//!   `K = (Ixx*Iyy - Ixy^2) / (1 + Ix^2 + Iy^2)^2` and the weighted form
//!   `Kw = (Ixx*Iyy - Ixy^2) / (1 + Ix^2 + Iy^2)`. Reads a full 3x3 window.
//! - [`discrete`]: the angle deficit `Kw = 2*pi - sum(theta_i)` over the four
//!   triangles fanned around each pixel by its axis neighbours. Reads a 3x3
//!   cross and needs no second derivatives.

pub mod classical;
pub mod discrete;
pub mod stencil;

pub use classical::{gaussian_curvature_classical, weighted_curvature_classical};
pub use discrete::{
    corner_angle, neighbor_diffs, weighted_curvature_discrete, weighted_curvature_discrete_real,
    NeighborDiffs,
};
pub use stencil::{gradient_x, gradient_y, second_xx, second_xy, second_yy};

use crate::error::CurvatureError;
use crate::image::Raster;

/// How stencils treat pixels whose neighbourhood leaves the image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryPolicy {
    /// Out-of-range neighbours take the value of the nearest edge pixel.
    #[default]
    Replicate,
    /// Only pixels whose whole stencil lies inside the image are evaluated;
    /// every other output pixel is left at zero.
    InteriorOnly,
}

/// Which second-derivative stencils the classical scheme uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StencilMode {
    /// Central differences: `(I+ + I- - 2I)/h^2` and `(...)/(4h^2)` for the
    /// mixed term.
    #[default]
    Standard,
    /// `(I+ + I- - I)/h^2` and a mixed term divided by `h^2`. Does not
    /// annihilate constants; kept for reproducing published numbers.
    PaperLiteral,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub pixel_size: f64,
    pub boundary: BoundaryPolicy,
    pub stencil: StencilMode,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        Self {
            pixel_size: 1.0,
            boundary: BoundaryPolicy::Replicate,
            stencil: StencilMode::Standard,
        }
    }
}

impl SchemeConfig {
    pub fn with_pixel_size(mut self, h: f64) -> Self {
        self.pixel_size = h;
        self
    }

    pub fn with_boundary(mut self, boundary: BoundaryPolicy) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_stencil(mut self, stencil: StencilMode) -> Self {
        self.stencil = stencil;
        self
    }

    pub fn validate(&self) -> Result<(), CurvatureError> {
        if self.pixel_size > 0.0 && self.pixel_size.is_finite() {
            Ok(())
        } else {
            Err(CurvatureError::InvalidPixelSize(self.pixel_size))
        }
    }
}

pub(crate) fn require_dims<R: Raster + ?Sized>(
    img: &R,
    min_width: usize,
    min_height: usize,
) -> Result<(), CurvatureError> {
    if img.width() < min_width || img.height() < min_height {
        return Err(CurvatureError::DimensionTooSmall {
            width: img.width(),
            height: img.height(),
            min_width,
            min_height,
        });
    }
    Ok(())
}

/// True when `(x, y)` is at least one pixel away from every border.
#[inline]
pub(crate) fn is_interior(x: usize, y: usize, width: usize, height: usize) -> bool {
    x >= 1 && y >= 1 && x + 1 < width && y + 1 < height
}
