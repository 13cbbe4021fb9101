//! Finite-difference curvature: the five stencils composed pointwise.

use super::stencil::{derivatives_at, map_pixels, WINDOW};
use super::{require_dims, SchemeConfig};
use crate::error::CurvatureError;
use crate::image::{Raster, ScalarField};

/// Gaussian curvature `(Ixx*Iyy - Ixy^2) / (1 + Ix^2 + Iy^2)^2`.
///
/// The denominator is at least one, so every output is finite.
pub fn gaussian_curvature_classical<R: Raster>(
    img: &R,
    cfg: &SchemeConfig,
) -> Result<ScalarField, CurvatureError> {
    cfg.validate()?;
    require_dims(img, 3, 3)?;
    Ok(map_pixels(img, cfg, WINDOW, |x, y| {
        let d = derivatives_at(img, x, y, cfg);
        let g = d.metric_det();
        d.hessian_det() / (g * g)
    }))
}

/// Weighted Gaussian curvature `(Ixx*Iyy - Ixy^2) / (1 + Ix^2 + Iy^2)`.
///
/// Scaling the image by `s` multiplies the numerator by `s^2` and the
/// gradient term by `s^2` as well, so at steep edges the result is nearly
/// contrast invariant.
pub fn weighted_curvature_classical<R: Raster>(
    img: &R,
    cfg: &SchemeConfig,
) -> Result<ScalarField, CurvatureError> {
    cfg.validate()?;
    require_dims(img, 3, 3)?;
    Ok(map_pixels(img, cfg, WINDOW, |x, y| {
        let d = derivatives_at(img, x, y, cfg);
        d.hessian_det() / d.metric_det()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{BoundaryPolicy, StencilMode};
    use crate::image::GrayImage;

    /// Reads the 3x3 window with explicit clamping and composes the
    /// stencils by hand.
    fn reference(img: &GrayImage, x: usize, y: usize, weighted: bool) -> f64 {
        let p = |dx: i64, dy: i64| -> f64 {
            let cx = (x as i64 + dx).clamp(0, img.width() as i64 - 1) as usize;
            let cy = (y as i64 + dy).clamp(0, img.height() as i64 - 1) as usize;
            img.pixels()[cy * img.width() + cx] as f64
        };
        let ix = p(1, 0) - p(0, 0);
        let iy = p(0, 1) - p(0, 0);
        let ixx = p(1, 0) - 2.0 * p(0, 0) + p(-1, 0);
        let iyy = p(0, 1) - 2.0 * p(0, 0) + p(0, -1);
        let ixy = (p(1, 1) - p(1, -1) - p(-1, 1) + p(-1, -1)) / 4.0;
        let num = ixx * iyy - ixy * ixy;
        let den = 1.0 + ix * ix + iy * iy;
        if weighted {
            num / den
        } else {
            num / (den * den)
        }
    }

    #[test]
    fn flat_and_planar_images_are_zero() {
        let cfg = SchemeConfig::default();
        let flat = GrayImage::filled(6, 6, 200).unwrap();
        let ramp = GrayImage::from_fn(6, 6, |x, _| (3 * x) as u8).unwrap();
        for img in [&flat, &ramp] {
            let k = gaussian_curvature_classical(img, &cfg).unwrap();
            let kw = weighted_curvature_classical(img, &cfg).unwrap();
            for y in 1..5 {
                for x in 1..5 {
                    assert_eq!(k.get(x, y), 0.0);
                    assert_eq!(kw.get(x, y), 0.0);
                }
            }
        }
        let k = gaussian_curvature_classical(&flat, &cfg).unwrap();
        assert!(k.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn bowl_matches_hand_composition() {
        // I = (x^2 + y^2) / 2 on even-friendly integers: use x^2 + y^2 and
        // halve analytically below.
        let img = GrayImage::from_fn(9, 9, |x, y| (x * x + y * y) as u8).unwrap();
        let cfg = SchemeConfig::default();
        let k = gaussian_curvature_classical(&img, &cfg).unwrap();
        // At (3, 4): Ix = 16-9 = 7, Iy = 25-16 = 9, Ixx = Iyy = 2, Ixy = 0.
        let expect = 4.0 / (1.0f64 + 49.0 + 81.0).powi(2);
        assert_eq!(k.get(3, 4), expect);
        assert_eq!(k.get(3, 4), reference(&img, 3, 4, false));
    }

    #[test]
    fn saddle_weighted_curvature() {
        let img = GrayImage::from_fn(9, 9, |x, y| (x * y) as u8).unwrap();
        let kw = weighted_curvature_classical(&img, &SchemeConfig::default()).unwrap();
        // At (2, 5): Ix = y = 5, Iy = x = 2, Ixx = Iyy = 0, Ixy = 1.
        assert_eq!(kw.get(2, 5), -1.0 / 30.0);
        for y in 1..8 {
            for x in 1..8 {
                let expect = -1.0 / (1.0 + (y * y + x * x) as f64);
                assert!((kw.get(x, y) - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn matches_reference_everywhere() {
        let img =
            GrayImage::from_fn(11, 7, |x, y| ((x * 37 + y * 91 + x * y * 13) % 256) as u8).unwrap();
        let cfg = SchemeConfig::default();
        let k = gaussian_curvature_classical(&img, &cfg).unwrap();
        let kw = weighted_curvature_classical(&img, &cfg).unwrap();
        for y in 0..7 {
            for x in 0..11 {
                assert_eq!(k.get(x, y), reference(&img, x, y, false));
                assert_eq!(kw.get(x, y), reference(&img, x, y, true));
            }
        }
    }

    #[test]
    fn interior_only_leaves_border_zero() {
        let img = GrayImage::from_fn(5, 5, |x, y| (x * x * y) as u8).unwrap();
        let cfg = SchemeConfig::default().with_boundary(BoundaryPolicy::InteriorOnly);
        let kw = weighted_curvature_classical(&img, &cfg).unwrap();
        let full = weighted_curvature_classical(&img, &SchemeConfig::default()).unwrap();
        for y in 0..5 {
            for x in 0..5 {
                if (1..4).contains(&x) && (1..4).contains(&y) {
                    assert_eq!(kw.get(x, y), full.get(x, y));
                } else {
                    assert_eq!(kw.get(x, y), 0.0);
                }
            }
        }
    }

    #[test]
    fn paper_literal_is_not_flat_on_constants() {
        let img = GrayImage::filled(4, 4, 10).unwrap();
        let cfg = SchemeConfig::default().with_stencil(StencilMode::PaperLiteral);
        let kw = weighted_curvature_classical(&img, &cfg).unwrap();
        // Ixx = Iyy = 10, Ixy = 0, gradients 0.
        assert!(kw.values().iter().all(|&v| v == 100.0));
    }

    #[test]
    fn too_small() {
        let img = GrayImage::filled(2, 5, 0).unwrap();
        assert!(gaussian_curvature_classical(&img, &SchemeConfig::default()).is_err());
        assert!(weighted_curvature_classical(&img, &SchemeConfig::default()).is_err());
    }
}
