//! Pixel containers: 8-bit grayscale input and double-precision fields.

use rayon::prelude::*;

use crate::error::CurvatureError;

/// Read access to a row-major grid of intensities.
///
/// Implemented for both [`GrayImage`] and [`ScalarField`] so the trig-path
/// kernels run on quantized and real-valued surfaces alike.
pub trait Raster: Sync {
    fn width(&self) -> usize;
    fn height(&self) -> usize;
    /// Intensity at `(x, y)`. Callers guarantee the index is in bounds.
    fn sample(&self, x: usize, y: usize) -> f64;

    /// Intensity with out-of-range coordinates clamped to the nearest edge.
    #[inline]
    fn sample_clamped(&self, x: isize, y: isize) -> f64 {
        let cx = x.clamp(0, self.width() as isize - 1) as usize;
        let cy = y.clamp(0, self.height() as isize - 1) as usize;
        self.sample(cx, cy)
    }
}

/// Width x height grid of 8-bit intensities, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self, CurvatureError> {
        check_dims(width, height, data.len())?;
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, level: u8) -> Result<Self, CurvatureError> {
        Self::new(width, height, vec![level; width * height])
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        f: impl Fn(usize, usize) -> u8,
    ) -> Result<Self, CurvatureError> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    pub fn pixels(&self) -> &[u8] {
        &self.data
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.data
    }

    /// Pixel values widened to a real-valued field.
    pub fn to_field(&self) -> ScalarField {
        ScalarField {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f64::from(v)).collect(),
        }
    }
}

impl Raster for GrayImage {
    #[inline]
    fn width(&self) -> usize {
        self.width
    }

    #[inline]
    fn height(&self) -> usize {
        self.height
    }

    #[inline]
    fn sample(&self, x: usize, y: usize) -> f64 {
        f64::from(self.data[y * self.width + x])
    }
}

/// Width x height grid of `f64`, row-major. Holds curvature maps and
/// derivative fields, and real-valued synthetic surfaces.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl ScalarField {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self, CurvatureError> {
        check_dims(width, height, data.len())?;
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![0.0; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    /// Fills a field row by row in parallel. `fill_row(y, row)` writes the
    /// whole of row `y`; every row is owned by exactly one worker so the
    /// result does not depend on the number of threads.
    pub(crate) fn from_rows(
        width: usize,
        height: usize,
        fill_row: impl Fn(usize, &mut [f64]) + Sync,
    ) -> Self {
        let mut data = vec![0.0; width * height];
        data.par_chunks_mut(width)
            .enumerate()
            .for_each(|(y, row)| fill_row(y, row));
        Self {
            width,
            height,
            data,
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: f64) {
        self.data[y * self.width + x] = value;
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn into_values(self) -> Vec<f64> {
        self.data
    }

    /// Index of the first NaN or infinite value, if any.
    pub fn first_non_finite(&self) -> Option<usize> {
        self.data.iter().position(|v| !v.is_finite())
    }

    /// Applies `f` to every value, keeping the shape.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

impl Raster for ScalarField {
    #[inline]
    fn width(&self) -> usize {
        self.width
    }

    #[inline]
    fn height(&self) -> usize {
        self.height
    }

    #[inline]
    fn sample(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }
}

fn check_dims(width: usize, height: usize, len: usize) -> Result<(), CurvatureError> {
    if width == 0 || height == 0 {
        return Err(CurvatureError::DimensionTooSmall {
            width,
            height,
            min_width: 1,
            min_height: 1,
        });
    }
    let expected = width
        .checked_mul(height)
        .ok_or(CurvatureError::BufferSize {
            expected: usize::MAX,
            actual: len,
        })?;
    if expected != len {
        return Err(CurvatureError::BufferSize {
            expected,
            actual: len,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_mismatched_buffer() {
        assert_eq!(
            GrayImage::new(3, 3, vec![0; 8]),
            Err(CurvatureError::BufferSize {
                expected: 9,
                actual: 8
            })
        );
        assert!(ScalarField::new(0, 3, vec![]).is_err());
    }

    #[test]
    fn clamped_sampling_replicates_edges() {
        let img = GrayImage::from_fn(3, 2, |x, y| (10 * y + x) as u8).unwrap();
        assert_eq!(img.sample_clamped(-1, 0), 0.0);
        assert_eq!(img.sample_clamped(5, 0), 2.0);
        assert_eq!(img.sample_clamped(1, 9), 11.0);
        assert_eq!(img.sample_clamped(-4, -4), 0.0);
    }

    #[test]
    fn row_fill_matches_serial_fill() {
        let a = ScalarField::from_rows(7, 5, |y, row| {
            for (x, v) in row.iter_mut().enumerate() {
                *v = (x * y) as f64;
            }
        });
        let b = ScalarField::from_fn(7, 5, |x, y| (x * y) as f64);
        assert_eq!(a, b);
    }
}
