//! Synthetic developable surfaces and curvature statistics.
//!
//! Cones, cylinder ridges, ramps and flats all have zero Gaussian curvature
//! away from their creases, so any nonzero curvature measured on them is
//! estimator error. Several primitives can be composited by pointwise
//! maximum.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::image::{GrayImage, ScalarField};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    #[error("intensity {value} at ({x}, {y}) is outside [0, 255] and clamping is disabled")]
    OutOfRange { x: usize, y: usize, value: f64 },
    #[error("region is empty for a {width}x{height} field")]
    EmptyRegion { width: usize, height: usize },
    #[error("cannot parse {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Horizontal,
    Vertical,
}

/// One developable primitive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Primitive {
    /// `peak * max(0, 1 - dist((x, y), apex) / radius)`
    Cone {
        cx: f64,
        cy: f64,
        radius: f64,
        peak: f64,
    },
    /// Half cylinder: `peak * sqrt(max(0, 1 - (t - center)^2 / radius^2))`
    /// with `t = x` for a vertical axis and `t = y` for a horizontal one.
    CylinderRidge {
        axis: Axis,
        center: f64,
        radius: f64,
        peak: f64,
    },
    /// `a*x + b*y + c`
    Ramp {
        a: f64,
        b: f64,
        c: f64,
    },
    Flat {
        level: f64,
    },
}

impl Primitive {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match *self {
            Primitive::Cone {
                cx,
                cy,
                radius,
                peak,
            } => {
                let dist = (x - cx).hypot(y - cy);
                peak * (1.0 - dist / radius).max(0.0)
            }
            Primitive::CylinderRidge {
                axis,
                center,
                radius,
                peak,
            } => {
                let t = match axis {
                    Axis::Vertical => x,
                    Axis::Horizontal => y,
                };
                let u = (t - center) / radius;
                peak * (1.0 - u * u).max(0.0).sqrt()
            }
            Primitive::Ramp { a, b, c } => a * x + b * y + c,
            Primitive::Flat { level } => level,
        }
    }

    fn validate(&self) -> Result<(), SynthError> {
        let finite = |vals: &[f64]| vals.iter().all(|v| v.is_finite());
        let ok = match *self {
            Primitive::Cone {
                cx,
                cy,
                radius,
                peak,
            } => finite(&[cx, cy, radius, peak]) && radius > 0.0 && peak > 0.0,
            Primitive::CylinderRidge {
                center,
                radius,
                peak,
                ..
            } => finite(&[center, radius, peak]) && radius > 0.0 && peak > 0.0,
            Primitive::Ramp { a, b, c } => finite(&[a, b, c]),
            Primitive::Flat { level } => level.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(SynthError::InvalidSpec(format!(
                "{self}: radius and peak must be positive and all values finite"
            )))
        }
    }
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Primitive::Cone {
                cx,
                cy,
                radius,
                peak,
            } => write!(f, "cone:{cx},{cy},{radius},{peak}"),
            Primitive::CylinderRidge {
                axis,
                center,
                radius,
                peak,
            } => {
                let a = match axis {
                    Axis::Vertical => 'v',
                    Axis::Horizontal => 'h',
                };
                write!(f, "cylinder:{a},{center},{radius},{peak}")
            }
            Primitive::Ramp { a, b, c } => write!(f, "ramp:{a},{b},{c}"),
            Primitive::Flat { level } => write!(f, "flat:{level}"),
        }
    }
}

/// Parses the compact form used on the command line and in config files:
/// `cone:cx,cy,radius,peak`, `cylinder:v|h,center,radius,peak`,
/// `ramp:a,b,c`, `flat:level`.
impl FromStr for Primitive {
    type Err = SynthError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || SynthError::Parse(s.to_string());
        let (kind, args) = s.trim().split_once(':').ok_or_else(err)?;
        let mut parts: Vec<&str> = args.split(',').map(str::trim).collect();
        let axis = if kind == "cylinder" {
            if parts.is_empty() {
                return Err(err());
            }
            match parts.remove(0) {
                "v" | "vertical" => Some(Axis::Vertical),
                "h" | "horizontal" => Some(Axis::Horizontal),
                _ => return Err(err()),
            }
        } else {
            None
        };
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| p.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| err())?;
        let prim = match (kind, nums.as_slice()) {
            ("cone", &[cx, cy, radius, peak]) => Primitive::Cone {
                cx,
                cy,
                radius,
                peak,
            },
            ("cylinder", &[center, radius, peak]) => Primitive::CylinderRidge {
                axis: axis.unwrap(),
                center,
                radius,
                peak,
            },
            ("ramp", &[a, b, c]) => Primitive::Ramp { a, b, c },
            ("flat", &[level]) => Primitive::Flat { level },
            _ => return Err(err()),
        };
        Ok(prim)
    }
}

/// A scene of one or more primitives composited by pointwise maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub width: usize,
    pub height: usize,
    pub primitives: Vec<Primitive>,
    /// Round to 8-bit (half away from zero) instead of keeping real values.
    pub quantize: bool,
    /// Clamp real values to `[0, 255]`. Quantized output is always clamped.
    pub clamp: bool,
}

/// Output of [`generate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Synthesized {
    Quantized(GrayImage),
    Real(ScalarField),
}

impl Synthesized {
    pub fn width(&self) -> usize {
        match self {
            Synthesized::Quantized(i) => i.width(),
            Synthesized::Real(f) => f.width(),
        }
    }

    pub fn height(&self) -> usize {
        match self {
            Synthesized::Quantized(i) => i.height(),
            Synthesized::Real(f) => f.height(),
        }
    }
}

impl SyntheticSpec {
    pub fn new(width: usize, height: usize, primitives: Vec<Primitive>) -> Self {
        Self {
            width,
            height,
            primitives,
            quantize: true,
            clamp: true,
        }
    }

    pub fn single(width: usize, height: usize, primitive: Primitive) -> Self {
        Self::new(width, height, vec![primitive])
    }

    pub fn real_valued(mut self) -> Self {
        self.quantize = false;
        self
    }

    pub fn unclamped(mut self) -> Self {
        self.clamp = false;
        self
    }

    /// Steep cones tiled on a staggered lattice plus a vertical
    /// half-cylinder ridge through the middle, composited by maximum.
    ///
    /// Cone radius and spacing are fixed in pixels, so larger images get
    /// more cones rather than gentler ones.
    pub fn cone_cylinder(width: usize, height: usize) -> Self {
        const SPACING: f64 = 44.0;
        const RADIUS: f64 = 16.0;
        const PEAKS: [f64; 4] = [250.0, 215.0, 235.0, 190.0];
        let (w, h) = (width as f64, height as f64);
        let mut primitives = Vec::new();
        let mut row = 0usize;
        let mut cy = SPACING / 2.0;
        while cy < h {
            let offset = if row.is_multiple_of(2) {
                0.0
            } else {
                SPACING / 2.0
            };
            let mut cx = SPACING / 2.0 + offset;
            let mut col = 0usize;
            while cx < w {
                primitives.push(Primitive::Cone {
                    cx,
                    cy,
                    radius: RADIUS,
                    peak: PEAKS[(row + 2 * col) % PEAKS.len()],
                });
                cx += SPACING;
                col += 1;
            }
            cy += SPACING * 0.9;
            row += 1;
        }
        primitives.push(Primitive::CylinderRidge {
            axis: Axis::Vertical,
            center: 0.5 * w,
            radius: (0.08 * w).max(2.0),
            peak: 240.0,
        });
        Self::new(width, height, primitives)
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        if self.width == 0 || self.height == 0 {
            return Err(SynthError::InvalidSpec(format!(
                "size {}x{} must be positive",
                self.width, self.height
            )));
        }
        if self.primitives.is_empty() {
            return Err(SynthError::InvalidSpec("no primitives".into()));
        }
        self.primitives.iter().try_for_each(Primitive::validate)
    }

    /// Unclamped surface height at `(x, y)`.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.primitives
            .iter()
            .map(|p| p.eval(x, y))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Apexes of the cones, where the surface is not smooth.
    pub fn apexes(&self) -> Vec<(f64, f64)> {
        self.primitives
            .iter()
            .filter_map(|p| match *p {
                Primitive::Cone { cx, cy, .. } => Some((cx, cy)),
                _ => None,
            })
            .collect()
    }

    /// Parses `key=value` lines. Recognized keys: `size` (`WxH`), `width`,
    /// `height`, `quantize`, `clamp`, `shape` (repeatable, see
    /// [`Primitive::from_str`]) and `preset` (`cone-cylinder`). Blank lines
    /// and lines starting with `#` are ignored.
    pub fn parse_config(text: &str) -> Result<Self, SynthError> {
        let mut width = None;
        let mut height = None;
        let mut quantize = true;
        let mut clamp = true;
        let mut primitives: Vec<Primitive> = Vec::new();
        let mut preset = false;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| SynthError::Parse(line.to_string()))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = || SynthError::Parse(line.to_string());
            match key {
                "size" => {
                    let (w, h) = parse_size(value).ok_or_else(bad)?;
                    width = Some(w);
                    height = Some(h);
                }
                "width" => width = Some(value.parse().map_err(|_| bad())?),
                "height" => height = Some(value.parse().map_err(|_| bad())?),
                "quantize" => quantize = value.parse().map_err(|_| bad())?,
                "clamp" => clamp = value.parse().map_err(|_| bad())?,
                "shape" => primitives.push(value.parse()?),
                "preset" if value == "cone-cylinder" => preset = true,
                _ => return Err(bad()),
            }
        }
        let (width, height) = match (width, height) {
            (Some(w), Some(h)) => (w, h),
            _ => return Err(SynthError::InvalidSpec("missing size".into())),
        };
        let mut spec = if preset {
            Self::cone_cylinder(width, height)
        } else {
            Self::new(width, height, Vec::new())
        };
        spec.primitives.extend(primitives);
        spec.quantize = quantize;
        spec.clamp = clamp;
        spec.validate()?;
        Ok(spec)
    }
}

/// Parses `WxH`.
pub fn parse_size(s: &str) -> Option<(usize, usize)> {
    let (w, h) = s.split_once(['x', 'X'])?;
    Some((w.trim().parse().ok()?, h.trim().parse().ok()?))
}

/// Renders a spec, sampling each primitive at integer pixel coordinates.
pub fn generate(spec: &SyntheticSpec) -> Result<Synthesized, SynthError> {
    spec.validate()?;
    let raw = ScalarField::from_fn(spec.width, spec.height, |x, y| {
        spec.eval(x as f64, y as f64)
    });
    if spec.quantize {
        let data = raw
            .values()
            .iter()
            .map(|&v| v.round().clamp(0.0, 255.0) as u8)
            .collect();
        let img = GrayImage::new(spec.width, spec.height, data)
            .map_err(|e| SynthError::InvalidSpec(e.to_string()))?;
        return Ok(Synthesized::Quantized(img));
    }
    if spec.clamp {
        return Ok(Synthesized::Real(raw.map(|v| v.clamp(0.0, 255.0))));
    }
    if let Some(i) = raw.values().iter().position(|v| !(0.0..=255.0).contains(v)) {
        return Err(SynthError::OutOfRange {
            x: i % spec.width,
            y: i / spec.width,
            value: raw.values()[i],
        });
    }
    Ok(Synthesized::Real(raw))
}

/// Which pixels [`curvature_stats`] summarizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Region {
    /// Everything except the one-pixel border.
    #[default]
    Interior,
    Full,
}

/// Summary of a curvature field over a region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureStats {
    pub mean_abs: f64,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl CurvatureStats {
    /// CSV with header `metric,value` and rows `mean_abs`, `min`, `max`,
    /// `count`.
    pub fn to_csv(&self) -> String {
        format!(
            "metric,value\nmean_abs,{}\nmin,{}\nmax,{}\ncount,{}\n",
            self.mean_abs, self.min, self.max, self.count
        )
    }
}

pub fn curvature_stats(field: &ScalarField, region: Region) -> Result<CurvatureStats, SynthError> {
    curvature_stats_masked(field, region, &[], 0.0)
}

/// Like [`curvature_stats`], skipping pixels within `radius` of any point in
/// `exclude`.
pub fn curvature_stats_masked(
    field: &ScalarField,
    region: Region,
    exclude: &[(f64, f64)],
    radius: f64,
) -> Result<CurvatureStats, SynthError> {
    let (w, h) = (field.width(), field.height());
    let (x0, x1, y0, y1) = match region {
        Region::Full => (0, w, 0, h),
        Region::Interior => (1, w.saturating_sub(1), 1, h.saturating_sub(1)),
    };
    let mut sum_abs = 0.0;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut count = 0usize;
    for y in y0..y1 {
        for x in x0..x1 {
            let masked = exclude
                .iter()
                .any(|&(px, py)| (x as f64 - px).hypot(y as f64 - py) <= radius);
            if masked {
                continue;
            }
            let v = field.get(x, y);
            sum_abs += v.abs();
            min = min.min(v);
            max = max.max(v);
            count += 1;
        }
    }
    if count == 0 {
        return Err(SynthError::EmptyRegion {
            width: w,
            height: h,
        });
    }
    Ok(CurvatureStats {
        mean_abs: sum_abs / count as f64,
        min,
        max,
        count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{weighted_curvature_discrete, SchemeConfig};

    fn quantized(spec: &SyntheticSpec) -> GrayImage {
        match generate(spec).unwrap() {
            Synthesized::Quantized(img) => img,
            Synthesized::Real(_) => panic!("expected quantized output"),
        }
    }

    #[test]
    fn flat_image() {
        let img = quantized(&SyntheticSpec::single(
            16,
            16,
            Primitive::Flat { level: 128.0 },
        ));
        assert_eq!(img.pixels(), &[128u8; 256][..]);
    }

    #[test]
    fn cone_profile() {
        let spec = SyntheticSpec::single(
            65,
            65,
            Primitive::Cone {
                cx: 32.0,
                cy: 32.0,
                radius: 30.0,
                peak: 200.0,
            },
        );
        let img = quantized(&spec);
        assert_eq!(img.get(32, 32), 200);
        assert_eq!(img.get(47, 32), 100);
        assert_eq!(img.get(32, 17), 100);
        assert_eq!(img.get(0, 0), 0);
        let Synthesized::Real(f) = generate(&spec.clone().real_valued()).unwrap() else {
            unreachable!()
        };
        assert_eq!(f.get(32, 32), 200.0);
        assert_eq!(f.get(47, 32), 100.0);
    }

    #[test]
    fn cylinder_profile() {
        let spec = SyntheticSpec::single(
            40,
            5,
            Primitive::CylinderRidge {
                axis: Axis::Vertical,
                center: 20.0,
                radius: 10.0,
                peak: 100.0,
            },
        )
        .real_valued();
        let Synthesized::Real(f) = generate(&spec).unwrap() else {
            unreachable!()
        };
        assert_eq!(f.get(20, 3), 100.0);
        assert!((f.get(26, 0) - 80.0).abs() < 1e-12);
        assert_eq!(f.get(5, 4), 0.0);
        // constant along the axis
        assert_eq!(f.get(26, 0), f.get(26, 4));
    }

    #[test]
    fn ramp_image() {
        let img = quantized(&SyntheticSpec::single(
            32,
            32,
            Primitive::Ramp {
                a: 1.0,
                b: 0.0,
                c: 10.0,
            },
        ));
        for y in 0..32 {
            for x in 0..32 {
                assert_eq!(img.get(x, y) as usize, x + 10);
            }
        }
    }

    #[test]
    fn clamping_and_range_errors() {
        let steep = SyntheticSpec::single(
            20,
            2,
            Primitive::Ramp {
                a: 20.0,
                b: 0.0,
                c: 0.0,
            },
        );
        assert_eq!(quantized(&steep).get(19, 0), 255);
        let Synthesized::Real(f) = generate(&steep.clone().real_valued()).unwrap() else {
            unreachable!()
        };
        assert_eq!(f.get(19, 1), 255.0);
        assert_eq!(
            generate(&steep.real_valued().unclamped()),
            Err(SynthError::OutOfRange {
                x: 13,
                y: 0,
                value: 260.0
            })
        );
    }

    #[test]
    fn invalid_specs() {
        let cone = |radius, peak| Primitive::Cone {
            cx: 0.0,
            cy: 0.0,
            radius,
            peak,
        };
        assert!(generate(&SyntheticSpec::single(4, 4, cone(0.0, 5.0))).is_err());
        assert!(generate(&SyntheticSpec::single(4, 4, cone(3.0, -1.0))).is_err());
        assert!(generate(&SyntheticSpec::new(4, 4, vec![])).is_err());
        assert!(generate(&SyntheticSpec::single(0, 4, cone(3.0, 1.0))).is_err());
    }

    #[test]
    fn deterministic() {
        let spec = SyntheticSpec::cone_cylinder(96, 80);
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
    }

    #[test]
    fn primitive_syntax_round_trips() {
        for s in [
            "cone:32,32,30,200",
            "cylinder:v,100,20,150",
            "cylinder:h,5.5,3,9",
            "ramp:1,0,10",
            "flat:7",
        ] {
            let p: Primitive = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        assert!("cone:1,2,3".parse::<Primitive>().is_err());
        assert!("cylinder:x,1,2,3".parse::<Primitive>().is_err());
        assert!("blob:1".parse::<Primitive>().is_err());
    }

    #[test]
    fn config_file() {
        let spec = SyntheticSpec::parse_config(
            "# two shapes\nsize = 64x48\nshape=cone:10,10,8,100\nshape=flat:20\nquantize=false\n",
        )
        .unwrap();
        assert_eq!((spec.width, spec.height), (64, 48));
        assert_eq!(spec.primitives.len(), 2);
        assert!(!spec.quantize);
        let preset =
            SyntheticSpec::parse_config("preset=cone-cylinder\nwidth=10\nheight=12").unwrap();
        assert_eq!(preset, SyntheticSpec::cone_cylinder(10, 12));
        assert!(SyntheticSpec::parse_config("shape=flat:1").is_err());
        assert!(SyntheticSpec::parse_config("size=4x4\nbogus").is_err());
    }

    #[test]
    fn stats_by_definition() {
        let zero = ScalarField::zeros(5, 5);
        let s = curvature_stats(&zero, Region::Interior).unwrap();
        assert_eq!((s.mean_abs, s.min, s.max, s.count), (0.0, 0.0, 0.0, 9));

        let vals = [1.0, -1.0, 2.0, -2.0];
        let f = ScalarField::from_fn(4, 4, |x, y| {
            if (1..3).contains(&x) && (1..3).contains(&y) {
                vals[(y - 1) * 2 + (x - 1)]
            } else {
                100.0
            }
        });
        let s = curvature_stats(&f, Region::Interior).unwrap();
        assert_eq!((s.mean_abs, s.min, s.max, s.count), (1.5, -2.0, 2.0, 4));
        let full = curvature_stats(&f, Region::Full).unwrap();
        assert_eq!(full.count, 16);
        assert_eq!(full.max, 100.0);

        assert!(matches!(
            curvature_stats(&ScalarField::zeros(2, 7), Region::Interior),
            Err(SynthError::EmptyRegion { .. })
        ));
    }

    #[test]
    fn masked_stats_skip_disks() {
        let f = ScalarField::from_fn(9, 9, |x, y| if (x, y) == (4, 4) { 8.0 } else { 0.0 });
        let s = curvature_stats_masked(&f, Region::Interior, &[(4.0, 4.0)], 1.0).unwrap();
        assert_eq!(s.max, 0.0);
        assert_eq!(s.count, 49 - 5);
    }

    #[test]
    fn ramp_has_no_discrete_curvature() {
        let img = quantized(&SyntheticSpec::single(
            24,
            24,
            Primitive::Ramp {
                a: 3.0,
                b: 2.0,
                c: 7.0,
            },
        ));
        let kw = weighted_curvature_discrete(&img, &SchemeConfig::default(), None).unwrap();
        assert!(curvature_stats(&kw, Region::Interior).unwrap().mean_abs < 1e-12);
    }

    #[test]
    fn csv_layout() {
        let s = CurvatureStats {
            mean_abs: 0.5,
            min: -1.0,
            max: 2.0,
            count: 3,
        };
        assert_eq!(
            s.to_csv(),
            "metric,value\nmean_abs,0.5\nmin,-1\nmax,2\ncount,3\n"
        );
    }
}
