//! Throughput and accuracy comparison of the curvature schemes.
//!
//! Each configuration gets one untimed warm-up run followed by
//! `repetitions` timed runs on a dedicated thread pool; the reported figure
//! is the median. Every timed output is checked against the warm-up output,
//! so a report also certifies that timing and thread count did not change
//! the result.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use thiserror::Error;

use crate::curvature::{
    gaussian_curvature_classical, weighted_curvature_classical, weighted_curvature_discrete,
    SchemeConfig,
};
use crate::error::CurvatureError;
use crate::image::{GrayImage, ScalarField};
use crate::imgio::metrics_csv;
use crate::lut::{AngleLut, LutVariant};
use crate::synth::{curvature_stats, Region, SynthError};

pub const MIN_REPETITIONS: usize = 3;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("at least {MIN_REPETITIONS} repetitions are required, got {0}")]
    TooFewRepetitions(usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Stats(#[from] SynthError),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    ClassicalK,
    ClassicalKw,
    DiscreteKw,
}

impl Scheme {
    /// Pixels read per output pixel: a 3x3 window for the classical scheme,
    /// a 3x3 cross for the discrete one.
    pub fn support_pixels(self) -> usize {
        match self {
            Scheme::ClassicalK | Scheme::ClassicalKw => 9,
            Scheme::DiscreteKw => 5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::ClassicalK => "classical-k",
            Scheme::ClassicalKw => "classical-kw",
            Scheme::DiscreteKw => "discrete-kw",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "classical-k" => Ok(Scheme::ClassicalK),
            "classical-kw" => Ok(Scheme::ClassicalKw),
            "discrete-kw" => Ok(Scheme::DiscreteKw),
            _ => Err(format!(
                "unknown scheme {s:?} (expected classical-k, classical-kw or discrete-kw)"
            )),
        }
    }
}

/// Angle source for the discrete scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LutChoice {
    /// Evaluate every angle directly.
    None,
    #[default]
    Full,
    Partial(u32),
}

impl LutChoice {
    pub fn variant(self) -> Option<LutVariant> {
        match self {
            LutChoice::None => None,
            LutChoice::Full => Some(LutVariant::Full),
            LutChoice::Partial(threshold) => Some(LutVariant::Partial {
                threshold,
                orientation: Default::default(),
            }),
        }
    }

    pub fn build(self) -> Result<Option<AngleLut>, CurvatureError> {
        self.variant().map(AngleLut::build).transpose()
    }
}

impl fmt::Display for LutChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LutChoice::None => f.write_str("none"),
            LutChoice::Full => f.write_str("full"),
            LutChoice::Partial(t) => write!(f, "partial:{t}"),
        }
    }
}

impl FromStr for LutChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" | "trig" => Ok(LutChoice::None),
            "full" => Ok(LutChoice::Full),
            _ => {
                let t = s
                    .strip_prefix("partial:")
                    .or_else(|| s.strip_prefix("partial"))
                    .ok_or_else(|| {
                        format!("unknown lut {s:?} (expected none, full or partial:T)")
                    })?;
                let t = if t.is_empty() {
                    crate::lut::DEFAULT_THRESHOLD
                } else {
                    t.parse().map_err(|_| format!("bad threshold in {s:?}"))?
                };
                Ok(LutChoice::Partial(t))
            }
        }
    }
}

/// Runs one scheme. `lut` is only meaningful for [`Scheme::DiscreteKw`].
pub fn compute(
    img: &GrayImage,
    scheme: Scheme,
    cfg: &SchemeConfig,
    lut: Option<&AngleLut>,
) -> Result<ScalarField, CurvatureError> {
    match scheme {
        Scheme::ClassicalK => gaussian_curvature_classical(img, cfg),
        Scheme::ClassicalKw => weighted_curvature_classical(img, cfg),
        Scheme::DiscreteKw => weighted_curvature_discrete(img, cfg, lut),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchConfig {
    pub scheme: Scheme,
    pub lut: LutChoice,
    pub threads: usize,
    pub scheme_config: SchemeConfig,
}

impl BenchConfig {
    pub fn new(scheme: Scheme, lut: LutChoice, threads: usize) -> Self {
        Self {
            scheme,
            lut,
            threads,
            scheme_config: SchemeConfig::default(),
        }
    }

    fn validate(&self) -> Result<(), BenchError> {
        if self.threads == 0 {
            return Err(BenchError::InvalidConfig(
                "threads must be at least 1".into(),
            ));
        }
        if self.lut != LutChoice::None {
            if self.scheme != Scheme::DiscreteKw {
                return Err(BenchError::InvalidConfig(format!(
                    "lookup table {} only applies to discrete-kw",
                    self.lut
                )));
            }
            if self.scheme_config.pixel_size != 1.0 {
                return Err(
                    CurvatureError::LutIncompatibleConfig(self.scheme_config.pixel_size).into(),
                );
            }
        }
        self.scheme_config.validate()?;
        Ok(())
    }

    /// The standard comparison set: classical Kw, and discrete Kw via the
    /// trig path, the full table and the partial table.
    pub fn standard_set(threads: usize) -> Vec<Self> {
        vec![
            Self::new(Scheme::ClassicalKw, LutChoice::None, threads),
            Self::new(Scheme::DiscreteKw, LutChoice::None, threads),
            Self::new(Scheme::DiscreteKw, LutChoice::Full, threads),
            Self::new(
                Scheme::DiscreteKw,
                LutChoice::Partial(crate::lut::DEFAULT_THRESHOLD),
                threads,
            ),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub config: BenchConfig,
    pub width: usize,
    pub height: usize,
    pub repetitions: usize,
    pub median_seconds: f64,
    pub megapixels_per_second: f64,
    /// Every timed run reproduced the warm-up output bit for bit.
    pub deterministic: bool,
}

impl BenchRecord {
    pub fn label(&self) -> String {
        match self.config.scheme {
            Scheme::DiscreteKw => format!("{}/{}", self.config.scheme, self.config.lut),
            s => s.to_string(),
        }
    }
}

/// Interior mean |Kw| of both weighted schemes on the benchmark image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyBlock {
    pub classical_mean_abs: f64,
    pub discrete_mean_abs: f64,
}

impl AccuracyBlock {
    pub fn measure(img: &GrayImage, cfg: &SchemeConfig) -> Result<Self, BenchError> {
        let classical = weighted_curvature_classical(img, cfg)?;
        let discrete = weighted_curvature_discrete(img, cfg, None)?;
        Ok(Self {
            classical_mean_abs: curvature_stats(&classical, Region::Interior)?.mean_abs,
            discrete_mean_abs: curvature_stats(&discrete, Region::Interior)?.mean_abs,
        })
    }

    /// classical / discrete. Infinite when the discrete error is zero and the
    /// classical one is not; NaN when both are zero.
    pub fn ratio(&self) -> f64 {
        self.classical_mean_abs / self.discrete_mean_abs
    }

    pub fn to_csv(&self) -> String {
        metrics_csv([
            ("classical_mean_abs", self.classical_mean_abs.to_string()),
            ("discrete_mean_abs", self.discrete_mean_abs.to_string()),
            ("ratio", self.ratio().to_string()),
        ])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    pub accuracy: AccuracyBlock,
}

impl BenchReport {
    pub fn find(&self, scheme: Scheme, lut: LutChoice) -> Option<&BenchRecord> {
        self.records
            .iter()
            .find(|r| r.config.scheme == scheme && r.config.lut == lut)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "scheme,lut,threads,width,height,repetitions,median_seconds,megapixels_per_second,support_pixels,deterministic\n",
        );
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                r.config.scheme,
                r.config.lut,
                r.config.threads,
                r.width,
                r.height,
                r.repetitions,
                r.median_seconds,
                r.megapixels_per_second,
                r.config.scheme.support_pixels(),
                r.deterministic
            ));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{:<24} {:>7} {:>11} {:>5} {:>12} {:>10}\n",
            "configuration", "threads", "size", "reps", "median ms", "MP/s"
        );
        for r in &self.records {
            out.push_str(&format!(
                "{:<24} {:>7} {:>11} {:>5} {:>12.3} {:>10.1}{}\n",
                r.label(),
                r.config.threads,
                format!("{}x{}", r.width, r.height),
                r.repetitions,
                r.median_seconds * 1e3,
                r.megapixels_per_second,
                if r.deterministic {
                    ""
                } else {
                    "  (NONDETERMINISTIC)"
                }
            ));
        }
        out.push_str(&format!(
            "\ninterior mean |Kw|: classical {:.6}  discrete {:.6}  ratio {:.2}\n",
            self.accuracy.classical_mean_abs,
            self.accuracy.discrete_mean_abs,
            self.accuracy.ratio()
        ));
        out
    }
}

/// Times every configuration on `image`, one after another.
pub fn run_bench(
    image: &GrayImage,
    configs: &[BenchConfig],
    repetitions: usize,
) -> Result<BenchReport, BenchError> {
    if repetitions < MIN_REPETITIONS {
        return Err(BenchError::TooFewRepetitions(repetitions));
    }
    if image.width() < 3 || image.height() < 3 {
        return Err(CurvatureError::DimensionTooSmall {
            width: image.width(),
            height: image.height(),
            min_width: 3,
            min_height: 3,
        }
        .into());
    }
    for c in configs {
        c.validate()?;
    }

    let megapixels = (image.width() * image.height()) as f64 / 1e6;
    let mut records = Vec::with_capacity(configs.len());
    for config in configs {
        let lut = config.lut.build()?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| BenchError::ThreadPool(e.to_string()))?;
        let run = || compute(image, config.scheme, &config.scheme_config, lut.as_ref());

        let reference = pool.install(run)?;
        let mut times = Vec::with_capacity(repetitions);
        let mut deterministic = true;
        for _ in 0..repetitions {
            let start = Instant::now();
            let out = pool.install(run)?;
            times.push(start.elapsed().as_secs_f64().max(1e-9));
            deterministic &= out == reference;
        }
        let median = median(&mut times);
        records.push(BenchRecord {
            config: *config,
            width: image.width(),
            height: image.height(),
            repetitions,
            median_seconds: median,
            megapixels_per_second: megapixels / median,
            deterministic,
        });
    }

    let accuracy = AccuracyBlock::measure(
        image,
        &configs.first().map(|c| c.scheme_config).unwrap_or_default(),
    )?;
    Ok(BenchReport { records, accuracy })
}

/// Uniform 8-bit noise, reproducible from `seed`. The worst case for the
/// table lookups: consecutive pixels hit unrelated table rows.
pub fn random_image(width: usize, height: usize, seed: u64) -> Result<GrayImage, CurvatureError> {
    use rand::{RngCore, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut data = vec![0u8; width * height];
    rng.fill_bytes(&mut data);
    GrayImage::new(width, height, data)
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}
