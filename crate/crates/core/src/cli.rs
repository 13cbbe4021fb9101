//! Command-line front end.
//!
//! Exit status: 0 on success, 2 for usage errors (bad flags or flag
//! combinations), 1 for I/O and computation failures.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{self, compute, BenchConfig, LutChoice, Scheme};
use crate::curvature::{BoundaryPolicy, SchemeConfig, StencilMode};
use crate::image::GrayImage;
use crate::imgio::{self, VisualizationParams};
use crate::lut::{AngleLut, LimitOrientation, LutVariant};
use crate::synth::{
    self, curvature_stats, parse_size, Axis, Primitive, Region, Synthesized, SyntheticSpec,
};

/// Input name that selects the built-in cone and cylinder scene.
pub const SYNTHETIC_INPUT: &str = "synthetic-cone-cylinder";

#[derive(Debug, Parser)]
#[command(
    name = "wgcurv",
    version,
    about = "Weighted Gaussian curvature of grayscale images"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a curvature map from a PGM image.
    Compute(ComputeArgs),
    /// Run both weighted schemes on one image and compare their mean |Kw|.
    Compare(CompareArgs),
    /// Generate a synthetic developable test image.
    Synth(SynthArgs),
    /// Write an angle lookup table to a binary dump.
    LutDump(LutDumpArgs),
    /// Measure throughput of every scheme and angle source.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StencilArg {
    Standard,
    PaperLiteral,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BoundaryArg {
    Replicate,
    InteriorOnly,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RegionArg {
    Interior,
    Full,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Flat,
    Cone,
    Cylinder,
    Ramp,
}

#[derive(Debug, Args)]
pub struct SchemeArgs {
    /// Second-derivative stencils for the classical scheme.
    #[arg(long, value_enum, default_value = "standard")]
    pub stencil: StencilArg,
    #[arg(long, value_enum, default_value = "replicate")]
    pub boundary: BoundaryArg,
    #[arg(long, default_value_t = 1.0)]
    pub pixel_size: f64,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub threads: Option<usize>,
}

impl SchemeArgs {
    fn config(&self) -> SchemeConfig {
        SchemeConfig {
            pixel_size: self.pixel_size,
            boundary: match self.boundary {
                BoundaryArg::Replicate => BoundaryPolicy::Replicate,
                BoundaryArg::InteriorOnly => BoundaryPolicy::InteriorOnly,
            },
            stencil: match self.stencil {
                StencilArg::Standard => StencilMode::Standard,
                StencilArg::PaperLiteral => StencilMode::PaperLiteral,
            },
        }
    }
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    pub input: PathBuf,
    /// Field dump to write.
    pub output: PathBuf,
    #[arg(long, default_value = "discrete-kw")]
    pub scheme: Scheme,
    /// Angle source for discrete-kw: none, full or partial:T [default: full].
    #[arg(long)]
    pub lut: Option<LutChoice>,
    #[command(flatten)]
    pub scheme_args: SchemeArgs,
    /// Also write a PGM visualization, offset + gain * value.
    #[arg(long)]
    pub vis: Option<PathBuf>,
    #[arg(long, default_value_t = 128.0, allow_negative_numbers = true)]
    pub vis_offset: f64,
    #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
    pub vis_gain: f64,
    /// Also write interior statistics as CSV.
    #[arg(long)]
    pub stats: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// PGM path, or `synthetic-cone-cylinder` for the built-in scene.
    pub input: String,
    /// Size of the built-in scene.
    #[arg(long, default_value = "256x256")]
    pub size: String,
    /// Angle source for the discrete scheme.
    #[arg(long, default_value = "full")]
    pub lut: LutChoice,
    #[command(flatten)]
    pub scheme_args: SchemeArgs,
    #[arg(long, value_enum, default_value = "interior")]
    pub region: RegionArg,
    /// Field dump of the classical Kw map.
    #[arg(long)]
    pub classical_out: Option<PathBuf>,
    /// Field dump of the discrete Kw map.
    #[arg(long)]
    pub discrete_out: Option<PathBuf>,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// PGM output, or a field dump with --real.
    pub output: PathBuf,
    #[arg(long, default_value = "256x256")]
    pub size: String,
    /// Single primitive built from the flags below.
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    #[arg(long, allow_negative_numbers = true)]
    pub level: Option<f64>,
    /// Cone apex as X,Y [default: image centre].
    #[arg(long)]
    pub apex: Option<String>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub peak: Option<f64>,
    /// Cylinder axis: v or h.
    #[arg(long, default_value = "v")]
    pub axis: String,
    /// Cylinder centre line [default: image centre].
    #[arg(long)]
    pub center: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    /// Extra primitive, e.g. cone:32,32,30,200 (repeatable).
    #[arg(long = "shape")]
    pub shapes: Vec<String>,
    /// Built-in scene; only `cone-cylinder` exists.
    #[arg(long)]
    pub preset: Option<String>,
    /// key=value spec file; other shape flags are ignored when given.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Keep real values and write a field dump instead of a PGM.
    #[arg(long)]
    pub real: bool,
    /// With --real, fail instead of clamping to [0, 255].
    #[arg(long)]
    pub no_clamp: bool,
}

#[derive(Debug, Args)]
pub struct LutDumpArgs {
    pub output: PathBuf,
    /// full or partial:T.
    #[arg(long, default_value = "full")]
    pub variant: LutChoice,
    /// Use the inverted constants outside the partial band.
    #[arg(long)]
    pub paper_literal: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// PGM to benchmark on; defaults to a generated image.
    pub input: Option<PathBuf>,
    /// Size of the generated image.
    #[arg(long, default_value = "4096x2160")]
    pub size: String,
    /// Generate uniform noise with this seed instead of the cone scene.
    #[arg(long)]
    pub random: Option<u64>,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Also write the per-configuration CSV here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Runtime(e) => write!(f, "error: {e:#}"),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Runtime(e)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit status. Reports go to `out`, diagnostics to `err`.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    match run(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}

pub fn run(cmd: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Compute(a) => run_compute(a, out),
        Command::Compare(a) => run_compare(a, out),
        Command::Synth(a) => run_synth(a, out),
        Command::LutDump(a) => run_lut_dump(a, out),
        Command::Bench(a) => run_bench(a, out),
    }
}

fn thread_pool(threads: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let n = match threads {
        Some(0) => return Err(usage("--threads must be at least 1")),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| CliError::Runtime(anyhow!(e)))
}

fn check_input(path: &Path) -> Result<(), CliError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::Runtime(anyhow!(
            "input {} does not exist or is not a file",
            path.display()
        )))
    }
}

fn check_output(path: &Path) -> Result<(), CliError> {
    if path.as_os_str().is_empty() || path.is_dir() {
        return Err(CliError::Runtime(anyhow!(
            "output {} is not a writable file path",
            path.display()
        )));
    }
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => Err(CliError::Runtime(
            anyhow!("output directory {} does not exist", dir.display()),
        )),
        _ => Ok(()),
    }
}

fn parse_size_arg(s: &str) -> Result<(usize, usize), CliError> {
    match parse_size(s) {
        Some((w, h)) if w > 0 && h > 0 => Ok((w, h)),
        _ => Err(usage(format!("bad size {s:?}, expected WxH"))),
    }
}

fn check_scheme(cfg: &SchemeConfig) -> Result<(), CliError> {
    cfg.validate().map_err(|e| usage(e.to_string()))
}

fn build_lut(choice: LutChoice) -> Result<Option<AngleLut>, CliError> {
    choice.build().map_err(|e| usage(e.to_string()))
}

fn run_compute(a: ComputeArgs, _out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = a.scheme_args.config();
    check_scheme(&cfg)?;
    let lut_choice = match (a.scheme, a.lut) {
        (Scheme::DiscreteKw, choice) => choice.unwrap_or(LutChoice::Full),
        (_, None | Some(LutChoice::None)) => LutChoice::None,
        (scheme, Some(choice)) => {
            return Err(usage(format!("--lut {choice} does not apply to {scheme}")));
        }
    };
    if lut_choice != LutChoice::None && cfg.pixel_size != 1.0 {
        return Err(usage(
            "lookup tables need --pixel-size 1; pass --lut none for other pixel sizes",
        ));
    }
    check_input(&a.input)?;
    check_output(&a.output)?;
    for p in a.vis.iter().chain(a.stats.iter()) {
        check_output(p)?;
    }
    let pool = thread_pool(a.scheme_args.threads)?;
    let lut = build_lut(lut_choice)?;

    let img = imgio::read_image(&a.input).context("reading input")?;
    let field = pool
        .install(|| compute(&img, a.scheme, &cfg, lut.as_ref()))
        .context("computing curvature")?;
    imgio::write_field(&field, &a.output)?;
    if let Some(vis) = &a.vis {
        let params = VisualizationParams {
            offset: a.vis_offset,
            gain: a.vis_gain,
        };
        imgio::write_image(&imgio::visualize_curvature(&field, params), vis)?;
    }
    if let Some(stats) = &a.stats {
        let s = curvature_stats(&field, Region::Interior).context("statistics")?;
        imgio::write_text(stats, &s.to_csv())?;
    }
    Ok(())
}

fn run_compare(a: CompareArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = a.scheme_args.config();
    check_scheme(&cfg)?;
    if a.lut != LutChoice::None && cfg.pixel_size != 1.0 {
        return Err(usage("lookup tables need --pixel-size 1"));
    }
    let size = parse_size_arg(&a.size)?;
    let synthetic = a.input == SYNTHETIC_INPUT;
    if !synthetic {
        check_input(Path::new(&a.input))?;
    }
    for p in [&a.classical_out, &a.discrete_out, &a.csv]
        .into_iter()
        .flatten()
    {
        check_output(p)?;
    }
    let pool = thread_pool(a.scheme_args.threads)?;
    let lut = build_lut(a.lut)?;

    let img = if synthetic {
        match synth::generate(&SyntheticSpec::cone_cylinder(size.0, size.1))
            .map_err(|e| usage(e.to_string()))?
        {
            Synthesized::Quantized(img) => img,
            Synthesized::Real(_) => unreachable!("preset is quantized"),
        }
    } else {
        imgio::read_image(&a.input).context("reading input")?
    };
    let (classical, discrete) = pool.install(|| -> anyhow::Result<_> {
        Ok((
            compute(&img, Scheme::ClassicalKw, &cfg, None)?,
            compute(&img, Scheme::DiscreteKw, &cfg, lut.as_ref())?,
        ))
    })?;
    let region = match a.region {
        RegionArg::Interior => Region::Interior,
        RegionArg::Full => Region::Full,
    };
    let cs = curvature_stats(&classical, region).context("classical statistics")?;
    let ds = curvature_stats(&discrete, region).context("discrete statistics")?;
    let csv = imgio::metrics_csv([
        ("classical_mean_abs", cs.mean_abs.to_string()),
        ("discrete_mean_abs", ds.mean_abs.to_string()),
        ("ratio", (cs.mean_abs / ds.mean_abs).to_string()),
        ("count", cs.count.to_string()),
    ]);
    if let Some(p) = &a.classical_out {
        imgio::write_field(&classical, p)?;
    }
    if let Some(p) = &a.discrete_out {
        imgio::write_field(&discrete, p)?;
    }
    match &a.csv {
        Some(p) => imgio::write_text(p, &csv)?,
        None => out
            .write_all(csv.as_bytes())
            .map_err(|e| CliError::Runtime(e.into()))?,
    }
    Ok(())
}

fn synth_spec(a: &SynthArgs) -> Result<SyntheticSpec, CliError> {
    if let Some(path) = &a.config {
        check_input(path)?;
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return SyntheticSpec::parse_config(&text).map_err(|e| usage(e.to_string()));
    }
    let (w, h) = parse_size_arg(&a.size)?;
    let mut spec = match a.preset.as_deref() {
        Some("cone-cylinder") => SyntheticSpec::cone_cylinder(w, h),
        Some(other) => return Err(usage(format!("unknown preset {other:?}"))),
        None => SyntheticSpec::new(w, h, Vec::new()),
    };
    let missing = |flag: &str| usage(format!("--kind needs --{flag}"));
    if let Some(kind) = a.kind {
        let prim = match kind {
            KindArg::Flat => Primitive::Flat {
                level: a.level.ok_or_else(|| missing("level"))?,
            },
            KindArg::Cone => {
                let (cx, cy) = match &a.apex {
                    Some(s) => s
                        .split_once(',')
                        .and_then(|(x, y)| Some((x.trim().parse().ok()?, y.trim().parse().ok()?)))
                        .ok_or_else(|| usage(format!("bad --apex {s:?}, expected X,Y")))?,
                    None => ((w / 2) as f64, (h / 2) as f64),
                };
                Primitive::Cone {
                    cx,
                    cy,
                    radius: a.radius.ok_or_else(|| missing("radius"))?,
                    peak: a.peak.ok_or_else(|| missing("peak"))?,
                }
            }
            KindArg::Cylinder => {
                let axis = match a.axis.as_str() {
                    "v" | "vertical" => Axis::Vertical,
                    "h" | "horizontal" => Axis::Horizontal,
                    other => return Err(usage(format!("bad --axis {other:?}"))),
                };
                let default_center = match axis {
                    Axis::Vertical => (w / 2) as f64,
                    Axis::Horizontal => (h / 2) as f64,
                };
                Primitive::CylinderRidge {
                    axis,
                    center: a.center.unwrap_or(default_center),
                    radius: a.radius.ok_or_else(|| missing("radius"))?,
                    peak: a.peak.ok_or_else(|| missing("peak"))?,
                }
            }
            KindArg::Ramp => Primitive::Ramp {
                a: a.a.unwrap_or(0.0),
                b: a.b.unwrap_or(0.0),
                c: a.c.unwrap_or(0.0),
            },
        };
        spec.primitives.push(prim);
    }
    for s in &a.shapes {
        spec.primitives.push(
            s.parse()
                .map_err(|e: synth::SynthError| usage(e.to_string()))?,
        );
    }
    spec.quantize = !a.real;
    spec.clamp = !a.no_clamp;
    spec.validate().map_err(|e| usage(e.to_string()))?;
    Ok(spec)
}

fn run_synth(a: SynthArgs, _out: &mut dyn Write) -> Result<(), CliError> {
    let mut spec = synth_spec(&a)?;
    if a.config.is_some() && a.real {
        spec.quantize = false;
    }
    check_output(&a.output)?;
    match synth::generate(&spec).map_err(|e| CliError::Runtime(e.into()))? {
        Synthesized::Quantized(img) => imgio::write_image(&img, &a.output)?,
        Synthesized::Real(field) => imgio::write_field(&field, &a.output)?,
    }
    Ok(())
}

fn run_lut_dump(a: LutDumpArgs, _out: &mut dyn Write) -> Result<(), CliError> {
    let variant = match a.variant {
        LutChoice::None => return Err(usage("--variant must be full or partial:T")),
        LutChoice::Full if a.paper_literal => {
            return Err(usage("--paper-literal only applies to partial tables"));
        }
        LutChoice::Full => LutVariant::Full,
        LutChoice::Partial(threshold) => LutVariant::Partial {
            threshold,
            orientation: if a.paper_literal {
                LimitOrientation::PaperLiteral
            } else {
                LimitOrientation::AnalyticLimit
            },
        },
    };
    check_output(&a.output)?;
    let lut = AngleLut::build(variant).map_err(|e| usage(e.to_string()))?;
    lut.dump(&a.output)?;
    Ok(())
}

fn run_bench(a: BenchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.reps < bench::MIN_REPETITIONS {
        return Err(usage(format!(
            "--reps must be at least {}",
            bench::MIN_REPETITIONS
        )));
    }
    let threads = match a.threads {
        Some(0) => return Err(usage("--threads must be at least 1")),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    if let Some(p) = &a.input {
        check_input(p)?;
    }
    if let Some(p) = &a.csv {
        check_output(p)?;
    }
    let img: GrayImage = match (&a.input, a.random) {
        (Some(_), Some(_)) => return Err(usage("give either an input image or --random")),
        (Some(p), None) => imgio::read_image(p).context("reading input")?,
        (None, seed) => {
            let (w, h) = parse_size_arg(&a.size)?;
            match seed {
                Some(seed) => bench::random_image(w, h, seed).map_err(|e| usage(e.to_string()))?,
                None => match synth::generate(&SyntheticSpec::cone_cylinder(w, h))
                    .map_err(|e| usage(e.to_string()))?
                {
                    Synthesized::Quantized(img) => img,
                    Synthesized::Real(_) => unreachable!("preset is quantized"),
                },
            }
        }
    };
    let report =
        bench::run_bench(&img, &BenchConfig::standard_set(threads), a.reps).context("benchmark")?;
    out.write_all(report.to_text().as_bytes())
        .map_err(|e| CliError::Runtime(e.into()))?;
    if let Some(p) = &a.csv {
        imgio::write_text(p, &report.to_csv())?;
    }
    Ok(())
}

impl From<crate::error::IoError> for CliError {
    fn from(e: crate::error::IoError) -> Self {
        CliError::Runtime(e.into())
    }
}
