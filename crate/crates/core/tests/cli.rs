use std::path::Path;

use wgcurv::cli::main_with_args;
use wgcurv::imgio::{read_field, read_image, write_image};
use wgcurv::lut::{read_dump_file, LimitOrientation, LutVariant};
use wgcurv::GrayImage;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("wgcurv").chain(args.iter().copied());
    let code = main_with_args(argv, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn synth_flat_writes_exact_pixels() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("flat.pgm");
    let r = run(&[
        "synth",
        "--kind",
        "flat",
        "--level",
        "7",
        "--size",
        "8x8",
        p(&out),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let img = read_image(&out).unwrap();
    assert_eq!((img.width(), img.height()), (8, 8));
    assert!(img.pixels().iter().all(|&v| v == 7));
}

#[test]
fn synth_cone_and_real_output() {
    let dir = tempfile::tempdir().unwrap();
    let pgm = dir.path().join("cone.pgm");
    let r = run(&[
        "synth",
        "--kind",
        "cone",
        "--apex",
        "32,32",
        "--radius",
        "30",
        "--peak",
        "200",
        "--size",
        "64x64",
        p(&pgm),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let img = read_image(&pgm).unwrap();
    assert_eq!(img.get(32, 32), 200);
    assert_eq!(img.get(47, 32), 100);

    let fld = dir.path().join("ramp.fld");
    let r = run(&[
        "synth",
        "--kind",
        "ramp",
        "--a",
        "0.5",
        "--c",
        "10",
        "--size",
        "6x3",
        "--real",
        p(&fld),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let field = read_field(&fld).unwrap();
    assert_eq!(field.get(5, 2), 12.5);
}

#[test]
fn synth_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scene.txt");
    std::fs::write(&cfg, "size=16x8\nshape=flat:3\nshape=cylinder:v,8,4,90\n").unwrap();
    let out = dir.path().join("scene.pgm");
    let r = run(&["synth", "--config", p(&cfg), p(&out)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let img = read_image(&out).unwrap();
    assert_eq!((img.width(), img.height()), (16, 8));
    assert_eq!(img.get(8, 0), 90);
    assert_eq!(img.get(0, 0), 3);
}

#[test]
fn compute_writes_field_vis_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("spike.pgm");
    let spike = GrayImage::from_fn(5, 5, |x, y| u8::from((x, y) == (2, 2))).unwrap();
    write_image(&spike, &input).unwrap();
    let (fld, vis, stats) = (
        dir.path().join("kw.fld"),
        dir.path().join("kw.pgm"),
        dir.path().join("stats.csv"),
    );
    let r = run(&[
        "compute",
        p(&input),
        p(&fld),
        "--vis",
        p(&vis),
        "--stats",
        p(&stats),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let kw = read_field(&fld).unwrap();
    assert!((kw.get(2, 2) - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
    assert_eq!(read_image(&vis).unwrap().get(2, 2), 170);
    let csv = std::fs::read_to_string(&stats).unwrap();
    assert!(csv.starts_with("metric,value\nmean_abs,"));
    assert!(csv.ends_with("count,9\n"));

    for lut in ["none", "full", "partial:31"] {
        let other = dir.path().join(format!("{lut}.fld").replace(':', "_"));
        let r = run(&["compute", "--lut", lut, p(&input), p(&other)]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        assert_eq!(read_field(&other).unwrap(), kw);
    }
    let classical = dir.path().join("k.fld");
    let r = run(&[
        "compute",
        "--scheme",
        "classical-k",
        p(&input),
        p(&classical),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.pgm");
    write_image(&GrayImage::filled(4, 4, 1).unwrap(), &input).unwrap();
    let out = dir.path().join("out.fld");
    let cases: &[&[&str]] = &[
        &[
            "compute",
            "--scheme",
            "classical-kw",
            "--lut",
            "full",
            p(&input),
            p(&out),
        ],
        &["compute", "--scheme", "bogus", p(&input), p(&out)],
        &["compute", "--pixel-size", "2", p(&input), p(&out)],
        &[
            "compute",
            "--lut",
            "none",
            "--pixel-size",
            "0",
            p(&input),
            p(&out),
        ],
        &["compute", "--threads", "0", p(&input), p(&out)],
        &["synth", "--kind", "cone", p(&out)],
        &["synth", "--size", "4by4", p(&out)],
        &["lut-dump", "--variant", "partial:0", p(&out)],
        &["lut-dump", "--variant", "full", "--paper-literal", p(&out)],
        &["bench", "--reps", "2"],
        &["no-such-command"],
    ];
    for args in cases {
        let r = run(args);
        assert_eq!(r.code, 2, "{args:?}: {}", r.stderr);
        assert!(!r.stderr.is_empty());
    }
    assert!(!out.exists());
}

#[test]
fn runtime_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.pgm");
    let out = dir.path().join("out.fld");
    let r = run(&["compute", p(&missing), p(&out)]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("missing.pgm"));

    let garbage = dir.path().join("garbage.pgm");
    std::fs::write(&garbage, b"not an image").unwrap();
    assert_eq!(run(&["compute", p(&garbage), p(&out)]).code, 1);

    let tiny = dir.path().join("tiny.pgm");
    write_image(&GrayImage::filled(2, 2, 0).unwrap(), &tiny).unwrap();
    assert_eq!(run(&["compute", p(&tiny), p(&out)]).code, 1);

    let input = dir.path().join("in.pgm");
    write_image(&GrayImage::filled(4, 4, 1).unwrap(), &input).unwrap();
    let nowhere = dir.path().join("no/such/dir/out.fld");
    assert_eq!(run(&["compute", p(&input), p(&nowhere)]).code, 1);
    assert!(!out.exists());
}

#[test]
fn compare_synthetic_scene() {
    let dir = tempfile::tempdir().unwrap();
    let (c_out, d_out) = (dir.path().join("c.fld"), dir.path().join("d.fld"));
    let r = run(&[
        "compare",
        "synthetic-cone-cylinder",
        "--size",
        "128x96",
        "--classical-out",
        p(&c_out),
        "--discrete-out",
        p(&d_out),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(rows[0], "metric,value");
    let value = |name: &str| -> f64 {
        rows.iter()
            .find_map(|l| l.strip_prefix(&format!("{name},")))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!(value("classical_mean_abs") > value("discrete_mean_abs"));
    assert_eq!(value("count"), (126.0 * 94.0));
    assert_eq!(read_field(&c_out).unwrap().width(), 128);
    assert_eq!(read_field(&d_out).unwrap().height(), 96);

    let csv = dir.path().join("cmp.csv");
    let r = run(&[
        "compare",
        "synthetic-cone-cylinder",
        "--size",
        "64x64",
        "--csv",
        p(&csv),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.is_empty());
    assert!(std::fs::read_to_string(&csv).unwrap().contains("ratio,"));
}

#[test]
fn lut_dump_variants() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lut.bin");
    let r = run(&[
        "lut-dump",
        "--variant",
        "partial:12",
        "--paper-literal",
        p(&out),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let dump = read_dump_file(&out).unwrap();
    assert_eq!(
        dump.variant,
        LutVariant::Partial {
            threshold: 12,
            orientation: LimitOrientation::PaperLiteral
        }
    );
    assert_eq!(dump.get(0, 77), std::f64::consts::FRAC_PI_2);
}

#[test]
fn bench_reports_every_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bench.csv");
    let r = run(&[
        "bench",
        "--size",
        "48x32",
        "--random",
        "3",
        "--reps",
        "3",
        "--threads",
        "1",
        "--csv",
        p(&csv),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    for label in [
        "classical-kw",
        "discrete-kw/none",
        "discrete-kw/full",
        "discrete-kw/partial:31",
    ] {
        assert!(
            r.stdout.contains(label),
            "{label} missing from\n{}",
            r.stdout
        );
    }
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(
        text.lines().next().unwrap().split(',').next(),
        Some("scheme")
    );

    let input = dir.path().join("in.pgm");
    write_image(&GrayImage::filled(8, 8, 3).unwrap(), &input).unwrap();
    assert_eq!(run(&["bench", p(&input), "--reps", "3"]).code, 0);
    assert_eq!(run(&["bench", p(&input), "--random", "1"]).code, 2);
}
