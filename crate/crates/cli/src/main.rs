//! `macroreveal` command-line front end.
//!
//! Exit status: 0 on success, 1 for usage, parse and validation failures,
//! 2 for I/O failures, 3 for numeric failures. Failures print one line
//! starting with `error:` on stderr.

use std::ffi::OsString;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use macroreveal::filters::{
    autocontrast, gaussian_blur, invert, levels, overlay_blend, sobel_magnitude, unsharp_mask,
    LevelsParams,
};
use macroreveal::fixture::FaceManifest;
use macroreveal::metrics::{
    best_symmetry_axis, feature_margin, persistence_report, FeatureMargin, MetricsReport,
};
use macroreveal::pgm::{read_hmap_file, read_pgm_file, write_hmap_file, write_pgm_file, MaxVal};
use macroreveal::pipeline::{
    blur_ladder, parse_pipeline_script, reveal, run_pipeline, RevealParams,
};
use macroreveal::terrain::{erode, hillshade, illumination_sweep, ErosionParams, LightSpec};
use macroreveal::{Error, ErrorClass, Heightmap, Raster};

#[derive(Debug, Parser)]
#[command(
    name = "macroreveal",
    version,
    about = "Blur ladders, edge overlays and synthetic terrain experiments"
)]
struct Cli {
    /// Bit depth of written PGM images
    #[arg(long, global = true, value_enum, default_value_t = Bits::B8)]
    bits: Bits,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Bits {
    #[value(name = "8")]
    B8,
    #[value(name = "16")]
    B16,
}

impl Bits {
    fn maxval(self) -> MaxVal {
        match self {
            Bits::B8 => MaxVal::Eight,
            Bits::B16 => MaxVal::Sixteen,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BlendMode {
    Overlay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    /// `key = value` lines
    Text,
    /// `metric,value` table with a header row
    Csv,
}

#[derive(Debug, Args)]
struct InOut {
    /// Input PGM image
    input: PathBuf,
    /// Output PGM image
    output: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Gaussian blur with sigma = radius / 3
    Blur {
        /// Kernel radius in pixels; 0 copies the image
        #[arg(long)]
        radius: usize,
        #[command(flatten)]
        io: InOut,
    },
    /// Blur at several radii and write a contact sheet
    Ladder {
        /// Comma-separated blur radii
        #[arg(long, value_delimiter = ',', default_value = "0,10,20,50,100,150,200")]
        radii: Vec<usize>,
        input: PathBuf,
        /// Directory receiving blur_r<radius>.pgm and contact_sheet.pgm
        outdir: PathBuf,
    },
    /// Sobel gradient magnitude
    Edges {
        #[command(flatten)]
        io: InOut,
    },
    /// Photographic negative
    Invert {
        #[command(flatten)]
        io: InOut,
    },
    /// Black/white point remap with gamma
    Levels {
        #[arg(long, default_value_t = 0.0)]
        black: f64,
        #[arg(long, default_value_t = 1.0)]
        white: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[command(flatten)]
        io: InOut,
    },
    /// Percentile-clipped contrast stretch
    Autocontrast {
        /// Percent of samples clipped to black
        #[arg(long, default_value_t = 1.0)]
        clip_low: f64,
        /// Percent of samples clipped to white
        #[arg(long, default_value_t = 1.0)]
        clip_high: f64,
        #[command(flatten)]
        io: InOut,
    },
    /// Unsharp mask: img + amount * (img - blur(img))
    Unsharp {
        #[arg(long)]
        radius: usize,
        #[arg(long, default_value_t = 1.0)]
        amount: f64,
        #[command(flatten)]
        io: InOut,
    },
    /// Blend TOP over BASE
    Composite {
        #[arg(long, value_enum, default_value_t = BlendMode::Overlay)]
        mode: BlendMode,
        #[arg(long, default_value_t = 0.09)]
        opacity: f64,
        base: PathBuf,
        top: PathBuf,
        output: PathBuf,
    },
    /// Blur, contrast stretch and overlay inverted edges
    Reveal {
        /// Blur radius in pixels
        #[arg(long, default_value_t = 150)]
        blur: usize,
        /// Gamma on the peak-normalized edge map
        #[arg(long, default_value_t = 0.5)]
        edge_gamma: f64,
        /// Opacity of the inverted edge layer
        #[arg(long, default_value_t = 0.09)]
        opacity: f64,
        /// Autocontrast low clip percent
        #[arg(long, default_value_t = 1.0)]
        clip_low: f64,
        /// Autocontrast high clip percent
        #[arg(long, default_value_t = 1.0)]
        clip_high: f64,
        /// Write blurred/enhanced/edges/inverted_edges .pgm files here
        #[arg(long, value_name = "DIR")]
        dump_intermediates: Option<PathBuf>,
        #[command(flatten)]
        io: InOut,
    },
    /// Run a pipeline script
    Run {
        script: PathBuf,
        #[command(flatten)]
        io: InOut,
        /// Write every `as <label>` step result to <DIR>/<label>.pgm
        #[arg(long, value_name = "DIR")]
        dump_intermediates: Option<PathBuf>,
    },
    /// Synthesize the face terrain as a .hmap heightmap
    SynthFace {
        #[arg(long, default_value_t = 1024)]
        width: usize,
        #[arg(long, default_value_t = 1024)]
        height: usize,
        /// Rubble noise seed
        #[arg(long, default_value_t = 2001)]
        seed: u64,
        /// Center elevation change of each eye (negative digs)
        #[arg(long, default_value_t = -200.0, allow_negative_numbers = true)]
        eye_depth: f64,
        #[arg(long, default_value_t = 150.0, allow_negative_numbers = true)]
        peak_height: f64,
        /// Ridge direction, degrees counter-clockwise from +x
        #[arg(long, default_value_t = 90.0, allow_negative_numbers = true)]
        ridge_axis: f64,
        #[arg(long, default_value_t = 6.0)]
        noise_amplitude: f64,
        /// Horizontal distance per pixel
        #[arg(long, default_value_t = 1.0)]
        cell_size: f64,
        /// Output heightmap; the header goes to <output>.hdr
        output: PathBuf,
    },
    /// Lambertian relief shading of a heightmap
    Hillshade {
        /// Light azimuth, degrees clockwise from north (image top)
        #[arg(long, default_value_t = 315.0)]
        azimuth: f64,
        /// Light elevation above the horizon in degrees
        #[arg(long, default_value_t = 35.0)]
        elevation: f64,
        input: PathBuf,
        output: PathBuf,
    },
    /// Diffusion smoothing followed by random craters
    Erode {
        #[arg(long, default_value_t = 200)]
        steps: usize,
        /// Diffusion rate, at most 0.25
        #[arg(long, default_value_t = 0.25)]
        rate: f64,
        #[arg(long, default_value_t = 400)]
        craters: usize,
        #[arg(long, default_value_t = 1976)]
        seed: u64,
        /// Crater radius range MIN,MAX in pixels
        #[arg(long, value_parser = parse_range, default_value = "4,16")]
        crater_radius: (f64, f64),
        /// Crater depth range MIN,MAX in elevation units
        #[arg(long, value_parser = parse_range, default_value = "10,40")]
        crater_depth: (f64, f64),
        input: PathBuf,
        output: PathBuf,
    },
    /// Hillshade and reveal under a series of light azimuths
    Sweep {
        /// START:STOP:STEP in degrees, STOP exclusive
        #[arg(long, value_parser = parse_azimuths, default_value = "0:360:30")]
        azimuths: AzimuthList,
        #[arg(long, default_value_t = 35.0)]
        elevation: f64,
        /// Reveal blur radius in pixels
        #[arg(long, default_value_t = 150)]
        blur: usize,
        /// Reveal edge opacity
        #[arg(long, default_value_t = 0.09)]
        opacity: f64,
        /// Measure a feature margin at X,Y with disk radius RIN and ring
        /// radius ROUT (repeatable)
        #[arg(long, value_parser = parse_feature, value_name = "X,Y,RIN,ROUT")]
        feature: Vec<FeatureProbe>,
        /// Write feature margins here
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        input: PathBuf,
        /// Directory receiving sweep_az<azimuth>.pgm files
        outdir: PathBuf,
    },
    /// Best mirror-symmetry axis of an image
    Symmetry {
        /// Angle grid step in degrees
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        input: PathBuf,
    },
    /// Sharp and blurred correlation of original and eroded shadings
    Persist {
        #[arg(long, default_value_t = 150)]
        blur: usize,
        #[arg(long, default_value_t = 315.0)]
        azimuth: f64,
        #[arg(long, default_value_t = 35.0)]
        elevation: f64,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        original: PathBuf,
        eroded: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq)]
struct AzimuthList(Vec<f64>);

#[derive(Debug, Clone, Copy, PartialEq)]
struct FeatureProbe {
    center: (f64, f64),
    r_inner: f64,
    r_outer: f64,
}

fn parse_reals(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != n {
        return Err(format!("expected {n} comma-separated numbers, got '{s}'"));
    }
    parts
        .iter()
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("'{p}' is not a finite number"))
        })
        .collect()
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let v = parse_reals(s, 2)?;
    Ok((v[0], v[1]))
}

fn parse_feature(s: &str) -> Result<FeatureProbe, String> {
    let v = parse_reals(s, 4)?;
    Ok(FeatureProbe {
        center: (v[0], v[1]),
        r_inner: v[2],
        r_outer: v[3],
    })
}

fn parse_azimuths(s: &str) -> Result<AzimuthList, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected START:STOP:STEP, got '{s}'"));
    }
    let mut v = [0.0; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| format!("'{p}' is not a finite number"))?;
    }
    let [start, stop, step] = v;
    if step <= 0.0 {
        return Err(format!("step {step} must be positive"));
    }
    let list: Vec<f64> = (0..)
        .map(|k| start + k as f64 * step)
        .take_while(|&a| a < stop)
        .collect();
    if list.is_empty() {
        return Err(format!("'{s}' selects no azimuths"));
    }
    if list.iter().any(|a| !(0.0..360.0).contains(a)) {
        return Err(format!("azimuths in '{s}' must lie in [0, 360)"));
    }
    Ok(AzimuthList(list))
}

/// Zero-padded label that sorts lexically in numeric order for values
/// below 1000.
fn padded(value: f64) -> String {
    if value.fract() == 0.0 {
        format!("{:03}", value as u64)
    } else {
        let whole = value.trunc() as u64;
        let frac = format!("{}", value.fract());
        format!("{whole:03}{}", frac.trim_start_matches('0'))
    }
}

/// A failure with the class that picks the exit status.
#[derive(Debug)]
struct Failure {
    class: ErrorClass,
    message: String,
}

impl Failure {
    fn at(path: &Path, err: Error) -> Self {
        Self {
            class: err.class(),
            message: format!("{}: {err}", path.display()),
        }
    }

    fn io(path: &Path, err: std::io::Error) -> Self {
        Self {
            class: ErrorClass::Io,
            message: format!("{}: {err}", path.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Self {
            class: err.class(),
            message: err.to_string(),
        }
    }
}

fn exit_code(class: ErrorClass) -> u8 {
    match class {
        ErrorClass::Validation => 1,
        ErrorClass::Io => 2,
        ErrorClass::Numeric => 3,
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn load(path: &Path) -> CliResult<Raster> {
    read_pgm_file(path).map_err(|e| Failure::at(path, e))
}

fn load_hmap(path: &Path) -> CliResult<Heightmap> {
    read_hmap_file(path).map_err(|e| Failure::at(path, e))
}

fn save(path: &Path, img: &Raster, bits: Bits) -> CliResult {
    write_pgm_file(path, img, bits.maxval()).map_err(|e| Failure::at(path, e))
}

fn make_dir(dir: &Path) -> CliResult {
    fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))
}

fn write_text(path: &Path, text: &str) -> CliResult {
    fs::write(path, text).map_err(|e| Failure::io(path, e))
}

fn render(report: &MetricsReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Text => report.to_text(),
        ReportFormat::Csv => report.to_table(),
    }
}

fn face_manifest(
    seed: u64,
    eye_depth: f64,
    peak_height: f64,
    ridge_axis: f64,
    noise_amplitude: f64,
    cell_size: f64,
) -> FaceManifest {
    let mut m = FaceManifest::builtin();
    m.terrain.seed = seed;
    m.eyes.depth = eye_depth;
    m.terrain.peak_height = peak_height;
    m.terrain.ridge_axis_deg = ridge_axis;
    m.terrain.noise_amplitude = noise_amplitude;
    m.terrain.cell_size = cell_size;
    m
}

fn execute(cli: Cli) -> CliResult {
    let bits = cli.bits;
    match cli.command {
        Command::Blur { radius, io } => {
            save(&io.output, &gaussian_blur(&load(&io.input)?, radius), bits)
        }
        Command::Ladder {
            radii,
            input,
            outdir,
        } => {
            let ladder = blur_ladder(&load(&input)?, &radii)?;
            make_dir(&outdir)?;
            for (r, img) in &ladder.rungs {
                save(
                    &outdir.join(format!("blur_r{}.pgm", padded(*r as f64))),
                    img,
                    bits,
                )?;
            }
            save(&outdir.join("contact_sheet.pgm"), &ladder.sheet, bits)
        }
        Command::Edges { io } => save(&io.output, &sobel_magnitude(&load(&io.input)?)?, bits),
        Command::Invert { io } => save(&io.output, &invert(&load(&io.input)?), bits),
        Command::Levels {
            black,
            white,
            gamma,
            io,
        } => {
            let p = LevelsParams::new(black, white, gamma)?;
            save(&io.output, &levels(&load(&io.input)?, p), bits)
        }
        Command::Autocontrast {
            clip_low,
            clip_high,
            io,
        } => save(
            &io.output,
            &autocontrast(&load(&io.input)?, clip_low, clip_high)?,
            bits,
        ),
        Command::Unsharp { radius, amount, io } => save(
            &io.output,
            &unsharp_mask(&load(&io.input)?, radius, amount)?,
            bits,
        ),
        Command::Composite {
            mode: BlendMode::Overlay,
            opacity,
            base,
            top,
            output,
        } => {
            let out = overlay_blend(&load(&base)?, &load(&top)?, opacity)?;
            save(&output, &out, bits)
        }
        Command::Reveal {
            blur,
            edge_gamma,
            opacity,
            clip_low,
            clip_high,
            dump_intermediates,
            io,
        } => {
            let params = RevealParams {
                blur_radius_px: blur,
                edge_opacity: opacity,
                contrast_clip_pcts: (clip_low, clip_high),
                edge_gamma,
            };
            let out = reveal(&load(&io.input)?, &params)?;
            if let Some(dir) = dump_intermediates {
                make_dir(&dir)?;
                for (label, img) in out.intermediates() {
                    save(&dir.join(format!("{label}.pgm")), img, bits)?;
                }
            }
            save(&io.output, &out.output, bits)
        }
        Command::Run {
            script,
            io,
            dump_intermediates,
        } => {
            let text = fs::read_to_string(&script).map_err(|e| Failure::io(&script, e))?;
            let spec = parse_pipeline_script(&text).map_err(|e| Failure::at(&script, e))?;
            let out = run_pipeline(&load(&io.input)?, &spec)?;
            if let Some(dir) = dump_intermediates {
                make_dir(&dir)?;
                for (label, img) in &out.intermediates {
                    save(&dir.join(format!("{label}.pgm")), img, bits)?;
                }
            }
            save(&io.output, &out.output, bits)
        }
        Command::SynthFace {
            width,
            height,
            seed,
            eye_depth,
            peak_height,
            ridge_axis,
            noise_amplitude,
            cell_size,
            output,
        } => {
            let m = face_manifest(
                seed,
                eye_depth,
                peak_height,
                ridge_axis,
                noise_amplitude,
                cell_size,
            );
            let mut layout = m.layout();
            layout.width = width;
            layout.height = height;
            let h = m.heightmap(&layout)?;
            write_hmap_file(&output, &h).map_err(|e| Failure::at(&output, e))
        }
        Command::Hillshade {
            azimuth,
            elevation,
            input,
            output,
        } => {
            let light = LightSpec::new(azimuth, elevation)?;
            save(&output, &hillshade(&load_hmap(&input)?, &light)?, bits)
        }
        Command::Erode {
            steps,
            rate,
            craters,
            seed,
            crater_radius,
            crater_depth,
            input,
            output,
        } => {
            let params = ErosionParams {
                diffusion_steps: steps,
                diffusion_rate: rate,
                crater_count: craters,
                crater_radius_px: crater_radius,
                crater_depth,
                seed,
            };
            let eroded = erode(&load_hmap(&input)?, &params)?;
            write_hmap_file(&output, &eroded).map_err(|e| Failure::at(&output, e))
        }
        Command::Sweep {
            azimuths,
            elevation,
            blur,
            opacity,
            feature,
            report,
            format,
            input,
            outdir,
        } => {
            let params = RevealParams {
                blur_radius_px: blur,
                edge_opacity: opacity,
                ..Default::default()
            };
            let h = load_hmap(&input)?;
            let frames = illumination_sweep(&h, &azimuths.0, elevation, &params)?;
            make_dir(&outdir)?;
            let mut metrics = MetricsReport::default();
            for (az, img) in &frames {
                let tag = padded(*az);
                save(&outdir.join(format!("sweep_az{tag}.pgm")), img, bits)?;
                for (i, f) in feature.iter().enumerate() {
                    metrics.feature_margins.push(FeatureMargin {
                        id: format!("az{tag}.f{i}"),
                        margin: feature_margin(img, f.center, f.r_inner, f.r_outer)?,
                    });
                }
            }
            let text = render(&metrics, format);
            match report {
                Some(path) => write_text(&path, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        Command::Symmetry { step, input } => {
            let axis = best_symmetry_axis(&load(&input)?, step)?;
            let metrics = MetricsReport {
                symmetry: Some(axis),
                ..Default::default()
            };
            print!("{}", metrics.to_text());
            Ok(())
        }
        Command::Persist {
            blur,
            azimuth,
            elevation,
            report,
            format,
            original,
            eroded,
        } => {
            let light = LightSpec::new(azimuth, elevation)?;
            let metrics =
                persistence_report(&load_hmap(&original)?, &load_hmap(&eroded)?, &light, blur)?;
            let text = render(&metrics, format);
            print!("{text}");
            match report {
                Some(path) => write_text(&path, &text),
                None => Ok(()),
            }
        }
    }
}

fn one_line(msg: impl Display) -> String {
    msg.to_string().replace('\n', " ")
}

fn run(args: impl IntoIterator<Item = OsString>) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let _ = e.print();
            return 1;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", one_line(&f.message));
            exit_code(f.class)
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}
