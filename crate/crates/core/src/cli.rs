//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for bad input or flags, 1 for internal
//! failures. Output files are written to a temporary file and renamed, so a
//! failing run never leaves a partial file.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::acoustics::{
    image_sources, normalize_series, path_distance_series, torus_winding_path, waveguide_recurrence_period,
    BoundaryCondition, Room2D,
};
use crate::complex::parse_cplx;
use crate::dynamics::{oscillate, Phase, PhaseFunctionSpec, ProjectionSpec};
use crate::embedding::{degeneracy_score, delay_embed, parse_time_series_csv, time_series_to_csv};
use crate::formats::{encode_wav, fmt_f64, write_atomic};
use crate::homology::{betti_all, homology_group, DemoComplex};
use crate::persistence::{
    barcode_to_csv, figure_eight, noisy_circle, parse_point_cloud_csv, persistence_pairs, point_cloud_to_csv,
    vietoris_rips, PointCloud,
};
use crate::sheaf_filter::parse_filter_config;

/// Seed used by the point-cloud demos when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 7;

/// Degeneracy scores below this are reported as a collapsed embedding.
pub const DEGENERACY_THRESHOLD: f64 = 1e-6;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input. Exit code 2.
    Input(String),
    /// Anything else. Exit code 1.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Input(_) => 2,
            Self::Internal(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Input(m) | Self::Internal(m) => m,
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "topodsp", version, about = "Computational topology for signal processing and sound synthesis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Betti numbers of a complex (.cplx: one simplex per line, space-separated
    /// vertex labels, '#' comments; faces are added automatically).
    Homology(HomologyArgs),
    /// Vietoris-Rips barcode of a point cloud. The scale is the pairwise
    /// distance: an edge enters when its endpoints are at most `scale` apart.
    Persist(PersistArgs),
    /// Time-delay embedding of a series, with a degeneracy score. Scores below
    /// 1e-6 mean the cloud has collapsed onto a lower-dimensional set.
    Embed(EmbedArgs),
    /// Renders a topological filter (--config) or a circle-map oscillator (--osc).
    Synth(SynthArgs),
    /// Recurrence period of a two-rail waveguide, as `L,left,right,period` rows.
    Waveguide(WaveguideArgs),
    /// Image sources of a rectangular room, as `x,y,order,distance` rows.
    Imagesource(ImageSourceArgs),
    /// Chord-length series of a (p, q) winding path on a torus, as `k,distance` rows.
    Toruspath(TorusPathArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CloudDemo {
    NoisyCircle,
    FigureEight,
}

#[derive(Args, Debug)]
struct HomologyArgs {
    /// Complex file.
    #[arg(required_unless_present = "demo", conflicts_with = "demo")]
    input: Option<PathBuf>,
    /// Built-in complex: triangle, triangle-filled, tetra, tetra-hollow, torus, sphere.
    #[arg(long)]
    demo: Option<DemoComplex>,
    /// Highest dimension to report.
    #[arg(long)]
    max_dim: Option<usize>,
}

#[derive(Args, Debug)]
struct PersistArgs {
    /// Point-cloud CSV, one point per row.
    #[arg(required_unless_present = "demo", conflicts_with = "demo")]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    demo: Option<CloudDemo>,
    /// Points on the circle (default 100), or per loop of the figure eight (default 60).
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Largest radial and tangential jitter.
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Simplices up to this dimension are built; bars are reported below it.
    #[arg(long, default_value_t = 2)]
    max_dim: usize,
    /// Largest pairwise distance included in the filtration.
    #[arg(long, default_value_t = 2.0)]
    max_scale: f64,
    /// Worker threads for distance computation. Output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Barcode file (.bars). Without it the barcode goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EmbedArgs {
    /// Series CSV: one value per row, or `index,value` rows.
    input: PathBuf,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Delay in samples.
    #[arg(long)]
    delay: usize,
    /// Point-cloud CSV for the embedded points.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Projection {
    Sine,
    Saw,
    Fold,
}

#[derive(Args, Debug)]
struct SynthArgs {
    /// Filter config (.filt, key=value lines):
    /// kind=lti with a=a1,..,aN b=b0,..,bN, or kind=fm with omega, index,
    /// mod_omega and optional phase; optional state=... in both cases.
    #[arg(long, required_unless_present = "osc", conflicts_with = "osc")]
    config: Option<PathBuf>,
    /// Plain circle-map oscillator instead of a filter.
    #[arg(long)]
    osc: bool,
    /// Oscillator increment per sample, in turns.
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    omega: f64,
    /// Oscillator start phase in [0, 1).
    #[arg(long, default_value_t = 0.0)]
    x0: f64,
    #[arg(long, value_enum, default_value_t = Projection::Sine)]
    projection: Projection,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    amplitude: f64,
    /// Phase offset of the sine projection, in radians.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    phase: f64,
    /// Filter input series; zero-padded or truncated to `--count`.
    #[arg(long, conflicts_with = "osc")]
    input: Option<PathBuf>,
    /// Number of samples. Defaults to the input length.
    #[arg(long)]
    count: Option<usize>,
    /// Sample rate written to WAV files.
    #[arg(long, default_value_t = 48_000)]
    rate: u32,
    /// Output file; `.wav` gives 16-bit mono PCM, anything else CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write WAV samples as they are (clipped) instead of scaling the peak to 0.9.
    #[arg(long)]
    no_normalize: bool,
}

#[derive(Args, Debug)]
struct WaveguideArgs {
    /// Cells per rail.
    #[arg(long, default_value_t = 8)]
    length: usize,
    /// Sweep lengths from `--length` up to this value.
    #[arg(long)]
    max_length: Option<usize>,
    /// Left end; with `--right` omitted too, all three end combinations are listed.
    #[arg(long)]
    left: Option<BoundaryCondition>,
    #[arg(long)]
    right: Option<BoundaryCondition>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ImageSourceArgs {
    #[arg(long, default_value_t = 1.0)]
    width: f64,
    #[arg(long, default_value_t = 1.0)]
    height: f64,
    /// Source position `x,y`.
    #[arg(long, value_parser = parse_pair, default_value = "0.5,0.5")]
    source: (f64, f64),
    /// Listener position `x,y`.
    #[arg(long, value_parser = parse_pair, default_value = "0.5,0.5")]
    listener: (f64, f64),
    /// Largest number of wall reflections.
    #[arg(long, default_value_t = 1)]
    order: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TorusPathArgs {
    /// Windings around the major circle.
    #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
    p: i64,
    /// Windings around the minor circle.
    #[arg(long, default_value_t = 3, allow_negative_numbers = true)]
    q: i64,
    #[arg(long, default_value_t = 120)]
    samples: usize,
    #[arg(long, default_value_t = 2.0)]
    major: f64,
    #[arg(long, default_value_t = 1.0)]
    minor: f64,
    /// Zero mean and unit peak, ready to drive a filter input.
    #[arg(long)]
    normalize: bool,
    /// Accept winding numbers with a common factor.
    #[arg(long)]
    allow_non_simple: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [a, b] => {
            let x = a.trim().parse::<f64>().map_err(|e| e.to_string())?;
            let y = b.trim().parse::<f64>().map_err(|e| e.to_string())?;
            Ok((x, y))
        }
        _ => Err(format!("expected x,y but got '{s}'")),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(p) => write_atomic(p, bytes).map_err(|e| CliError::Internal(format!("{}: {e}", p.display()))),
        None => stdout.write_all(bytes).map_err(|e| CliError::Internal(e.to_string())),
    }
}

fn with_file(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

/// Parses `args` (program name first) and runs the command. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
                2
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
                0
            };
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Homology(a) => homology(a, stdout),
        Command::Persist(a) => persist(a, stdout),
        Command::Embed(a) => embed(a, stdout),
        Command::Synth(a) => synth(a, stdout),
        Command::Waveguide(a) => waveguide(a, stdout),
        Command::Imagesource(a) => imagesource(a, stdout),
        Command::Toruspath(a) => toruspath(a, stdout),
    }
}

fn homology(a: HomologyArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let complex = match (a.demo, &a.input) {
        (Some(d), _) => d.build(),
        (None, Some(p)) => parse_cplx(&read_text(p)?).map_err(|e| with_file(p, e))?,
        (None, None) => return Err(CliError::Input("give a complex file or --demo".into())),
    };
    let betti = betti_all(&complex);
    let top = a.max_dim.map_or(betti.as_slice().len(), |m| (m + 1).min(betti.as_slice().len()));
    let mut text = String::from("n,betti\n");
    for (n, b) in betti.as_slice()[..top].iter().enumerate() {
        text.push_str(&format!("{n},{b}\n"));
    }
    for n in 0..top {
        text.push_str(&format!("{}\n", homology_group(&complex, n)));
    }
    emit(None, text.as_bytes(), stdout)
}

fn persist(a: PersistArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    if !(a.max_scale > 0.0) {
        return Err(CliError::Input("--max-scale must be positive".into()));
    }
    if a.threads == Some(0) {
        return Err(CliError::Input("--threads must be at least 1".into()));
    }
    let cloud: PointCloud = match (a.demo, &a.input) {
        (Some(CloudDemo::NoisyCircle), _) => {
            noisy_circle(a.points.unwrap_or(100), a.radius, a.noise, a.seed).map_err(input_err)?
        }
        (Some(CloudDemo::FigureEight), _) => {
            figure_eight(a.points.unwrap_or(60), a.radius, a.noise, a.seed).map_err(input_err)?
        }
        (None, Some(p)) => parse_point_cloud_csv(&read_text(p)?).map_err(|e| with_file(p, e))?,
        (None, None) => return Err(CliError::Input("give a point-cloud file or --demo".into())),
    };
    let compute = || -> Result<_, CliError> {
        let f = vietoris_rips(&cloud, a.max_dim, a.max_scale).map_err(input_err)?;
        persistence_pairs(&f).map_err(|e| CliError::Internal(e.to_string()))
    };
    let barcode = match a.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| CliError::Internal(e.to_string()))?
            .install(compute)?,
        None => compute()?,
    };
    let csv = barcode_to_csv(&barcode);
    match &a.out {
        Some(p) => {
            emit(Some(p), csv.as_bytes(), stdout)?;
            let mut counts = String::from("dim,bars\n");
            for n in 0..a.max_dim.max(1) {
                counts.push_str(&format!("{n},{}\n", barcode.count(n)));
            }
            emit(None, counts.as_bytes(), stdout)
        }
        None => emit(None, csv.as_bytes(), stdout),
    }
}

fn embed(a: EmbedArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let ts = parse_time_series_csv(&read_text(&a.input)?).map_err(|e| with_file(&a.input, e))?;
    let cloud = delay_embed(&ts, a.dim, a.delay).map_err(input_err)?;
    let score = degeneracy_score(&cloud).map_err(input_err)?;
    if let Some(p) = &a.out {
        emit(Some(p), point_cloud_to_csv(&cloud).as_bytes(), stdout)?;
    }
    let report = format!(
        "points,{}\ndegeneracy,{}\ndegenerate,{}\n",
        cloud.len(),
        fmt_f64(score),
        score < DEGENERACY_THRESHOLD
    );
    emit(None, report.as_bytes(), stdout)
}

fn synth(a: SynthArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    if a.rate == 0 {
        return Err(CliError::Input("--rate must be positive".into()));
    }
    let samples = if a.osc {
        let count = a.count.ok_or_else(|| CliError::Input("--osc needs --count".into()))?;
        if !a.omega.is_finite() {
            return Err(CliError::Input("--omega must be finite".into()));
        }
        let x0 = Phase::new(a.x0).map_err(input_err)?;
        let projection = match a.projection {
            Projection::Sine => ProjectionSpec::Sine { amplitude: a.amplitude, phase_offset: a.phase },
            Projection::Saw => ProjectionSpec::Sawtooth,
            Projection::Fold => ProjectionSpec::Fold,
        };
        oscillate(&PhaseFunctionSpec::constant(a.omega), &projection, x0, count).map_err(input_err)?.into_samples()
    } else {
        let path = a.config.as_ref().expect("clap requires --config without --osc");
        let config = parse_filter_config(&read_text(path)?).map_err(|e| with_file(path, e))?;
        let mut input = match &a.input {
            Some(p) => parse_time_series_csv(&read_text(p)?).map_err(|e| with_file(p, e))?.into_samples(),
            None => Vec::new(),
        };
        let count = match a.count {
            Some(c) => c,
            None if !input.is_empty() => input.len(),
            None => return Err(CliError::Input("give --count or a non-empty --input".into())),
        };
        input.resize(count, 0.0);
        if count == 0 {
            return Err(CliError::Input("--count must be at least 1".into()));
        }
        config.filter.process(&input, &config.initial_state).map_err(input_err)?
    };
    if samples.is_empty() {
        return Err(CliError::Input("--count must be at least 1".into()));
    }
    let is_wav = a
        .out
        .as_deref()
        .and_then(Path::extension)
        .is_some_and(|e| e.eq_ignore_ascii_case("wav"));
    let bytes = if is_wav {
        encode_wav(&samples, a.rate, !a.no_normalize).map_err(|e| CliError::Internal(e.to_string()))?
    } else {
        time_series_to_csv(&samples).into_bytes()
    };
    emit(a.out.as_deref(), &bytes, stdout)
}

fn waveguide(a: WaveguideArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    use BoundaryCondition::{Dirichlet, Neumann};
    let last = a.max_length.unwrap_or(a.length);
    if a.length < 2 || last < a.length {
        return Err(CliError::Input("need 2 <= --length <= --max-length".into()));
    }
    let cases = match (a.left, a.right) {
        (None, None) => vec![(Dirichlet, Dirichlet), (Neumann, Neumann), (Dirichlet, Neumann)],
        (l, r) => vec![(l.unwrap_or(Dirichlet), r.unwrap_or(Dirichlet))],
    };
    let mut text = String::from("L,left,right,period\n");
    for len in a.length..=last {
        for &(l, r) in &cases {
            let period = waveguide_recurrence_period(len, l, r).map_err(input_err)?;
            text.push_str(&format!("{len},{l},{r},{period}\n"));
        }
    }
    emit(a.out.as_deref(), text.as_bytes(), stdout)
}

fn imagesource(a: ImageSourceArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let room = Room2D::new(a.width, a.height, a.source, a.listener).map_err(input_err)?;
    let mut text = String::from("x,y,order,distance\n");
    for im in image_sources(&room, a.order) {
        text.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(im.position.0),
            fmt_f64(im.position.1),
            im.order,
            fmt_f64(im.distance)
        ));
    }
    emit(a.out.as_deref(), text.as_bytes(), stdout)
}

fn toruspath(a: TorusPathArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let path = torus_winding_path(a.p, a.q, a.samples, a.major, a.minor, !a.allow_non_simple).map_err(input_err)?;
    let mut series = path_distance_series(&path);
    if a.normalize {
        series = normalize_series(&series);
    }
    let mut text = String::from("k,distance\n");
    for (k, d) in series.samples().iter().enumerate() {
        text.push_str(&format!("{k},{}\n", fmt_f64(*d)));
    }
    emit(a.out.as_deref(), text.as_bytes(), stdout)
}
