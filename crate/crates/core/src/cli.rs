//! The `romkit` command line.
//!
//! Data goes to stdout, diagnostics to stderr. Exit codes: 0 success,
//! 1 I/O failure, 2 usage, 3 parse, 4 validation, 5 degenerate geometry.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::analysis::{
    aggregate, angle_series, compare_profiles, resample_cycle, rom_summary, segment_cycles, smooth, AnalysisError,
    AngleSeries, Channel, Comparison, CycleProfile, Segmentation, DEFAULT_PROMINENCE, DEFAULT_SAMPLES, DEFAULT_WINDOW,
    LABEL_CONTROL, LABEL_ORTHOSIS, LABEL_PATIENT,
};
use crate::geometry::FlexJoint;
use crate::io::{
    load_manifest, parse_sequence, read_angles, read_landmarks, read_profiles, write_angles, write_comparison_summary,
    write_cycles, write_profiles, write_rom, write_sequence, DatasetManifest, ManifestError, Movement,
};
use crate::skeleton::{validate, Finger, Handedness, DEFAULT_FRAME_RATE};
use crate::synth::{generate_synthetic, Drive, SynthParams};

/// Error classes, each with its own exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorClass {
    Io,
    Usage,
    Parse,
    Validation,
    DegenerateGeometry,
}

impl ErrorClass {
    pub const ALL: [ErrorClass; 5] =
        [ErrorClass::Io, ErrorClass::Usage, ErrorClass::Parse, ErrorClass::Validation, ErrorClass::DegenerateGeometry];

    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Io => 1,
            ErrorClass::Usage => 2,
            ErrorClass::Parse => 3,
            ErrorClass::Validation => 4,
            ErrorClass::DegenerateGeometry => 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub class: ErrorClass,
    pub message: String,
    /// The reader of stdout went away (e.g. `romkit angles x | head`).
    closed_output: bool,
}

impl CliError {
    fn new(class: ErrorClass, message: impl Into<String>) -> Self {
        Self { class, message: message.into(), closed_output: false }
    }

    fn usage(message: impl Into<String>) -> Self {
        Self::new(ErrorClass::Usage, message)
    }

    fn io(e: std::io::Error) -> Self {
        let closed_output = e.kind() == std::io::ErrorKind::BrokenPipe;
        Self { closed_output, ..Self::new(ErrorClass::Io, e.to_string()) }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::io(e)
    }
}

impl From<ManifestError> for CliError {
    fn from(e: ManifestError) -> Self {
        let class = if e.is_syntax() { ErrorClass::Parse } else { ErrorClass::Validation };
        CliError::new(class, e.to_string())
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        let class = match e {
            AnalysisError::AllAbsent(_) | AnalysisError::TooShortCycle { .. } => ErrorClass::DegenerateGeometry,
            AnalysisError::InvalidLandmark { .. }
            | AnalysisError::CycleOutOfRange { .. }
            | AnalysisError::NoCycles
            | AnalysisError::MismatchedLength { .. }
            | AnalysisError::MismatchedProfile { .. } => ErrorClass::Validation,
            AnalysisError::InvalidWindow { .. }
            | AnalysisError::InvalidProminence(_)
            | AnalysisError::InvalidSampleCount(_) => ErrorClass::Usage,
        };
        CliError::new(class, e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "romkit", version, about = "Hand range-of-motion analysis from 21-joint skeleton sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-frame flexion and abduction angles.
    Angles(AnglesArgs),
    /// Split a recording into movement cycles.
    Segment(SegmentArgs),
    /// Minimum, maximum and range per angle channel.
    Rom(RomArgs),
    /// Mean/std cycle profiles for one group of a dataset.
    Aggregate(AggregateArgs),
    /// Control vs patient vs patient-with-orthosis profiles.
    Compare(CompareArgs),
    /// Write a synthetic sequence.
    Synth(SynthArgs),
    /// Check a sequence file or a dataset manifest.
    Validate(ValidateArgs),
}

#[derive(Args, Debug)]
struct AnglesArgs {
    /// Sequence file.
    input: PathBuf,
    /// Median smoothing window in frames (odd; 1 disables).
    #[arg(long, default_value_t = 1)]
    smooth_window: usize,
    /// Only report this finger (1-5 or I-V).
    #[arg(long)]
    finger: Option<Finger>,
}

#[derive(Args, Debug)]
struct SegmentArgs {
    /// Sequence file or angle table.
    input: PathBuf,
    /// Channel to segment on, e.g. flex_pip_IV.
    #[arg(long, default_value_t = Channel::default_segmentation())]
    channel: Channel,
    /// Minimum extremum prominence, degrees.
    #[arg(long, default_value_t = DEFAULT_PROMINENCE)]
    prominence: f64,
    /// File of `start,end` frame pairs; disables automatic detection.
    #[arg(long)]
    landmarks: Option<PathBuf>,
    /// Median smoothing window before detection [default: 5, capped to the series length].
    #[arg(long)]
    smooth_window: Option<usize>,
    /// Frame rate for angle-table input.
    #[arg(long, default_value_t = DEFAULT_FRAME_RATE)]
    frame_rate: f64,
}

#[derive(Args, Debug)]
struct RomArgs {
    /// Sequence file or angle table.
    input: PathBuf,
    /// Median smoothing window in frames (odd; 1 disables).
    #[arg(long, default_value_t = 1)]
    smooth_window: usize,
}

#[derive(Args, Debug, Clone)]
struct ProfileOpts {
    /// Movement type to include.
    #[arg(long, default_value_t = Movement::Flexion)]
    movement: Movement,
    /// Channel used to find cycles [default: PIP flexion of --finger, else flex_pip_IV].
    #[arg(long)]
    channel: Option<Channel>,
    /// Minimum extremum prominence, degrees.
    #[arg(long, default_value_t = DEFAULT_PROMINENCE)]
    prominence: f64,
    /// Median smoothing window before segmentation.
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    smooth_window: usize,
    /// Samples per normalized cycle.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Only output channels of this finger.
    #[arg(long)]
    finger: Option<Finger>,
}

impl ProfileOpts {
    fn segmentation_channel(&self) -> Channel {
        match (self.channel, self.finger) {
            (Some(ch), _) => ch,
            (None, Some(f)) => Channel::Flexion(f, FlexJoint::Pip),
            (None, None) => Channel::default_segmentation(),
        }
    }
}

#[derive(Args, Debug)]
struct AggregateArgs {
    /// Dataset manifest (TOML).
    manifest: PathBuf,
    /// control, patient or patient_orthosis.
    #[arg(long)]
    group: String,
    #[command(flatten)]
    opts: ProfileOpts,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// A dataset manifest (.toml), or profile tables written by `aggregate`.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Print scalar summaries instead of the long-format curves.
    #[arg(long)]
    summary: bool,
    #[command(flatten)]
    opts: ProfileOpts,
}

#[derive(Args, Debug)]
struct SynthArgs {
    /// Number of movement cycles.
    #[arg(long, default_value_t = 3)]
    cycles: usize,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 60)]
    frames_per_cycle: usize,
    #[arg(long, default_value_t = DEFAULT_FRAME_RATE)]
    frame_rate: f64,
    /// Noise level, degrees of induced ring PIP jitter.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Multiplier on the default flexion amplitudes.
    #[arg(long, default_value_t = 1.0)]
    amplitude_scale: f64,
    #[arg(long, default_value_t = 0.0)]
    abduction_offset: f64,
    #[arg(long, default_value_t = 0.0)]
    abduction_amplitude: f64,
    #[arg(long, default_value_t = Handedness::Right)]
    hand: Handedness,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// Sequence file, or a manifest ending in .toml.
    input: PathBuf,
}

/// Runs the CLI with explicit streams; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                ErrorClass::Usage.exit_code()
            } else {
                let _ = write!(out, "{e}");
                0
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        // like other filters, stop quietly when the downstream reader is gone
        Err(e) if e.closed_output => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.class.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Angles(a) => cmd_angles(a, out).map(|_| 0),
        Command::Segment(a) => cmd_segment(a, out).map(|_| 0),
        Command::Rom(a) => cmd_rom(a, out).map(|_| 0),
        Command::Aggregate(a) => cmd_aggregate(a, out).map(|_| 0),
        Command::Compare(a) => cmd_compare(a, out, err).map(|_| 0),
        Command::Synth(a) => cmd_synth(a, out).map(|_| 0),
        Command::Validate(a) => cmd_validate(a, out),
    }
}

fn thread_pool() -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("ROMKIT_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| CliError::usage(format!("ROMKIT_THREADS must be a positive integer, got '{v}'")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::new(ErrorClass::Io, e.to_string()))
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| CliError::usage(format!("cannot open {}: {e}", path.display())))
}

fn load_sequence_series(path: &Path) -> CliResult<AngleSeries> {
    let seq = parse_sequence(open(path)?)
        .map_err(|e| CliError::new(ErrorClass::Parse, format!("{}: {e}", path.display())))?;
    let report = validate(&seq);
    if report.has_fatal() {
        let lines: Vec<String> = report.findings.iter().filter(|f| f.is_fatal()).map(|f| f.to_string()).collect();
        return Err(CliError::new(ErrorClass::Validation, format!("{}: {}", path.display(), lines.join("; "))));
    }
    Ok(angle_series(path.display().to_string(), &seq))
}

/// Loads either a sequence file (starts with `#`) or an angle table.
fn load_series(path: &Path, table_frame_rate: f64) -> CliResult<AngleSeries> {
    let mut reader = open(path)?;
    let first = {
        let buf = reader.fill_buf()?;
        buf.iter().copied().find(|b| !b.is_ascii_whitespace())
    };
    if first == Some(b'#') || first.is_none() {
        return load_sequence_series(path);
    }
    read_angles(reader, &path.display().to_string(), table_frame_rate)
        .map_err(|e| CliError::new(ErrorClass::Parse, format!("{}: {e}", path.display())))
}

fn smoothed(series: AngleSeries, window: usize) -> CliResult<AngleSeries> {
    if window == 1 {
        return Ok(series);
    }
    Ok(smooth(&series, window)?)
}

fn channels_for(finger: Option<Finger>) -> Vec<Channel> {
    match finger {
        Some(f) => Channel::of_finger(f).to_vec(),
        None => Channel::all().collect(),
    }
}

fn cmd_angles(a: AnglesArgs, out: &mut dyn Write) -> CliResult<()> {
    let series = smoothed(load_sequence_series(&a.input)?, a.smooth_window)?;
    write_angles(&series, &channels_for(a.finger), out)?;
    Ok(())
}

fn cmd_segment(a: SegmentArgs, out: &mut dyn Write) -> CliResult<()> {
    let series = load_series(&a.input, a.frame_rate)?;
    let window = match a.smooth_window {
        Some(w) => w,
        None => {
            let cap = if series.len() % 2 == 1 { series.len() } else { series.len().saturating_sub(1) };
            DEFAULT_WINDOW.min(cap.max(1))
        }
    };
    let series = smoothed(series, window)?;
    let how = match &a.landmarks {
        Some(path) => Segmentation::Landmarks(
            read_landmarks(open(path)?)
                .map_err(|e| CliError::new(ErrorClass::Parse, format!("{}: {e}", path.display())))?,
        ),
        None => Segmentation::Auto { prominence: a.prominence },
    };
    let cycles = segment_cycles(&series, a.channel, &how)?;
    write_cycles(&cycles, out)?;
    Ok(())
}

fn cmd_rom(a: RomArgs, out: &mut dyn Write) -> CliResult<()> {
    let series = smoothed(load_series(&a.input, DEFAULT_FRAME_RATE)?, a.smooth_window)?;
    write_rom(&rom_summary(&series), out)?;
    Ok(())
}

fn check_label(label: &str) -> CliResult<()> {
    if [LABEL_CONTROL, LABEL_PATIENT, LABEL_ORTHOSIS].contains(&label) {
        Ok(())
    } else {
        Err(CliError::usage(format!(
            "unknown group '{label}' (expected {LABEL_CONTROL}, {LABEL_PATIENT} or {LABEL_ORTHOSIS})"
        )))
    }
}

fn read_manifest(path: &Path) -> CliResult<DatasetManifest> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot open {}: {e}", path.display())))?;
    load_manifest(&text).map_err(|e| {
        let e = CliError::from(e);
        CliError::new(e.class, format!("{}: {}", path.display(), e.message))
    })
}

/// Resampled cycles of one recording, indexed by channel.
fn recording_cycles(path: &Path, frame_rate: f64, opts: &ProfileOpts) -> CliResult<Vec<Vec<Vec<f64>>>> {
    let mut series = load_sequence_series(path)?;
    series.frame_rate = frame_rate;
    let series = smoothed(series, opts.smooth_window)?;
    let cycles =
        segment_cycles(&series, opts.segmentation_channel(), &Segmentation::Auto { prominence: opts.prominence })?;
    Ok(Channel::all()
        .map(|ch| cycles.iter().filter_map(|c| resample_cycle(&series, ch, c, opts.samples).ok()).collect())
        .collect())
}

/// Profiles per channel for one group label, folding recordings in manifest order.
fn group_profiles(
    manifest: &DatasetManifest,
    base: &Path,
    label: &str,
    opts: &ProfileOpts,
) -> CliResult<Vec<CycleProfile>> {
    if opts.samples < 2 {
        return Err(AnalysisError::InvalidSampleCount(opts.samples).into());
    }
    let entries: Vec<_> = manifest.select(label, opts.movement).collect();
    let per_recording: Vec<Vec<Vec<Vec<f64>>>> = thread_pool()?.install(|| {
        entries
            .par_iter()
            .map(|e| recording_cycles(&DatasetManifest::resolve(base, e), e.frame_rate, opts))
            .collect::<CliResult<_>>()
    })?;
    let mut profiles = Vec::new();
    for ch in Channel::all() {
        let cycles: Vec<Vec<f64>> = per_recording.iter().flat_map(|r| r[ch.index()].iter().cloned()).collect();
        if !cycles.is_empty() {
            profiles.push(aggregate(ch, &cycles)?);
        }
    }
    Ok(profiles)
}

fn base_dir(manifest_path: &Path) -> PathBuf {
    manifest_path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn keep_finger(p: &CycleProfile, finger: Option<Finger>) -> bool {
    finger.is_none_or(|f| p.channel.finger() == f)
}

fn cmd_aggregate(a: AggregateArgs, out: &mut dyn Write) -> CliResult<()> {
    check_label(&a.group)?;
    let manifest = read_manifest(&a.manifest)?;
    if manifest.select(&a.group, a.opts.movement).next().is_none() {
        return Err(CliError::new(
            ErrorClass::Validation,
            format!("no {} sequences for group '{}'", a.opts.movement, a.group),
        ));
    }
    let profiles: Vec<(String, CycleProfile)> = group_profiles(&manifest, &base_dir(&a.manifest), &a.group, &a.opts)?
        .into_iter()
        .filter(|p| keep_finger(p, a.opts.finger))
        .map(|p| (a.group.clone(), p))
        .collect();
    write_profiles(&profiles, out)?;
    Ok(())
}

fn cmd_compare(a: CompareArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let is_manifest = a.inputs.len() == 1 && a.inputs[0].extension().is_some_and(|e| e == "toml");
    let mut labelled: Vec<(String, CycleProfile)> = Vec::new();
    if is_manifest {
        let manifest = read_manifest(&a.inputs[0])?;
        let base = base_dir(&a.inputs[0]);
        for label in [LABEL_CONTROL, LABEL_PATIENT, LABEL_ORTHOSIS] {
            for p in group_profiles(&manifest, &base, label, &a.opts)? {
                labelled.push((label.to_string(), p));
            }
        }
    } else {
        for path in &a.inputs {
            let profiles = read_profiles(open(path)?)
                .map_err(|e| CliError::new(ErrorClass::Parse, format!("{}: {e}", path.display())))?;
            labelled.extend(profiles);
        }
    }
    labelled.retain(|(_, p)| keep_finger(p, a.opts.finger));

    let mut comparisons: Vec<Comparison> = Vec::new();
    for ch in Channel::all() {
        let group: Vec<(String, CycleProfile)> = labelled.iter().filter(|(_, p)| p.channel == ch).cloned().collect();
        if !group.is_empty() {
            comparisons.push(compare_profiles(group)?);
        }
    }
    if comparisons.is_empty() {
        return Err(CliError::new(ErrorClass::Validation, "no profiles to compare"));
    }

    if a.summary {
        write_comparison_summary(&comparisons, &mut *out)?;
    } else {
        let ordered: Vec<(String, CycleProfile)> =
            comparisons.iter().flat_map(|c| c.profiles.iter().cloned()).collect();
        write_profiles(&ordered, &mut *out)?;
    }
    if let Some(c) = comparisons.iter().find(|c| c.channel == a.opts.segmentation_channel()) {
        if let Some(o) = &c.orthosis {
            writeln!(
                err,
                "{}: mean std without orthosis {:.3}, with orthosis {:.3} (lower at {:.0}% of samples)",
                c.channel,
                o.mean_std_without,
                o.mean_std_with,
                100.0 * o.fraction_samples_lower
            )?;
        }
    }
    Ok(())
}

fn cmd_synth(a: SynthArgs, out: &mut dyn Write) -> CliResult<()> {
    let defaults = SynthParams::default();
    let flexion = defaults.flexion.map(|d| Drive::new(d.offset, d.amplitude * a.amplitude_scale));
    let params = SynthParams {
        n_cycles: a.cycles,
        frames_per_cycle: a.frames_per_cycle,
        frame_rate: a.frame_rate,
        flexion,
        abduction: Drive::new(a.abduction_offset, a.abduction_amplitude),
        noise_sigma: a.noise,
        seed: a.seed,
        handedness: a.hand,
    };
    let seq = generate_synthetic(&params).map_err(|e| CliError::usage(e.to_string()))?;
    let io_err = |e: crate::io::SequenceWriteError| match e {
        crate::io::SequenceWriteError::Io(e) => CliError::io(e),
        other => CliError::new(ErrorClass::Io, other.to_string()),
    };
    match &a.out {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| CliError::usage(format!("cannot create {}: {e}", path.display())))?;
            write_sequence(&seq, std::io::BufWriter::new(file)).map_err(io_err)?;
        }
        None => write_sequence(&seq, out).map_err(io_err)?,
    }
    Ok(())
}

fn cmd_validate(a: ValidateArgs, out: &mut dyn Write) -> CliResult<i32> {
    if a.input.extension().is_some_and(|e| e == "toml") {
        let manifest = read_manifest(&a.input)?;
        let base = base_dir(&a.input);
        let mut worst = 0;
        for entry in &manifest.sequences {
            let path = DatasetManifest::resolve(&base, entry);
            let code = validate_sequence_file(&path, out)?;
            worst = worst.max(code);
        }
        let s = manifest.summary();
        writeln!(
            out,
            "manifest: {} patients, {} controls, {} patient sequences ({} with orthosis), {} control sequences",
            s.patients, s.controls, s.patient_sequences, s.orthosis_sequences, s.control_sequences
        )?;
        return Ok(worst);
    }
    validate_sequence_file(&a.input, out)
}

/// Prints findings for one file; returns 0 (clean), 3 (unparseable) or 4 (findings).
fn validate_sequence_file(path: &Path, out: &mut dyn Write) -> CliResult<i32> {
    let shown = path.display();
    let reader = match File::open(path) {
        Ok(f) => BufReader::new(f),
        Err(e) => {
            writeln!(out, "{shown}: cannot open: {e}")?;
            return Ok(ErrorClass::Validation.exit_code());
        }
    };
    let seq = match parse_sequence(reader) {
        Ok(seq) => seq,
        Err(e) => {
            writeln!(out, "{shown}: {e}")?;
            return Ok(ErrorClass::Parse.exit_code());
        }
    };
    let report = validate(&seq);
    if report.is_clean() {
        writeln!(out, "{shown}: ok ({} frames)", seq.len())?;
        return Ok(0);
    }
    for f in &report.findings {
        writeln!(out, "{shown}: {f}")?;
    }
    Ok(ErrorClass::Validation.exit_code())
}
