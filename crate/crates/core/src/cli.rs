//! Command-line front end: batch commands over a dataset of recordings.
//!
//! Every command loads a [`RunConfig`] (TOML, `--config`; built-in defaults
//! when the flag is omitted), fans per-recording work out to a rayon pool
//! sized by `--jobs`, and aggregates results in recording order, so outputs
//! are byte-identical across reruns and thread counts. Each command writes
//! machine-readable artifacts under the configured output directory next to
//! a human-readable rendering, and reruns are idempotent: the same inputs
//! overwrite the same files with the same bytes.
//!
//! Exit codes: 0 success, 1 data error (unreadable or inconsistent
//! recordings), 2 usage error (bad flags or configuration). Log verbosity
//! comes from the `DEXENGINE_LOG` environment variable.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::config::{load_run_config, ConfigError, RunConfig};
use crate::dataset::{
    build_tracks, load_bundle, load_timeline_auto, scan_dataset, smoothed_frames,
    track_file_name, DatasetError, RecordingDir, DETECTIONS_FILE, GESTURES_FILE, META_FILE,
    TOOLS_LEFT_FILE, TOOLS_RIGHT_FILE,
};
use crate::ingest::{self, CheckStatus, IngestError, ValidationReport};
use crate::model::{DetectionFrame, GestureLabel, SegmentTimeline, SkillGroup, TrackKind};
use crate::proxies::{
    compute_proxy_samples, default_bindings, load_bindings, ProxyBinding, ProxyKind,
    ProxyOptions, ProxySample,
};
use crate::segmetrics::{
    evaluate_multitask, EvaluationReport, MetricConfig, RecordingEvalRow, DEFAULT_TAUS,
};
use crate::stats::{
    build_baseline, compare_groups, generate_feedback, load_baseline, load_message_templates,
    mean, participant_means, sample_std, Direction, FeedbackReport, GroupComparison,
    MessageTemplates, TTestVariant,
};
use crate::synth::{write_dataset, SynthOptions};

/// A command failure carrying the process exit code it maps to.
#[derive(Debug)]
struct CliError {
    message: String,
    exit: i32,
}

impl CliError {
    /// Bad flags or configuration: exit code 2.
    fn usage(message: impl Into<String>) -> CliError {
        CliError { message: message.into(), exit: 2 }
    }

    /// Unreadable or inconsistent input data: exit code 1.
    fn data(message: impl Into<String>) -> CliError {
        CliError { message: message.into(), exit: 1 }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> CliError {
        CliError::usage(e.to_string())
    }
}

impl From<DatasetError> for CliError {
    fn from(e: DatasetError) -> CliError {
        CliError::data(e.to_string())
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> CliError {
        CliError::data(e.to_string())
    }
}

/// Prints a line to stdout, swallowing write errors so that a closed pipe
/// (`dexengine ... | head`) ends output quietly instead of panicking.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

/// Prints already-terminated text to stdout; same pipe tolerance as
/// [`say!`].
fn say_block(text: &str) {
    use std::io::Write as _;
    let _ = std::io::stdout().write_all(text.as_bytes());
}

/// Batch analytics over hand-pose detection streams from open-surgery
/// training recordings.
#[derive(Debug, Parser)]
#[command(name = "dexengine", version, about)]
pub struct Cli {
    /// Run configuration file (TOML). Relative paths inside it resolve
    /// against its directory. Built-in defaults apply when omitted.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Worker threads for per-recording stages; 0 means one per core.
    /// Outputs are identical regardless of this value.
    #[arg(long, global = true, default_value_t = 0, value_name = "N")]
    jobs: usize,

    /// Override: count background segments in edit and F1 scores.
    #[arg(long, global = true, value_name = "BOOL")]
    include_background: Option<bool>,

    /// Override: t-test variant for group comparisons.
    #[arg(long, global = true, value_enum, value_name = "VARIANT")]
    ttest: Option<TTestArg>,

    /// Override: smoothing window length in frames (odd, >= 3).
    #[arg(long, global = true, value_name = "FRAMES")]
    window: Option<usize>,

    /// Override: smoothing polynomial order (< window).
    #[arg(long, global = true, value_name = "ORDER")]
    poly_order: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TTestArg {
    Welch,
    Pooled,
}

impl From<TTestArg> for TTestVariant {
    fn from(arg: TTestArg) -> TTestVariant {
        match arg {
            TTestArg::Welch => TTestVariant::Welch,
            TTestArg::Pooled => TTestVariant::Pooled,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check every recording's files and write per-recording reports.
    Validate,
    /// Write gated, imputed, Savitzky-Golay-smoothed detection streams.
    Smooth,
    /// Score predicted timelines against ground-truth annotations.
    Evaluate(EvaluateArgs),
    /// Compute motion proxy samples for every recording.
    Proxies,
    /// Build the expert baseline from expert recordings.
    Baseline,
    /// Score one recording against the expert baseline.
    Feedback(FeedbackArgs),
    /// Compare novice and expert groups per proxy and gesture.
    Stats,
    /// Generate a synthetic fixture dataset.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Directory of predictions, one subdirectory of label files per
    /// recording.
    #[arg(long, value_name = "DIR")]
    pred: PathBuf,

    /// Ground-truth directory; defaults to the dataset root.
    #[arg(long, value_name = "DIR")]
    gt: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FeedbackArgs {
    /// Recording to score, by id.
    #[arg(long, value_name = "ID")]
    recording: String,
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// Directory the fixture dataset is written under.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,

    /// Seed for the generator; same seed, same dataset.
    #[arg(long, default_value_t = 7)]
    seed: u64,

    /// Number of expert recordings.
    #[arg(long, default_value_t = 6)]
    experts: usize,

    /// Number of novice recordings.
    #[arg(long, default_value_t = 7)]
    novices: usize,

    /// Frame rate of the generated recordings.
    #[arg(long, default_value_t = 30.0)]
    fps: f64,
}

/// Parses arguments from the process environment, runs the requested
/// command, and returns the process exit code. Errors are printed to
/// stderr.
pub fn run() -> i32 {
    init_logging();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.exit
        }
    }
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or("DEXENGINE_LOG", "warn");
    // No timestamps: log output stays comparable across runs.
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    if let Command::Synth(args) = &cli.command {
        // Synth creates a dataset from nothing; no configuration needed.
        return cmd_synth(args);
    }
    let config = effective_config(cli)?;
    config.check_input_paths()?;
    match &cli.command {
        Command::Validate => cmd_validate(&config, cli.jobs),
        Command::Smooth => cmd_smooth(&config, cli.jobs),
        Command::Evaluate(args) => cmd_evaluate(&config, cli.jobs, args),
        Command::Proxies => cmd_proxies(&config, cli.jobs),
        Command::Baseline => cmd_baseline(&config, cli.jobs),
        Command::Feedback(args) => cmd_feedback(&config, args),
        Command::Stats => cmd_stats(&config, cli.jobs),
        Command::Synth(_) => unreachable!("handled before config loading"),
    }
}

/// Loads the configuration (or defaults), resolves its paths, and applies
/// command-line overrides. Re-validates afterwards since overrides can
/// break the smoothing invariants.
fn effective_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut config = match &cli.config {
        Some(path) => {
            let base = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
                _ => PathBuf::from("."),
            };
            load_run_config(path)?.resolved(&base)
        }
        None => RunConfig::default(),
    };
    if let Some(window) = cli.window {
        config.smoothing.window = window;
    }
    if let Some(order) = cli.poly_order {
        config.smoothing.poly_order = order;
    }
    if let Some(bg) = cli.include_background {
        config.include_background = bg;
    }
    if let Some(ttest) = cli.ttest {
        config.ttest = ttest.into();
    }
    config.validate()?;
    Ok(config)
}

/// Runs `work` on a dedicated pool of `jobs` threads, or on the global
/// pool when `jobs` is 0.
fn run_pooled<T: Send>(jobs: usize, work: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    if jobs == 0 {
        return Ok(work());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::data(format!("cannot build worker pool: {e}")))?;
    Ok(pool.install(work))
}

/// Writes `text` to `path`, creating parent directories.
fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)
            .map_err(|e| CliError::data(format!("cannot create {}: {e}", parent.display())))?;
    }
    std::fs::write(path, text)
        .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))
}

fn to_pretty_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    let mut json = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::data(format!("cannot serialize report: {e}")))?;
    json.push('\n');
    Ok(json)
}

/// Scans the dataset root and errors when it holds no recordings.
fn scan_nonempty(root: &Path) -> Result<Vec<RecordingDir>, CliError> {
    let recordings = scan_dataset(root)?;
    if recordings.is_empty() {
        return Err(CliError::data(format!("no recordings under {}", root.display())));
    }
    Ok(recordings)
}

// ---------------------------------------------------------------- validate

/// Subdirectories that look like recordings: any known artifact file
/// qualifies, so a recording missing only its metadata is still reported
/// instead of silently skipped.
fn validation_candidates(root: &Path) -> Result<Vec<RecordingDir>, CliError> {
    let entries = std::fs::read_dir(root)
        .map_err(|e| CliError::data(format!("cannot read dataset root {}: {e}", root.display())))?;
    let known =
        [META_FILE, DETECTIONS_FILE, GESTURES_FILE, TOOLS_LEFT_FILE, TOOLS_RIGHT_FILE];
    let mut dirs = Vec::new();
    for entry in entries {
        let entry = entry
            .map_err(|e| CliError::data(format!("cannot read dataset root {}: {e}", root.display())))?;
        let path = entry.path();
        if !path.is_dir() || !known.iter().any(|f| path.join(f).is_file()) {
            continue;
        }
        if let Some(dir) = RecordingDir::from_dir(path) {
            dirs.push(dir);
        }
    }
    dirs.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(dirs)
}

/// Parses one recording leniently — timelines keep their own frame counts
/// instead of being forced to the metadata's — so cross-checks surface in
/// the report rather than as parse failures.
fn validate_one(rec: &RecordingDir) -> Result<ValidationReport, CliError> {
    let meta = ingest::load_meta(&rec.meta_path())?;
    if meta.recording_id != rec.id {
        return Err(CliError::data(format!(
            "{}: directory is named {:?} but metadata says {:?}",
            rec.dir.display(),
            rec.id,
            meta.recording_id
        )));
    }
    let frames = ingest::parse_detections(&rec.detections_path())?;
    let mut timelines = Vec::new();
    for kind in [TrackKind::Gesture, TrackKind::ToolLeft, TrackKind::ToolRight] {
        timelines.push(load_timeline_auto(&rec.track_path(kind), kind)?);
    }
    let refs: Vec<&SegmentTimeline> = timelines.iter().collect();
    Ok(ingest::validate_recording(&meta, &frames, &refs))
}

fn cmd_validate(config: &RunConfig, jobs: usize) -> Result<(), CliError> {
    let candidates = validation_candidates(&config.dataset_root)?;
    if candidates.is_empty() {
        return Err(CliError::data(format!(
            "no recordings under {}",
            config.dataset_root.display()
        )));
    }
    let reports: Vec<(String, Result<ValidationReport, CliError>)> = run_pooled(jobs, || {
        candidates.par_iter().map(|rec| (rec.id.clone(), validate_one(rec))).collect()
    })?;

    let out_dir = config.output_dir.join("validation");
    let mut first_failure: Option<String> = None;
    for (id, outcome) in &reports {
        match outcome {
            Ok(report) => {
                write_text(&out_dir.join(format!("{id}.json")), &to_pretty_json(report)?)?;
                let warnings =
                    report.entries.iter().filter(|e| e.status == CheckStatus::Warn).count();
                if report.passed() {
                    match warnings {
                        0 => say!("{id}: ok"),
                        n => say!("{id}: ok ({n} warning(s))"),
                    }
                } else {
                    let first = report
                        .entries
                        .iter()
                        .find(|e| e.status == CheckStatus::Fail)
                        .expect("a report that did not pass has a failed entry");
                    say!("{id}: FAIL ({}: {})", first.check, first.detail);
                    first_failure.get_or_insert_with(|| {
                        format!("{id}: check {} failed: {}", first.check, first.detail)
                    });
                }
            }
            Err(e) => {
                say!("{id}: ERROR ({})", e.message);
                first_failure.get_or_insert_with(|| e.message.clone());
            }
        }
    }
    match first_failure {
        None => Ok(()),
        Some(message) => Err(CliError::data(message)),
    }
}

// ------------------------------------------------------------------ smooth

fn cmd_smooth(config: &RunConfig, jobs: usize) -> Result<(), CliError> {
    let recordings = scan_nonempty(&config.dataset_root)?;
    let results: Vec<Result<(String, Vec<DetectionFrame>), CliError>> = run_pooled(jobs, || {
        recordings
            .par_iter()
            .map(|rec| {
                let bundle = load_bundle(rec)?;
                // A recording without any detections smooths to nothing:
                // the output is just the stream header.
                let frames = if bundle.frames.is_empty() {
                    Vec::new()
                } else {
                    let tracks = build_tracks(&bundle, &config.smoothing)?;
                    smoothed_frames(&tracks.left, &tracks.right, &bundle.frames)
                };
                Ok((rec.id.clone(), frames))
            })
            .collect()
    })?;

    let out_dir = config.output_dir.join("smoothed");
    for result in results {
        let (id, frames) = result?;
        let path = out_dir.join(format!("{id}.jsonl"));
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::data(format!("cannot create {}: {e}", parent.display())))?;
        }
        ingest::write_stream(&path, &frames, true)?;
        say!("{id}: {} frames -> {}", frames.len(), path.display());
    }
    Ok(())
}

// ---------------------------------------------------------------- evaluate

/// Subdirectories of `root` that carry at least one label file, sorted by
/// name.
fn label_dirs(root: &Path) -> Result<Vec<(String, PathBuf)>, CliError> {
    let entries = std::fs::read_dir(root)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", root.display())))?;
    let mut out = Vec::new();
    for entry in entries {
        let entry =
            entry.map_err(|e| CliError::data(format!("cannot read {}: {e}", root.display())))?;
        let path = entry.path();
        if !path.is_dir() {
            continue;
        }
        let has_labels = [TrackKind::Gesture, TrackKind::ToolLeft, TrackKind::ToolRight]
            .iter()
            .any(|kind| path.join(track_file_name(*kind)).is_file());
        if !has_labels {
            continue;
        }
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
            continue;
        };
        out.push((name.to_string(), path.clone()));
    }
    out.sort();
    Ok(out)
}

struct EvaluatedRecording {
    row: RecordingEvalRow,
    /// Per-track `frame,gt,pred` CSVs for downstream timeline plots.
    ribbons: Vec<(TrackKind, String)>,
}

fn evaluate_recording_dir(
    id: &str,
    gt_dir: &Path,
    pred_dir: &Path,
    config: &MetricConfig,
) -> Result<EvaluatedRecording, CliError> {
    // Ground truth defines the frame axis: from its metadata when present,
    // otherwise inferred from the label files themselves.
    let meta_path = gt_dir.join(META_FILE);
    let meta = if meta_path.is_file() { Some(ingest::load_meta(&meta_path)?) } else { None };

    let mut gts = BTreeMap::new();
    let mut preds = BTreeMap::new();
    let mut ribbons = Vec::new();
    for kind in [TrackKind::Gesture, TrackKind::ToolLeft, TrackKind::ToolRight] {
        let gt_path = gt_dir.join(track_file_name(kind));
        if !gt_path.is_file() {
            continue;
        }
        let gt = match &meta {
            Some(m) => ingest::parse_labels(&gt_path, kind, m.frame_count)?,
            None => load_timeline_auto(&gt_path, kind)?,
        };
        let pred_path = pred_dir.join(track_file_name(kind));
        if pred_path.is_file() {
            let n = gt.frame_count();
            let pred = ingest::parse_labels(&pred_path, kind, n)?;
            let gt_labels = gt
                .to_frame_labels(n)
                .map_err(|e| CliError::data(format!("{id}/{kind}: {e}")))?;
            let pred_labels = pred
                .to_frame_labels(n)
                .map_err(|e| CliError::data(format!("{id}/{kind}: {e}")))?;
            let mut csv = String::from("frame,gt,pred\n");
            for (frame, (g, p)) in gt_labels.iter().zip(&pred_labels).enumerate() {
                let _ = writeln!(csv, "{frame},{g},{p}");
            }
            ribbons.push((kind, csv));
            preds.insert(kind, pred);
        }
        gts.insert(kind, gt);
    }

    let results = evaluate_multitask(&preds, &gts, config)
        .map_err(|e| CliError::data(format!("{id}: {e}")))?;
    let participant_id = match meta {
        Some(m) => m.participant_id,
        None => id.to_string(),
    };
    let row = RecordingEvalRow { recording_id: id.to_string(), participant_id, results };
    Ok(EvaluatedRecording { row, ribbons })
}

fn cmd_evaluate(config: &RunConfig, jobs: usize, args: &EvaluateArgs) -> Result<(), CliError> {
    let gt_root = args.gt.clone().unwrap_or_else(|| config.dataset_root.clone());
    let gt_dirs = label_dirs(&gt_root)?;
    if gt_dirs.is_empty() {
        return Err(CliError::data(format!(
            "no recordings with label files under {}",
            gt_root.display()
        )));
    }
    let pred_dirs = label_dirs(&args.pred)?;
    let pred_ids: Vec<&str> = pred_dirs.iter().map(|(id, _)| id.as_str()).collect();
    let gt_ids: Vec<&str> = gt_dirs.iter().map(|(id, _)| id.as_str()).collect();
    let missing: Vec<&str> = gt_ids.iter().filter(|id| !pred_ids.contains(id)).copied().collect();
    let unexpected: Vec<&str> =
        pred_ids.iter().filter(|id| !gt_ids.contains(id)).copied().collect();
    if !missing.is_empty() || !unexpected.is_empty() {
        return Err(CliError::data(format!(
            "prediction and ground-truth recording sets differ: missing from predictions [{}], unexpected in predictions [{}]",
            missing.join(", "),
            unexpected.join(", ")
        )));
    }

    let metric_config = MetricConfig {
        include_background: config.include_background,
        taus: DEFAULT_TAUS.to_vec(),
        per_class: true,
    };
    let evaluated: Vec<Result<EvaluatedRecording, CliError>> = run_pooled(jobs, || {
        gt_dirs
            .par_iter()
            .map(|(id, gt_dir)| {
                evaluate_recording_dir(id, gt_dir, &args.pred.join(id), &metric_config)
            })
            .collect()
    })?;

    let mut rows = Vec::new();
    let mut ribbons = Vec::new();
    for result in evaluated {
        let EvaluatedRecording { row, ribbons: recording_ribbons } = result?;
        for (kind, csv) in recording_ribbons {
            ribbons.push((row.recording_id.clone(), kind, csv));
        }
        rows.push(row);
    }
    let report = EvaluationReport::new(rows, metric_config.taus.clone());

    let out_dir = config.output_dir.join("evaluation");
    write_text(&out_dir.join("evaluation.csv"), &report.to_csv())?;
    write_text(&out_dir.join("evaluation.json"), &to_pretty_json(&report)?)?;
    let table = report.summary_table();
    write_text(&out_dir.join("evaluation.txt"), &table)?;
    for (id, kind, csv) in &ribbons {
        write_text(&out_dir.join("ribbons").join(format!("{id}.{kind}.csv")), csv)?;
    }
    say_block(&table);
    Ok(())
}

// ----------------------------------------------------------------- proxies

fn load_configured_bindings(config: &RunConfig) -> Result<Vec<ProxyBinding>, CliError> {
    match &config.bindings {
        Some(path) => load_bindings(path).map_err(|e| CliError::usage(e.to_string())),
        None => Ok(default_bindings()),
    }
}

/// Loads every recording, builds its cleaned tracks, and computes all
/// bound proxies, in recording order.
fn compute_all_samples(config: &RunConfig, jobs: usize) -> Result<Vec<ProxySample>, CliError> {
    let bindings = load_configured_bindings(config)?;
    let options = ProxyOptions {
        tool_min_fraction: config.tool_min_fraction,
        tool_tie_break: config.tool_tie_break,
        tissue_fallback: None,
    };
    let recordings = scan_nonempty(&config.dataset_root)?;
    let per_recording: Vec<Result<Vec<ProxySample>, CliError>> = run_pooled(jobs, || {
        recordings
            .par_iter()
            .map(|rec| {
                let bundle = load_bundle(rec)?;
                let tracks = build_tracks(&bundle, &config.smoothing)?;
                Ok(compute_proxy_samples(&tracks, &bindings, &options))
            })
            .collect()
    })?;
    let mut samples = Vec::new();
    for result in per_recording {
        samples.extend(result?);
    }
    Ok(samples)
}

fn proxies_csv(samples: &[ProxySample]) -> String {
    let mut out = String::from(
        "recording_id,participant_id,group,kind,gesture,occurrence_index,value,n_frames_used\n",
    );
    for s in samples {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            s.recording_id,
            s.participant_id,
            s.group,
            s.kind,
            s.gesture,
            s.occurrence_index,
            s.value,
            s.n_frames_used
        );
    }
    out
}

/// Per-(proxy, gesture) sample counts and moments over both groups.
fn proxies_summary(samples: &[ProxySample]) -> String {
    let mut buckets: BTreeMap<(ProxyKind, GestureLabel), Vec<f64>> = BTreeMap::new();
    for s in samples {
        buckets.entry((s.kind, s.gesture)).or_default().push(s.value);
    }
    let mut out = format!(
        "{:<26} {:<18} {:>5} {:>12} {:>12}\n",
        "proxy", "gesture", "n", "mean", "std"
    );
    for ((kind, gesture), values) in &buckets {
        let m = mean(values);
        let s = sample_std(values);
        let _ = writeln!(
            out,
            "{:<26} {:<18} {:>5} {:>12.3} {:>12.3}",
            kind.to_string(),
            gesture.to_string(),
            values.len(),
            m,
            s
        );
    }
    out
}

fn cmd_proxies(config: &RunConfig, jobs: usize) -> Result<(), CliError> {
    let samples = compute_all_samples(config, jobs)?;
    if samples.is_empty() {
        return Err(CliError::data("no proxy samples could be computed".to_string()));
    }
    let out_dir = config.output_dir.join("proxies");
    write_text(&out_dir.join("proxies.csv"), &proxies_csv(&samples))?;
    let summary = proxies_summary(&samples);
    write_text(&out_dir.join("proxies.txt"), &summary)?;
    say_block(&summary);
    say!("{} samples -> {}", samples.len(), out_dir.join("proxies.csv").display());
    Ok(())
}

// ---------------------------------------------------------------- baseline

fn cmd_baseline(config: &RunConfig, jobs: usize) -> Result<(), CliError> {
    let samples = compute_all_samples(config, jobs)?;
    let means = participant_means(&samples);
    let mut created_from: Vec<String> = means
        .iter()
        .filter(|m| m.group == SkillGroup::Expert)
        .map(|m| m.participant_id.clone())
        .collect();
    created_from.sort();
    created_from.dedup();
    let baseline = build_baseline(&means, config.threshold_k, created_from)
        .map_err(|e| CliError::data(e.to_string()))?;
    if let Some(parent) = config.baseline.parent() {
        std::fs::create_dir_all(parent)
            .map_err(|e| CliError::data(format!("cannot create {}: {e}", parent.display())))?;
    }
    crate::stats::save_baseline(&config.baseline, &baseline)
        .map_err(|e| CliError::data(e.to_string()))?;

    say!(
        "baseline version {} from {} expert participant(s), {} entries -> {}",
        baseline.version,
        baseline.created_from.len(),
        baseline.entries.len(),
        config.baseline.display()
    );
    say!(
        "{:<26} {:<18} {:>4} {:>12} {:>12}",
        "proxy", "gesture", "n", "mean", "std"
    );
    for entry in &baseline.entries {
        say!(
            "{:<26} {:<18} {:>4} {:>12.3} {:>12.3}",
            entry.kind.to_string(),
            entry.gesture.to_string(),
            entry.n,
            entry.mean,
            entry.std
        );
    }
    Ok(())
}

// ---------------------------------------------------------------- feedback

fn feedback_text(report: &FeedbackReport) -> String {
    let mut out = format!(
        "recording {} against expert baseline version {}\n\n",
        report.recording_id, report.baseline_version
    );
    for e in &report.entries {
        let _ = write!(
            out,
            "{} @ {}: subject {:.3}, experts {:.3} +/- {:.3}",
            e.kind, e.gesture, e.subject_value, e.expert_mean, e.expert_std
        );
        match e.z_score {
            Some(z) => {
                let _ = write!(out, ", z {z:+.2}");
            }
            None => {
                let _ = write!(out, ", z n/a (zero expert spread)");
            }
        }
        if e.triggered {
            let direction = match e.direction {
                Some(Direction::High) => "HIGH",
                Some(Direction::Low) => "LOW",
                None => "OUT OF RANGE",
            };
            let _ = write!(out, "  [{direction}]");
        }
        out.push('\n');
    }
    out.push('\n');
    // The same template can back several (proxy, gesture) pairs; the
    // advice list repeats no sentence.
    let mut messages = Vec::new();
    for message in report.triggered_messages() {
        if !messages.contains(&message) {
            messages.push(message);
        }
    }
    if messages.is_empty() {
        out.push_str("advice: none, all scored proxies sit within the expert envelope\n");
    } else {
        out.push_str("advice:\n");
        for message in messages {
            let _ = writeln!(out, "  - {message}");
        }
    }
    out
}

fn cmd_feedback(config: &RunConfig, args: &FeedbackArgs) -> Result<(), CliError> {
    let baseline = load_baseline(&config.baseline).map_err(|e| {
        CliError::data(format!(
            "cannot load baseline {}: {e} (run the baseline command first)",
            config.baseline.display()
        ))
    })?;
    let templates = match &config.templates {
        Some(path) => {
            load_message_templates(path).map_err(|e| CliError::usage(e.to_string()))?
        }
        None => MessageTemplates::default(),
    };
    let recordings = scan_nonempty(&config.dataset_root)?;
    let recording = recordings.iter().find(|r| r.id == args.recording).ok_or_else(|| {
        CliError::data(format!(
            "recording {:?} not found under {}",
            args.recording,
            config.dataset_root.display()
        ))
    })?;

    let bundle = load_bundle(recording)?;
    let tracks = build_tracks(&bundle, &config.smoothing)?;
    let bindings = load_configured_bindings(config)?;
    let options = ProxyOptions {
        tool_min_fraction: config.tool_min_fraction,
        tool_tie_break: config.tool_tie_break,
        tissue_fallback: None,
    };
    let samples = compute_proxy_samples(&tracks, &bindings, &options);
    let report = generate_feedback(&args.recording, &samples, &baseline, &templates);

    let out_dir = config.output_dir.join("feedback");
    write_text(&out_dir.join(format!("{}.json", args.recording)), &to_pretty_json(&report)?)?;
    let text = feedback_text(&report);
    write_text(&out_dir.join(format!("{}.txt", args.recording)), &text)?;
    say_block(&text);
    Ok(())
}

// ------------------------------------------------------------------- stats

fn stats_csv(comparisons: &[GroupComparison]) -> String {
    let mut out = String::from("kind,gesture");
    for group in ["novice", "expert"] {
        for column in ["n", "mean", "std", "min", "q1", "median", "q3", "max"] {
            let _ = write!(out, ",{group}_{column}");
        }
    }
    out.push_str(",t,df,p,stars\n");
    for c in comparisons {
        let _ = write!(out, "{},{}", c.kind, c.gesture);
        for g in [&c.novice, &c.expert] {
            let q = &g.quartiles;
            let _ = write!(
                out,
                ",{},{},{},{},{},{},{},{}",
                g.n, g.mean, g.std, q.min, q.q1, q.median, q.q3, q.max
            );
        }
        let _ = writeln!(
            out,
            ",{},{},{},{}",
            c.test.t_statistic, c.test.degrees_of_freedom, c.test.p_value, c.stars
        );
    }
    out
}

/// p-values readable at both ends: scientific below 0.001, fixed above.
fn fmt_p(p: f64) -> String {
    if p < 0.001 {
        format!("{p:.2e}")
    } else {
        format!("{p:.3}")
    }
}

fn stats_text(comparisons: &[GroupComparison]) -> String {
    let mut out = String::new();
    for c in comparisons {
        let _ = writeln!(
            out,
            "{} @ {}: novice {:.3} +/- {:.3} (n={}) vs expert {:.3} +/- {:.3} (n={}): t {:.3}, df {:.2}, p {}{}",
            c.kind,
            c.gesture,
            c.novice.mean,
            c.novice.std,
            c.novice.n,
            c.expert.mean,
            c.expert.std,
            c.expert.n,
            c.test.t_statistic,
            c.test.degrees_of_freedom,
            fmt_p(c.test.p_value),
            if c.stars.is_empty() { String::new() } else { format!(" {}", c.stars) }
        );
    }
    out
}

fn cmd_stats(config: &RunConfig, jobs: usize) -> Result<(), CliError> {
    let samples = compute_all_samples(config, jobs)?;
    let means = participant_means(&samples);
    let comparisons =
        compare_groups(&means, config.ttest).map_err(|e| CliError::data(e.to_string()))?;

    let out_dir = config.output_dir.join("stats");
    write_text(&out_dir.join("stats.csv"), &stats_csv(&comparisons))?;
    write_text(&out_dir.join("stats.json"), &to_pretty_json(&comparisons)?)?;
    let text = stats_text(&comparisons);
    write_text(&out_dir.join("stats.txt"), &text)?;
    if comparisons.is_empty() {
        say!("no (proxy, gesture) pair has two or more participants in both groups");
    } else {
        say_block(&text);
    }
    Ok(())
}

// ------------------------------------------------------------------- synth

fn cmd_synth(args: &SynthArgs) -> Result<(), CliError> {
    let options = SynthOptions {
        seed: args.seed,
        experts: args.experts,
        novices: args.novices,
        fps: args.fps,
    };
    let recordings = write_dataset(&args.out, &options)?;
    say!("wrote {} recordings under {}", recordings.len(), args.out.display());
    Ok(())
}
