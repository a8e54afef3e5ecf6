//! Dataset layout and loading: one recording per subdirectory under the
//! dataset root, scanned rather than indexed.
//!
//! ```text
//! <root>/<recording_id>/
//!   meta.json          recording metadata (one JSON document)
//!   detections.jsonl   detection stream
//!   gestures.csv       gesture segments
//!   tools_left.csv     left-hand tool segments
//!   tools_right.csv    right-hand tool segments
//! ```
//!
//! Loading is two-staged: [`load_bundle`] parses the raw artifacts, and
//! [`build_tracks`] runs the gate -> impute -> smooth pipeline to produce
//! the [`RecordingTracks`] every downstream stage consumes.

use std::io::{BufReader, Cursor};
use std::path::{Path, PathBuf};

use crate::ingest::{self, IngestError};
use crate::model::{
    BoundingBox, DetectionFrame, HandDetection, Keypoint, RecordingMeta, SegmentTimeline,
    TrackKind,
};
use crate::proxies::{RecordingTracks, TracksError};
use crate::signal::{gate_keypoints, impute_locf, smooth_track, HandTrack, SignalError, SmoothingConfig};

pub const META_FILE: &str = "meta.json";
pub const DETECTIONS_FILE: &str = "detections.jsonl";
pub const GESTURES_FILE: &str = "gestures.csv";
pub const TOOLS_LEFT_FILE: &str = "tools_left.csv";
pub const TOOLS_RIGHT_FILE: &str = "tools_right.csv";

/// The label file carrying `track` inside a recording directory.
pub fn track_file_name(track: TrackKind) -> &'static str {
    match track {
        TrackKind::Gesture => GESTURES_FILE,
        TrackKind::ToolLeft => TOOLS_LEFT_FILE,
        TrackKind::ToolRight => TOOLS_RIGHT_FILE,
    }
}

/// Errors from locating, loading, or processing recordings.
#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("{}: i/o error: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("dataset root is not a directory: {}", path.display())]
    NotADirectory { path: PathBuf },
    #[error("{}: directory is named {directory:?} but its metadata says {meta:?}", path.display())]
    IdMismatch { path: PathBuf, directory: String, meta: String },
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error(transparent)]
    Tracks(#[from] TracksError),
}

/// One recording subdirectory; `id` is the directory name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordingDir {
    pub id: String,
    pub dir: PathBuf,
}

impl RecordingDir {
    /// Wraps a directory whose name is the recording id. Returns `None`
    /// for paths without a usable final component.
    pub fn from_dir(dir: PathBuf) -> Option<RecordingDir> {
        let id = dir.file_name()?.to_str()?.to_string();
        Some(RecordingDir { id, dir })
    }

    pub fn meta_path(&self) -> PathBuf {
        self.dir.join(META_FILE)
    }

    pub fn detections_path(&self) -> PathBuf {
        self.dir.join(DETECTIONS_FILE)
    }

    pub fn track_path(&self, track: TrackKind) -> PathBuf {
        self.dir.join(track_file_name(track))
    }
}

/// Lists the recording directories under `root`: immediate subdirectories
/// containing a `meta.json`, sorted by id. Other entries are ignored.
pub fn scan_dataset(root: &Path) -> Result<Vec<RecordingDir>, DatasetError> {
    if !root.is_dir() {
        return Err(DatasetError::NotADirectory { path: root.to_path_buf() });
    }
    let entries = std::fs::read_dir(root)
        .map_err(|source| DatasetError::Io { path: root.to_path_buf(), source })?;
    let mut recordings = Vec::new();
    for entry in entries {
        let entry =
            entry.map_err(|source| DatasetError::Io { path: root.to_path_buf(), source })?;
        let dir = entry.path();
        if !dir.is_dir() || !dir.join(META_FILE).is_file() {
            continue;
        }
        if let Some(recording) = RecordingDir::from_dir(dir) {
            recordings.push(recording);
        }
    }
    recordings.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(recordings)
}

/// The raw artifacts of one recording, parsed but not yet processed.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordingBundle {
    pub meta: RecordingMeta,
    /// Dense frames `0..=last_detected`; may be shorter than
    /// `meta.frame_count` when trailing frames carry no detections.
    pub frames: Vec<DetectionFrame>,
    pub gesture: SegmentTimeline,
    pub tool_left: SegmentTimeline,
    pub tool_right: SegmentTimeline,
}

/// Loads and parses every artifact of one recording. The directory name
/// must agree with the metadata's `recording_id`.
pub fn load_bundle(recording: &RecordingDir) -> Result<RecordingBundle, DatasetError> {
    let meta = ingest::load_meta(&recording.meta_path())?;
    if meta.recording_id != recording.id {
        return Err(DatasetError::IdMismatch {
            path: recording.dir.clone(),
            directory: recording.id.clone(),
            meta: meta.recording_id,
        });
    }
    let frames = ingest::parse_detections(&recording.detections_path())?;
    let n = meta.frame_count;
    let gesture =
        ingest::parse_labels(&recording.track_path(TrackKind::Gesture), TrackKind::Gesture, n)?;
    let tool_left =
        ingest::parse_labels(&recording.track_path(TrackKind::ToolLeft), TrackKind::ToolLeft, n)?;
    let tool_right = ingest::parse_labels(
        &recording.track_path(TrackKind::ToolRight),
        TrackKind::ToolRight,
        n,
    )?;
    Ok(RecordingBundle { meta, frames, gesture, tool_left, tool_right })
}

/// Writes a recording under `root/<recording_id>/`, creating the
/// directory. Returns the recording directory.
pub fn save_recording(root: &Path, bundle: &RecordingBundle) -> Result<RecordingDir, DatasetError> {
    let dir = root.join(&bundle.meta.recording_id);
    std::fs::create_dir_all(&dir)
        .map_err(|source| DatasetError::Io { path: dir.clone(), source })?;
    let recording = RecordingDir::from_dir(dir).expect("recording ids are valid path components");
    ingest::save_meta(&recording.meta_path(), &bundle.meta)?;
    ingest::write_detections(&recording.detections_path(), &bundle.frames)?;
    ingest::write_labels(&recording.track_path(TrackKind::Gesture), &bundle.gesture)?;
    ingest::write_labels(&recording.track_path(TrackKind::ToolLeft), &bundle.tool_left)?;
    ingest::write_labels(&recording.track_path(TrackKind::ToolRight), &bundle.tool_right)?;
    Ok(recording)
}

/// Runs the signal pipeline over a parsed bundle: confidence gating, LOCF
/// imputation, and smoothing, per hand.
pub fn build_tracks(
    bundle: &RecordingBundle,
    smoothing: &SmoothingConfig,
) -> Result<RecordingTracks, DatasetError> {
    let n = bundle.meta.frame_count as usize;
    let (left_obs, right_obs) =
        gate_keypoints(&bundle.frames, n, smoothing.keypoint_conf_threshold)?;
    let left = smooth_track(&impute_locf(&left_obs, &bundle.meta), smoothing)?;
    let right = smooth_track(&impute_locf(&right_obs, &bundle.meta), smoothing)?;
    let tracks = RecordingTracks {
        meta: bundle.meta.clone(),
        left,
        right,
        gesture: bundle.gesture.clone(),
        tool_left: bundle.tool_left.clone(),
        tool_right: bundle.tool_right.clone(),
    };
    tracks.validate()?;
    Ok(tracks)
}

/// Re-expands smoothed hand tracks into stream frames, carrying tool boxes
/// over from the original frames. Hands that never appeared stay absent;
/// all other channels are dense, so every frame carries both present
/// hands.
pub fn smoothed_frames(
    left: &HandTrack,
    right: &HandTrack,
    original: &[DetectionFrame],
) -> Vec<DetectionFrame> {
    let n = left.frame_count().max(right.frame_count());
    let mut frames = Vec::with_capacity(n);
    for t in 0..n {
        let mut frame = DetectionFrame::empty(t as u32);
        for track in [left, right] {
            if track.is_all_missing() || t >= track.frame_count() {
                continue;
            }
            *frame.hand_mut(track.side) = Some(detection_at(track, t));
        }
        if let Some(source) = original.get(t) {
            frame.tools = source.tools.clone();
        }
        frames.push(frame);
    }
    frames
}

fn detection_at(track: &HandTrack, t: usize) -> HandDetection {
    let (hw, hh) = (track.box_width[t] / 2.0, track.box_height[t] / 2.0);
    let (cx, cy) = (track.box_center_x[t], track.box_center_y[t]);
    let mut keypoints = [Keypoint::new(0.0, 0.0, 0.0); crate::model::KEYPOINT_COUNT];
    for (k, slot) in keypoints.iter_mut().enumerate() {
        *slot = Keypoint::new(track.kp_x[k][t], track.kp_y[k][t], track.kp_conf[k][t]);
    }
    HandDetection {
        bbox: BoundingBox::new(cx - hw, cy - hh, cx + hw, cy + hh, track.box_conf[t]),
        keypoints,
    }
}

/// Parses a label file whose frame range is defined by the file itself
/// (largest `end_frame` + 1) instead of recording metadata. Used for
/// evaluating prediction/ground-truth directories that carry no metadata.
pub fn load_timeline_auto(path: &Path, track: TrackKind) -> Result<SegmentTimeline, DatasetError> {
    let file = std::fs::File::open(path)
        .map_err(|source| DatasetError::Io { path: path.to_path_buf(), source })?;
    let mut text = String::new();
    std::io::Read::read_to_string(&mut BufReader::new(file), &mut text)
        .map_err(|source| DatasetError::Io { path: path.to_path_buf(), source })?;
    let inferred = text
        .lines()
        .filter_map(|line| line.split(',').nth(1))
        .filter_map(|field| field.trim().parse::<u32>().ok())
        .map(|end| end + 1)
        .max()
        .unwrap_or(0);
    Ok(ingest::parse_labels_reader(Cursor::new(text), path, track, inferred)?)
}
