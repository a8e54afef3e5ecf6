//! Surgical dexterity proxies: scalar, explainable motion metrics computed
//! per gesture occurrence from smoothed hand tracks, tool-usage timelines,
//! and the gesture timeline.

mod bindings;
mod compute;

use serde::{Deserialize, Serialize};

use crate::model::{KeypointId, Segment, SkillGroup, TissueRegion};
use crate::signal::HandTrack;

pub use bindings::{
    default_bindings, load_bindings, save_bindings, BindingError, HandSelector, ProxyBinding,
    Reducer,
};
pub use compute::{compute_proxy_samples, ProxyOptions, RecordingTracks, TracksError};

/// The six proxy families. `BackgroundTime` is the specialization of
/// duration to the background gesture, totaled per recording rather than
/// per occurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProxyKind {
    /// Seconds spent in one gesture occurrence.
    GestureDuration,
    /// Signed x-offset (pixels) between index and pinky MCP knuckles:
    /// positive when pronated, negative when supinated.
    HandOrientation,
    /// Euclidean distance (pixels) between thumb tip and index tip.
    ThumbIndexDistance,
    /// Distance (pixels) from the thumb/index fingertip midpoint to the
    /// tissue rectangle.
    FingersToTissueDistance,
    /// Mean keypoint speed (pixels/second) over a gesture occurrence.
    HandVelocity,
    /// Total seconds of the background gesture over a whole recording.
    BackgroundTime,
}

impl ProxyKind {
    pub const ALL: [ProxyKind; 6] = [
        ProxyKind::GestureDuration,
        ProxyKind::HandOrientation,
        ProxyKind::ThumbIndexDistance,
        ProxyKind::FingersToTissueDistance,
        ProxyKind::HandVelocity,
        ProxyKind::BackgroundTime,
    ];

    /// Canonical snake_case name used in files and reports.
    pub fn as_str(&self) -> &'static str {
        match self {
            ProxyKind::GestureDuration => "gesture_duration",
            ProxyKind::HandOrientation => "hand_orientation",
            ProxyKind::ThumbIndexDistance => "thumb_index_distance",
            ProxyKind::FingersToTissueDistance => "fingers_to_tissue_distance",
            ProxyKind::HandVelocity => "hand_velocity",
            ProxyKind::BackgroundTime => "background_time",
        }
    }

    /// Whether the proxy needs a hand selector to evaluate.
    pub fn needs_hand(&self) -> bool {
        !matches!(self, ProxyKind::GestureDuration | ProxyKind::BackgroundTime)
    }

    /// Measurement unit of the proxy value, for report headers.
    pub fn unit(&self) -> &'static str {
        match self {
            ProxyKind::GestureDuration | ProxyKind::BackgroundTime => "s",
            ProxyKind::HandOrientation => "px (signed)",
            ProxyKind::ThumbIndexDistance | ProxyKind::FingersToTissueDistance => "px",
            ProxyKind::HandVelocity => "px/s",
        }
    }
}

impl std::fmt::Display for ProxyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ProxyKind {
    type Err = crate::model::UnknownLabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let needle = s.trim().to_ascii_lowercase();
        ProxyKind::ALL
            .iter()
            .find(|k| k.as_str() == needle)
            .copied()
            .ok_or(crate::model::UnknownLabelError {
                vocabulary: "proxy kind",
                input: s.to_string(),
            })
    }
}

/// Errors from proxy evaluation. In batch computation these cause the
/// affected occurrence to be skipped and logged, never a fatal failure.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProxyError {
    #[error("frames-per-second must be positive, got {fps}")]
    InvalidFps { fps: f64 },
    #[error("required keypoint channel {keypoint:?} has no observations")]
    MissingChannel { keypoint: KeypointId },
    #[error("recording has no tissue region annotation")]
    MissingTissueRegion,
    #[error("segment over frames {start_frame}..={end_frame} is too short for a velocity")]
    DegenerateSegment { start_frame: u32, end_frame: u32 },
    #[error("keypoint set is empty")]
    EmptyKeypointSet,
    #[error("frame {frame} outside the track's {frame_count} frames")]
    FrameOutOfRange { frame: u32, frame_count: usize },
    #[error("no hand uses {tool} for at least {min_fraction} of the segment")]
    NoHandMatchesTool { tool: crate::model::ToolLabel, min_fraction: f64 },
}

/// One proxy measurement: a single gesture occurrence (or whole recording
/// for `BackgroundTime`) reduced to a scalar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProxySample {
    pub recording_id: String,
    pub participant_id: String,
    pub group: SkillGroup,
    pub kind: ProxyKind,
    pub gesture: crate::model::GestureLabel,
    /// Zero-based index of the gesture occurrence within the recording.
    pub occurrence_index: u32,
    pub value: f64,
    /// Frames (or frame deltas, for velocity) behind the value.
    pub n_frames_used: u32,
}

/// Duration of one segment in seconds: `(end - start + 1) / fps`.
pub fn gesture_duration(seg: &Segment, fps: f64) -> Result<f64, ProxyError> {
    if !fps.is_finite() || fps <= 0.0 {
        return Err(ProxyError::InvalidFps { fps });
    }
    Ok(f64::from(seg.len_frames()) / fps)
}

fn channel_point(
    track: &HandTrack,
    keypoint: KeypointId,
    frame: u32,
) -> Result<(f64, f64), ProxyError> {
    let k = keypoint.index();
    if track.channel_missing[k] {
        return Err(ProxyError::MissingChannel { keypoint });
    }
    let t = frame as usize;
    if t >= track.frame_count() {
        return Err(ProxyError::FrameOutOfRange { frame, frame_count: track.frame_count() });
    }
    Ok((track.kp_x[k][t], track.kp_y[k][t]))
}

/// Signed palm-orientation proxy at one frame: x of the index MCP minus x
/// of the pinky MCP. Positive values indicate pronation, values near zero
/// a sideways hand, negative values supination. Meaningful only on the
/// frontal camera view.
pub fn hand_orientation(track: &HandTrack, frame: u32) -> Result<f64, ProxyError> {
    let (index_x, _) = channel_point(track, KeypointId::IndexMcp, frame)?;
    let (pinky_x, _) = channel_point(track, KeypointId::PinkyMcp, frame)?;
    Ok(index_x - pinky_x)
}

/// Pinch aperture at one frame: Euclidean distance in pixels between the
/// thumb tip and the index tip.
pub fn thumb_index_distance(track: &HandTrack, frame: u32) -> Result<f64, ProxyError> {
    let (tx, ty) = channel_point(track, KeypointId::ThumbTip, frame)?;
    let (ix, iy) = channel_point(track, KeypointId::IndexTip, frame)?;
    Ok((tx - ix).hypot(ty - iy))
}

/// Distance at one frame from the midpoint of thumb tip and index tip to
/// the nearest point of the tissue rectangle; zero when the midpoint lies
/// inside it.
pub fn fingers_to_tissue_distance(
    track: &HandTrack,
    frame: u32,
    tissue: &TissueRegion,
) -> Result<f64, ProxyError> {
    let (tx, ty) = channel_point(track, KeypointId::ThumbTip, frame)?;
    let (ix, iy) = channel_point(track, KeypointId::IndexTip, frame)?;
    Ok(tissue.distance_to_point((tx + ix) / 2.0, (ty + iy) / 2.0))
}

/// Mean speed at one frame across `keypoints`: average over the set of
/// `‖p_k(frame) − p_k(frame − 1)‖ × fps`. Keypoint channels without any
/// observation are excluded; an entirely missing set is an error.
pub fn frame_speed(
    track: &HandTrack,
    frame: u32,
    fps: f64,
    keypoints: &[KeypointId],
) -> Result<f64, ProxyError> {
    if !fps.is_finite() || fps <= 0.0 {
        return Err(ProxyError::InvalidFps { fps });
    }
    if keypoints.is_empty() {
        return Err(ProxyError::EmptyKeypointSet);
    }
    if frame == 0 {
        return Err(ProxyError::FrameOutOfRange { frame: 0, frame_count: track.frame_count() });
    }
    let mut total = 0.0;
    let mut used = 0usize;
    let mut first_missing = None;
    for &kp in keypoints {
        match (channel_point(track, kp, frame), channel_point(track, kp, frame - 1)) {
            (Ok((x1, y1)), Ok((x0, y0))) => {
                total += (x1 - x0).hypot(y1 - y0) * fps;
                used += 1;
            }
            (Err(e @ ProxyError::FrameOutOfRange { .. }), _) => return Err(e),
            (Err(e), _) | (_, Err(e)) => first_missing = first_missing.or(Some(e)),
        }
    }
    if used == 0 {
        return Err(first_missing.expect("no keypoint usable implies a recorded error"));
    }
    Ok(total / used as f64)
}

/// Mean keypoint speed over one gesture occurrence, in pixels/second:
/// the average of [`frame_speed`] over frames `start+1 ..= end`.
pub fn hand_velocity(
    track: &HandTrack,
    seg: &Segment,
    fps: f64,
    keypoints: &[KeypointId],
) -> Result<f64, ProxyError> {
    if seg.len_frames() < 2 {
        return Err(ProxyError::DegenerateSegment {
            start_frame: seg.start_frame,
            end_frame: seg.end_frame,
        });
    }
    let mut total = 0.0;
    let mut frames = 0usize;
    for t in seg.start_frame + 1..=seg.end_frame {
        total += frame_speed(track, t, fps, keypoints)?;
        frames += 1;
    }
    Ok(total / frames as f64)
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;
    use crate::model::{CameraView, HandSide, RecordingMeta, KEYPOINT_COUNT};

    pub fn meta(frame_count: u32, fps: f64) -> RecordingMeta {
        RecordingMeta {
            recording_id: "r01".into(),
            participant_id: "p01".into(),
            group: SkillGroup::Novice,
            fps,
            camera_view: CameraView::Frontal,
            frame_count,
            tissue_region: None,
        }
    }

    /// Builds a fully-observed track whose keypoint positions come from a
    /// closure of (keypoint index, frame).
    pub fn track_from_fn(
        side: HandSide,
        meta: &RecordingMeta,
        position: impl Fn(usize, u32) -> (f64, f64),
    ) -> HandTrack {
        let n = meta.frame_count as usize;
        let mut kp_x = Vec::with_capacity(KEYPOINT_COUNT);
        let mut kp_y = Vec::with_capacity(KEYPOINT_COUNT);
        for k in 0..KEYPOINT_COUNT {
            let mut xs = Vec::with_capacity(n);
            let mut ys = Vec::with_capacity(n);
            for t in 0..meta.frame_count {
                let (x, y) = position(k, t);
                xs.push(x);
                ys.push(y);
            }
            kp_x.push(xs);
            kp_y.push(ys);
        }
        HandTrack {
            side,
            meta: meta.clone(),
            kp_x,
            kp_y,
            kp_conf: vec![vec![0.9; n]; KEYPOINT_COUNT],
            valid: vec![vec![true; n]; KEYPOINT_COUNT],
            channel_missing: vec![false; KEYPOINT_COUNT],
            box_center_x: vec![0.0; n],
            box_center_y: vec![0.0; n],
            box_width: vec![10.0; n],
            box_height: vec![10.0; n],
            box_valid: vec![true; n],
            box_conf: vec![0.9; n],
            box_missing: false,
        }
    }
}
