//! Batch proxy computation over a processed recording. Occurrences that
//! cannot be evaluated (no matching hand, missing channels, degenerate
//! segments, no tissue region) are skipped with a log entry rather than
//! failing the recording.

use log::{debug, warn};

use crate::model::{
    CameraView, HandSide, KeypointId, Label, RecordingMeta, Segment, SegmentTimeline,
    TissueRegion, ToolLabel, TrackKind,
};
use crate::signal::HandTrack;

use super::bindings::{HandSelector, ProxyBinding};
use super::{
    fingers_to_tissue_distance, frame_speed, gesture_duration, hand_orientation,
    thumb_index_distance, ProxyError, ProxyKind, ProxySample,
};

/// A recording after signal processing: smoothed tracks for both hands
/// plus the gesture and per-hand tool timelines, all over the same frame
/// range.
#[derive(Debug, Clone)]
pub struct RecordingTracks {
    pub meta: RecordingMeta,
    pub left: HandTrack,
    pub right: HandTrack,
    pub gesture: SegmentTimeline,
    pub tool_left: SegmentTimeline,
    pub tool_right: SegmentTimeline,
}

impl RecordingTracks {
    pub fn hand(&self, side: HandSide) -> &HandTrack {
        match side {
            HandSide::Left => &self.left,
            HandSide::Right => &self.right,
        }
    }

    pub fn tool_timeline(&self, side: HandSide) -> &SegmentTimeline {
        match side {
            HandSide::Left => &self.tool_left,
            HandSide::Right => &self.tool_right,
        }
    }

    /// Checks that every timeline and track covers exactly the recording's
    /// frame range and that the timelines are on the expected tracks.
    pub fn validate(&self) -> Result<(), TracksError> {
        let n = self.meta.frame_count;
        for (what, got) in [
            ("left hand track", self.left.frame_count() as u32),
            ("right hand track", self.right.frame_count() as u32),
            ("gesture timeline", self.gesture.frame_count()),
            ("left tool timeline", self.tool_left.frame_count()),
            ("right tool timeline", self.tool_right.frame_count()),
        ] {
            if got != n {
                return Err(TracksError::FrameCountMismatch { what, got, expected: n });
            }
        }
        for (timeline, expected) in [
            (&self.gesture, TrackKind::Gesture),
            (&self.tool_left, TrackKind::ToolLeft),
            (&self.tool_right, TrackKind::ToolRight),
        ] {
            if timeline.track() != expected {
                return Err(TracksError::WrongTrack { got: timeline.track(), expected });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TracksError {
    #[error("{what} covers {got} frames, recording has {expected}")]
    FrameCountMismatch { what: &'static str, got: u32, expected: u32 },
    #[error("timeline is on track {got}, expected {expected}")]
    WrongTrack { got: TrackKind, expected: TrackKind },
}

/// Knobs for batch proxy computation.
#[derive(Debug, Clone, PartialEq)]
pub struct ProxyOptions {
    /// Minimum fraction of segment frames a hand's tool timeline must
    /// match the requested tool for that hand to qualify.
    pub tool_min_fraction: f64,
    /// Side chosen when both hands qualify with equal fractions.
    pub tool_tie_break: HandSide,
    /// Rectangle used when a recording has no tissue annotation.
    pub tissue_fallback: Option<TissueRegion>,
}

impl Default for ProxyOptions {
    fn default() -> Self {
        ProxyOptions {
            tool_min_fraction: 0.5,
            tool_tie_break: HandSide::Right,
            tissue_fallback: None,
        }
    }
}

/// Fraction of `seg`'s frames on which `timeline` is labeled `tool`.
fn tool_fraction(timeline: &SegmentTimeline, seg: &Segment, tool: ToolLabel) -> f64 {
    let want = Label::Tool(tool);
    let mut matching = 0u32;
    for t in seg.start_frame..=seg.end_frame {
        if timeline.label_at(t) == Some(want) {
            matching += 1;
        }
    }
    f64::from(matching) / f64::from(seg.len_frames())
}

/// Resolves a binding's hand selector for one gesture occurrence.
fn select_hand<'a>(
    tracks: &'a RecordingTracks,
    seg: &Segment,
    selector: &HandSelector,
    options: &ProxyOptions,
) -> Result<&'a HandTrack, ProxyError> {
    match selector {
        HandSelector::FixedSide { side } => Ok(tracks.hand(*side)),
        HandSelector::ToolHand { tool } => {
            let left = tool_fraction(&tracks.tool_left, seg, *tool);
            let right = tool_fraction(&tracks.tool_right, seg, *tool);
            let qualifies =
                |f: f64| f >= options.tool_min_fraction && f > 0.0;
            let side = match (qualifies(left), qualifies(right)) {
                (true, false) => HandSide::Left,
                (false, true) => HandSide::Right,
                (true, true) => {
                    if left > right {
                        HandSide::Left
                    } else if right > left {
                        HandSide::Right
                    } else {
                        options.tool_tie_break
                    }
                }
                (false, false) => {
                    return Err(ProxyError::NoHandMatchesTool {
                        tool: *tool,
                        min_fraction: options.tool_min_fraction,
                    })
                }
            };
            Ok(tracks.hand(side))
        }
    }
}

/// Evaluates one per-frame proxy over all frames of a segment.
fn per_frame_values(
    kind: ProxyKind,
    track: &HandTrack,
    seg: &Segment,
    tissue: Option<&TissueRegion>,
) -> Result<Vec<f64>, ProxyError> {
    let mut values = Vec::with_capacity(seg.len_frames() as usize);
    for t in seg.start_frame..=seg.end_frame {
        let v = match kind {
            ProxyKind::HandOrientation => hand_orientation(track, t)?,
            ProxyKind::ThumbIndexDistance => thumb_index_distance(track, t)?,
            ProxyKind::FingersToTissueDistance => {
                let region = tissue.ok_or(ProxyError::MissingTissueRegion)?;
                fingers_to_tissue_distance(track, t, region)?
            }
            _ => unreachable!("not a per-frame proxy"),
        };
        values.push(v);
    }
    Ok(values)
}

/// Computes every bound proxy over one recording. Returns samples in
/// binding order, occurrences in temporal order; skipped occurrences are
/// logged at `warn` (data problems) or `debug` (absent gestures).
pub fn compute_proxy_samples(
    tracks: &RecordingTracks,
    bindings: &[ProxyBinding],
    options: &ProxyOptions,
) -> Vec<ProxySample> {
    let meta = &tracks.meta;
    let mut samples = Vec::new();

    let sample = |kind: ProxyKind, gesture, occurrence_index, value, n_frames_used| ProxySample {
        recording_id: meta.recording_id.clone(),
        participant_id: meta.participant_id.clone(),
        group: meta.group,
        kind,
        gesture,
        occurrence_index,
        value,
        n_frames_used,
    };

    for binding in bindings {
        if let Err(e) = binding.validate() {
            warn!("{}: skipping invalid binding: {e}", meta.recording_id);
            continue;
        }
        if binding.kind == ProxyKind::HandOrientation && meta.camera_view != CameraView::Frontal {
            warn!(
                "{}: hand_orientation assumes the frontal view, camera is {}",
                meta.recording_id, meta.camera_view
            );
        }

        let occurrences: Vec<&Segment> =
            tracks.gesture.occurrences_of(Label::Gesture(binding.gesture)).collect();
        if occurrences.is_empty() {
            debug!(
                "{}: no {} occurrence, nothing for {}",
                meta.recording_id, binding.gesture, binding.kind
            );
            continue;
        }

        match binding.kind {
            ProxyKind::BackgroundTime => {
                let mut total = 0.0;
                let mut frames = 0u32;
                for seg in &occurrences {
                    match gesture_duration(seg, meta.fps) {
                        Ok(d) => {
                            total += d;
                            frames += seg.len_frames();
                        }
                        Err(e) => {
                            warn!("{}: background_time: {e}", meta.recording_id);
                        }
                    }
                }
                if frames > 0 {
                    samples.push(sample(binding.kind, binding.gesture, 0, total, frames));
                }
            }
            ProxyKind::GestureDuration => {
                for (i, seg) in occurrences.iter().enumerate() {
                    match gesture_duration(seg, meta.fps) {
                        Ok(d) => samples.push(sample(
                            binding.kind,
                            binding.gesture,
                            i as u32,
                            d,
                            seg.len_frames(),
                        )),
                        Err(e) => {
                            warn!("{}: gesture_duration: {e}", meta.recording_id)
                        }
                    }
                }
            }
            ProxyKind::HandVelocity => {
                let selector = binding.hand.as_ref().expect("validated above");
                let keypoints: &[KeypointId] =
                    binding.keypoints.as_deref().unwrap_or(&KeypointId::ALL);
                for (i, seg) in occurrences.iter().enumerate() {
                    let result = select_hand(tracks, seg, selector, options).and_then(|track| {
                        if seg.len_frames() < 2 {
                            return Err(ProxyError::DegenerateSegment {
                                start_frame: seg.start_frame,
                                end_frame: seg.end_frame,
                            });
                        }
                        let mut speeds = Vec::with_capacity(seg.len_frames() as usize - 1);
                        for t in seg.start_frame + 1..=seg.end_frame {
                            speeds.push(frame_speed(track, t, meta.fps, keypoints)?);
                        }
                        Ok(speeds)
                    });
                    match result {
                        Ok(mut speeds) => {
                            let n = speeds.len() as u32;
                            let value = binding
                                .reducer
                                .reduce(&mut speeds)
                                .expect("speeds is non-empty for len >= 2");
                            if value.is_finite() {
                                samples.push(sample(
                                    binding.kind,
                                    binding.gesture,
                                    i as u32,
                                    value,
                                    n,
                                ));
                            } else {
                                warn!(
                                    "{}: {} occurrence {i}: non-finite value, skipped",
                                    meta.recording_id, binding.kind
                                );
                            }
                        }
                        Err(e) => warn!(
                            "{}: {} occurrence {i}: {e}, skipped",
                            meta.recording_id, binding.kind
                        ),
                    }
                }
            }
            ProxyKind::HandOrientation
            | ProxyKind::ThumbIndexDistance
            | ProxyKind::FingersToTissueDistance => {
                let selector = binding.hand.as_ref().expect("validated above");
                let tissue = meta.tissue_region.or(options.tissue_fallback);
                for (i, seg) in occurrences.iter().enumerate() {
                    let result = select_hand(tracks, seg, selector, options).and_then(|track| {
                        per_frame_values(binding.kind, track, seg, tissue.as_ref())
                    });
                    match result {
                        Ok(mut values) => {
                            let n = values.len() as u32;
                            let Some(value) = binding.reducer.reduce(&mut values) else {
                                warn!(
                                    "{}: {} occurrence {i}: zero usable frames, skipped",
                                    meta.recording_id, binding.kind
                                );
                                continue;
                            };
                            if value.is_finite() {
                                samples.push(sample(
                                    binding.kind,
                                    binding.gesture,
                                    i as u32,
                                    value,
                                    n,
                                ));
                            } else {
                                warn!(
                                    "{}: {} occurrence {i}: non-finite value, skipped",
                                    meta.recording_id, binding.kind
                                );
                            }
                        }
                        Err(e) => warn!(
                            "{}: {} occurrence {i}: {e}, skipped",
                            meta.recording_id, binding.kind
                        ),
                    }
                }
            }
        }
    }
    samples
}
