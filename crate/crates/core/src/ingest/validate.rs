//! Recording validation: cross-checks metadata, detections, and timelines
//! and reports findings per check. Validation never fails — problems are
//! entries in the report.

use serde::{Deserialize, Serialize};

use crate::model::{DetectionFrame, HandSide, RecordingMeta, SegmentTimeline};
use crate::stats::quartiles;

/// Outcome of one validation check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Warn,
    Fail,
}

/// One validation finding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    /// Short machine-readable check name.
    pub check: String,
    pub status: CheckStatus,
    /// Human-readable explanation or measurement.
    pub detail: String,
}

/// All findings for one recording.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub recording_id: String,
    pub entries: Vec<CheckEntry>,
}

impl ValidationReport {
    /// True when no check failed (warnings allowed).
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status != CheckStatus::Fail)
    }

    pub fn has_warnings(&self) -> bool {
        self.entries.iter().any(|e| e.status == CheckStatus::Warn)
    }
}

/// Cross-checks one recording. `timelines` carries whichever annotation
/// tracks exist for the recording; each is checked against the metadata's
/// frame count.
pub fn validate_recording(
    meta: &RecordingMeta,
    detections: &[DetectionFrame],
    timelines: &[&SegmentTimeline],
) -> ValidationReport {
    let mut entries = Vec::new();
    let mut push = |check: &str, status: CheckStatus, detail: String| {
        entries.push(CheckEntry { check: check.to_string(), status, detail });
    };

    if meta.fps > 0.0 && meta.fps.is_finite() {
        push("fps_positive", CheckStatus::Pass, format!("{} fps", meta.fps));
    } else {
        push("fps_positive", CheckStatus::Fail, format!("fps = {}", meta.fps));
    }

    if meta.frame_count > 0 {
        push(
            "frame_count_positive",
            CheckStatus::Pass,
            format!("{} frames", meta.frame_count),
        );
    } else {
        push("frame_count_positive", CheckStatus::Fail, "frame_count = 0".to_string());
    }

    // Detections must stay within the recording's frame range; a shorter
    // stream is fine (trailing frames simply lack detections).
    let out_of_range =
        detections.iter().filter(|f| f.frame_index >= meta.frame_count).count();
    if out_of_range == 0 {
        push(
            "detections_in_range",
            CheckStatus::Pass,
            format!("{} stream frames", detections.len()),
        );
    } else {
        let first_bad = detections
            .iter()
            .find(|f| f.frame_index >= meta.frame_count)
            .map(|f| f.frame_index)
            .unwrap_or_default();
        push(
            "detections_in_range",
            CheckStatus::Fail,
            format!(
                "{out_of_range} frame(s) at or beyond frame_count {}, first at {first_bad}",
                meta.frame_count
            ),
        );
    }

    for timeline in timelines {
        let check = format!("coverage_{}", timeline.track());
        if timeline.frame_count() == meta.frame_count {
            push(&check, CheckStatus::Pass, format!("covers {} frames", meta.frame_count));
        } else {
            push(
                &check,
                CheckStatus::Fail,
                format!(
                    "timeline covers {} frames, metadata says {}",
                    timeline.frame_count(),
                    meta.frame_count
                ),
            );
        }
    }

    for side in [HandSide::Left, HandSide::Right] {
        let present = detections.iter().filter(|f| f.hand(side).is_some()).count();
        let check = format!("hand_presence_{side}");
        if detections.is_empty() {
            push(&check, CheckStatus::Warn, "no detection frames".to_string());
        } else if present == 0 {
            push(&check, CheckStatus::Warn, format!("hand never detected: {side}"));
        } else {
            let rate = 100.0 * present as f64 / detections.len() as f64;
            push(&check, CheckStatus::Pass, format!("detected in {rate:.1}% of frames"));
        }
    }

    let confidences: Vec<f64> = detections
        .iter()
        .flat_map(|f| {
            [HandSide::Left, HandSide::Right]
                .into_iter()
                .filter_map(|side| f.hand(side))
                .flat_map(|h| h.keypoints.iter().map(|k| k.confidence))
                .collect::<Vec<_>>()
        })
        .collect();
    match quartiles(&confidences) {
        Some(q) => push(
            "keypoint_confidence",
            CheckStatus::Pass,
            format!(
                "min {:.3} / q1 {:.3} / median {:.3} / q3 {:.3} / max {:.3}",
                q.min, q.q1, q.median, q.q3, q.max
            ),
        ),
        None => push(
            "keypoint_confidence",
            CheckStatus::Warn,
            "no keypoints to summarize".to_string(),
        ),
    }

    ValidationReport { recording_id: meta.recording_id.clone(), entries }
}
