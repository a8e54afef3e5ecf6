//! Per-frame detector output: at most one detection per hand side and per
//! tool class.

use std::collections::BTreeMap;

use crate::model::geometry::BoundingBox;
use crate::model::keypoints::{Keypoint, KeypointId, KEYPOINT_COUNT};
use crate::model::labels::{HandSide, ToolLabel};

/// A single detected hand: its bounding box and the full 21-landmark set.
#[derive(Debug, Clone, PartialEq)]
pub struct HandDetection {
    pub bbox: BoundingBox,
    pub keypoints: [Keypoint; KEYPOINT_COUNT],
}

impl HandDetection {
    /// The landmark sample for `id`.
    pub fn keypoint(&self, id: KeypointId) -> &Keypoint {
        &self.keypoints[id.index()]
    }
}

/// Detector output for one video frame.
///
/// Each hand side and each tool class appears at most once; absent entries
/// mean the detector produced nothing for that class in this frame. Frames
/// with no detections at all are valid and occur whenever a source stream
/// skips frame indices.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DetectionFrame {
    /// Zero-based frame index within the recording.
    pub frame_index: u32,
    pub left_hand: Option<HandDetection>,
    pub right_hand: Option<HandDetection>,
    /// Tool detections keyed by class. `ToolLabel::NoTool` never appears
    /// here: absence of a class is the representation of "no tool".
    pub tools: BTreeMap<ToolLabel, BoundingBox>,
}

impl DetectionFrame {
    /// An empty frame at `frame_index` with no detections.
    pub fn empty(frame_index: u32) -> DetectionFrame {
        DetectionFrame { frame_index, ..DetectionFrame::default() }
    }

    /// The hand detection for `side`, if any.
    pub fn hand(&self, side: HandSide) -> Option<&HandDetection> {
        match side {
            HandSide::Left => self.left_hand.as_ref(),
            HandSide::Right => self.right_hand.as_ref(),
        }
    }

    /// Mutable access to the hand slot for `side`.
    pub fn hand_mut(&mut self, side: HandSide) -> &mut Option<HandDetection> {
        match side {
            HandSide::Left => &mut self.left_hand,
            HandSide::Right => &mut self.right_hand,
        }
    }

    /// Whether the frame carries no detections at all.
    pub fn is_empty(&self) -> bool {
        self.left_hand.is_none() && self.right_hand.is_none() && self.tools.is_empty()
    }
}
