//! Recording-level metadata.

use serde::{Deserialize, Serialize};

use crate::model::geometry::TissueRegion;
use crate::model::labels::{CameraView, SkillGroup};

/// Descriptive metadata for one recording.
///
/// `fps` must be strictly positive and `frame_count` is the length of the
/// dense frame axis `0..frame_count` that detections and annotation tracks
/// are aligned to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordingMeta {
    pub recording_id: String,
    pub participant_id: String,
    pub group: SkillGroup,
    pub fps: f64,
    pub camera_view: CameraView,
    pub frame_count: u32,
    /// Annotated tissue area, when available for this recording. Required
    /// only by the distance-to-tissue proxy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tissue_region: Option<TissueRegion>,
}

impl RecordingMeta {
    /// Whether fps is positive and finite and the recording is non-empty.
    pub fn is_well_formed(&self) -> bool {
        self.fps.is_finite()
            && self.fps > 0.0
            && self.frame_count > 0
            && !self.recording_id.is_empty()
            && !self.participant_id.is_empty()
            && self.tissue_region.is_none_or(|r| r.is_well_formed())
    }
}
