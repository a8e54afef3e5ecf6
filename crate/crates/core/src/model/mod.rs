//! Domain types shared by every stage of the engine: label vocabularies,
//! the 21-landmark keypoint layout, per-frame detections, recording
//! metadata, and segment timelines.

mod frame;
mod geometry;
mod keypoints;
mod labels;
mod meta;
mod timeline;

pub use frame::{DetectionFrame, HandDetection};
pub use geometry::{BoundingBox, TissueRegion};
pub use keypoints::{Keypoint, KeypointId, KEYPOINT_COUNT};
pub use labels::{
    CameraView, GestureLabel, HandSide, Label, SkillGroup, ToolLabel, TrackKind,
    UnknownLabelError,
};
pub use meta::RecordingMeta;
pub use timeline::{Segment, SegmentTimeline, TimelineError};
