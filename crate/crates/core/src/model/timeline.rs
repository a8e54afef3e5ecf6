//! Segment timelines: run-length annotation tracks over a dense frame axis.

use serde::{Deserialize, Serialize};

use crate::model::labels::{Label, TrackKind};

/// A maximal run of identically-labeled frames. Frame bounds are inclusive,
/// so a segment covers `end_frame - start_frame + 1` frames.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub label: Label,
    pub start_frame: u32,
    pub end_frame: u32,
}

impl Segment {
    pub fn new(label: impl Into<Label>, start_frame: u32, end_frame: u32) -> Segment {
        Segment { label: label.into(), start_frame, end_frame }
    }

    /// Number of frames covered (inclusive bounds).
    pub fn len_frames(&self) -> u32 {
        self.end_frame - self.start_frame + 1
    }
}

/// Violations of the timeline invariants.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TimelineError {
    /// A timeline (or frame-label sequence) must contain at least one entry.
    #[error("timeline has no segments")]
    Empty,
    /// Coverage is not contiguous: no segment covers `frame`.
    #[error("gap in timeline coverage at frame {frame}")]
    Gap { frame: u32 },
    /// Two segments both claim `frame`.
    #[error("overlapping segments at frame {frame}")]
    Overlap { frame: u32 },
    /// Adjacent segments carry the same label and should be one segment.
    #[error("adjacent segments share label {label:?} at frame {frame}; runs must be merged")]
    Merge { label: Label, frame: u32 },
    /// A segment's bounds are inverted.
    #[error("segment over frames {start_frame}..={end_frame} has end before start")]
    InvertedSegment { start_frame: u32, end_frame: u32 },
    /// A segment label is drawn from the wrong vocabulary for the track.
    #[error("label {label:?} does not belong to track {track:?}")]
    TrackMismatch { track: TrackKind, label: Label },
    /// The timeline covers more frames than the recording has.
    #[error("timeline covers frames up to {last_frame} but the recording has {frame_count}")]
    ExceedsFrameCount { last_frame: u32, frame_count: u32 },
    /// The timeline covers fewer frames than the recording has.
    #[error("timeline ends at frame {last_frame} but the recording has {frame_count} frames")]
    ShortCoverage { last_frame: u32, frame_count: u32 },
}

/// One annotation track of a recording: an ordered, contiguous,
/// non-overlapping cover of the frame axis starting at frame 0, where no
/// two adjacent segments share a label.
///
/// The invariants are established at construction and preserved by every
/// operation, so holding a `SegmentTimeline` is proof of well-formedness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentTimeline {
    track: TrackKind,
    segments: Vec<Segment>,
}

impl SegmentTimeline {
    /// Builds a timeline after checking every invariant. Segments must be
    /// pre-sorted by start frame; the first must start at frame 0.
    pub fn new(track: TrackKind, segments: Vec<Segment>) -> Result<SegmentTimeline, TimelineError> {
        if segments.is_empty() {
            return Err(TimelineError::Empty);
        }
        for seg in &segments {
            if seg.end_frame < seg.start_frame {
                return Err(TimelineError::InvertedSegment {
                    start_frame: seg.start_frame,
                    end_frame: seg.end_frame,
                });
            }
            if !seg.label.belongs_to(track) {
                return Err(TimelineError::TrackMismatch { track, label: seg.label });
            }
        }
        if segments[0].start_frame != 0 {
            return Err(TimelineError::Gap { frame: 0 });
        }
        for pair in segments.windows(2) {
            let (prev, next) = (&pair[0], &pair[1]);
            if next.start_frame > prev.end_frame + 1 {
                return Err(TimelineError::Gap { frame: prev.end_frame + 1 });
            }
            if next.start_frame <= prev.end_frame {
                return Err(TimelineError::Overlap { frame: next.start_frame });
            }
            if next.label == prev.label {
                return Err(TimelineError::Merge { label: next.label, frame: next.start_frame });
            }
        }
        Ok(SegmentTimeline { track, segments })
    }

    pub fn track(&self) -> TrackKind {
        self.track
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Number of frames covered: the timeline spans `0..frame_count()`.
    pub fn frame_count(&self) -> u32 {
        self.segments.last().expect("timelines are non-empty").end_frame + 1
    }

    /// The sequence of segment labels, in temporal order.
    pub fn label_sequence(&self) -> Vec<Label> {
        self.segments.iter().map(|s| s.label).collect()
    }

    /// The segment covering `frame`, if the frame is in range.
    pub fn label_at(&self, frame: u32) -> Option<Label> {
        let idx = self
            .segments
            .partition_point(|s| s.end_frame < frame);
        self.segments.get(idx).filter(|s| s.start_frame <= frame).map(|s| s.label)
    }

    /// Segments carrying `label`, in temporal order.
    pub fn occurrences_of(&self, label: Label) -> impl Iterator<Item = &Segment> {
        self.segments.iter().filter(move |s| s.label == label)
    }

    /// Expands the timeline to one label per frame. `frame_count` must
    /// match the covered range exactly: a shorter timeline is a coverage
    /// gap and a longer one exceeds the recording.
    pub fn to_frame_labels(&self, frame_count: u32) -> Result<Vec<Label>, TimelineError> {
        let covered = self.frame_count();
        if covered > frame_count {
            return Err(TimelineError::ExceedsFrameCount {
                last_frame: covered - 1,
                frame_count,
            });
        }
        if covered < frame_count {
            return Err(TimelineError::Gap { frame: covered });
        }
        let mut labels = Vec::with_capacity(frame_count as usize);
        for seg in &self.segments {
            labels.extend(std::iter::repeat_n(seg.label, seg.len_frames() as usize));
        }
        Ok(labels)
    }

    /// Run-length encodes a per-frame label sequence into a timeline.
    /// Errors on empty input or labels from the wrong vocabulary.
    pub fn from_frame_labels(track: TrackKind, labels: &[Label]) -> Result<SegmentTimeline, TimelineError> {
        if labels.is_empty() {
            return Err(TimelineError::Empty);
        }
        let mut segments = Vec::new();
        let mut start = 0u32;
        for (i, label) in labels.iter().enumerate() {
            let i = i as u32;
            if i + 1 == labels.len() as u32 || labels[i as usize + 1] != *label {
                segments.push(Segment { label: *label, start_frame: start, end_frame: i });
                start = i + 1;
            }
        }
        SegmentTimeline::new(track, segments)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::labels::{GestureLabel, ToolLabel};
    use proptest::prelude::*;

    fn g(label: GestureLabel, start: u32, end: u32) -> Segment {
        Segment::new(label, start, end)
    }

    #[test]
    fn a_valid_timeline_passes_construction() {
        let tl = SegmentTimeline::new(
            TrackKind::Gesture,
            vec![
                g(GestureLabel::NoGesture, 0, 9),
                g(GestureLabel::NeedlePassing, 10, 24),
                g(GestureLabel::NoGesture, 25, 29),
            ],
        )
        .unwrap();
        assert_eq!(tl.frame_count(), 30);
        assert_eq!(tl.segments().len(), 3);
    }

    #[test]
    fn gaps_overlaps_and_unmerged_runs_are_rejected() {
        let gap = SegmentTimeline::new(
            TrackKind::Gesture,
            vec![g(GestureLabel::NoGesture, 0, 9), g(GestureLabel::NeedlePassing, 11, 20)],
        );
        assert_eq!(gap.unwrap_err(), TimelineError::Gap { frame: 10 });

        let overlap = SegmentTimeline::new(
            TrackKind::Gesture,
            vec![g(GestureLabel::NoGesture, 0, 9), g(GestureLabel::NeedlePassing, 9, 20)],
        );
        assert_eq!(overlap.unwrap_err(), TimelineError::Overlap { frame: 9 });

        let merge = SegmentTimeline::new(
            TrackKind::Gesture,
            vec![g(GestureLabel::NoGesture, 0, 9), g(GestureLabel::NoGesture, 10, 20)],
        );
        assert_eq!(
            merge.unwrap_err(),
            TimelineError::Merge { label: GestureLabel::NoGesture.into(), frame: 10 }
        );
    }

    #[test]
    fn first_segment_must_start_at_frame_zero() {
        let err = SegmentTimeline::new(TrackKind::Gesture, vec![g(GestureLabel::NoGesture, 1, 9)]);
        assert_eq!(err.unwrap_err(), TimelineError::Gap { frame: 0 });
    }

    #[test]
    fn empty_and_inverted_segments_are_rejected() {
        assert_eq!(
            SegmentTimeline::new(TrackKind::Gesture, vec![]).unwrap_err(),
            TimelineError::Empty
        );
        assert_eq!(
            SegmentTimeline::new(TrackKind::Gesture, vec![g(GestureLabel::NoGesture, 5, 2)])
                .unwrap_err(),
            TimelineError::InvertedSegment { start_frame: 5, end_frame: 2 }
        );
    }

    #[test]
    fn track_vocabulary_is_enforced() {
        let err = SegmentTimeline::new(
            TrackKind::Gesture,
            vec![Segment::new(ToolLabel::Scissors, 0, 9)],
        );
        assert!(matches!(err.unwrap_err(), TimelineError::TrackMismatch { .. }));
    }

    #[test]
    fn expansion_produces_one_label_per_frame() {
        let tl = SegmentTimeline::new(
            TrackKind::Gesture,
            vec![g(GestureLabel::NoGesture, 0, 2), g(GestureLabel::CutTheSuture, 3, 4)],
        )
        .unwrap();
        let labels = tl.to_frame_labels(5).unwrap();
        assert_eq!(labels.len(), 5);
        assert_eq!(labels[2], GestureLabel::NoGesture.into());
        assert_eq!(labels[3], GestureLabel::CutTheSuture.into());
    }

    #[test]
    fn expansion_rejects_mismatched_frame_counts() {
        let tl = SegmentTimeline::new(TrackKind::Gesture, vec![g(GestureLabel::NoGesture, 0, 4)])
            .unwrap();
        assert_eq!(tl.to_frame_labels(7).unwrap_err(), TimelineError::Gap { frame: 5 });
        assert_eq!(
            tl.to_frame_labels(3).unwrap_err(),
            TimelineError::ExceedsFrameCount { last_frame: 4, frame_count: 3 }
        );
    }

    #[test]
    fn run_length_encoding_merges_runs_and_rejects_empty_input() {
        let labels: Vec<Label> = [
            GestureLabel::NoGesture,
            GestureLabel::NoGesture,
            GestureLabel::NeedlePassing,
            GestureLabel::NoGesture,
        ]
        .iter()
        .map(|&l| l.into())
        .collect();
        let tl = SegmentTimeline::from_frame_labels(TrackKind::Gesture, &labels).unwrap();
        assert_eq!(tl.segments().len(), 3);
        assert_eq!(tl.segments()[0], g(GestureLabel::NoGesture, 0, 1));
        assert_eq!(
            SegmentTimeline::from_frame_labels(TrackKind::Gesture, &[]).unwrap_err(),
            TimelineError::Empty
        );
    }

    #[test]
    fn label_at_uses_binary_search_over_segments() {
        let tl = SegmentTimeline::new(
            TrackKind::Gesture,
            vec![g(GestureLabel::NoGesture, 0, 9), g(GestureLabel::LayTheKnot, 10, 19)],
        )
        .unwrap();
        assert_eq!(tl.label_at(0), Some(GestureLabel::NoGesture.into()));
        assert_eq!(tl.label_at(9), Some(GestureLabel::NoGesture.into()));
        assert_eq!(tl.label_at(10), Some(GestureLabel::LayTheKnot.into()));
        assert_eq!(tl.label_at(19), Some(GestureLabel::LayTheKnot.into()));
        assert_eq!(tl.label_at(20), None);
    }

    #[test]
    fn occurrences_are_reported_in_temporal_order() {
        let tl = SegmentTimeline::new(
            TrackKind::Gesture,
            vec![
                g(GestureLabel::NoGesture, 0, 4),
                g(GestureLabel::NeedlePassing, 5, 9),
                g(GestureLabel::NoGesture, 10, 14),
                g(GestureLabel::NeedlePassing, 15, 19),
            ],
        )
        .unwrap();
        let starts: Vec<u32> = tl
            .occurrences_of(GestureLabel::NeedlePassing.into())
            .map(|s| s.start_frame)
            .collect();
        assert_eq!(starts, vec![5, 15]);
    }

    /// Strategy: a random per-frame gesture label sequence of length 1..=64.
    fn frame_label_seq() -> impl Strategy<Value = Vec<Label>> {
        proptest::collection::vec(
            proptest::sample::select(GestureLabel::ALL).prop_map(Label::from),
            1..=64,
        )
    }

    proptest! {
        /// Expansion and run-length encoding are mutually inverse.
        #[test]
        fn frames_and_segments_round_trip(labels in frame_label_seq()) {
            let tl = SegmentTimeline::from_frame_labels(TrackKind::Gesture, &labels).unwrap();
            let expanded = tl.to_frame_labels(labels.len() as u32).unwrap();
            prop_assert_eq!(&expanded, &labels);
            let tl2 = SegmentTimeline::from_frame_labels(TrackKind::Gesture, &expanded).unwrap();
            prop_assert_eq!(tl2, tl);
        }

        /// RLE output always satisfies the timeline invariants re-checked
        /// through the validating constructor.
        #[test]
        fn rle_output_is_always_a_valid_timeline(labels in frame_label_seq()) {
            let tl = SegmentTimeline::from_frame_labels(TrackKind::Gesture, &labels).unwrap();
            let rebuilt = SegmentTimeline::new(TrackKind::Gesture, tl.segments().to_vec());
            prop_assert!(rebuilt.is_ok());
        }
    }
}
