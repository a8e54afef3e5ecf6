//! Label-file I/O: comma-separated `start_frame,end_frame,label` rows, one
//! file per annotation track, with an optional header row. Rows must form
//! a contiguous cover of the recording's frame range.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::model::{Label, Segment, SegmentTimeline, TrackKind};

use super::IngestError;

/// Parses one label file into a validated timeline covering exactly
/// `frame_count` frames. The header row is optional and detected by a
/// non-numeric first field. Label spellings are normalized (case,
/// spaces/hyphens/underscores), so `Needle Passing` and `needle_passing`
/// both parse.
pub fn parse_labels_reader<R: BufRead>(
    reader: R,
    path: &Path,
    track: TrackKind,
    frame_count: u32,
) -> Result<SegmentTimeline, IngestError> {
    let mut segments: Vec<Segment> = Vec::new();
    for (line_index, line) in reader.lines().enumerate() {
        let line_no = line_index + 1;
        let text = line.map_err(|source| IngestError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let trimmed = text.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(IngestError::Parse {
                path: path.to_path_buf(),
                line: line_no,
                reason: format!("expected 3 comma-separated fields, got {}", fields.len()),
            });
        }
        let start = match fields[0].parse::<u32>() {
            Ok(v) => v,
            // A non-numeric first field on the first row is a header.
            Err(_) if line_no == 1 && segments.is_empty() => continue,
            Err(e) => {
                return Err(IngestError::Parse {
                    path: path.to_path_buf(),
                    line: line_no,
                    reason: format!("bad start frame {:?}: {e}", fields[0]),
                })
            }
        };
        let end = fields[1].parse::<u32>().map_err(|e| IngestError::Parse {
            path: path.to_path_buf(),
            line: line_no,
            reason: format!("bad end frame {:?}: {e}", fields[1]),
        })?;
        let label = Label::parse_for_track(fields[2], track).map_err(|source| {
            IngestError::UnknownLabel { path: path.to_path_buf(), line: line_no, source }
        })?;
        segments.push(Segment::new(label, start, end));
    }

    segments.sort_by_key(|s| s.start_frame);
    let timeline = SegmentTimeline::new(track, segments).map_err(|source| {
        IngestError::Timeline { path: path.to_path_buf(), source }
    })?;
    if timeline.frame_count() > frame_count {
        return Err(IngestError::RangeError {
            path: path.to_path_buf(),
            last_frame: timeline.frame_count() - 1,
            frame_count,
        });
    }
    if timeline.frame_count() < frame_count {
        return Err(IngestError::Timeline {
            path: path.to_path_buf(),
            source: crate::model::TimelineError::ShortCoverage {
                last_frame: timeline.frame_count().saturating_sub(1),
                frame_count,
            },
        });
    }
    Ok(timeline)
}

/// Parses a label file from disk. See [`parse_labels_reader`].
pub fn parse_labels(
    path: &Path,
    track: TrackKind,
    frame_count: u32,
) -> Result<SegmentTimeline, IngestError> {
    let file = std::fs::File::open(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_labels_reader(BufReader::new(file), path, track, frame_count)
}

/// Writes a timeline as `start_frame,end_frame,label` rows under a header,
/// using canonical snake_case label spellings.
pub fn write_labels(path: &Path, timeline: &SegmentTimeline) -> Result<(), IngestError> {
    let to_io = |source| IngestError::Io { path: path.to_path_buf(), source };
    let mut file = std::fs::File::create(path).map_err(to_io)?;
    let mut text = String::from("start_frame,end_frame,label\n");
    for seg in timeline.segments() {
        text.push_str(&format!(
            "{},{},{}\n",
            seg.start_frame,
            seg.end_frame,
            seg.label.as_str()
        ));
    }
    file.write_all(text.as_bytes()).map_err(to_io)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GestureLabel, TimelineError, ToolLabel};
    use std::io::Cursor;

    fn parse_str(
        text: &str,
        track: TrackKind,
        frame_count: u32,
    ) -> Result<SegmentTimeline, IngestError> {
        parse_labels_reader(Cursor::new(text), Path::new("labels.csv"), track, frame_count)
    }

    #[test]
    fn two_segments_cover_twenty_frames() {
        let tl = parse_str(
            "0,9,Needle Passing\n10,19,Pull The Suture\n",
            TrackKind::Gesture,
            20,
        )
        .unwrap();
        assert_eq!(tl.segments().len(), 2);
        assert_eq!(tl.segments()[0].label, Label::Gesture(GestureLabel::NeedlePassing));
        assert_eq!(tl.segments()[1].label, Label::Gesture(GestureLabel::PullTheSuture));
        assert_eq!(tl.frame_count(), 20);
    }

    #[test]
    fn header_rows_and_blank_lines_are_skipped() {
        let tl = parse_str(
            "start_frame,end_frame,label\n\n0,4,no_gesture\n5,9,needle_passing\n",
            TrackKind::Gesture,
            10,
        )
        .unwrap();
        assert_eq!(tl.segments().len(), 2);
    }

    #[test]
    fn rows_may_arrive_out_of_order() {
        let tl = parse_str(
            "5,9,needle_passing\n0,4,no_gesture\n",
            TrackKind::Gesture,
            10,
        )
        .unwrap();
        assert_eq!(tl.segments()[0].start_frame, 0);
    }

    #[test]
    fn gaps_are_timeline_errors() {
        let err = parse_str(
            "0,9,no_gesture\n11,19,needle_passing\n",
            TrackKind::Gesture,
            20,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            IngestError::Timeline { source: TimelineError::Gap { frame: 10 }, .. }
        ));
    }

    #[test]
    fn overlaps_are_timeline_errors() {
        let err = parse_str(
            "0,10,no_gesture\n10,19,needle_passing\n",
            TrackKind::Gesture,
            20,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            IngestError::Timeline { source: TimelineError::Overlap { frame: 10 }, .. }
        ));
    }

    #[test]
    fn unknown_labels_name_the_offending_line() {
        let err = parse_str("0,9,Sewing\n", TrackKind::Gesture, 10).unwrap_err();
        match err {
            IngestError::UnknownLabel { line, source, .. } => {
                assert_eq!(line, 1);
                assert_eq!(source.input, "Sewing");
            }
            other => panic!("expected UnknownLabel, got {other:?}"),
        }
    }

    #[test]
    fn vocabulary_is_per_track() {
        assert!(parse_str("0,9,needle_driver\n", TrackKind::Gesture, 10).is_err());
        let tl = parse_str("0,9,needle_driver\n", TrackKind::ToolRight, 10).unwrap();
        assert_eq!(tl.segments()[0].label, Label::Tool(ToolLabel::NeedleDriver));
    }

    #[test]
    fn coverage_must_match_the_recording_exactly() {
        let long = parse_str("0,24,no_gesture\n", TrackKind::Gesture, 20).unwrap_err();
        assert!(matches!(
            long,
            IngestError::RangeError { last_frame: 24, frame_count: 20, .. }
        ));
        let short = parse_str("0,14,no_gesture\n", TrackKind::Gesture, 20).unwrap_err();
        assert!(matches!(
            short,
            IngestError::Timeline { source: TimelineError::ShortCoverage { .. }, .. }
        ));
    }

    #[test]
    fn malformed_rows_are_parse_errors() {
        assert!(matches!(
            parse_str("0,9\n", TrackKind::Gesture, 10),
            Err(IngestError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_str("0,9,no_gesture\nx,19,needle_passing\n", TrackKind::Gesture, 20),
            Err(IngestError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_str("0,end,no_gesture\n", TrackKind::Gesture, 10),
            Err(IngestError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn written_files_parse_back_to_the_same_timeline() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gestures.csv");
        let tl = parse_str(
            "0,9,no_gesture\n10,29,needle_passing\n30,39,no_gesture\n",
            TrackKind::Gesture,
            40,
        )
        .unwrap();
        write_labels(&path, &tl).unwrap();
        let back = parse_labels(&path, TrackKind::Gesture, 40).unwrap();
        assert_eq!(back, tl);
    }
}
