//! Detection-stream I/O: UTF-8 files with one JSON record per line, one
//! record per frame that carries any detection. The parser materializes a
//! dense frame axis (absent frames become empty frames) and enforces the
//! one-detection-per-class rule.
//!
//! Streams produced by the smoothing stage carry a `{"smoothed":true}`
//! header object on the first line; raw streams have no header. Both forms
//! parse with the same functions.

use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::model::{
    BoundingBox, DetectionFrame, HandDetection, HandSide, Keypoint, ToolLabel, KEYPOINT_COUNT,
};

use super::IngestError;

/// Wire format of one hand entry.
#[derive(Debug, Serialize, Deserialize)]
struct HandRecord {
    side: String,
    /// `[x_min, y_min, x_max, y_max, confidence]`.
    #[serde(rename = "box")]
    bbox: [f64; 5],
    /// Exactly 21 `[x, y, confidence]` triples.
    kps: Vec<[f64; 3]>,
}

/// Wire format of one tool entry.
#[derive(Debug, Serialize, Deserialize)]
struct ToolRecord {
    class: String,
    #[serde(rename = "box")]
    bbox: [f64; 5],
}

/// Wire format of one line. Unknown fields are ignored on input.
#[derive(Debug, Serialize, Deserialize)]
struct StreamRecord {
    frame: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    hands: Vec<HandRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    tools: Vec<ToolRecord>,
}

/// Optional first-line header. `deny_unknown_fields` keeps malformed frame
/// records from being mistaken for headers.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StreamHeader {
    smoothed: bool,
}

/// A parsed detection stream: the dense frame axis plus whether the file
/// declared itself smoothed.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionStream {
    pub smoothed: bool,
    pub frames: Vec<DetectionFrame>,
}

fn bbox_of(values: [f64; 5]) -> BoundingBox {
    BoundingBox::new(values[0], values[1], values[2], values[3], values[4])
}

fn bbox_to_array(b: &BoundingBox) -> [f64; 5] {
    [b.x_min, b.y_min, b.x_max, b.y_max, b.confidence]
}

fn hand_of(record: HandRecord, path: &Path, line: usize) -> Result<(HandSide, HandDetection), IngestError> {
    let side: HandSide = record.side.parse().map_err(|e| IngestError::Parse {
        path: path.to_path_buf(),
        line,
        reason: format!("{e}"),
    })?;
    if record.kps.len() != KEYPOINT_COUNT {
        return Err(IngestError::Parse {
            path: path.to_path_buf(),
            line,
            reason: format!(
                "hand record has {} keypoints, expected {KEYPOINT_COUNT}",
                record.kps.len()
            ),
        });
    }
    let mut keypoints = [Keypoint::new(0.0, 0.0, 0.0); KEYPOINT_COUNT];
    for (slot, [x, y, conf]) in keypoints.iter_mut().zip(record.kps) {
        *slot = Keypoint::new(x, y, conf);
    }
    Ok((side, HandDetection { bbox: bbox_of(record.bbox), keypoints }))
}

fn frame_of(record: StreamRecord, path: &Path, line: usize) -> Result<DetectionFrame, IngestError> {
    let mut frame = DetectionFrame::empty(record.frame);
    for hand_record in record.hands {
        let (side, detection) = hand_of(hand_record, path, line)?;
        let slot = frame.hand_mut(side);
        // Several detections of one side: keep the highest confidence.
        let replace = slot
            .as_ref()
            .is_none_or(|existing| detection.bbox.confidence > existing.bbox.confidence);
        if replace {
            *slot = Some(detection);
        }
    }
    for tool_record in record.tools {
        let class: ToolLabel = tool_record.class.parse().map_err(|e| IngestError::Parse {
            path: path.to_path_buf(),
            line,
            reason: format!("{e}"),
        })?;
        if class == ToolLabel::NoTool {
            return Err(IngestError::Parse {
                path: path.to_path_buf(),
                line,
                reason: "streams encode 'no tool' by omission, not as a detection class".into(),
            });
        }
        let bbox = bbox_of(tool_record.bbox);
        let entry = frame.tools.entry(class);
        use std::collections::btree_map::Entry;
        match entry {
            Entry::Vacant(v) => {
                v.insert(bbox);
            }
            Entry::Occupied(mut o) => {
                if bbox.confidence > o.get().confidence {
                    o.insert(bbox);
                }
            }
        }
    }
    Ok(frame)
}

/// Parses a detection stream from any reader, with or without a header
/// line. Frame indices must be strictly increasing; frames missing from
/// the stream come back as empty frames, so the result covers
/// `0..=max_frame` densely. An empty input yields an empty frame vector.
pub fn parse_stream_reader<R: BufRead>(
    reader: R,
    path: &Path,
) -> Result<DetectionStream, IngestError> {
    let mut smoothed = false;
    let mut first_content = true;
    let mut sparse: Vec<DetectionFrame> = Vec::new();
    for (line_index, line) in reader.lines().enumerate() {
        let line_no = line_index + 1;
        let text = line.map_err(|source| IngestError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        if text.trim().is_empty() {
            continue;
        }
        if first_content {
            first_content = false;
            if let Ok(header) = serde_json::from_str::<StreamHeader>(&text) {
                smoothed = header.smoothed;
                continue;
            }
        }
        let record: StreamRecord =
            serde_json::from_str(&text).map_err(|e| IngestError::Parse {
                path: path.to_path_buf(),
                line: line_no,
                reason: format!("{e}"),
            })?;
        if let Some(last) = sparse.last() {
            if record.frame == last.frame_index {
                return Err(IngestError::DuplicateFrame {
                    path: path.to_path_buf(),
                    line: line_no,
                    frame: record.frame,
                });
            }
            if record.frame < last.frame_index {
                return Err(IngestError::NonMonotoneFrame {
                    path: path.to_path_buf(),
                    line: line_no,
                    frame: record.frame,
                    previous: last.frame_index,
                });
            }
        }
        sparse.push(frame_of(record, path, line_no)?);
    }

    let Some(last) = sparse.last() else {
        return Ok(DetectionStream { smoothed, frames: Vec::new() });
    };
    let mut dense = Vec::with_capacity(last.frame_index as usize + 1);
    let mut next = sparse.iter().peekable();
    for frame_index in 0..=last.frame_index {
        if next.peek().is_some_and(|f| f.frame_index == frame_index) {
            dense.push(next.next().unwrap().clone());
        } else {
            dense.push(DetectionFrame::empty(frame_index));
        }
    }
    Ok(DetectionStream { smoothed, frames: dense })
}

/// Parses the frames of a detection stream, dropping the header flag. See
/// [`parse_stream_reader`].
pub fn parse_detections_reader<R: BufRead>(
    reader: R,
    path: &Path,
) -> Result<Vec<DetectionFrame>, IngestError> {
    parse_stream_reader(reader, path).map(|stream| stream.frames)
}

/// Parses a detection stream file. See [`parse_stream_reader`].
pub fn parse_stream(path: &Path) -> Result<DetectionStream, IngestError> {
    let file = std::fs::File::open(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_stream_reader(BufReader::new(file), path)
}

/// Parses the frames of a detection stream file. See [`parse_stream`].
pub fn parse_detections(path: &Path) -> Result<Vec<DetectionFrame>, IngestError> {
    parse_stream(path).map(|stream| stream.frames)
}

fn record_of(frame: &DetectionFrame) -> StreamRecord {
    let hand_record = |side: HandSide, hand: &HandDetection| HandRecord {
        side: side.as_str().to_string(),
        bbox: bbox_to_array(&hand.bbox),
        kps: hand.keypoints.iter().map(|k| [k.x, k.y, k.confidence]).collect(),
    };
    StreamRecord {
        frame: frame.frame_index,
        hands: [HandSide::Left, HandSide::Right]
            .into_iter()
            .filter_map(|side| frame.hand(side).map(|h| hand_record(side, h)))
            .collect(),
        tools: frame
            .tools
            .iter()
            .map(|(class, bbox)| ToolRecord {
                class: class.as_str().to_string(),
                bbox: bbox_to_array(bbox),
            })
            .collect(),
    }
}

/// Writes a stream as one JSON record per line, including empty frames, so
/// the frame axis of the file is explicit. A `{"smoothed":true}` header
/// line is emitted first when `smoothed` is set, so an empty smoothed
/// recording still produces the header. Floats use the shortest
/// representation that round-trips, making parse/serialize an identity.
pub fn serialize_stream<W: Write>(
    frames: &[DetectionFrame],
    smoothed: bool,
    writer: &mut W,
) -> std::io::Result<()> {
    if smoothed {
        let header = serde_json::to_string(&StreamHeader { smoothed })
            .expect("stream headers always serialize");
        writer.write_all(header.as_bytes())?;
        writer.write_all(b"\n")?;
    }
    for frame in frames {
        let json = serde_json::to_string(&record_of(frame))
            .expect("stream records always serialize");
        writer.write_all(json.as_bytes())?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

/// Writes a raw (headerless) stream. See [`serialize_stream`].
pub fn serialize_detections<W: Write>(
    frames: &[DetectionFrame],
    writer: &mut W,
) -> std::io::Result<()> {
    serialize_stream(frames, false, writer)
}

/// Writes a detection stream file. See [`serialize_stream`].
pub fn write_stream(
    path: &Path,
    frames: &[DetectionFrame],
    smoothed: bool,
) -> Result<(), IngestError> {
    let file = std::fs::File::create(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut writer = BufWriter::new(file);
    serialize_stream(frames, smoothed, &mut writer).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    writer.flush().map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes a raw (headerless) detection stream file. See [`write_stream`].
pub fn write_detections(path: &Path, frames: &[DetectionFrame]) -> Result<(), IngestError> {
    write_stream(path, frames, false)
}
