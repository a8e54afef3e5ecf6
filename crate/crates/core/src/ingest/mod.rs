//! File-format plumbing: detection streams, label files, metadata
//! documents, and recording-level validation.
//!
//! All formats are original to this project and documented in
//! `docs/formats.md`; parsers are deterministic and side-effect free, so
//! recordings can be ingested concurrently.

mod labels;
mod meta;
mod stream;
mod validate;

use std::path::PathBuf;

pub use labels::{parse_labels, parse_labels_reader, write_labels};
pub use meta::{load_meta, save_meta};
pub use stream::{
    parse_detections, parse_detections_reader, parse_stream, parse_stream_reader,
    serialize_detections, serialize_stream, write_detections, write_stream, DetectionStream,
};
pub use validate::{validate_recording, CheckEntry, CheckStatus, ValidationReport};

use crate::model::{TimelineError, UnknownLabelError};

/// Errors raised while reading or writing recording artifacts. Every
/// variant names the file and, where meaningful, the line.
#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("{}: i/o error: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{line}: {reason}", path.display())]
    Parse { path: PathBuf, line: usize, reason: String },
    #[error("{}:{line}: frame {frame} appears twice", path.display())]
    DuplicateFrame { path: PathBuf, line: usize, frame: u32 },
    #[error("{}:{line}: frame {frame} after frame {previous}; indices must increase", path.display())]
    NonMonotoneFrame { path: PathBuf, line: usize, frame: u32, previous: u32 },
    #[error("{}:{line}: {source}", path.display())]
    UnknownLabel {
        path: PathBuf,
        line: usize,
        #[source]
        source: UnknownLabelError,
    },
    #[error("{}: segment reaches frame {last_frame} but the recording has {frame_count} frames", path.display())]
    RangeError { path: PathBuf, last_frame: u32, frame_count: u32 },
    #[error("{}: {source}", path.display())]
    Timeline {
        path: PathBuf,
        #[source]
        source: TimelineError,
    },
    #[error("{}: bad metadata: {reason}", path.display())]
    Meta { path: PathBuf, reason: String },
}
