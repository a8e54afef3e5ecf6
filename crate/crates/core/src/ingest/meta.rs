//! Recording-metadata I/O: one JSON document per recording.

use std::path::Path;

use crate::model::RecordingMeta;

use super::IngestError;

/// Loads and sanity-checks one recording's metadata document.
pub fn load_meta(path: &Path) -> Result<RecordingMeta, IngestError> {
    let text = std::fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let meta: RecordingMeta =
        serde_json::from_str(&text).map_err(|e| IngestError::Meta {
            path: path.to_path_buf(),
            reason: format!("{e}"),
        })?;
    if !meta.is_well_formed() {
        return Err(IngestError::Meta {
            path: path.to_path_buf(),
            reason: format!(
                "metadata fails sanity checks (ids non-empty, fps > 0, frame_count > 0): {meta:?}"
            ),
        });
    }
    Ok(meta)
}

/// Writes a metadata document as pretty-printed JSON.
pub fn save_meta(path: &Path, meta: &RecordingMeta) -> Result<(), IngestError> {
    let json = serde_json::to_string_pretty(meta).expect("metadata always serializes");
    std::fs::write(path, json + "\n").map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })
}
