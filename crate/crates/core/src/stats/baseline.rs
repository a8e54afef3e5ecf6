//! Expert baseline store: per-(proxy, gesture) reference statistics built
//! from expert participants, persisted as JSON and replaced atomically.

use std::io::Write as _;
use std::path::Path;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::model::{GestureLabel, SkillGroup};
use crate::proxies::ProxyKind;

use super::groups::ParticipantMean;
use super::{mean, sample_std};

/// Trigger threshold (in expert standard deviations) used when a baseline
/// is built without an explicit override.
pub const DEFAULT_THRESHOLD_K: f64 = 2.0;

/// Reference statistics for one (proxy, gesture) pair, over expert
/// participant means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineEntry {
    pub kind: ProxyKind,
    pub gesture: GestureLabel,
    pub mean: f64,
    /// Sample standard deviation of the expert participant means.
    pub std: f64,
    /// Number of expert participants behind the entry.
    pub n: usize,
    /// Feedback triggers when |z| exceeds this many standard deviations.
    pub threshold_k: f64,
}

/// The persisted expert baseline: entries sorted by (kind, gesture) plus
/// provenance. Serialization is canonical, so saving and re-loading a
/// baseline reproduces it bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpertBaseline {
    /// Format version of the baseline file.
    pub version: String,
    /// Identifiers of the recordings or datasets the baseline came from.
    pub created_from: Vec<String>,
    pub entries: Vec<BaselineEntry>,
}

/// Current baseline file format version.
pub const BASELINE_FORMAT_VERSION: &str = "1";

impl ExpertBaseline {
    /// Entry for a (proxy, gesture) pair, if the baseline covers it.
    pub fn get(&self, kind: ProxyKind, gesture: GestureLabel) -> Option<&BaselineEntry> {
        self.entries.iter().find(|e| e.kind == kind && e.gesture == gesture)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BaselineError {
    #[error("no (proxy, gesture) pair has at least two expert participants")]
    InsufficientExperts,
    #[error("threshold must be positive, got {threshold_k}")]
    InvalidThreshold { threshold_k: f64 },
    #[error("baseline i/o failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("baseline file is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Builds a baseline from participant means. Only expert participants
/// contribute; pairs with fewer than two expert participants are omitted
/// with a warning. Building fails only when nothing at all qualifies.
pub fn build_baseline(
    means: &[ParticipantMean],
    threshold_k: f64,
    created_from: Vec<String>,
) -> Result<ExpertBaseline, BaselineError> {
    if !threshold_k.is_finite() || threshold_k <= 0.0 {
        return Err(BaselineError::InvalidThreshold { threshold_k });
    }
    let mut by_pair: std::collections::BTreeMap<(ProxyKind, GestureLabel), Vec<f64>> =
        std::collections::BTreeMap::new();
    for m in means {
        if m.group == SkillGroup::Expert {
            by_pair.entry((m.kind, m.gesture)).or_default().push(m.value);
        }
    }
    let mut entries = Vec::new();
    for ((kind, gesture), values) in by_pair {
        if values.len() < 2 {
            warn!(
                "({kind}, {gesture}): only {} expert participant(s), entry omitted",
                values.len()
            );
            continue;
        }
        entries.push(BaselineEntry {
            kind,
            gesture,
            mean: mean(&values),
            std: sample_std(&values),
            n: values.len(),
            threshold_k,
        });
    }
    if entries.is_empty() {
        return Err(BaselineError::InsufficientExperts);
    }
    Ok(ExpertBaseline {
        version: BASELINE_FORMAT_VERSION.to_string(),
        created_from,
        entries,
    })
}

/// Writes the baseline as pretty-printed JSON, atomically: the bytes go
/// to a temporary file in the target directory which is then renamed over
/// the destination, so readers never observe a partial file.
pub fn save_baseline(path: &Path, baseline: &ExpertBaseline) -> Result<(), BaselineError> {
    let json = serde_json::to_string_pretty(baseline)?;
    let tmp_path = path.with_extension("tmp");
    {
        let mut tmp = std::fs::File::create(&tmp_path)?;
        tmp.write_all(json.as_bytes())?;
        tmp.write_all(b"\n")?;
        tmp.sync_all()?;
    }
    std::fs::rename(&tmp_path, path)?;
    Ok(())
}

/// Reads a baseline written by [`save_baseline`].
pub fn load_baseline(path: &Path) -> Result<ExpertBaseline, BaselineError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(
        participant: &str,
        group: SkillGroup,
        kind: ProxyKind,
        gesture: GestureLabel,
        value: f64,
    ) -> ParticipantMean {
        ParticipantMean {
            participant_id: participant.to_string(),
            group,
            kind,
            gesture,
            value,
            n_samples: 3,
        }
    }

    fn sample_means() -> Vec<ParticipantMean> {
        use GestureLabel::*;
        use ProxyKind::*;
        use SkillGroup::*;
        vec![
            pm("e1", Expert, ThumbIndexDistance, NeedlePassing, 38.0),
            pm("e2", Expert, ThumbIndexDistance, NeedlePassing, 42.0),
            pm("e3", Expert, ThumbIndexDistance, NeedlePassing, 40.0),
            pm("e1", Expert, BackgroundTime, NoGesture, 10.0),
            pm("e2", Expert, BackgroundTime, NoGesture, 14.0),
            // Novices never contribute to the baseline.
            pm("n1", Novice, ThumbIndexDistance, NeedlePassing, 15.0),
            pm("n2", Novice, ThumbIndexDistance, NeedlePassing, 17.0),
            // A pair with a single expert is omitted.
            pm("e1", Expert, HandVelocity, PullTheSuture, 100.0),
        ]
    }

    #[test]
    fn build_uses_experts_only_and_omits_thin_pairs() {
        let baseline =
            build_baseline(&sample_means(), DEFAULT_THRESHOLD_K, vec!["ds1".into()]).unwrap();
        assert_eq!(baseline.entries.len(), 2);

        let pinch = baseline
            .get(ProxyKind::ThumbIndexDistance, GestureLabel::NeedlePassing)
            .unwrap();
        assert_eq!(pinch.n, 3);
        assert_eq!(pinch.mean, 40.0);
        assert_eq!(pinch.std, 2.0);
        assert_eq!(pinch.threshold_k, 2.0);

        let background =
            baseline.get(ProxyKind::BackgroundTime, GestureLabel::NoGesture).unwrap();
        assert_eq!(background.n, 2);
        assert_eq!(background.mean, 12.0);

        assert!(baseline
            .get(ProxyKind::HandVelocity, GestureLabel::PullTheSuture)
            .is_none());
    }

    #[test]
    fn build_fails_without_any_qualified_pair() {
        use SkillGroup::Novice;
        let only_novices = vec![
            pm("n1", Novice, ProxyKind::BackgroundTime, GestureLabel::NoGesture, 1.0),
            pm("n2", Novice, ProxyKind::BackgroundTime, GestureLabel::NoGesture, 2.0),
        ];
        assert!(matches!(
            build_baseline(&only_novices, 2.0, vec![]),
            Err(BaselineError::InsufficientExperts)
        ));
    }

    #[test]
    fn build_rejects_nonpositive_thresholds() {
        assert!(matches!(
            build_baseline(&sample_means(), 0.0, vec![]),
            Err(BaselineError::InvalidThreshold { .. })
        ));
        assert!(matches!(
            build_baseline(&sample_means(), -1.0, vec![]),
            Err(BaselineError::InvalidThreshold { .. })
        ));
    }

    #[test]
    fn entries_come_out_sorted_by_kind_then_gesture() {
        let baseline =
            build_baseline(&sample_means(), 2.0, vec![]).unwrap();
        let keys: Vec<_> = baseline.entries.iter().map(|e| (e.kind, e.gesture)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn save_then_load_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("baseline.json");
        // Values with awkward binary expansions exercise float round-trip.
        let mut baseline = build_baseline(&sample_means(), 2.0, vec!["a".into()]).unwrap();
        baseline.entries[0].mean = 0.1 + 0.2;
        baseline.entries[0].std = 1.0 / 3.0;
        save_baseline(&path, &baseline).unwrap();
        let loaded = load_baseline(&path).unwrap();
        assert_eq!(loaded, baseline);
        assert!(loaded.entries[0].mean.to_bits() == baseline.entries[0].mean.to_bits());

        // Saving again over the existing file still round-trips: the bytes
        // are replaced wholesale by the rename.
        save_baseline(&path, &loaded).unwrap();
        let reloaded = load_baseline(&path).unwrap();
        assert_eq!(reloaded, baseline);
        assert!(!path.with_extension("tmp").exists());
    }

    #[test]
    fn load_rejects_malformed_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("baseline.json");
        std::fs::write(&path, "{ not json").unwrap();
        assert!(matches!(load_baseline(&path), Err(BaselineError::Json(_))));
        assert!(matches!(
            load_baseline(&dir.path().join("missing.json")),
            Err(BaselineError::Io(_))
        ));
    }
}
