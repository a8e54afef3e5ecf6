//! Temporal segmentation quality metrics: frame accuracy, segmental edit
//! score, and segmental F1@τ, evaluated per track and aggregated into
//! reports.

mod f1;
mod levenshtein;
pub mod report;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::model::{Label, SegmentTimeline, TrackKind};

pub use f1::{match_spans, span_iou, LabeledSpan, MatchCounts, PrecisionRecallF1};
pub use levenshtein::levenshtein;
pub use report::{EvaluationReport, RecordingEvalRow};

/// The overlap thresholds reported by default, matching the three F1
/// columns of the evaluation tables.
pub const DEFAULT_TAUS: [f64; 3] = [0.10, 0.25, 0.50];

/// Errors from metric evaluation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricError {
    #[error("label sequences differ in length: pred {pred}, gt {gt}")]
    LengthMismatch { pred: usize, gt: usize },
    #[error("metric input is empty")]
    EmptyInput,
    #[error("pred and gt cover different track sets: missing {missing:?}, unexpected {unexpected:?}")]
    TrackMismatch { missing: Vec<TrackKind>, unexpected: Vec<TrackKind> },
    #[error("overlap threshold must lie in (0, 1], got {tau}")]
    InvalidTau { tau: f64 },
}

/// Evaluation options shared by all metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricConfig {
    /// Whether background segments (`no_gesture` / `no_tool`) participate
    /// in the edit score and F1 matching. Frame accuracy always counts
    /// every frame.
    pub include_background: bool,
    /// Overlap thresholds for F1, strictly increasing, each in (0, 1].
    pub taus: Vec<f64>,
    /// Whether to attach the per-label breakdown to results.
    pub per_class: bool,
}

impl Default for MetricConfig {
    fn default() -> MetricConfig {
        MetricConfig { include_background: true, taus: DEFAULT_TAUS.to_vec(), per_class: false }
    }
}

/// Per-label breakdown: frame-level recall plus segmental F1 restricted to
/// spans of one label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerClassEval {
    /// Percentage of ground-truth frames of this label predicted correctly.
    pub frame_recall: f64,
    /// Segmental F1 per threshold, spans of this label only.
    pub f1: Vec<(f64, PrecisionRecallF1)>,
}

/// Full metric block for one (pred, gt) timeline pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegEvalResult {
    /// Frame accuracy in percent.
    pub accuracy: f64,
    /// Segmental edit score in percent.
    pub edit: f64,
    /// F1 triple per overlap threshold, sorted by threshold.
    pub f1: Vec<(f64, PrecisionRecallF1)>,
    /// Per-label breakdown when requested.
    pub per_class: Option<BTreeMap<Label, PerClassEval>>,
}

/// Percentage of frames where the two label sequences agree.
pub fn frame_accuracy<L: PartialEq>(pred: &[L], gt: &[L]) -> Result<f64, MetricError> {
    if pred.len() != gt.len() {
        return Err(MetricError::LengthMismatch { pred: pred.len(), gt: gt.len() });
    }
    if pred.is_empty() {
        return Err(MetricError::EmptyInput);
    }
    let matching = pred.iter().zip(gt).filter(|(p, g)| p == g).count();
    Ok(100.0 * matching as f64 / pred.len() as f64)
}

/// Segmental edit score between two timelines:
/// `100 × (1 − lev(labelseq(pred), labelseq(gt)) / max(lengths))`, clamped
/// to be non-negative, where `labelseq` is the run-length-collapsed
/// sequence of segment labels.
pub fn edit_score(
    pred: &SegmentTimeline,
    gt: &SegmentTimeline,
    config: &MetricConfig,
) -> Result<f64, MetricError> {
    let pred_seq = label_sequence(pred, config.include_background);
    let gt_seq = label_sequence(gt, config.include_background);
    edit_score_from_sequences(&pred_seq, &gt_seq)
}

/// Edit score over pre-collapsed label sequences. Two empty sequences
/// (possible after background exclusion) compare as identical.
pub fn edit_score_from_sequences<L: PartialEq>(
    pred_seq: &[L],
    gt_seq: &[L],
) -> Result<f64, MetricError> {
    let longest = pred_seq.len().max(gt_seq.len());
    if longest == 0 {
        return Ok(100.0);
    }
    let distance = levenshtein(pred_seq, gt_seq);
    Ok((100.0 * (1.0 - distance as f64 / longest as f64)).max(0.0))
}

/// Segmental F1 at one overlap threshold.
pub fn f1_at(
    pred: &SegmentTimeline,
    gt: &SegmentTimeline,
    tau: f64,
    config: &MetricConfig,
) -> Result<PrecisionRecallF1, MetricError> {
    if !tau.is_finite() || tau <= 0.0 || tau > 1.0 {
        return Err(MetricError::InvalidTau { tau });
    }
    let pred_spans = spans(pred, config.include_background);
    let gt_spans = spans(gt, config.include_background);
    Ok(match_spans(&pred_spans, &gt_spans, tau).to_scores())
}

/// Evaluates one (pred, gt) pair: accuracy over the expanded frame axis,
/// edit score, and F1 at every configured threshold.
pub fn evaluate_pair(
    pred: &SegmentTimeline,
    gt: &SegmentTimeline,
    config: &MetricConfig,
) -> Result<SegEvalResult, MetricError> {
    let frames = gt.frame_count();
    if pred.frame_count() != frames {
        return Err(MetricError::LengthMismatch {
            pred: pred.frame_count() as usize,
            gt: frames as usize,
        });
    }
    let pred_frames = pred.to_frame_labels(frames).expect("frame counts checked above");
    let gt_frames = gt.to_frame_labels(frames).expect("timelines are self-covering");
    let accuracy = frame_accuracy(&pred_frames, &gt_frames)?;
    let edit = edit_score(pred, gt, config)?;
    let mut f1 = Vec::with_capacity(config.taus.len());
    for &tau in &config.taus {
        f1.push((tau, f1_at(pred, gt, tau, config)?));
    }
    let per_class = config.per_class.then(|| {
        let mut by_label: BTreeMap<Label, PerClassEval> = BTreeMap::new();
        let mut labels: Vec<Label> = gt
            .label_sequence()
            .into_iter()
            .chain(pred.label_sequence())
            .collect();
        labels.sort();
        labels.dedup();
        for label in labels {
            if !config.include_background && label.is_background() {
                continue;
            }
            let gt_label_frames = gt_frames.iter().filter(|&&l| l == label).count();
            let hit = pred_frames
                .iter()
                .zip(&gt_frames)
                .filter(|(p, g)| **g == label && p == g)
                .count();
            let frame_recall = if gt_label_frames == 0 {
                100.0
            } else {
                100.0 * hit as f64 / gt_label_frames as f64
            };
            let pred_spans: Vec<_> = spans(pred, config.include_background)
                .into_iter()
                .filter(|s| s.label == label)
                .collect();
            let gt_spans: Vec<_> = spans(gt, config.include_background)
                .into_iter()
                .filter(|s| s.label == label)
                .collect();
            let f1 = config
                .taus
                .iter()
                .map(|&tau| (tau, match_spans(&pred_spans, &gt_spans, tau).to_scores()))
                .collect();
            by_label.insert(label, PerClassEval { frame_recall, f1 });
        }
        by_label
    });
    Ok(SegEvalResult { accuracy, edit, f1, per_class })
}

/// Evaluates every track independently. Both maps must cover exactly the
/// same track set; no cross-track pooling takes place.
pub fn evaluate_multitask(
    preds: &BTreeMap<TrackKind, SegmentTimeline>,
    gts: &BTreeMap<TrackKind, SegmentTimeline>,
    config: &MetricConfig,
) -> Result<BTreeMap<TrackKind, SegEvalResult>, MetricError> {
    let missing: Vec<TrackKind> =
        gts.keys().filter(|k| !preds.contains_key(*k)).copied().collect();
    let unexpected: Vec<TrackKind> =
        preds.keys().filter(|k| !gts.contains_key(*k)).copied().collect();
    if !missing.is_empty() || !unexpected.is_empty() {
        return Err(MetricError::TrackMismatch { missing, unexpected });
    }
    let mut results = BTreeMap::new();
    for (track, gt) in gts {
        let pred = &preds[track];
        results.insert(*track, evaluate_pair(pred, gt, config)?);
    }
    Ok(results)
}

fn label_sequence(tl: &SegmentTimeline, include_background: bool) -> Vec<Label> {
    tl.label_sequence()
        .into_iter()
        .filter(|l| include_background || !l.is_background())
        .collect()
}

fn spans(tl: &SegmentTimeline, include_background: bool) -> Vec<LabeledSpan<Label>> {
    tl.segments()
        .iter()
        .filter(|s| include_background || !s.label.is_background())
        .map(|s| LabeledSpan { label: s.label, start: s.start_frame, end: s.end_frame })
        .collect()
}
