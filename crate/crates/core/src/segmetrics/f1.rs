//! Segmental F1@τ: greedy same-label matching under a frame-IoU floor.

use serde::{Deserialize, Serialize};

/// A labeled frame interval with inclusive bounds, decoupled from the
/// timeline invariants so matching can run over any span source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabeledSpan<L> {
    pub label: L,
    pub start: u32,
    pub end: u32,
}

impl<L> LabeledSpan<L> {
    /// Number of frames covered (inclusive bounds).
    fn len(&self) -> u64 {
        u64::from(self.end - self.start) + 1
    }
}

/// Intersection-over-union of two spans on the discrete frame axis. With
/// inclusive bounds a one-frame overlap has intersection 1.
pub fn span_iou<A, B>(a: &LabeledSpan<A>, b: &LabeledSpan<B>) -> f64 {
    let inter_lo = a.start.max(b.start);
    let inter_hi = a.end.min(b.end);
    if inter_lo > inter_hi {
        return 0.0;
    }
    let inter = u64::from(inter_hi - inter_lo) + 1;
    let union = a.len() + b.len() - inter;
    inter as f64 / union as f64
}

/// True/false positive and false negative totals from one matching pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MatchCounts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
}

/// Precision/recall/F1 triple on the 0..=100 scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionRecallF1 {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl MatchCounts {
    /// Converts counts to percentages. An empty side scores 0 against a
    /// non-empty one; two empty sides count as a perfect (vacuous) match
    /// so that identical inputs always score 100.
    pub fn to_scores(self) -> PrecisionRecallF1 {
        let MatchCounts { tp, fp, fn_ } = self;
        if tp + fp + fn_ == 0 {
            return PrecisionRecallF1 { precision: 100.0, recall: 100.0, f1: 100.0 };
        }
        let precision = if tp + fp == 0 { 0.0 } else { 100.0 * tp as f64 / (tp + fp) as f64 };
        let recall = if tp + fn_ == 0 { 0.0 } else { 100.0 * tp as f64 / (tp + fn_) as f64 };
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        PrecisionRecallF1 { precision, recall, f1 }
    }
}

/// Greedy segmental matching: predicted spans are visited in temporal
/// order; each claims the not-yet-consumed ground-truth span of the same
/// label with maximal IoU (earliest wins ties) and counts as a true
/// positive iff that IoU reaches `tau`. Ground-truth spans left unclaimed
/// are false negatives.
pub fn match_spans<L: PartialEq>(
    pred: &[LabeledSpan<L>],
    gt: &[LabeledSpan<L>],
    tau: f64,
) -> MatchCounts {
    let mut consumed = vec![false; gt.len()];
    let mut counts = MatchCounts::default();
    for p in pred {
        let mut best: Option<(usize, f64)> = None;
        for (j, g) in gt.iter().enumerate() {
            if consumed[j] || g.label != p.label {
                continue;
            }
            let iou = span_iou(p, g);
            if best.is_none_or(|(_, b)| iou > b) {
                best = Some((j, iou));
            }
        }
        match best {
            Some((j, iou)) if iou >= tau => {
                consumed[j] = true;
                counts.tp += 1;
            }
            _ => counts.fp += 1,
        }
    }
    counts.fn_ = consumed.iter().filter(|&&c| !c).count();
    counts
}
