//! Confidence gating and gap imputation: from raw per-frame detections to
//! dense per-keypoint trajectories.

use crate::model::{DetectionFrame, HandSide, RecordingMeta, KEYPOINT_COUNT};
use crate::signal::SignalError;

/// Sparse per-hand observations after confidence gating: one optional
/// sample per keypoint channel per frame on the dense axis
/// `0..frame_count`. `None` means the hand was absent in that frame or the
/// keypoint fell below the confidence gate.
#[derive(Debug, Clone, PartialEq)]
pub struct HandObservations {
    pub side: HandSide,
    pub frame_count: usize,
    /// X coordinate per keypoint channel: `kp_x[k][t]`.
    pub kp_x: Vec<Vec<Option<f64>>>,
    /// Y coordinate per keypoint channel: `kp_y[k][t]`.
    pub kp_y: Vec<Vec<Option<f64>>>,
    /// Raw detector confidence per keypoint channel; 0.0 where the hand was
    /// absent. Gated-out keypoints keep their raw (sub-threshold) value.
    pub kp_conf: Vec<Vec<f64>>,
    /// Bounding-box center/extent channels, present iff the hand was
    /// detected in the frame (boxes are not confidence-gated).
    pub box_center_x: Vec<Option<f64>>,
    pub box_center_y: Vec<Option<f64>>,
    pub box_width: Vec<Option<f64>>,
    pub box_height: Vec<Option<f64>>,
    /// Raw box confidence; 0.0 where the hand was absent.
    pub box_conf: Vec<f64>,
}

/// Dense per-hand trajectories after imputation. Every channel holds a
/// value for every frame; `valid` records which values were observed
/// rather than imputed, and `channel_missing` flags keypoint channels with
/// no observations at all (their values are zeros and must be ignored).
#[derive(Debug, Clone, PartialEq)]
pub struct HandTrack {
    pub side: HandSide,
    pub meta: RecordingMeta,
    /// `kp_x[k][t]`: dense x trajectory of keypoint `k`.
    pub kp_x: Vec<Vec<f64>>,
    pub kp_y: Vec<Vec<f64>>,
    /// Raw confidences carried through from the observations.
    pub kp_conf: Vec<Vec<f64>>,
    /// `valid[k][t]`: whether `(kp_x[k][t], kp_y[k][t])` was observed.
    pub valid: Vec<Vec<bool>>,
    /// Channels with zero observations in the whole recording.
    pub channel_missing: Vec<bool>,
    pub box_center_x: Vec<f64>,
    pub box_center_y: Vec<f64>,
    pub box_width: Vec<f64>,
    pub box_height: Vec<f64>,
    pub box_valid: Vec<bool>,
    pub box_conf: Vec<f64>,
    /// True when the hand was never detected in the recording.
    pub box_missing: bool,
}

impl HandTrack {
    pub fn frame_count(&self) -> usize {
        self.box_conf.len()
    }

    /// Whether the hand was never observed at all (every keypoint channel
    /// missing and no boxes).
    pub fn is_all_missing(&self) -> bool {
        self.box_missing && self.channel_missing.iter().all(|&m| m)
    }
}

/// Applies the confidence gate to every hand detection: a keypoint sample
/// survives iff `confidence >= threshold`. Returns sparse observations for
/// the left and right hand over the dense axis `0..frame_count`.
///
/// `frames` must be indexed within `0..frame_count`; parsed streams are
/// dense and deduplicated, so any out-of-range index is a caller error.
pub fn gate_keypoints(
    frames: &[DetectionFrame],
    frame_count: usize,
    threshold: f64,
) -> Result<(HandObservations, HandObservations), SignalError> {
    if !threshold.is_finite() || !(0.0..=1.0).contains(&threshold) {
        return Err(SignalError::InvalidThreshold { threshold });
    }
    let mut left = HandObservations::empty(HandSide::Left, frame_count);
    let mut right = HandObservations::empty(HandSide::Right, frame_count);
    for frame in frames {
        let t = frame.frame_index as usize;
        if t >= frame_count {
            return Err(SignalError::FrameOutOfRange {
                frame: frame.frame_index,
                frame_count,
            });
        }
        for (side, obs) in [(HandSide::Left, &mut left), (HandSide::Right, &mut right)] {
            let Some(hand) = frame.hand(side) else { continue };
            obs.box_center_x[t] = Some(hand.bbox.center().0);
            obs.box_center_y[t] = Some(hand.bbox.center().1);
            obs.box_width[t] = Some(hand.bbox.width());
            obs.box_height[t] = Some(hand.bbox.height());
            obs.box_conf[t] = hand.bbox.confidence;
            for (k, kp) in hand.keypoints.iter().enumerate() {
                obs.kp_conf[k][t] = kp.confidence;
                if kp.confidence >= threshold {
                    obs.kp_x[k][t] = Some(kp.x);
                    obs.kp_y[k][t] = Some(kp.y);
                }
            }
        }
    }
    Ok((left, right))
}

impl HandObservations {
    fn empty(side: HandSide, frame_count: usize) -> HandObservations {
        HandObservations {
            side,
            frame_count,
            kp_x: vec![vec![None; frame_count]; KEYPOINT_COUNT],
            kp_y: vec![vec![None; frame_count]; KEYPOINT_COUNT],
            kp_conf: vec![vec![0.0; frame_count]; KEYPOINT_COUNT],
            box_center_x: vec![None; frame_count],
            box_center_y: vec![None; frame_count],
            box_width: vec![None; frame_count],
            box_height: vec![None; frame_count],
            box_conf: vec![0.0; frame_count],
        }
    }
}

/// Last-observation-carried-forward fill of one sparse channel. Values
/// before the first observation are backfilled from it. Returns `None`
/// when the channel has no observations at all.
pub fn locf_fill(values: &[Option<f64>]) -> Option<Vec<f64>> {
    let first = values.iter().flatten().next().copied()?;
    let mut filled = Vec::with_capacity(values.len());
    let mut last = first;
    for v in values {
        if let Some(v) = v {
            last = *v;
        }
        filled.push(last);
    }
    Some(filled)
}

/// Imputes gated observations into dense trajectories via LOCF with
/// leading backfill. Channels without any observation are flagged in
/// `channel_missing` (and zero-filled) rather than treated as errors.
pub fn impute_locf(obs: &HandObservations, meta: &RecordingMeta) -> HandTrack {
    let n = obs.frame_count;
    let mut track = HandTrack {
        side: obs.side,
        meta: meta.clone(),
        kp_x: Vec::with_capacity(KEYPOINT_COUNT),
        kp_y: Vec::with_capacity(KEYPOINT_COUNT),
        kp_conf: obs.kp_conf.clone(),
        valid: Vec::with_capacity(KEYPOINT_COUNT),
        channel_missing: Vec::with_capacity(KEYPOINT_COUNT),
        box_center_x: vec![0.0; n],
        box_center_y: vec![0.0; n],
        box_width: vec![0.0; n],
        box_height: vec![0.0; n],
        box_valid: obs.box_center_x.iter().map(|v| v.is_some()).collect(),
        box_conf: obs.box_conf.clone(),
        box_missing: true,
    };
    for k in 0..KEYPOINT_COUNT {
        let xs = locf_fill(&obs.kp_x[k]);
        let ys = locf_fill(&obs.kp_y[k]);
        let missing = xs.is_none() || ys.is_none();
        track.channel_missing.push(missing);
        track.kp_x.push(xs.unwrap_or_else(|| vec![0.0; n]));
        track.kp_y.push(ys.unwrap_or_else(|| vec![0.0; n]));
        track
            .valid
            .push(obs.kp_x[k].iter().map(|v| v.is_some()).collect());
    }
    if let (Some(cx), Some(cy), Some(w), Some(h)) = (
        locf_fill(&obs.box_center_x),
        locf_fill(&obs.box_center_y),
        locf_fill(&obs.box_width),
        locf_fill(&obs.box_height),
    ) {
        track.box_center_x = cx;
        track.box_center_y = cy;
        track.box_width = w;
        track.box_height = h;
        track.box_missing = false;
    }
    track
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        BoundingBox, CameraView, HandDetection, Keypoint, SkillGroup,
    };

    fn meta(frame_count: u32) -> RecordingMeta {
        RecordingMeta {
            recording_id: "r01".into(),
            participant_id: "p01".into(),
            group: SkillGroup::Novice,
            fps: 30.0,
            camera_view: CameraView::Frontal,
            frame_count,
            tissue_region: None,
        }
    }

    fn hand_at(x: f64, conf: f64) -> HandDetection {
        HandDetection {
            bbox: BoundingBox::new(x, 0.0, x + 10.0, 10.0, 0.9),
            keypoints: [Keypoint::new(x, 1.0, conf); KEYPOINT_COUNT],
        }
    }

    #[test]
    fn locf_fills_interior_gaps_and_backfills_the_leading_gap() {
        let filled = locf_fill(&[None, Some(2.0), None, Some(5.0), None]).unwrap();
        assert_eq!(filled, vec![2.0, 2.0, 2.0, 5.0, 5.0]);
    }

    #[test]
    fn locf_on_an_all_missing_channel_is_none() {
        assert_eq!(locf_fill(&[None, None, None]), None);
        assert_eq!(locf_fill(&[]), None);
    }

    #[test]
    fn locf_is_the_identity_on_dense_channels() {
        let dense: Vec<Option<f64>> = vec![Some(1.0), Some(4.0), Some(9.0)];
        assert_eq!(locf_fill(&dense).unwrap(), vec![1.0, 4.0, 9.0]);
    }

    #[test]
    fn gate_drops_keypoints_below_the_threshold_and_keeps_the_rest() {
        let mut f0 = DetectionFrame::empty(0);
        f0.left_hand = Some(hand_at(10.0, 0.29));
        let mut f1 = DetectionFrame::empty(1);
        f1.left_hand = Some(hand_at(20.0, 0.3));
        let (left, right) = gate_keypoints(&[f0, f1], 2, 0.3).unwrap();
        // Below threshold: position dropped, raw confidence preserved.
        assert_eq!(left.kp_x[0][0], None);
        assert_eq!(left.kp_conf[0][0], 0.29);
        // Exactly at threshold: kept.
        assert_eq!(left.kp_x[0][1], Some(20.0));
        assert_eq!(left.kp_conf[0][1], 0.3);
        // Boxes are not gated.
        assert!(left.box_center_x[0].is_some());
        // The other hand was never seen.
        assert!(right.box_center_x.iter().all(|v| v.is_none()));
    }

    #[test]
    fn gate_rejects_out_of_range_thresholds_and_frames() {
        assert!(matches!(
            gate_keypoints(&[], 5, 1.5),
            Err(SignalError::InvalidThreshold { .. })
        ));
        assert!(matches!(
            gate_keypoints(&[], 5, f64::NAN),
            Err(SignalError::InvalidThreshold { .. })
        ));
        let f = DetectionFrame::empty(5);
        assert!(matches!(
            gate_keypoints(&[f], 5, 0.3),
            Err(SignalError::FrameOutOfRange { frame: 5, frame_count: 5 })
        ));
    }

    #[test]
    fn impute_produces_dense_channels_with_observation_flags() {
        let mut f1 = DetectionFrame::empty(1);
        f1.right_hand = Some(hand_at(10.0, 0.9));
        let mut f3 = DetectionFrame::empty(3);
        f3.right_hand = Some(hand_at(40.0, 0.9));
        let frames = [DetectionFrame::empty(0), f1, DetectionFrame::empty(2), f3];
        let (_, right) = gate_keypoints(&frames, 4, 0.3).unwrap();
        let track = impute_locf(&right, &meta(4));
        // Leading backfill then carry-forward.
        assert_eq!(track.kp_x[0], vec![10.0, 10.0, 10.0, 40.0]);
        assert_eq!(track.valid[0], vec![false, true, false, true]);
        assert!(!track.channel_missing[0]);
        assert_eq!(track.box_valid, vec![false, true, false, true]);
        assert!(!track.box_missing);
        assert_eq!(track.frame_count(), 4);
    }

    #[test]
    fn all_missing_hand_is_flagged_not_an_error() {
        let (left, _) = gate_keypoints(&[DetectionFrame::empty(0)], 1, 0.3).unwrap();
        let track = impute_locf(&left, &meta(1));
        assert!(track.is_all_missing());
        assert!(track.channel_missing.iter().all(|&m| m));
        assert!(track.box_missing);
    }

    #[test]
    fn impute_is_idempotent_on_dense_observations() {
        let mut frames = Vec::new();
        for t in 0..5u32 {
            let mut f = DetectionFrame::empty(t);
            f.left_hand = Some(hand_at(t as f64 * 3.0, 0.9));
            frames.push(f);
        }
        let (left, _) = gate_keypoints(&frames, 5, 0.3).unwrap();
        let track = impute_locf(&left, &meta(5));
        // Re-wrap the dense track as observations and impute again.
        let re_obs = HandObservations {
            side: track.side,
            frame_count: 5,
            kp_x: track.kp_x.iter().map(|c| c.iter().map(|&v| Some(v)).collect()).collect(),
            kp_y: track.kp_y.iter().map(|c| c.iter().map(|&v| Some(v)).collect()).collect(),
            kp_conf: track.kp_conf.clone(),
            box_center_x: track.box_center_x.iter().map(|&v| Some(v)).collect(),
            box_center_y: track.box_center_y.iter().map(|&v| Some(v)).collect(),
            box_width: track.box_width.iter().map(|&v| Some(v)).collect(),
            box_height: track.box_height.iter().map(|&v| Some(v)).collect(),
            box_conf: track.box_conf.clone(),
        };
        let again = impute_locf(&re_obs, &meta(5));
        assert_eq!(again.kp_x, track.kp_x);
        assert_eq!(again.kp_y, track.kp_y);
        assert_eq!(again.box_center_x, track.box_center_x);
    }
}
