//! The 21-landmark hand keypoint layout and the per-landmark sample type.

use serde::{Deserialize, Serialize};

/// Number of landmarks in a hand detection. Every keypoint array in the
/// engine has exactly this many entries, indexed by [`KeypointId`].
pub const KEYPOINT_COUNT: usize = 21;

/// Landmark identifiers for the 21-point hand layout.
///
/// The discriminants are the array indices used throughout the engine:
/// wrist first, then each digit from thumb to pinky, base joint to tip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[repr(usize)]
pub enum KeypointId {
    Wrist = 0,
    ThumbCmc = 1,
    ThumbMcp = 2,
    ThumbIp = 3,
    ThumbTip = 4,
    IndexMcp = 5,
    IndexPip = 6,
    IndexDip = 7,
    IndexTip = 8,
    MiddleMcp = 9,
    MiddlePip = 10,
    MiddleDip = 11,
    MiddleTip = 12,
    RingMcp = 13,
    RingPip = 14,
    RingDip = 15,
    RingTip = 16,
    PinkyMcp = 17,
    PinkyPip = 18,
    PinkyDip = 19,
    PinkyTip = 20,
}

impl KeypointId {
    /// All landmarks in index order.
    pub const ALL: [KeypointId; KEYPOINT_COUNT] = [
        KeypointId::Wrist,
        KeypointId::ThumbCmc,
        KeypointId::ThumbMcp,
        KeypointId::ThumbIp,
        KeypointId::ThumbTip,
        KeypointId::IndexMcp,
        KeypointId::IndexPip,
        KeypointId::IndexDip,
        KeypointId::IndexTip,
        KeypointId::MiddleMcp,
        KeypointId::MiddlePip,
        KeypointId::MiddleDip,
        KeypointId::MiddleTip,
        KeypointId::RingMcp,
        KeypointId::RingPip,
        KeypointId::RingDip,
        KeypointId::RingTip,
        KeypointId::PinkyMcp,
        KeypointId::PinkyPip,
        KeypointId::PinkyDip,
        KeypointId::PinkyTip,
    ];

    /// Array index of this landmark.
    pub fn index(&self) -> usize {
        *self as usize
    }

    /// Landmark at `index`, or `None` when out of range.
    pub fn from_index(index: usize) -> Option<KeypointId> {
        KeypointId::ALL.get(index).copied()
    }
}

/// One landmark sample: pixel position plus detector confidence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Keypoint {
    /// Horizontal pixel coordinate.
    pub x: f64,
    /// Vertical pixel coordinate.
    pub y: f64,
    /// Detector confidence in `[0, 1]`.
    pub confidence: f64,
}

impl Keypoint {
    pub fn new(x: f64, y: f64, confidence: f64) -> Keypoint {
        Keypoint { x, y, confidence }
    }

    /// Whether position and confidence are finite and confidence is in `[0, 1]`.
    pub fn is_well_formed(&self) -> bool {
        self.x.is_finite()
            && self.y.is_finite()
            && self.confidence.is_finite()
            && (0.0..=1.0).contains(&self.confidence)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_matches_the_documented_indices() {
        assert_eq!(KeypointId::Wrist.index(), 0);
        assert_eq!(KeypointId::ThumbCmc.index(), 1);
        assert_eq!(KeypointId::ThumbTip.index(), 4);
        assert_eq!(KeypointId::IndexMcp.index(), 5);
        assert_eq!(KeypointId::IndexTip.index(), 8);
        assert_eq!(KeypointId::MiddleMcp.index(), 9);
        assert_eq!(KeypointId::RingMcp.index(), 13);
        assert_eq!(KeypointId::PinkyMcp.index(), 17);
        assert_eq!(KeypointId::PinkyTip.index(), 20);
        assert_eq!(KeypointId::ALL.len(), KEYPOINT_COUNT);
    }

    #[test]
    fn index_round_trip() {
        for (i, id) in KeypointId::ALL.iter().enumerate() {
            assert_eq!(id.index(), i);
            assert_eq!(KeypointId::from_index(i), Some(*id));
        }
        assert_eq!(KeypointId::from_index(KEYPOINT_COUNT), None);
    }

    #[test]
    fn well_formedness_checks_confidence_range_and_finiteness() {
        assert!(Keypoint::new(10.0, 20.0, 0.5).is_well_formed());
        assert!(Keypoint::new(10.0, 20.0, 0.0).is_well_formed());
        assert!(Keypoint::new(10.0, 20.0, 1.0).is_well_formed());
        assert!(!Keypoint::new(f64::NAN, 20.0, 0.5).is_well_formed());
        assert!(!Keypoint::new(10.0, f64::INFINITY, 0.5).is_well_formed());
        assert!(!Keypoint::new(10.0, 20.0, 1.5).is_well_formed());
        assert!(!Keypoint::new(10.0, 20.0, -0.1).is_well_formed());
    }
}
