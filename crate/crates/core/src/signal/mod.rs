//! Keypoint post-processing: confidence gating, gap imputation, and
//! Savitzky-Golay smoothing.
//!
//! The stage order is gate -> impute -> smooth:
//!
//! 1. [`gate_keypoints`] drops low-confidence keypoint samples, turning
//!    raw frames into sparse per-channel observations;
//! 2. [`impute_locf`] fills the gaps by carrying the last observation
//!    forward (backfilling before the first one), yielding dense tracks;
//! 3. [`smooth_track`] applies a least-squares polynomial filter to every
//!    dense channel.

mod savgol;
mod smooth;
mod track;

use serde::{Deserialize, Serialize};

pub use savgol::savgol_coefficients;
pub use smooth::{smooth_channel, smooth_track};
pub use track::{gate_keypoints, impute_locf, locf_fill, HandObservations, HandTrack};

/// Errors from smoothing configuration and fitting.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SignalError {
    #[error("smoothing window must be odd and at least 3, got {window}")]
    InvalidWindow { window: usize },
    #[error("polynomial order must satisfy 1 <= order < window, got order {poly_order} for window {window}")]
    InvalidPolyOrder { poly_order: usize, window: usize },
    #[error("keypoint confidence threshold must lie in [0, 1], got {threshold}")]
    InvalidThreshold { threshold: f64 },
    #[error("least-squares fit is degenerate (singular normal equations)")]
    DegenerateFit,
    #[error("detection frame index {frame} outside the recording's 0..{frame_count} axis")]
    FrameOutOfRange { frame: u32, frame_count: usize },
}

/// How smoothing treats frames closer to a channel boundary than the
/// window half-width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeMode {
    /// Extend the channel by reflecting samples across the boundary
    /// (without repeating the boundary sample) and apply the full window.
    Mirror,
    /// Refit a one-sided window truncated at the boundary, clamping the
    /// polynomial order below the shrunken window length.
    Shrink,
}

/// Parameters of the gate -> impute -> smooth stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SmoothingConfig {
    /// Full window length in frames; odd, at least 3.
    pub window: usize,
    /// Polynomial order of the least-squares fit; `1 <= poly_order < window`.
    pub poly_order: usize,
    /// Keypoints below this confidence are dropped before imputation.
    pub keypoint_conf_threshold: f64,
    pub edge_mode: EdgeMode,
}

impl Default for SmoothingConfig {
    fn default() -> SmoothingConfig {
        SmoothingConfig {
            window: 9,
            poly_order: 3,
            keypoint_conf_threshold: 0.3,
            edge_mode: EdgeMode::Mirror,
        }
    }
}

impl SmoothingConfig {
    /// Checks the window/order/threshold constraints.
    pub fn validate(&self) -> Result<(), SignalError> {
        if self.window < 3 || self.window.is_multiple_of(2) {
            return Err(SignalError::InvalidWindow { window: self.window });
        }
        if self.poly_order < 1 || self.poly_order >= self.window {
            return Err(SignalError::InvalidPolyOrder {
                poly_order: self.poly_order,
                window: self.window,
            });
        }
        if !self.keypoint_conf_threshold.is_finite()
            || !(0.0..=1.0).contains(&self.keypoint_conf_threshold)
        {
            return Err(SignalError::InvalidThreshold {
                threshold: self.keypoint_conf_threshold,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid_and_documented() {
        let cfg = SmoothingConfig::default();
        assert_eq!(cfg.window, 9);
        assert_eq!(cfg.poly_order, 3);
        assert_eq!(cfg.keypoint_conf_threshold, 0.3);
        assert_eq!(cfg.edge_mode, EdgeMode::Mirror);
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn validate_rejects_each_bad_field() {
        let ok = SmoothingConfig::default();
        assert!(SmoothingConfig { window: 8, ..ok.clone() }.validate().is_err());
        assert!(SmoothingConfig { window: 1, ..ok.clone() }.validate().is_err());
        assert!(SmoothingConfig { poly_order: 0, ..ok.clone() }.validate().is_err());
        assert!(SmoothingConfig { poly_order: 9, ..ok.clone() }.validate().is_err());
        assert!(SmoothingConfig { keypoint_conf_threshold: -0.1, ..ok.clone() }
            .validate()
            .is_err());
        assert!(SmoothingConfig { keypoint_conf_threshold: 1.1, ..ok }.validate().is_err());
    }

    #[test]
    fn config_round_trips_through_toml() {
        let cfg = SmoothingConfig {
            window: 11,
            poly_order: 2,
            keypoint_conf_threshold: 0.5,
            edge_mode: EdgeMode::Shrink,
        };
        let text = toml::to_string(&cfg).unwrap();
        let back: SmoothingConfig = toml::from_str(&text).unwrap();
        assert_eq!(back, cfg);
        // Missing fields fall back to the defaults.
        let partial: SmoothingConfig = toml::from_str("window = 5").unwrap();
        assert_eq!(partial.window, 5);
        assert_eq!(partial.poly_order, 3);
    }
}
