//! Proxy bindings: which proxy is computed for which gesture, on which
//! hand, and how per-frame values are reduced. The default table covers
//! the clinically motivated pairs; deployments can override it with a
//! TOML file.

use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::model::{GestureLabel, HandSide, KeypointId, ToolLabel};

use super::ProxyKind;

/// How the evaluated hand is chosen for one binding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HandSelector {
    /// The hand whose tool timeline shows `tool` for at least the
    /// configured fraction of the segment's frames.
    ToolHand { tool: ToolLabel },
    /// Always the given side, regardless of tool usage.
    FixedSide { side: HandSide },
}

/// Reduction applied to per-frame proxy values over a gesture occurrence.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reducer {
    #[default]
    Mean,
    Median,
}

impl Reducer {
    pub fn reduce(&self, values: &mut [f64]) -> Option<f64> {
        if values.is_empty() {
            return None;
        }
        match self {
            Reducer::Mean => Some(values.iter().sum::<f64>() / values.len() as f64),
            Reducer::Median => {
                values.sort_by(|a, b| a.total_cmp(b));
                let n = values.len();
                Some(if n % 2 == 1 {
                    values[n / 2]
                } else {
                    (values[n / 2 - 1] + values[n / 2]) / 2.0
                })
            }
        }
    }
}

/// One (proxy, gesture) pair to compute, with hand selection, reduction,
/// and the keypoint set for velocity proxies (`None` = all 21 landmarks).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProxyBinding {
    pub kind: ProxyKind,
    pub gesture: GestureLabel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hand: Option<HandSelector>,
    #[serde(default)]
    pub reducer: Reducer,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub keypoints: Option<Vec<KeypointId>>,
}

impl ProxyBinding {
    fn occurrence(kind: ProxyKind, gesture: GestureLabel, hand: Option<HandSelector>) -> Self {
        ProxyBinding { kind, gesture, hand, reducer: Reducer::Mean, keypoints: None }
    }

    /// Checks internal consistency: hand-based proxies need a selector,
    /// per-recording/per-duration proxies must not carry one, and
    /// `keypoints` is only meaningful for velocity.
    pub fn validate(&self) -> Result<(), BindingError> {
        if self.kind.needs_hand() && self.hand.is_none() {
            return Err(BindingError::MissingHand { kind: self.kind, gesture: self.gesture });
        }
        if !self.kind.needs_hand() && self.hand.is_some() {
            return Err(BindingError::UnexpectedHand { kind: self.kind, gesture: self.gesture });
        }
        if self.keypoints.is_some() && self.kind != ProxyKind::HandVelocity {
            return Err(BindingError::UnexpectedKeypoints { kind: self.kind });
        }
        if self.kind == ProxyKind::BackgroundTime && self.gesture != GestureLabel::NoGesture {
            return Err(BindingError::BackgroundKindOnForeground { gesture: self.gesture });
        }
        if let Some(kps) = &self.keypoints {
            if kps.is_empty() {
                return Err(BindingError::EmptyKeypoints);
            }
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BindingError {
    #[error("binding ({kind}, {gesture}) needs a hand selector")]
    MissingHand { kind: ProxyKind, gesture: GestureLabel },
    #[error("binding ({kind}, {gesture}) must not have a hand selector")]
    UnexpectedHand { kind: ProxyKind, gesture: GestureLabel },
    #[error("keypoint sets only apply to hand_velocity, not {kind}")]
    UnexpectedKeypoints { kind: ProxyKind },
    #[error("background_time only applies to the background gesture, not {gesture}")]
    BackgroundKindOnForeground { gesture: GestureLabel },
    #[error("a binding's keypoint set must not be empty")]
    EmptyKeypoints,
    #[error("failed to read bindings file: {0}")]
    Io(#[from] io::Error),
    #[error("bindings file is not valid TOML: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("failed to serialize bindings: {0}")]
    Format(#[from] toml::ser::Error),
}

/// The built-in binding table. Durations are tracked for every gesture;
/// the remaining proxies target the gesture/hand pairs where the motion
/// carries skill information:
///
/// * background time — total time off-task per recording;
/// * hand orientation — the scissors hand while cutting and the needle
///   driver hand while passing the needle;
/// * thumb–index distance — the needle driver hand during needle passing
///   and instrumental ties, plus the left (suture-holding) hand while
///   pulling the suture through;
/// * fingers-to-tissue distance — the left hand while cutting;
/// * hand velocity — the needle driver hand while pulling the suture,
///   over all 21 landmarks.
pub fn default_bindings() -> Vec<ProxyBinding> {
    use GestureLabel::*;
    use ProxyKind::*;

    let tool = |t| Some(HandSelector::ToolHand { tool: t });
    let side = |s| Some(HandSelector::FixedSide { side: s });

    let mut out = Vec::new();
    for &gesture in GestureLabel::ALL {
        out.push(ProxyBinding::occurrence(GestureDuration, gesture, None));
    }
    out.push(ProxyBinding::occurrence(BackgroundTime, NoGesture, None));
    out.push(ProxyBinding::occurrence(
        HandOrientation,
        CutTheSuture,
        tool(ToolLabel::Scissors),
    ));
    out.push(ProxyBinding::occurrence(
        HandOrientation,
        NeedlePassing,
        tool(ToolLabel::NeedleDriver),
    ));
    out.push(ProxyBinding::occurrence(
        ThumbIndexDistance,
        NeedlePassing,
        tool(ToolLabel::NeedleDriver),
    ));
    out.push(ProxyBinding::occurrence(
        ThumbIndexDistance,
        InstrumentalTie,
        tool(ToolLabel::NeedleDriver),
    ));
    out.push(ProxyBinding::occurrence(
        ThumbIndexDistance,
        PullTheSuture,
        side(HandSide::Left),
    ));
    out.push(ProxyBinding::occurrence(
        FingersToTissueDistance,
        CutTheSuture,
        side(HandSide::Left),
    ));
    out.push(ProxyBinding::occurrence(
        HandVelocity,
        PullTheSuture,
        tool(ToolLabel::NeedleDriver),
    ));
    out
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct BindingsFile {
    #[serde(default, rename = "binding")]
    bindings: Vec<ProxyBinding>,
}

/// Loads a binding table from a TOML file of `[[binding]]` entries and
/// validates every entry.
pub fn load_bindings(path: &Path) -> Result<Vec<ProxyBinding>, BindingError> {
    let text = std::fs::read_to_string(path)?;
    let file: BindingsFile = toml::from_str(&text)?;
    for binding in &file.bindings {
        binding.validate()?;
    }
    Ok(file.bindings)
}

/// Writes a binding table as TOML `[[binding]]` entries.
pub fn save_bindings(path: &Path, bindings: &[ProxyBinding]) -> Result<(), BindingError> {
    let file = BindingsFile { bindings: bindings.to_vec() };
    let text = toml::to_string_pretty(&file)?;
    std::fs::write(path, text)?;
    Ok(())
}
