//! Subject feedback against the expert baseline: z-scores per (proxy,
//! gesture) pair and coaching messages selected from an editable template
//! table when a score exceeds the entry's trigger threshold.

use std::collections::BTreeMap;
use std::path::Path;

use log::debug;
use serde::{Deserialize, Serialize};

use crate::model::GestureLabel;
use crate::proxies::{ProxyKind, ProxySample};

use super::baseline::ExpertBaseline;
use super::mean;

/// Which side of the expert mean a subject's value falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    High,
    Low,
}

/// One evaluated (proxy, gesture) pair for a subject.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackEntry {
    pub kind: ProxyKind,
    pub gesture: GestureLabel,
    /// The subject's mean over their gesture occurrences.
    pub subject_value: f64,
    pub expert_mean: f64,
    pub expert_std: f64,
    /// `(subject_value − expert_mean) / expert_std`; absent when the
    /// expert standard deviation is zero.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_score: Option<f64>,
    /// True when `|z_score|` exceeds the baseline entry's threshold.
    pub triggered: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
    /// True when the entry cannot be scored (zero expert spread).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unscorable: bool,
    /// Coaching message; present only on triggered entries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

/// Feedback for one recording: every (proxy, gesture) pair present in
/// both the subject's samples and the baseline, scored against the
/// experts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackReport {
    pub recording_id: String,
    /// Version of the baseline file the scores came from.
    pub baseline_version: String,
    pub entries: Vec<FeedbackEntry>,
}

impl FeedbackReport {
    /// Messages of triggered entries, in entry order.
    pub fn triggered_messages(&self) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|e| e.triggered)
            .filter_map(|e| e.message.as_deref())
            .collect()
    }
}

/// One row of the message table. `gesture = None` makes the template a
/// kind-wide fallback.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MessageTemplate {
    pub kind: ProxyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gesture: Option<GestureLabel>,
    pub direction: Direction,
    pub message: String,
}

/// The coaching-message table. Lookup prefers an exact (kind, gesture,
/// direction) template, then a kind-wide one, then a generated generic
/// sentence, so every triggered entry always has a message.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MessageTemplates {
    #[serde(default, rename = "template")]
    pub templates: Vec<MessageTemplate>,
}

impl Default for MessageTemplates {
    fn default() -> Self {
        let exact = |kind, gesture, direction, message: &str| MessageTemplate {
            kind,
            gesture: Some(gesture),
            direction,
            message: message.to_string(),
        };
        use Direction::*;
        use GestureLabel::*;
        use ProxyKind::*;
        MessageTemplates {
            templates: vec![
                exact(
                    FingersToTissueDistance,
                    CutTheSuture,
                    Low,
                    "Hold the suture farther from the tissue while cutting.",
                ),
                exact(
                    ThumbIndexDistance,
                    NeedlePassing,
                    Low,
                    "Straighten the index finger along the needle driver.",
                ),
                exact(
                    ThumbIndexDistance,
                    InstrumentalTie,
                    Low,
                    "Straighten the index finger along the needle driver.",
                ),
                exact(
                    BackgroundTime,
                    NoGesture,
                    High,
                    "Reduce the idle time between gestures.",
                ),
                exact(
                    HandVelocity,
                    PullTheSuture,
                    Low,
                    "Pull the suture through in one quick, continuous motion.",
                ),
                MessageTemplate {
                    kind: HandVelocity,
                    gesture: None,
                    direction: High,
                    message: "Slow the hand down for more controlled movement.".to_string(),
                },
            ],
        }
    }
}

impl MessageTemplates {
    /// Message for a triggered entry. Falls back from an exact gesture
    /// match to a kind-wide template to a generated sentence.
    pub fn resolve(
        &self,
        kind: ProxyKind,
        gesture: GestureLabel,
        direction: Direction,
    ) -> String {
        let exact = self.templates.iter().find(|t| {
            t.kind == kind && t.gesture == Some(gesture) && t.direction == direction
        });
        if let Some(t) = exact {
            return t.message.clone();
        }
        let kind_wide = self
            .templates
            .iter()
            .find(|t| t.kind == kind && t.gesture.is_none() && t.direction == direction);
        if let Some(t) = kind_wide {
            return t.message.clone();
        }
        let comparative = match direction {
            Direction::High => "higher",
            Direction::Low => "lower",
        };
        format!("Your {kind} during {gesture} is markedly {comparative} than the expert range.")
    }
}

/// Loads a template table from a TOML file of `[[template]]` entries.
pub fn load_message_templates(path: &Path) -> Result<MessageTemplates, TemplateError> {
    let text = std::fs::read_to_string(path)?;
    Ok(toml::from_str(&text)?)
}

#[derive(Debug, thiserror::Error)]
pub enum TemplateError {
    #[error("failed to read template file: {0}")]
    Io(#[from] std::io::Error),
    #[error("template file is not valid TOML: {0}")]
    Parse(#[from] toml::de::Error),
}

/// Scores one recording's proxy samples against the baseline. Subject
/// values are the per-(kind, gesture) means over the recording's
/// occurrences; pairs the baseline does not cover are skipped with a
/// debug log entry. Entries come out sorted by (kind, gesture).
pub fn generate_feedback(
    recording_id: &str,
    samples: &[ProxySample],
    baseline: &ExpertBaseline,
    templates: &MessageTemplates,
) -> FeedbackReport {
    let mut subject: BTreeMap<(ProxyKind, GestureLabel), Vec<f64>> = BTreeMap::new();
    for s in samples {
        subject.entry((s.kind, s.gesture)).or_default().push(s.value);
    }

    let mut entries = Vec::new();
    for ((kind, gesture), values) in subject {
        let Some(reference) = baseline.get(kind, gesture) else {
            debug!("({kind}, {gesture}): not in the baseline, skipped");
            continue;
        };
        let subject_value = mean(&values);
        let mut entry = FeedbackEntry {
            kind,
            gesture,
            subject_value,
            expert_mean: reference.mean,
            expert_std: reference.std,
            z_score: None,
            triggered: false,
            direction: None,
            unscorable: false,
            message: None,
        };
        if reference.std == 0.0 {
            entry.unscorable = true;
        } else {
            let z = (subject_value - reference.mean) / reference.std;
            entry.z_score = Some(z);
            entry.direction = if z > 0.0 {
                Some(Direction::High)
            } else if z < 0.0 {
                Some(Direction::Low)
            } else {
                None
            };
            if z.abs() > reference.threshold_k {
                entry.triggered = true;
                let direction = entry.direction.expect("|z| > k > 0 implies a sign");
                entry.message = Some(templates.resolve(kind, gesture, direction));
            }
        }
        entries.push(entry);
    }

    FeedbackReport {
        recording_id: recording_id.to_string(),
        baseline_version: baseline.version.clone(),
        entries,
    }
}
