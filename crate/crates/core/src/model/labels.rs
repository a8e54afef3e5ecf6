//! Label vocabularies shared by every stage of the pipeline.
//!
//! Each enum has a single canonical string form used in files and reports.
//! Parsing is case-insensitive and tolerates the common separator variants
//! (`"Needle Passing"`, `"needle_passing"`, `"needle-passing"`); rendering
//! always emits the canonical form so that outputs are byte-stable.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Error returned when a string does not name any member of a vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown {vocabulary} label: {input:?}")]
pub struct UnknownLabelError {
    /// Human-readable name of the vocabulary that was searched.
    pub vocabulary: &'static str,
    /// The offending input string.
    pub input: String,
}

/// Normalizes a label string for lookup: lowercases and collapses the
/// separator variants (space, `_`, `-`) so that `"Pull the Suture"`,
/// `"pull_the_suture"`, and `"PULL-THE-SUTURE"` all compare equal.
fn normalize(s: &str) -> String {
    s.trim()
        .chars()
        .map(|c| match c {
            '_' | '-' | ' ' => ' ',
            c => c.to_ascii_lowercase(),
        })
        .collect::<String>()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

macro_rules! string_enum {
    (
        $(#[$meta:meta])*
        $name:ident, $vocab:literal {
            $( $(#[$vmeta:meta])* $variant:ident => $canon:literal ),+ $(,)?
        }
    ) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum $name {
            $( $(#[$vmeta])* #[serde(rename = $canon)] $variant, )+
        }

        impl $name {
            /// All members, in declaration order.
            pub const ALL: &'static [$name] = &[ $( $name::$variant, )+ ];

            /// Canonical string form used in files and reports.
            pub fn as_str(&self) -> &'static str {
                match self {
                    $( $name::$variant => $canon, )+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = UnknownLabelError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                let needle = normalize(s);
                for v in Self::ALL {
                    if normalize(v.as_str()) == needle {
                        return Ok(*v);
                    }
                }
                Err(UnknownLabelError { vocabulary: $vocab, input: s.to_string() })
            }
        }
    };
}

string_enum! {
    /// Surgical gesture classes annotated on the gesture track.
    ///
    /// `NoGesture` is the background class: frames where no annotated
    /// gesture is being performed.
    GestureLabel, "gesture" {
        /// Background: no annotated gesture in progress.
        NoGesture => "no_gesture",
        NeedlePassing => "needle_passing",
        PullTheSuture => "pull_the_suture",
        InstrumentalTie => "instrumental_tie",
        LayTheKnot => "lay_the_knot",
        CutTheSuture => "cut_the_suture",
    }
}

string_enum! {
    /// Tool-usage classes annotated per hand on the tool tracks.
    ///
    /// `ForcepsNotUsed` marks a hand that holds forceps without actively
    /// using them; `NoTool` marks an empty hand.
    ToolLabel, "tool" {
        NeedleDriver => "needle_driver",
        Scissors => "scissors",
        Forceps => "forceps",
        ForcepsNotUsed => "forceps_not_used",
        /// Background: the hand holds no tool.
        NoTool => "no_tool",
    }
}

string_enum! {
    /// Which physical hand a detection or annotation refers to.
    HandSide, "hand side" {
        Left => "left",
        Right => "right",
    }
}

string_enum! {
    /// Skill cohort of a participant.
    SkillGroup, "group" {
        Novice => "novice",
        Expert => "expert",
    }
}

string_enum! {
    /// Camera placement of a recording. Orientation-style proxies are only
    /// meaningful for `Frontal` views.
    CameraView, "camera view" {
        Frontal => "frontal",
        Closeup => "closeup",
        Other => "other",
    }
}

string_enum! {
    /// The three annotation tracks every recording carries.
    TrackKind, "track" {
        Gesture => "gesture",
        ToolLeft => "tool_left",
        ToolRight => "tool_right",
    }
}

impl TrackKind {
    /// The track that annotates tool usage for `side`.
    pub fn for_tool_side(side: HandSide) -> TrackKind {
        match side {
            HandSide::Left => TrackKind::ToolLeft,
            HandSide::Right => TrackKind::ToolRight,
        }
    }
}

impl HandSide {
    /// The other hand.
    pub fn opposite(&self) -> HandSide {
        match self {
            HandSide::Left => HandSide::Right,
            HandSide::Right => HandSide::Left,
        }
    }
}

/// A label drawn from whichever vocabulary matches its track.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Gesture(GestureLabel),
    Tool(ToolLabel),
}

impl Label {
    /// Canonical string form of the wrapped label.
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::Gesture(g) => g.as_str(),
            Label::Tool(t) => t.as_str(),
        }
    }

    /// Whether this label is the background class of its vocabulary
    /// (`no_gesture` on the gesture track, `no_tool` on tool tracks).
    pub fn is_background(&self) -> bool {
        matches!(self, Label::Gesture(GestureLabel::NoGesture) | Label::Tool(ToolLabel::NoTool))
    }

    /// Whether this label belongs to the vocabulary of `track`.
    pub fn belongs_to(&self, track: TrackKind) -> bool {
        matches!(
            (self, track),
            (Label::Gesture(_), TrackKind::Gesture)
                | (Label::Tool(_), TrackKind::ToolLeft | TrackKind::ToolRight)
        )
    }

    /// Parses a label string against the vocabulary of `track`.
    pub fn parse_for_track(s: &str, track: TrackKind) -> Result<Label, UnknownLabelError> {
        match track {
            TrackKind::Gesture => s.parse::<GestureLabel>().map(Label::Gesture),
            TrackKind::ToolLeft | TrackKind::ToolRight => s.parse::<ToolLabel>().map(Label::Tool),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl From<GestureLabel> for Label {
    fn from(g: GestureLabel) -> Self {
        Label::Gesture(g)
    }
}

impl From<ToolLabel> for Label {
    fn from(t: ToolLabel) -> Self {
        Label::Tool(t)
    }
}
