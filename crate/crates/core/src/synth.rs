//! Deterministic synthetic fixture recordings with known group structure.
//!
//! The generator scripts a simplified suturing session: three gesture
//! cycles bracketed by idle periods, two hands with a plausible 21-point
//! layout, per-frame Gaussian jitter, occasional low-confidence keypoints,
//! and tool detections consistent with the tool timelines. Novices differ
//! from experts in three scripted ways: longer idle (`no_gesture`) time, a
//! fingertip midpoint closer to the tissue while cutting, and a slower
//! pulling hand; they also pinch the needle driver tighter. Everything is
//! a pure function of the seed, so fixture datasets reproduce bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use std::path::Path;

use crate::dataset::{save_recording, DatasetError, RecordingBundle, RecordingDir};
use crate::model::{
    BoundingBox, CameraView, DetectionFrame, GestureLabel, HandDetection, HandSide, Keypoint,
    Label, RecordingMeta, SegmentTimeline, SkillGroup, TissueRegion, ToolLabel, TrackKind,
    KEYPOINT_COUNT,
};

/// Shape of a generated dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthOptions {
    pub seed: u64,
    pub experts: usize,
    pub novices: usize,
    pub fps: f64,
}

impl Default for SynthOptions {
    fn default() -> SynthOptions {
        SynthOptions { seed: 7, experts: 6, novices: 7, fps: 30.0 }
    }
}

/// The scripted group contrasts.
struct GroupProfile {
    /// Idle frames before each cycle (the trailing idle block is fixed).
    idle_frames: i64,
    /// Fingertip-midpoint distance to the tissue while cutting, px.
    cut_distance: f64,
    /// Thumb-to-index spread while passing the needle and tying, px.
    working_pinch: f64,
    /// Per-frame displacement of the pulling hand, px.
    pull_slope: f64,
}

impl GroupProfile {
    fn for_group(group: SkillGroup) -> GroupProfile {
        match group {
            SkillGroup::Expert => GroupProfile {
                idle_frames: 20,
                cut_distance: 80.0,
                working_pinch: 40.0,
                pull_slope: 4.0,
            },
            SkillGroup::Novice => GroupProfile {
                idle_frames: 60,
                cut_distance: 15.0,
                working_pinch: 15.0,
                pull_slope: 1.2,
            },
        }
    }
}

/// The tissue rectangle every synthetic recording is annotated with.
pub fn synth_tissue_region() -> TissueRegion {
    TissueRegion::new(300.0, 260.0, 340.0, 300.0)
}

const RIGHT_BASE: (f64, f64) = (430.0, 360.0);
const LEFT_WORK: (f64, f64) = (230.0, 390.0);
const LEFT_IDLE: (f64, f64) = (160.0, 430.0);
const ORI_RIGHT: f64 = 44.0;
const ORI_LEFT: f64 = -44.0;
const NEUTRAL_PINCH: f64 = 25.0;
const JITTER_SIGMA: f64 = 1.0;
const LOW_CONF_RATE: f64 = 0.03;
const HAND_DROP_RATE: f64 = 0.01;

/// Relative 21-point layout for a hand at `base`, parameterized by the
/// signed index-to-pinky MCP spread (`ori`) and the thumb-to-index tip
/// distance (`pinch`). By construction `x[IndexMcp] - x[PinkyMcp] = ori`
/// and `‖ThumbTip - IndexTip‖ = |pinch|`.
fn hand_keypoints(base: (f64, f64), ori: f64, pinch: f64) -> [(f64, f64); KEYPOINT_COUNT] {
    let (bx, by) = base;
    let rel: [(f64, f64); KEYPOINT_COUNT] = [
        (0.0, 0.0),                     // wrist
        (ori * 0.15, -12.0),            // thumb cmc
        (ori * 0.30, -24.0),            // thumb mcp
        (ori * 0.42, -40.0),            // thumb ip
        (ori / 2.0 + pinch, -58.0),     // thumb tip
        (ori / 2.0, -30.0),             // index mcp
        (ori / 2.0, -40.0),             // index pip
        (ori / 2.0, -50.0),             // index dip
        (ori / 2.0, -58.0),             // index tip
        (ori / 6.0, -31.0),             // middle mcp
        (ori / 6.0, -43.0),             // middle pip
        (ori / 6.0, -54.0),             // middle dip
        (ori / 6.0, -63.0),             // middle tip
        (-ori / 6.0, -30.0),            // ring mcp
        (-ori / 6.0, -41.0),            // ring pip
        (-ori / 6.0, -51.0),            // ring dip
        (-ori / 6.0, -60.0),            // ring tip
        (-ori / 2.0, -28.0),            // pinky mcp
        (-ori / 2.0, -37.0),            // pinky pip
        (-ori / 2.0, -45.0),            // pinky dip
        (-ori / 2.0, -52.0),            // pinky tip
    ];
    rel.map(|(dx, dy)| (bx + dx, by + dy))
}

/// Triangular offset within a pull segment: `slope` px gained or lost
/// every frame, direction flipping every 15 frames, starting at zero.
fn pull_offset(local_frame: u32, slope: f64) -> f64 {
    let k = local_frame % 30;
    let tri = if k < 15 { k } else { 30 - k };
    tri as f64 * slope
}

fn tool_for(gesture: GestureLabel, side: HandSide) -> ToolLabel {
    match (side, gesture) {
        (_, GestureLabel::NoGesture) => ToolLabel::NoTool,
        (HandSide::Right, GestureLabel::CutTheSuture) => ToolLabel::Scissors,
        (HandSide::Right, _) => ToolLabel::NeedleDriver,
        (HandSide::Left, _) => ToolLabel::Forceps,
    }
}

/// Per-frame gesture script: three cycles of the six-gesture sequence with
/// jittered lengths, plus a short trailing idle block.
fn gesture_script(rng: &mut ChaCha8Rng, profile: &GroupProfile) -> Vec<GestureLabel> {
    let mut frames = Vec::new();
    let push = |frames: &mut Vec<GestureLabel>, label, base: i64, rng: &mut ChaCha8Rng| {
        let len = base + rng.gen_range(-3..=3);
        frames.extend(std::iter::repeat_n(label, len as usize));
    };
    for _ in 0..3 {
        push(&mut frames, GestureLabel::NoGesture, profile.idle_frames, rng);
        push(&mut frames, GestureLabel::NeedlePassing, 30, rng);
        push(&mut frames, GestureLabel::PullTheSuture, 30, rng);
        push(&mut frames, GestureLabel::InstrumentalTie, 30, rng);
        push(&mut frames, GestureLabel::LayTheKnot, 25, rng);
        push(&mut frames, GestureLabel::CutTheSuture, 25, rng);
    }
    push(&mut frames, GestureLabel::NoGesture, 10, rng);
    frames
}

struct HandPose {
    base: (f64, f64),
    ori: f64,
    pinch: f64,
}

/// Where each hand is and how it is shaped at frame `t`.
fn poses_at(
    t: usize,
    gesture: GestureLabel,
    local_frame: u32,
    profile: &GroupProfile,
    cut_distance: f64,
) -> (HandPose, HandPose) {
    use GestureLabel::*;
    let drift_x = 6.0 * (t as f64 * std::f64::consts::TAU / 120.0).sin();
    let drift_y = 4.0 * (t as f64 * std::f64::consts::TAU / 150.0).sin();

    let right_pinch = match gesture {
        NeedlePassing | InstrumentalTie => profile.working_pinch,
        _ => NEUTRAL_PINCH,
    };
    let pull = match gesture {
        PullTheSuture => pull_offset(local_frame, profile.pull_slope),
        _ => 0.0,
    };
    let right = HandPose {
        base: (RIGHT_BASE.0 + drift_x + pull, RIGHT_BASE.1 + drift_y),
        ori: ORI_RIGHT,
        pinch: right_pinch,
    };

    let left_base = match gesture {
        NoGesture => LEFT_IDLE,
        CutTheSuture => {
            // Park the fingertip midpoint `cut_distance` px left of the
            // tissue rectangle, level with its vertical span.
            let midpoint_dx = ORI_LEFT / 2.0 + NEUTRAL_PINCH / 2.0;
            (synth_tissue_region().x_min - cut_distance - midpoint_dx, 280.0 + 58.0)
        }
        _ => LEFT_WORK,
    };
    let left = HandPose {
        base: (left_base.0 + 0.5 * drift_x, left_base.1 + 0.5 * drift_y),
        ori: ORI_LEFT,
        pinch: NEUTRAL_PINCH,
    };
    (left, right)
}

fn detection_for(pose: &HandPose, rng: &mut ChaCha8Rng, jitter: &Normal<f64>) -> HandDetection {
    let mut keypoints = [Keypoint::new(0.0, 0.0, 0.0); KEYPOINT_COUNT];
    let layout = hand_keypoints(pose.base, pose.ori, pose.pinch);
    let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
    let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (slot, (x, y)) in keypoints.iter_mut().zip(layout) {
        let x = x + jitter.sample(rng);
        let y = y + jitter.sample(rng);
        let conf = if rng.gen_bool(LOW_CONF_RATE) {
            0.1
        } else {
            0.75 + 0.2 * rng.gen::<f64>()
        };
        *slot = Keypoint::new(x, y, conf);
        min_x = min_x.min(x);
        min_y = min_y.min(y);
        max_x = max_x.max(x);
        max_y = max_y.max(y);
    }
    let bbox = BoundingBox::new(
        min_x - 6.0,
        min_y - 6.0,
        max_x + 6.0,
        max_y + 6.0,
        0.8 + 0.15 * rng.gen::<f64>(),
    );
    HandDetection { bbox, keypoints }
}

fn tool_box_near(base: (f64, f64), rng: &mut ChaCha8Rng) -> BoundingBox {
    BoundingBox::new(
        base.0 - 25.0,
        base.1 - 42.0,
        base.0 + 25.0,
        base.1 - 18.0,
        0.75 + 0.2 * rng.gen::<f64>(),
    )
}

/// Generates one recording. `index` is one-based within the group.
pub fn generate_recording(
    group: SkillGroup,
    index: usize,
    options: &SynthOptions,
) -> RecordingBundle {
    let tag = match group {
        SkillGroup::Expert => 'e',
        SkillGroup::Novice => 'n',
    };
    let recording_id = format!("r_{tag}{index:02}");
    let participant_id = format!("p_{tag}{index:02}");
    // One independent, reproducible generator per recording.
    let stream_index = match group {
        SkillGroup::Expert => index,
        SkillGroup::Novice => 1000 + index,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(
        options.seed ^ (stream_index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
    );
    let jitter = Normal::new(0.0, JITTER_SIGMA).expect("constant sigma is valid");

    let profile = GroupProfile::for_group(group);
    let script = gesture_script(&mut rng, &profile);
    let cut_distance = profile.cut_distance + rng.gen_range(-2.0..2.0);

    let mut frames = Vec::with_capacity(script.len());
    let mut local_frame = 0u32;
    for (t, &gesture) in script.iter().enumerate() {
        if t > 0 && script[t - 1] != gesture {
            local_frame = 0;
        }
        let (left_pose, right_pose) = poses_at(t, gesture, local_frame, &profile, cut_distance);
        let mut frame = DetectionFrame::empty(t as u32);
        for (side, pose) in [(HandSide::Left, &left_pose), (HandSide::Right, &right_pose)] {
            let drop_hand = rng.gen_bool(HAND_DROP_RATE);
            let detection = detection_for(pose, &mut rng, &jitter);
            if !drop_hand {
                *frame.hand_mut(side) = Some(detection);
            }
        }
        for (side, pose) in [(HandSide::Left, &left_pose), (HandSide::Right, &right_pose)] {
            let tool = tool_for(gesture, side);
            if tool != ToolLabel::NoTool {
                frame.tools.entry(tool).or_insert_with(|| tool_box_near(pose.base, &mut rng));
            }
        }
        frames.push(frame);
        local_frame += 1;
    }

    let gesture_labels: Vec<Label> = script.iter().map(|&g| Label::from(g)).collect();
    let tool_labels = |side: HandSide| -> Vec<Label> {
        script.iter().map(|&g| Label::from(tool_for(g, side))).collect()
    };
    let gesture = SegmentTimeline::from_frame_labels(TrackKind::Gesture, &gesture_labels)
        .expect("scripts are non-empty gesture sequences");
    let tool_left =
        SegmentTimeline::from_frame_labels(TrackKind::ToolLeft, &tool_labels(HandSide::Left))
            .expect("scripts are non-empty tool sequences");
    let tool_right =
        SegmentTimeline::from_frame_labels(TrackKind::ToolRight, &tool_labels(HandSide::Right))
            .expect("scripts are non-empty tool sequences");

    let meta = RecordingMeta {
        recording_id,
        participant_id,
        group,
        fps: options.fps,
        camera_view: CameraView::Frontal,
        frame_count: script.len() as u32,
        tissue_region: Some(synth_tissue_region()),
    };
    RecordingBundle { meta, frames, gesture, tool_left, tool_right }
}

/// Generates the full fixture set: experts first, then novices, each with
/// an independent per-recording generator derived from the seed.
pub fn generate_dataset(options: &SynthOptions) -> Vec<RecordingBundle> {
    let mut bundles = Vec::with_capacity(options.experts + options.novices);
    for i in 1..=options.experts {
        bundles.push(generate_recording(SkillGroup::Expert, i, options));
    }
    for i in 1..=options.novices {
        bundles.push(generate_recording(SkillGroup::Novice, i, options));
    }
    bundles
}

/// Generates and writes the fixture set under `root`.
pub fn write_dataset(
    root: &Path,
    options: &SynthOptions,
) -> Result<Vec<RecordingDir>, DatasetError> {
    generate_dataset(options)
        .iter()
        .map(|bundle| save_recording(root, bundle))
        .collect()
}
