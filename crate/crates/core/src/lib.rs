//! dexengine: batch analytics for hand-pose detection streams recorded
//! during open-surgery suturing training.
//!
//! The engine turns raw per-frame hand and tool detections plus segment
//! annotations into:
//!
//! - cleaned keypoint trajectories (confidence gating, gap imputation,
//!   Savitzky-Golay smoothing) — [`signal`];
//! - temporal segmentation quality metrics (frame accuracy, segmental edit
//!   score, segmental F1 at several overlap thresholds) — [`segmetrics`];
//! - interpretable per-gesture motion proxies (durations, orientation,
//!   pinch distance, distance to tissue, hand velocity, background time)
//!   — [`proxies`];
//! - cohort statistics with Welch/pooled t-tests, an expert baseline, and
//!   rule-based trainee feedback — [`stats`];
//! - a deterministic batch CLI over dataset directories — [`cli`].
//!
//! All processing is deterministic: rerunning a command over the same
//! inputs produces byte-identical outputs regardless of thread count.

pub mod config;
pub mod dataset;
pub mod ingest;
pub mod model;
pub mod proxies;
pub mod segmetrics;
pub mod signal;
pub mod stats;
pub mod synth;

pub mod cli;
