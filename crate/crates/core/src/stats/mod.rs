//! Group statistics: descriptive moments, Student-t machinery, two-sample
//! t-tests, participant-level aggregation, expert baselines, and the
//! feedback rules built on them.

mod baseline;
mod feedback;
mod groups;
mod moments;
pub mod student_t;
mod ttest;

pub use baseline::{
    build_baseline, load_baseline, save_baseline, BaselineEntry, BaselineError, ExpertBaseline,
    BASELINE_FORMAT_VERSION, DEFAULT_THRESHOLD_K,
};
pub use feedback::{
    generate_feedback, load_message_templates, Direction, FeedbackEntry, FeedbackReport,
    MessageTemplate, MessageTemplates, TemplateError,
};
pub use groups::{
    compare_groups, group_stats, participant_means, significance_stars, GroupComparison,
    GroupStats, ParticipantMean,
};
pub use moments::{mean, quartiles, sample_std, sample_variance, Quartiles};
pub use ttest::{t_test_two_sided, TTestResult, TTestVariant, ZeroVarianceCase};

/// Errors from the statistical primitives.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StatsError {
    #[error("two-sample test needs at least one value per side, got {nx} and {ny}")]
    InsufficientSample { nx: usize, ny: usize },
    #[error("input contains a non-finite value")]
    NonFiniteInput,
    #[error("input is empty")]
    EmptyInput,
}
