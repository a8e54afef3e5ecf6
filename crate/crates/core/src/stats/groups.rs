//! Participant-level aggregation and novice/expert group comparison.
//!
//! The statistical unit is the participant, not the gesture occurrence:
//! each participant's proxy samples for a (kind, gesture) pair are first
//! averaged, and group statistics and t-tests run over those means. This
//! keeps prolific participants from dominating the comparison.

use std::collections::BTreeMap;

use log::debug;
use serde::{Deserialize, Serialize};

use crate::model::{GestureLabel, SkillGroup};
use crate::proxies::{ProxyKind, ProxySample};

use super::{
    mean, quartiles, sample_std, t_test_two_sided, Quartiles, StatsError, TTestResult,
    TTestVariant,
};

/// One participant's mean value for one (proxy, gesture) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticipantMean {
    pub participant_id: String,
    pub group: SkillGroup,
    pub kind: ProxyKind,
    pub gesture: GestureLabel,
    pub value: f64,
    /// Number of occurrence-level samples behind the mean.
    pub n_samples: u32,
}

/// Collapses occurrence-level samples to one mean per participant and
/// (kind, gesture) pair. Output is sorted by kind, gesture, then
/// participant id, so downstream results are deterministic.
pub fn participant_means(samples: &[ProxySample]) -> Vec<ParticipantMean> {
    let mut buckets: BTreeMap<(ProxyKind, GestureLabel, &str), (SkillGroup, Vec<f64>)> =
        BTreeMap::new();
    for s in samples {
        buckets
            .entry((s.kind, s.gesture, s.participant_id.as_str()))
            .or_insert_with(|| (s.group, Vec::new()))
            .1
            .push(s.value);
    }
    buckets
        .into_iter()
        .map(|((kind, gesture, participant_id), (group, values))| ParticipantMean {
            participant_id: participant_id.to_string(),
            group,
            kind,
            gesture,
            value: mean(&values),
            n_samples: values.len() as u32,
        })
        .collect()
}

/// Descriptive statistics of one group's participant means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupStats {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation (n - 1); zero when `n == 1`.
    pub std: f64,
    pub quartiles: Quartiles,
}

/// Summarizes a non-empty slice of participant means.
pub fn group_stats(values: &[f64]) -> Result<GroupStats, StatsError> {
    if values.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFiniteInput);
    }
    Ok(GroupStats {
        n: values.len(),
        mean: mean(values),
        std: sample_std(values),
        quartiles: quartiles(values).expect("non-empty input"),
    })
}

/// Significance marker: `**` below 0.005, `*` below 0.05, empty otherwise.
pub fn significance_stars(p_value: f64) -> &'static str {
    if p_value < 0.005 {
        "**"
    } else if p_value < 0.05 {
        "*"
    } else {
        ""
    }
}

/// Novice-versus-expert comparison of one (proxy, gesture) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupComparison {
    pub kind: ProxyKind,
    pub gesture: GestureLabel,
    pub novice: GroupStats,
    pub expert: GroupStats,
    pub test: TTestResult,
    /// `**`, `*`, or empty, from [`significance_stars`].
    pub stars: String,
}

/// Runs the two-sample test for every (kind, gesture) pair that has at
/// least two participants in each group. Pairs below that are skipped
/// with a debug log entry. Results are sorted by kind then gesture.
pub fn compare_groups(
    means: &[ParticipantMean],
    variant: TTestVariant,
) -> Result<Vec<GroupComparison>, StatsError> {
    let mut by_pair: BTreeMap<(ProxyKind, GestureLabel), (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for m in means {
        let entry = by_pair.entry((m.kind, m.gesture)).or_default();
        match m.group {
            SkillGroup::Novice => entry.0.push(m.value),
            SkillGroup::Expert => entry.1.push(m.value),
        }
    }

    let mut out = Vec::new();
    for ((kind, gesture), (novice_values, expert_values)) in by_pair {
        if novice_values.len() < 2 || expert_values.len() < 2 {
            debug!(
                "({kind}, {gesture}): {} novice / {} expert participants, need 2 each; skipped",
                novice_values.len(),
                expert_values.len()
            );
            continue;
        }
        let test = t_test_two_sided(&novice_values, &expert_values, variant)?;
        let stars = significance_stars(test.p_value).to_string();
        out.push(GroupComparison {
            kind,
            gesture,
            novice: group_stats(&novice_values)?,
            expert: group_stats(&expert_values)?,
            test,
            stars,
        });
    }
    Ok(out)
}
