//! Two-sided two-sample t-tests (Welch and pooled-variance).

use serde::{Deserialize, Serialize};

use crate::stats::student_t::student_t_two_sided;
use crate::stats::{mean, sample_variance, StatsError};

/// Which variance model the test assumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TTestVariant {
    /// Unequal variances (Welch-Satterthwaite degrees of freedom). The
    /// default, since equal spread across skill cohorts is not a safe
    /// assumption.
    #[default]
    Welch,
    /// Classical equal-variance test, `df = n_x + n_y - 2`.
    Pooled,
}

/// Degenerate input where both samples are constant, handled explicitly
/// rather than through a zero standard error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroVarianceCase {
    /// Both samples constant with equal means: no evidence of difference
    /// (t = 0, p = 1).
    EqualMeans,
    /// Both samples constant with different means: the difference is exact
    /// (p = 0, t signed infinite).
    DifferentMeans,
}

/// Result of a two-sided two-sample t-test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub t_statistic: f64,
    pub degrees_of_freedom: f64,
    /// Two-sided p-value in [0, 1].
    pub p_value: f64,
    pub variant: TTestVariant,
    /// Set when both samples were constant and the statistic was assigned
    /// by convention instead of the usual formulas.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero_variance: Option<ZeroVarianceCase>,
}

/// Two-sided t-test of the null hypothesis that `xs` and `ys` share their
/// mean. Requires at least two observations per sample and finite values.
pub fn t_test_two_sided(
    xs: &[f64],
    ys: &[f64],
    variant: TTestVariant,
) -> Result<TTestResult, StatsError> {
    if xs.len() < 2 || ys.len() < 2 {
        return Err(StatsError::InsufficientSample { nx: xs.len(), ny: ys.len() });
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(StatsError::NonFiniteInput);
    }
    let (nx, ny) = (xs.len() as f64, ys.len() as f64);
    let (mx, my) = (mean(xs), mean(ys));
    let (vx, vy) = (sample_variance(xs), sample_variance(ys));

    if vx == 0.0 && vy == 0.0 {
        // Both samples constant: the usual standard error vanishes. Report
        // the two conventional outcomes explicitly.
        let df = nx + ny - 2.0;
        return Ok(if mx == my {
            TTestResult {
                t_statistic: 0.0,
                degrees_of_freedom: df,
                p_value: 1.0,
                variant,
                zero_variance: Some(ZeroVarianceCase::EqualMeans),
            }
        } else {
            TTestResult {
                t_statistic: if mx > my { f64::INFINITY } else { f64::NEG_INFINITY },
                degrees_of_freedom: df,
                p_value: 0.0,
                variant,
                zero_variance: Some(ZeroVarianceCase::DifferentMeans),
            }
        });
    }

    let (se, df) = match variant {
        TTestVariant::Welch => {
            let (ax, ay) = (vx / nx, vy / ny);
            let se = (ax + ay).sqrt();
            let df = (ax + ay) * (ax + ay)
                / (ax * ax / (nx - 1.0) + ay * ay / (ny - 1.0));
            (se, df)
        }
        TTestVariant::Pooled => {
            let df = nx + ny - 2.0;
            let pooled = ((nx - 1.0) * vx + (ny - 1.0) * vy) / df;
            let se = (pooled * (1.0 / nx + 1.0 / ny)).sqrt();
            (se, df)
        }
    };
    let t = (mx - my) / se;
    Ok(TTestResult {
        t_statistic: t,
        degrees_of_freedom: df,
        p_value: student_t_two_sided(t, df),
        variant,
        zero_variance: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn the_reference_pooled_case() {
        // {1..5} vs {2..6}: a pure unit shift of equal-variance samples.
        let r = t_test_two_sided(
            &[1.0, 2.0, 3.0, 4.0, 5.0],
            &[2.0, 3.0, 4.0, 5.0, 6.0],
            TTestVariant::Pooled,
        )
        .unwrap();
        assert_abs_diff_eq!(r.t_statistic, -1.0, epsilon = 1e-12);
        assert_eq!(r.degrees_of_freedom, 8.0);
        assert_abs_diff_eq!(r.p_value, 0.34659350708733416, epsilon = 1e-9);
        assert_eq!(r.zero_variance, None);
    }

    #[test]
    fn identical_samples_give_t_zero_p_one_exactly() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        for variant in [TTestVariant::Welch, TTestVariant::Pooled] {
            let r = t_test_two_sided(&xs, &xs, variant).unwrap();
            assert_eq!(r.t_statistic, 0.0);
            assert_eq!(r.p_value, 1.0);
        }
    }

    #[test]
    fn welch_equals_pooled_for_balanced_equal_variance_samples() {
        // Equal n and equal sample variance: the two standard errors and
        // degrees of freedom coincide algebraically.
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        let ys = [2.5, 3.5, 4.5, 5.5, 6.5];
        let w = t_test_two_sided(&xs, &ys, TTestVariant::Welch).unwrap();
        let p = t_test_two_sided(&xs, &ys, TTestVariant::Pooled).unwrap();
        assert_abs_diff_eq!(w.t_statistic, p.t_statistic, epsilon = 1e-12);
        assert_abs_diff_eq!(w.degrees_of_freedom, p.degrees_of_freedom, epsilon = 1e-12);
        assert_abs_diff_eq!(w.p_value, p.p_value, epsilon = 1e-12);
    }

    #[test]
    fn small_samples_are_rejected() {
        assert_eq!(
            t_test_two_sided(&[1.0], &[1.0, 2.0], TTestVariant::Welch).unwrap_err(),
            StatsError::InsufficientSample { nx: 1, ny: 2 }
        );
        assert!(t_test_two_sided(&[1.0, 2.0], &[], TTestVariant::Welch).is_err());
    }

    #[test]
    fn non_finite_input_is_rejected() {
        assert_eq!(
            t_test_two_sided(&[1.0, f64::NAN], &[1.0, 2.0], TTestVariant::Welch).unwrap_err(),
            StatsError::NonFiniteInput
        );
        assert!(t_test_two_sided(&[1.0, 2.0], &[f64::INFINITY, 2.0], TTestVariant::Pooled)
            .is_err());
    }

    #[test]
    fn constant_equal_samples_are_flagged_with_p_one() {
        let r = t_test_two_sided(&[3.0, 3.0, 3.0], &[3.0, 3.0], TTestVariant::Welch).unwrap();
        assert_eq!(r.t_statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
        assert_eq!(r.zero_variance, Some(ZeroVarianceCase::EqualMeans));
    }

    #[test]
    fn constant_different_samples_are_flagged_with_p_zero() {
        let r = t_test_two_sided(&[3.0, 3.0], &[5.0, 5.0], TTestVariant::Pooled).unwrap();
        assert_eq!(r.p_value, 0.0);
        assert_eq!(r.t_statistic, f64::NEG_INFINITY);
        assert_eq!(r.zero_variance, Some(ZeroVarianceCase::DifferentMeans));
    }

    #[test]
    fn one_constant_sample_follows_the_regular_formulas() {
        // Only one side degenerate: Welch df collapses toward the varying
        // sample's n - 1.
        let r = t_test_two_sided(&[4.0, 4.0, 4.0], &[1.0, 2.0, 3.0, 4.0], TTestVariant::Welch)
            .unwrap();
        assert_eq!(r.zero_variance, None);
        assert_abs_diff_eq!(r.degrees_of_freedom, 3.0, epsilon = 1e-12);
        assert!(r.p_value > 0.0 && r.p_value < 1.0);
    }

    fn sample() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-50.0f64..50.0, 2..12)
    }

    fn variant() -> impl Strategy<Value = TTestVariant> {
        prop_oneof![Just(TTestVariant::Welch), Just(TTestVariant::Pooled)]
    }

    proptest! {
        /// Swapping the samples negates t and preserves df and p.
        #[test]
        fn swapping_samples_negates_t(xs in sample(), ys in sample(), v in variant()) {
            let fwd = t_test_two_sided(&xs, &ys, v).unwrap();
            let rev = t_test_two_sided(&ys, &xs, v).unwrap();
            prop_assert!((fwd.t_statistic + rev.t_statistic).abs() < 1e-9
                || (fwd.t_statistic.is_infinite() && rev.t_statistic.is_infinite()));
            prop_assert!((fwd.degrees_of_freedom - rev.degrees_of_freedom).abs() < 1e-9);
            prop_assert!((fwd.p_value - rev.p_value).abs() < 1e-9);
        }

        /// Affine transforms x -> c x + d with c > 0 applied to both
        /// samples leave t, df, and p unchanged.
        #[test]
        fn affine_invariance(
            xs in sample(), ys in sample(),
            c in 0.1f64..20.0, d in -100.0f64..100.0,
            v in variant(),
        ) {
            let base = t_test_two_sided(&xs, &ys, v).unwrap();
            let tx: Vec<f64> = xs.iter().map(|x| c * x + d).collect();
            let ty: Vec<f64> = ys.iter().map(|y| c * y + d).collect();
            let mapped = t_test_two_sided(&tx, &ty, v).unwrap();
            if base.zero_variance.is_none() {
                prop_assert!((base.t_statistic - mapped.t_statistic).abs() < 1e-9);
                prop_assert!((base.degrees_of_freedom - mapped.degrees_of_freedom).abs() < 1e-6);
                prop_assert!((base.p_value - mapped.p_value).abs() < 1e-9);
            }
        }

        /// p always lies in [0, 1] and df is positive.
        #[test]
        fn p_in_unit_interval(xs in sample(), ys in sample(), v in variant()) {
            let r = t_test_two_sided(&xs, &ys, v).unwrap();
            prop_assert!((0.0..=1.0).contains(&r.p_value));
            prop_assert!(r.degrees_of_freedom > 0.0);
        }
    }
}
