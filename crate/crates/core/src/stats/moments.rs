//! Small descriptive-statistics helpers shared across the engine.

/// Arithmetic mean. Returns NaN on empty input; callers guard emptiness.
pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (n − 1 denominator). A single observation has
/// no spread estimate; by convention this returns 0.0 so aggregate tables
/// stay printable.
pub fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    sample_variance(values).sqrt()
}

/// Sample variance (n − 1 denominator); 0.0 for fewer than two values.
pub fn sample_variance(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64
}

/// Five-number summary of a sample, quartiles by linear interpolation.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Quartiles {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Computes the five-number summary. Returns `None` on empty input.
pub fn quartiles(values: &[f64]) -> Option<Quartiles> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let at = |q: f64| -> f64 {
        // Linear interpolation between closest ranks, the convention used
        // by most statistics packages.
        let pos = q * (sorted.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        if lo == hi {
            sorted[lo]
        } else {
            sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
        }
    };
    Some(Quartiles {
        min: sorted[0],
        q1: at(0.25),
        median: at(0.5),
        q3: at(0.75),
        max: sorted[sorted.len() - 1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn mean_and_std_of_a_known_sample() {
        let xs = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0];
        assert_eq!(mean(&xs), 5.0);
        // Sum of squared deviations is 32, n - 1 is 7.
        assert_abs_diff_eq!(sample_variance(&xs), 32.0 / 7.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sample_std(&xs), (32.0f64 / 7.0).sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn degenerate_samples_have_zero_spread() {
        assert_eq!(sample_std(&[3.0]), 0.0);
        assert_eq!(sample_variance(&[]), 0.0);
        assert_eq!(sample_std(&[5.0, 5.0, 5.0]), 0.0);
    }

    #[test]
    fn quartiles_interpolate_between_ranks() {
        let q = quartiles(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(q.min, 1.0);
        assert_abs_diff_eq!(q.q1, 1.75, epsilon = 1e-12);
        assert_abs_diff_eq!(q.median, 2.5, epsilon = 1e-12);
        assert_abs_diff_eq!(q.q3, 3.25, epsilon = 1e-12);
        assert_eq!(q.max, 4.0);
    }

    #[test]
    fn quartiles_of_single_value_collapse() {
        let q = quartiles(&[7.0]).unwrap();
        assert_eq!(q.min, 7.0);
        assert_eq!(q.median, 7.0);
        assert_eq!(q.max, 7.0);
        assert_eq!(quartiles(&[]), None);
    }

    #[test]
    fn quartiles_sort_their_input() {
        let q = quartiles(&[9.0, 1.0, 5.0]).unwrap();
        assert_eq!(q.min, 1.0);
        assert_eq!(q.median, 5.0);
        assert_eq!(q.max, 9.0);
    }
}
