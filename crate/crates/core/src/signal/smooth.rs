//! Channel and track smoothing built on the Savitzky-Golay weights.

use crate::signal::savgol::{savgol_coefficients, weights_for_positions};
use crate::signal::{EdgeMode, HandTrack, SignalError, SmoothingConfig};

/// Smooths one dense channel.
///
/// The window is shrunk to the largest odd length not exceeding the
/// channel, so short channels degrade gracefully: a one- or two-frame
/// channel is returned unchanged. The polynomial order is clamped below
/// the effective window. Edge frames are handled per
/// [`EdgeMode`](crate::signal::EdgeMode): `Mirror` reflects samples across
/// the boundary (the boundary sample itself is not repeated), `Shrink`
/// refits one-sided windows of reduced length.
pub fn smooth_channel(data: &[f64], config: &SmoothingConfig) -> Result<Vec<f64>, SignalError> {
    config.validate()?;
    let n = data.len();
    if n < 3 {
        return Ok(data.to_vec());
    }
    let mut window = config.window.min(n);
    if window.is_multiple_of(2) {
        window -= 1;
    }
    let poly = config.poly_order.min(window - 1);
    let h = window / 2;
    let center = savgol_coefficients(window, poly, 0.0)?;

    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let interior = i >= h && i + h < n;
        let value = match (interior, config.edge_mode) {
            (true, _) => center
                .iter()
                .enumerate()
                .map(|(j, w)| w * data[i + j - h])
                .sum(),
            (false, EdgeMode::Mirror) => center
                .iter()
                .enumerate()
                .map(|(j, w)| w * data[mirror_index(i as isize + j as isize - h as isize, n)])
                .sum(),
            (false, EdgeMode::Shrink) => {
                let lo = i.saturating_sub(h);
                let hi = (i + h + 1).min(n);
                let positions: Vec<f64> =
                    (lo..hi).map(|j| j as f64 - i as f64).collect();
                let local_poly = poly.min(hi - lo - 1);
                if local_poly == 0 {
                    data[i]
                } else {
                    let w = weights_for_positions(&positions, local_poly, 0.0)?;
                    w.iter().zip(&data[lo..hi]).map(|(wi, di)| wi * di).sum()
                }
            }
        };
        out.push(value);
    }
    Ok(out)
}

/// Reflects an out-of-range index back into `0..n` without repeating the
/// boundary sample: `-k` maps to `k` and `n - 1 + k` maps to `n - 1 - k`.
fn mirror_index(idx: isize, n: usize) -> usize {
    let n = n as isize;
    debug_assert!(n >= 2);
    let mut k = idx;
    loop {
        if k < 0 {
            k = -k;
        } else if k >= n {
            k = 2 * n - 2 - k;
        } else {
            return k as usize;
        }
    }
}

/// Smooths every keypoint channel and the box-center trajectory of a
/// track. Channels flagged as missing pass through untouched, as do the
/// observation flags, confidences, and box extents; a track for a hand
/// that never appears is returned unchanged.
pub fn smooth_track(track: &HandTrack, config: &SmoothingConfig) -> Result<HandTrack, SignalError> {
    config.validate()?;
    let mut smoothed = track.clone();
    for (k, missing) in track.channel_missing.iter().enumerate() {
        if *missing {
            continue;
        }
        smoothed.kp_x[k] = smooth_channel(&track.kp_x[k], config)?;
        smoothed.kp_y[k] = smooth_channel(&track.kp_y[k], config)?;
    }
    if !track.box_missing {
        smoothed.box_center_x = smooth_channel(&track.box_center_x, config)?;
        smoothed.box_center_y = smooth_channel(&track.box_center_y, config)?;
    }
    Ok(smoothed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        BoundingBox, CameraView, DetectionFrame, HandDetection, Keypoint, RecordingMeta,
        SkillGroup, KEYPOINT_COUNT,
    };
    use crate::signal::{gate_keypoints, impute_locf};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn config(window: usize, poly: usize, edge_mode: EdgeMode) -> SmoothingConfig {
        SmoothingConfig { window, poly_order: poly, edge_mode, ..SmoothingConfig::default() }
    }

    #[test]
    fn mirror_mode_matches_the_frozen_reference_filter() {
        // Reference outputs computed with an established Savitzky-Golay
        // implementation using mirror-extension boundary handling.
        let data = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0];
        let expected = [
            1.1714285714285697,
            1.8285714285714263,
            3.91428571428571,
            7.82857142857142,
            15.65714285714284,
            39.54285714285712,
            50.28571428571426,
        ];
        let out = smooth_channel(&data, &config(5, 2, EdgeMode::Mirror)).unwrap();
        for (o, e) in out.iter().zip(expected.iter()) {
            assert_abs_diff_eq!(*o, *e, epsilon = 1e-9);
        }

        let data2 = [3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0, 5.0, 3.0, 5.0];
        let expected2 = [
            2.5238095238095255,
            1.7619047619047634,
            2.0952380952380967,
            3.85714285714286,
            4.714285714285718,
            5.142857142857147,
            6.000000000000004,
            4.761904761904766,
            4.0952380952380985,
            4.47619047619048,
            3.6666666666666696,
        ];
        let out2 = smooth_channel(&data2, &config(7, 3, EdgeMode::Mirror)).unwrap();
        for (o, e) in out2.iter().zip(expected2.iter()) {
            assert_abs_diff_eq!(*o, *e, epsilon = 1e-9);
        }
    }

    #[test]
    fn shrink_mode_matches_an_independent_polyfit_oracle() {
        // Frozen from a least-squares polyfit evaluated per frame over the
        // shrunken one-sided windows.
        let data = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0];
        let expected = [
            0.9999999999999999,
            1.8500000000000008,
            3.914285714285712,
            7.828571428571424,
            15.657142857142848,
            33.20000000000001,
            63.99999999999999,
        ];
        let out = smooth_channel(&data, &config(5, 2, EdgeMode::Shrink)).unwrap();
        for (o, e) in out.iter().zip(expected.iter()) {
            assert_abs_diff_eq!(*o, *e, epsilon = 1e-9);
        }
    }

    #[test]
    fn channels_shorter_than_the_window_shrink_it_gracefully() {
        // Length 1 and 2: effective window 1, identity.
        assert_eq!(smooth_channel(&[42.0], &config(9, 3, EdgeMode::Mirror)).unwrap(), vec![42.0]);
        assert_eq!(
            smooth_channel(&[1.0, 2.0], &config(9, 3, EdgeMode::Mirror)).unwrap(),
            vec![1.0, 2.0]
        );
        // Length 4: effective window 3; a line is reproduced exactly.
        let out = smooth_channel(&[0.0, 1.0, 2.0, 3.0], &config(9, 3, EdgeMode::Mirror)).unwrap();
        for (i, o) in out.iter().enumerate() {
            assert_abs_diff_eq!(*o, i as f64, epsilon = 1e-9);
        }
    }

    #[test]
    fn empty_channel_smooths_to_empty() {
        assert_eq!(smooth_channel(&[], &SmoothingConfig::default()).unwrap(), Vec::<f64>::new());
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let bad_window = SmoothingConfig { window: 4, ..SmoothingConfig::default() };
        assert!(matches!(
            smooth_channel(&[1.0, 2.0], &bad_window),
            Err(SignalError::InvalidWindow { window: 4 })
        ));
        let bad_poly = SmoothingConfig { window: 5, poly_order: 5, ..SmoothingConfig::default() };
        assert!(smooth_channel(&[1.0, 2.0], &bad_poly).is_err());
    }

    #[test]
    fn smooth_track_skips_missing_channels_and_preserves_flags() {
        let mut frames = Vec::new();
        for t in 0..12u32 {
            let mut f = DetectionFrame::empty(t);
            // Hand observed only on even frames, to exercise imputation.
            if t % 2 == 0 {
                f.left_hand = Some(HandDetection {
                    bbox: BoundingBox::new(t as f64, 0.0, t as f64 + 10.0, 10.0, 0.9),
                    keypoints: [Keypoint::new(t as f64, t as f64 * 2.0, 0.8); KEYPOINT_COUNT],
                });
            }
            frames.push(f);
        }
        let meta = RecordingMeta {
            recording_id: "r01".into(),
            participant_id: "p01".into(),
            group: SkillGroup::Expert,
            fps: 30.0,
            camera_view: CameraView::Frontal,
            frame_count: 12,
            tissue_region: None,
        };
        let (left, right) = gate_keypoints(&frames, 12, 0.3).unwrap();
        let track = impute_locf(&left, &meta);
        let smoothed = smooth_track(&track, &SmoothingConfig::default()).unwrap();
        assert_eq!(smoothed.valid, track.valid);
        assert_eq!(smoothed.kp_conf, track.kp_conf);
        assert_eq!(smoothed.box_width, track.box_width);
        assert!(smoothed.kp_x[0].iter().all(|v| v.is_finite()));

        // The never-detected right hand passes through untouched.
        let right_track = impute_locf(&right, &meta);
        let right_smoothed = smooth_track(&right_track, &SmoothingConfig::default()).unwrap();
        assert_eq!(right_smoothed, right_track);
    }

    fn finite_channel() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-1e4f64..1e4, 1..80)
    }

    fn any_edge_mode() -> impl Strategy<Value = EdgeMode> {
        prop_oneof![Just(EdgeMode::Mirror), Just(EdgeMode::Shrink)]
    }

    proptest! {
        /// Smoothing reproduces sampled polynomials of degree at most the
        /// fit order on interior frames; Shrink mode is also exact at the
        /// edges whenever the shrunken orders still cover the degree.
        #[test]
        fn polynomials_pass_through_exactly(
            coeffs in proptest::collection::vec(-3.0f64..3.0, 1..4),
            n in 12usize..60,
            mode in any_edge_mode(),
        ) {
            let degree = coeffs.len() - 1;
            let data: Vec<f64> = (0..n)
                .map(|t| {
                    coeffs.iter().enumerate()
                        .map(|(d, c)| c * (t as f64 / 8.0).powi(d as i32))
                        .sum()
                })
                .collect();
            let cfg = config(9, 3, mode);
            let out = smooth_channel(&data, &cfg).unwrap();
            let h = cfg.window / 2;
            for i in 0..n {
                let interior = i >= h && i + h < n;
                // Shrink edges clamp the order to the shrunken window; the
                // smallest edge window has h+1 samples (order >= h >= 4 - 1),
                // so cubic data is exact everywhere for window 9.
                if interior || (mode == EdgeMode::Shrink && degree <= h) {
                    prop_assert!((out[i] - data[i]).abs() < 1e-9,
                        "i={} out={} data={}", i, out[i], data[i]);
                }
            }
        }

        /// Smoothing is a linear operator: smoothing a linear combination
        /// equals the linear combination of the smoothed channels.
        #[test]
        fn smoothing_is_linear(
            xs in finite_channel(),
            a in -5.0f64..5.0,
            b in -5.0f64..5.0,
            mode in any_edge_mode(),
        ) {
            let ys: Vec<f64> = xs.iter().rev().cloned().collect();
            let combo: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| a * x + b * y).collect();
            let cfg = config(7, 2, mode);
            let sx = smooth_channel(&xs, &cfg).unwrap();
            let sy = smooth_channel(&ys, &cfg).unwrap();
            let sc = smooth_channel(&combo, &cfg).unwrap();
            for i in 0..xs.len() {
                prop_assert!((sc[i] - (a * sx[i] + b * sy[i])).abs() < 1e-9);
            }
        }

        /// Finite input yields finite output of the same length.
        #[test]
        fn output_is_finite_and_length_preserving(
            data in finite_channel(),
            mode in any_edge_mode(),
        ) {
            let out = smooth_channel(&data, &config(9, 3, mode)).unwrap();
            prop_assert_eq!(out.len(), data.len());
            prop_assert!(out.iter().all(|v| v.is_finite()));
        }

        /// Constant channels are preserved exactly by both edge modes.
        #[test]
        fn constants_are_preserved(
            c in -1e4f64..1e4,
            n in 1usize..40,
            mode in any_edge_mode(),
        ) {
            let data = vec![c; n];
            let out = smooth_channel(&data, &config(9, 3, mode)).unwrap();
            for v in out {
                prop_assert!((v - c).abs() < 1e-9);
            }
        }
    }
}
