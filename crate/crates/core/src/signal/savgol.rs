//! Savitzky-Golay convolution weights.
//!
//! A window of `2h + 1` samples at integer positions `-h..=h` is fitted
//! with a least-squares polynomial of the requested order; the smoothed
//! value is the fit evaluated at the window center (or at `offset` from
//! it). Because the fit is linear in the data, evaluation collapses to a
//! fixed weight vector applied as a dot product with the window.

use crate::signal::SignalError;

/// Weights for a symmetric window of odd length `window`, polynomial order
/// `poly_order`, evaluated at `offset` frames from the window center
/// (`offset = 0.0` is ordinary smoothing). The returned vector has length
/// `window`, ordered by window position from `-h` to `h`, and its entries
/// always sum to 1.
pub fn savgol_coefficients(
    window: usize,
    poly_order: usize,
    offset: f64,
) -> Result<Vec<f64>, SignalError> {
    if window == 0 || window.is_multiple_of(2) {
        return Err(SignalError::InvalidWindow { window });
    }
    if poly_order < 1 || poly_order >= window {
        return Err(SignalError::InvalidPolyOrder { poly_order, window });
    }
    let h = (window / 2) as f64;
    let positions: Vec<f64> = (0..window).map(|i| i as f64 - h).collect();
    weights_for_positions(&positions, poly_order, offset)
}

/// Least-squares polynomial-fit weights for samples at arbitrary
/// `positions`, evaluated at position `eval`. This generalization serves
/// the asymmetric shrunken windows used near channel edges; the symmetric
/// case above is the special case of integer positions `-h..=h`.
///
/// `poly_order` may be 0 here (a constant fit), which smaller edge windows
/// can force even though full-window smoothing requires order >= 1.
///
/// The fit is expanded in polynomials orthogonal over the sample positions
/// (built with the Stieltjes three-term recurrence) instead of solving the
/// monomial normal equations, whose conditioning degrades quickly with the
/// order. In the orthogonal basis the projection is diagonal, so the
/// weights stay accurate to near machine precision for every valid order.
pub(crate) fn weights_for_positions(
    positions: &[f64],
    poly_order: usize,
    eval: f64,
) -> Result<Vec<f64>, SignalError> {
    let m = positions.len();
    if m == 0 || poly_order >= m {
        return Err(SignalError::InvalidPolyOrder { poly_order, window: m });
    }

    // Shift to the evaluation point and scale into [-1, 1]; the fitted
    // value at u = 0 is unchanged by this reparameterization.
    let scale = positions
        .iter()
        .map(|p| (p - eval).abs())
        .fold(0.0_f64, f64::max)
        .max(1.0);
    let u: Vec<f64> = positions.iter().map(|p| (p - eval) / scale).collect();

    // Orthogonal polynomials q_k over the discrete points u_i:
    //   q_{k+1}(x) = (x - alpha_k) q_k(x) - beta_k q_{k-1}(x).
    // The least-squares value at x = 0 is sum_k q_k(0) <q_k, y> / <q_k, q_k>,
    // so the weight on sample i accumulates q_k(0) q_k(u_i) / <q_k, q_k>.
    let mut q_prev = vec![0.0_f64; m];
    let mut q_curr = vec![1.0_f64; m];
    let mut qe_prev = 0.0_f64;
    let mut qe_curr = 1.0_f64;
    let mut norm_prev = 0.0_f64;
    let mut weights = vec![0.0_f64; m];

    for k in 0..=poly_order {
        let norm: f64 = q_curr.iter().map(|v| v * v).sum();
        // The norm vanishes exactly when the points span fewer than k + 1
        // distinct positions, i.e. the fit is underdetermined.
        if norm < 1e-20 * m as f64 {
            return Err(SignalError::DegenerateFit);
        }
        for (w, q) in weights.iter_mut().zip(&q_curr) {
            *w += qe_curr * q / norm;
        }
        if k == poly_order {
            break;
        }
        let alpha: f64 = u.iter().zip(&q_curr).map(|(ui, q)| ui * q * q).sum::<f64>() / norm;
        let beta = if k == 0 { 0.0 } else { norm / norm_prev };
        for i in 0..m {
            let next = (u[i] - alpha) * q_curr[i] - beta * q_prev[i];
            q_prev[i] = std::mem::replace(&mut q_curr[i], next);
        }
        let next_e = (0.0 - alpha) * qe_curr - beta * qe_prev;
        qe_prev = std::mem::replace(&mut qe_curr, next_e);
        norm_prev = norm;
    }
    // The weights of a least-squares fit reproduce constants, so their sum
    // is 1 in exact arithmetic. The accumulated sum drifts by a few ulps
    // per order, which becomes visible near poly_order = window - 1;
    // rescaling pins the zeroth moment without disturbing the fit
    // otherwise (every weight moves by the same relative epsilon).
    let sum: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= sum;
    }
    Ok(weights)
}
