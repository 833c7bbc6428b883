//! Describing-function approximation of the sinusoidal-input gain, used as
//! a comparison curve next to the guaranteed bounds.
//!
//! The first-harmonic gain of the scaled-sine nonlinearity at input
//! amplitude A is N(A) = delta * 2 J1(A) / A. Replacing the nonlinearity by
//! that complex-free gain turns the loop into a scalar expression per
//! frequency; the reported curve is its supremum over an amplitude grid.

use crate::lfr::LfrSystem;
use crate::lti::LtiError;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DfError {
    #[error("describing-function amplitude must be positive")]
    NonPositiveAmplitude,
}

/// Bessel function of the first kind, order one.
///
/// Ascending power series below 12, Hankel asymptotic expansion beyond,
/// both truncated adaptively. Absolute error stays under 1e-10 across
/// [0, 100] (the asymptotic terms at the switch point keep shrinking down
/// to ~1e-17 before they turn).
pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    let val = if ax < 12.0 {
        j1_series(ax)
    } else {
        j1_asymptotic(ax)
    };
    if x < 0.0 {
        -val
    } else {
        val
    }
}

fn j1_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 0.5 * x;
    let mut sum = term;
    let mut peak = term.abs();
    for k in 1..=60 {
        term *= -q / (k as f64 * (k + 1) as f64);
        sum += term;
        peak = peak.max(term.abs());
        // Sum can sit near a root, so the cutoff tracks the largest partial
        // term rather than the running sum.
        if term.abs() <= 1e-18 * peak {
            break;
        }
    }
    sum
}

fn j1_asymptotic(x: f64) -> f64 {
    // u_m = prod_{j<=m} (4 - (2j-1)^2) / (m! (8x)^m); the cosine rail is
    // u_0 - u_2 + u_4 - ... and the sine rail u_1 - u_3 + ... Truncation at
    // the smallest term is optimal for the divergent tail.
    let mut p = 0.0;
    let mut q = 0.0;
    let mut u = 1.0f64;
    for m in 0..40 {
        let sign = if (m / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if m % 2 == 0 {
            p += sign * u;
        } else {
            q += sign * u;
        }
        let mf = m as f64;
        let next = u * (4.0 - (2.0 * mf + 1.0).powi(2)) / ((mf + 1.0) * 8.0 * x);
        if next.abs() >= u.abs() || next.abs() < 1e-18 {
            break;
        }
        u = next;
    }
    let chi = x - 0.75 * std::f64::consts::PI;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// First-harmonic gain of `delta * sin` at amplitude `a`.
pub fn df_gain(delta: f64, a: f64) -> Result<f64, DfError> {
    if a <= 0.0 {
        return Err(DfError::NonPositiveAmplitude);
    }
    Ok(delta * 2.0 * bessel_j1(a) / a)
}

/// Describing-function gain curve of the closed loop.
#[derive(Clone, Debug)]
pub struct DfCurve {
    pub frequencies: Vec<f64>,
    pub df_gain: Vec<f64>,
    pub amplitude_grid: Vec<f64>,
}

/// Default amplitude grid: 500 log-spaced points on [1e-3, 1e2]. N(A) for
/// the sine nonlinearity decays like A^{-1/2}, so the supremum sits at
/// moderate amplitudes well inside this span.
pub fn default_amplitude_grid() -> Vec<f64> {
    crate::lfr::log_grid(1e-3, 1e2, 100)
}

/// Per frequency, the supremum over the amplitude grid of
/// `|P_out_w (N(A)^{-1} - P_zw)^{-1} P_z_in + P_out_in|`.
///
/// The nonlinearity is taken to be `beta * sin`. Amplitudes where N(A)
/// crosses zero use the loop-free limit |P_out_in|. Negative amplitudes
/// duplicate positive ones for an odd nonlinearity, so the grid only covers
/// A > 0.
pub fn df_curve(
    sys: &LfrSystem,
    grid: &[f64],
    amplitudes: &[f64],
) -> Result<DfCurve, LtiError> {
    assert!(
        amplitudes.windows(2).all(|w| w[0] < w[1])
            && amplitudes.first().is_some_and(|&a| a > 0.0 && a <= 1e-3),
        "amplitude grid must be increasing and start at or below 1e-3"
    );
    let delta = sys.phi.beta;
    let gains: Vec<f64> = amplitudes
        .iter()
        .map(|&a| delta * 2.0 * bessel_j1(a) / a)
        .collect();
    let mut df = Vec::with_capacity(grid.len());
    for &w in grid {
        let zw = sys.blocks.p_zw.eval_jw(w)?;
        let ew = sys.blocks.p_out_w.eval_jw(w)?;
        let zr = sys.blocks.p_z_in.eval_jw(w)?;
        let er = sys.blocks.p_out_in.eval_jw(w)?;
        let mut sup = 0.0f64;
        for &n in &gains {
            let val = if n.abs() < 1e-12 {
                er.norm()
            } else {
                // (N^{-1} - P_zw)^{-1} = N / (1 - N * P_zw), overflow-free.
                let mid = n / (Complex64::new(1.0, 0.0) - n * zw);
                (ew * mid * zr + er).norm()
            };
            sup = sup.max(val);
        }
        df.push(sup);
    }
    Ok(DfCurve {
        frequencies: grid.to_vec(),
        df_gain: df,
        amplitude_grid: amplitudes.to_vec(),
    })
}
