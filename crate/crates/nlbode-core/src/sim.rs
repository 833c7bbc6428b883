//! Time-domain verification of the gain bounds: fixed-step integration of
//! the nonlinear servo loop, steady-state RMS extraction, period checking,
//! and randomized lower-bound probes of the incremental gain.
//!
//! The loop is integrated in realized coordinates: the plant transfer
//! function (voltage to angle) and the controller are both put in companion
//! state-space form, and the sine feedback is subtracted at the plant
//! input. This reproduces the block diagram the frequency-domain bounds
//! are computed for, so the delta = 0 case collapses to the LTI closed
//! loop exactly.

use crate::lti::{
    dc_motor_controller, dc_motor_plant, LtiError, StateSpace, TransferFunction,
};
use crate::srg::InputSpace;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("integration diverged at t = {t}")]
    Diverged { t: f64 },
    #[error("steady state not reached: consecutive-period RMS differs by {rel_diff}")]
    NotSteady { rel_diff: f64 },
}

/// Physical parameters of the motor and the sine-feedback strength.
#[derive(Clone, Copy, Debug)]
pub struct MotorParams {
    pub j: f64,
    pub r: f64,
    pub l: f64,
    pub km: f64,
    pub b: f64,
    pub delta: f64,
}

impl MotorParams {
    /// The worked DC-motor parameter set.
    pub fn nominal(delta: f64) -> Self {
        Self {
            j: 0.1,
            r: 0.96,
            l: 1.0,
            km: 0.2,
            b: 1.0044,
            delta,
        }
    }

    pub fn plant(&self) -> TransferFunction {
        dc_motor_plant(self.j, self.r, self.l, self.km, self.b)
    }
}

/// One additive term `amplitude * sin(n * omega_base * t + phase)`.
#[derive(Clone, Copy, Debug)]
pub struct HarmonicTerm {
    pub n: usize,
    pub amplitude: f64,
    pub phase: f64,
}

/// Reference input driving the loop. The Fourier variant is stored in
/// amplitude/phase form, which keeps the signal real by construction.
#[derive(Clone, Debug)]
pub enum ReferenceSignal {
    Step {
        t0: f64,
        height: f64,
    },
    Ramp {
        slope: f64,
    },
    SwitchedSine {
        amplitude: f64,
        omega1: f64,
        omega2: f64,
        t_switch: f64,
    },
    FourierSeries {
        omega_base: f64,
        terms: Vec<HarmonicTerm>,
    },
}

impl ReferenceSignal {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            ReferenceSignal::Step { t0, height } => {
                if t >= *t0 {
                    *height
                } else {
                    0.0
                }
            }
            ReferenceSignal::Ramp { slope } => slope * t,
            ReferenceSignal::SwitchedSine {
                amplitude,
                omega1,
                omega2,
                t_switch,
            } => {
                let w = if t <= *t_switch { omega1 } else { omega2 };
                amplitude * (w * t).sin()
            }
            ReferenceSignal::FourierSeries { omega_base, terms } => terms
                .iter()
                .map(|h| h.amplitude * (h.n as f64 * omega_base * t + h.phase).sin())
                .sum(),
        }
    }

    /// Fundamental period of the steady-state response this reference
    /// drives, when there is one. A unit ramp into the sine feedback
    /// produces a periodic error even though the ramp itself never
    /// repeats; a switched sine settles into the post-switch period.
    pub fn period(&self) -> Option<f64> {
        match self {
            ReferenceSignal::Step { .. } => None,
            ReferenceSignal::Ramp { slope } => {
                (*slope != 0.0).then(|| std::f64::consts::TAU / slope.abs())
            }
            ReferenceSignal::SwitchedSine { omega2, .. } => {
                Some(std::f64::consts::TAU / omega2)
            }
            ReferenceSignal::FourierSeries { omega_base, .. } => {
                Some(std::f64::consts::TAU / omega_base)
            }
        }
    }

    /// RMS of the signal over one fundamental period (periodic kinds only).
    pub fn rms(&self) -> Option<f64> {
        match self {
            ReferenceSignal::FourierSeries { terms, .. } => {
                // Distinct harmonics are orthogonal over a full period.
                Some(
                    terms
                        .iter()
                        .map(|h| 0.5 * h.amplitude * h.amplitude)
                        .sum::<f64>()
                        .sqrt(),
                )
            }
            ReferenceSignal::SwitchedSine { amplitude, .. } => {
                Some(amplitude.abs() / std::f64::consts::SQRT_2)
            }
            _ => None,
        }
    }
}

/// The nonlinear servo loop in realized form: plant and controller state
/// vectors plus the sine-feedback strength, driven by a reference.
#[derive(Clone, Debug)]
pub struct ClosedLoopModel {
    pub plant: StateSpace,
    pub controller: StateSpace,
    pub delta: f64,
    pub reference: ReferenceSignal,
}

impl ClosedLoopModel {
    /// Realize the loop around explicit plant and controller transfer
    /// functions. The plant must be strictly proper; a direct feedthrough
    /// would close an algebraic loop through the sine feedback.
    pub fn new(
        plant: &TransferFunction,
        controller: &TransferFunction,
        delta: f64,
        reference: ReferenceSignal,
    ) -> Result<Self, LtiError> {
        let plant = plant.realize()?;
        if plant.d != 0.0 {
            return Err(LtiError::Improper);
        }
        Ok(Self {
            plant,
            controller: controller.realize()?,
            delta,
            reference,
        })
    }

    /// Nominal motor with the lead controller.
    pub fn dc_motor(delta: f64, reference: ReferenceSignal) -> Self {
        Self::new(
            &MotorParams::nominal(delta).plant(),
            &dc_motor_controller(),
            delta,
            reference,
        )
        .expect("nominal loop is realizable")
    }

    pub fn with_reference(&self, reference: ReferenceSignal) -> Self {
        Self {
            reference,
            ..self.clone()
        }
    }

    fn state_dim(&self) -> usize {
        self.plant.order() + self.controller.order()
    }

    fn theta(&self, x: &[f64]) -> f64 {
        let xp = &x[..self.plant.order()];
        self.plant.c.iter().zip(xp).map(|(c, x)| c * x).sum()
    }

    /// Combined state derivative. Layout: [plant states, controller
    /// states]. The voltage reaching the plant is u - delta*sin(theta).
    fn derivative(&self, t: f64, x: &[f64], dx: &mut [f64]) {
        let np = self.plant.order();
        let (xp, xc) = x.split_at(np);
        let theta = self.theta(x);
        let e = self.reference.eval(t) - theta;
        let mut u = self.controller.d * e;
        for (cv, xv) in self.controller.c.iter().zip(xc) {
            u += cv * xv;
        }
        let up = u - self.delta * theta.sin();

        for row in 0..np {
            let mut acc = self.plant.b[row] * up;
            for (col, xv) in xp.iter().enumerate() {
                acc += self.plant.a[(row, col)] * xv;
            }
            dx[row] = acc;
        }
        for row in 0..self.controller.order() {
            let mut acc = self.controller.b[row] * e;
            for (col, xv) in xc.iter().enumerate() {
                acc += self.controller.a[(row, col)] * xv;
            }
            dx[np + row] = acc;
        }
    }

    fn control_output(&self, t: f64, x: &[f64]) -> f64 {
        let e = self.reference.eval(t) - self.theta(x);
        let mut u = self.controller.d * e;
        for (cv, xv) in self.controller.c.iter().zip(&x[self.plant.order()..]) {
            u += cv * xv;
        }
        u
    }
}

/// A completed simulation with its steady-state analysis.
#[derive(Clone, Debug)]
pub struct SimRun {
    pub t: Vec<f64>,
    pub theta: Vec<f64>,
    pub e: Vec<f64>,
    pub u: Vec<f64>,
    /// RMS of the error over the final analysis window: the last five
    /// periods when the reference fixes one, otherwise the last tenth of
    /// the run.
    pub rms_tail: f64,
    /// The reference's period when the run verifiably settled into it.
    pub period_detected: Option<f64>,
    /// Relative RMS difference between the last two period-length windows;
    /// zero when no period applies.
    pub steady_rel_diff: f64,
}

impl SimRun {
    fn dt(&self) -> f64 {
        if self.t.len() > 1 {
            self.t[1] - self.t[0]
        } else {
            0.0
        }
    }

    /// Error samples with t in [t0, t1).
    pub fn e_window(&self, t0: f64, t1: f64) -> &[f64] {
        let dt = self.dt();
        if dt == 0.0 {
            return &self.e;
        }
        let lo = ((t0 / dt).ceil().max(0.0) as usize).min(self.e.len());
        let hi = ((t1 / dt).ceil().max(0.0) as usize).min(self.e.len());
        &self.e[lo..hi]
    }
}

fn rms(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    (xs.iter().map(|x| x * x).sum::<f64>() / xs.len() as f64).sqrt()
}

/// Classical fixed-step fourth-order Runge-Kutta integration from zero
/// initial state.
pub fn integrate(model: &ClosedLoopModel, t_end: f64, dt: f64) -> Result<SimRun, SimError> {
    assert!(dt > 0.0 && t_end > dt, "bad time grid");
    let dim = model.state_dim();
    let steps = (t_end / dt).round() as usize;
    let mut x = vec![0.0; dim];
    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut xs = vec![0.0; dim];

    let mut t_arr = Vec::with_capacity(steps + 1);
    let mut theta = Vec::with_capacity(steps + 1);
    let mut e = Vec::with_capacity(steps + 1);
    let mut u = Vec::with_capacity(steps + 1);

    let record = |t: f64,
                  x: &[f64],
                  out_t: &mut Vec<f64>,
                  out_th: &mut Vec<f64>,
                  out_e: &mut Vec<f64>,
                  out_u: &mut Vec<f64>| {
        let th = model.theta(x);
        out_t.push(t);
        out_th.push(th);
        out_e.push(model.reference.eval(t) - th);
        out_u.push(model.control_output(t, x));
    };
    record(0.0, &x, &mut t_arr, &mut theta, &mut e, &mut u);

    for step in 0..steps {
        let t = step as f64 * dt;
        model.derivative(t, &x, &mut k1);
        for i in 0..dim {
            xs[i] = x[i] + 0.5 * dt * k1[i];
        }
        model.derivative(t + 0.5 * dt, &xs, &mut k2);
        for i in 0..dim {
            xs[i] = x[i] + 0.5 * dt * k2[i];
        }
        model.derivative(t + 0.5 * dt, &xs, &mut k3);
        for i in 0..dim {
            xs[i] = x[i] + dt * k3[i];
        }
        model.derivative(t + dt, &xs, &mut k4);
        for i in 0..dim {
            x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let t_next = (step + 1) as f64 * dt;
        // Exponential runaway can stay finite for a long horizon; states
        // this large are divergence on any loop this tool targets.
        if !x.iter().all(|v| v.is_finite() && v.abs() < 1e12) {
            return Err(SimError::Diverged { t: t_next });
        }
        record(t_next, &x, &mut t_arr, &mut theta, &mut e, &mut u);
    }

    let mut run = SimRun {
        t: t_arr,
        theta,
        e,
        u,
        rms_tail: 0.0,
        period_detected: None,
        steady_rel_diff: 0.0,
    };
    analyze_tail(model, &mut run, dt, t_end);
    Ok(run)
}

/// Fill the steady-state fields: the analysis window is the last five
/// periods (an integer number of samples each), entirely inside the kept
/// tail, or the last tenth of the run for aperiodic references.
fn analyze_tail(model: &ClosedLoopModel, run: &mut SimRun, dt: f64, t_end: f64) {
    match model.reference.period() {
        Some(period) if t_end >= 2.0 * period => {
            let per_samples = (period / dt).round().max(1.0) as usize;
            let n = run.e.len();
            let n_periods = 5.min((n - 1) / per_samples).max(1);
            let window = &run.e[n - n_periods * per_samples..];
            run.rms_tail = rms(window);
            run.steady_rel_diff = window_rel_diff(&run.e, per_samples);
            if run.steady_rel_diff < 5e-3 {
                run.period_detected = Some(period);
            }
        }
        _ => {
            let n = run.e.len();
            run.rms_tail = rms(&run.e[n - (n / 10).max(1)..]);
        }
    }
}

/// RMS of the pointwise difference between the last two windows of
/// `per_samples` samples, relative to the RMS of the last window.
fn window_rel_diff(e: &[f64], per_samples: usize) -> f64 {
    let n = e.len();
    if n < 2 * per_samples {
        return f64::INFINITY;
    }
    let last = &e[n - per_samples..];
    let prev = &e[n - 2 * per_samples..n - per_samples];
    let diff: f64 =
        (last.iter().zip(prev).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / per_samples as f64)
            .sqrt();
    diff / rms(last).max(1e-12)
}

/// True when the response repeats with the expected period: the last two
/// windows of that length agree pointwise in RMS to 0.5%.
pub fn period_check(run: &SimRun, t_expected: f64) -> bool {
    let dt = run.dt();
    if dt <= 0.0 || t_expected <= 0.0 {
        return false;
    }
    let per_samples = (t_expected / dt).round().max(1.0) as usize;
    window_rel_diff(&run.e, per_samples) < 5e-3
}

/// Steady-state RMS gain of the run against the RMS of its input.
pub fn rms_gain(run: &SimRun, reference_rms: f64) -> Result<f64, SimError> {
    if run.period_detected.is_none() {
        return Err(SimError::NotSteady {
            rel_diff: run.steady_rel_diff,
        });
    }
    Ok(run.rms_tail / reference_rms)
}

/// Harmonic indices a probe excites for each space kind.
fn probe_indices(space: InputSpace) -> (f64, Vec<usize>) {
    match space {
        InputSpace::Sinusoidal(w) => (w, vec![1]),
        InputSpace::Harmonic(w) => (w, (1..=8).collect()),
        // Divisors down to 8: the common period is 8 base periods, so the
        // series is built on omega/8 with sparse indices.
        InputSpace::Subharmonic(w) => (w / 8.0, vec![8, 4, 2, 1]),
        InputSpace::FullL2 => panic!("probe requires a frequency-indexed space"),
    }
}

fn draw_reference(rng: &mut ChaCha8Rng, omega_base: f64, indices: &[usize]) -> ReferenceSignal {
    let terms = indices
        .iter()
        .map(|&n| HarmonicTerm {
            n,
            amplitude: 10f64.powf(rng.gen_range(-2.0..1.0)),
            phase: rng.gen_range(0.0..std::f64::consts::TAU),
        })
        .collect();
    ReferenceSignal::FourierSeries { omega_base, terms }
}

/// Largest steady-state RMS ratio ||e1 - e2|| / ||r1 - r2|| over random
/// reference pairs drawn from the space: an empirical lower bound on the
/// incremental gain, which must stay below the guaranteed upper bound.
///
/// Pairs are independent work items with per-pair seeds derived from
/// `seed`, so the result does not depend on scheduling.
pub fn incremental_gain_probe(
    model: &ClosedLoopModel,
    space: InputSpace,
    n_pairs: usize,
    seed: u64,
) -> Result<f64, SimError> {
    let (omega_base, indices) = probe_indices(space);
    let period = std::f64::consts::TAU / omega_base;
    let t_end = (20.0 * period).max(50.0 + 10.0 * period);
    let dt = 1e-3;

    let ratios: Result<Vec<f64>, SimError> = (0..n_pairs)
        .into_par_iter()
        .map(|pair| {
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed ^ (pair as u64).wrapping_mul(0x9E3779B97F4A7C15));
            let r1 = draw_reference(&mut rng, omega_base, &indices);
            let r2 = draw_reference(&mut rng, omega_base, &indices);
            let run1 = integrate(&model.with_reference(r1.clone()), t_end, dt)?;
            let run2 = integrate(&model.with_reference(r2.clone()), t_end, dt)?;

            let per_samples = (period / dt).round() as usize;
            let n = run1.e.len().min(run2.e.len());
            let window = 5 * per_samples;
            let diff: Vec<f64> = (n - window..n).map(|i| run1.e[i] - run2.e[i]).collect();

            // Difference of two same-support series: term-wise phasor
            // subtraction, then orthogonality over the common period.
            let (ReferenceSignal::FourierSeries { terms: t1, .. },
                 ReferenceSignal::FourierSeries { terms: t2, .. }) = (&r1, &r2)
            else {
                unreachable!()
            };
            let diff_rms_sq: f64 = t1
                .iter()
                .zip(t2)
                .map(|(a, b)| {
                    let re = a.amplitude * a.phase.cos() - b.amplitude * b.phase.cos();
                    let im = a.amplitude * a.phase.sin() - b.amplitude * b.phase.sin();
                    0.5 * (re * re + im * im)
                })
                .sum();
            let denom = diff_rms_sq.sqrt();
            if denom < 1e-9 {
                return Ok(0.0);
            }
            Ok(rms(&diff) / denom)
        })
        .collect();
    Ok(ratios?.into_iter().fold(0.0, f64::max))
}
