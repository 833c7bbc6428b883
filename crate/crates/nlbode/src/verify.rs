//! The acceptance matrix: every numbered claim this build must reproduce,
//! measured against its published value and tolerance. The `verify`
//! subcommand and the integration tests share this implementation so a
//! criterion cannot pass in one place and fail in the other.

use std::f64::consts::TAU;
use std::time::Instant;

use nlbode_core::cgeom::{hco, minkowski_product, minkowski_sum, Region, Resolution};
use nlbode_core::df::df_curve;
use nlbode_core::lfr::{
    lfr_gamma, sweep, GainCurve, LfrError, LfrSystem, SweepKinds,
};
use nlbode_core::lti::TransferFunction;
use nlbode_core::sim::{
    incremental_gain_probe, integrate, period_check, ClosedLoopModel, ReferenceSignal,
};
use nlbode_core::srg::{InputSpace, SectorNonlinearity, SrgOptions};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::config::AnalysisConfig;
use crate::output::json_gain;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// |measured - expected| <= tolerance * |expected|
    Within,
    /// measured <= expected * (1 + tolerance)
    AtMost,
    /// measured >= expected * (1 - tolerance)
    AtLeast,
    /// measured is +inf; expected/tolerance are informational
    Infinite,
    /// measured is finite; expected/tolerance are informational
    Finite,
}

impl Comparison {
    fn label(self) -> &'static str {
        match self {
            Comparison::Within => "within",
            Comparison::AtMost => "at_most",
            Comparison::AtLeast => "at_least",
            Comparison::Infinite => "infinite",
            Comparison::Finite => "finite",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub pass: bool,
}

fn check(
    name: impl Into<String>,
    comparison: Comparison,
    measured: f64,
    expected: f64,
    tolerance: f64,
) -> CheckResult {
    let pass = match comparison {
        Comparison::Within => (measured - expected).abs() <= tolerance * expected.abs(),
        Comparison::AtMost => measured <= expected * (1.0 + tolerance),
        Comparison::AtLeast => measured >= expected * (1.0 - tolerance),
        Comparison::Infinite => measured.is_infinite() && measured > 0.0,
        Comparison::Finite => measured.is_finite(),
    };
    CheckResult {
        name: name.into(),
        measured,
        expected,
        tolerance,
        comparison,
        pass,
    }
}

fn check_true(name: impl Into<String>, ok: bool) -> CheckResult {
    check(name, Comparison::Within, f64::from(u8::from(ok)), 1.0, 0.0)
}

/// A check that could not even be evaluated; the name carries the reason.
fn failed(name: impl Into<String>) -> CheckResult {
    check(name, Comparison::Within, f64::NAN, 1.0, 0.0)
}

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl CriterionReport {
    fn new(id: usize, name: &'static str, checks: Vec<CheckResult>) -> Self {
        let pass = !checks.is_empty() && checks.iter().all(|c| c.pass);
        Self {
            id,
            name,
            checks,
            pass,
        }
    }
}

pub fn report_json(reports: &[CriterionReport]) -> Value {
    let criteria: Vec<Value> = reports
        .iter()
        .map(|r| {
            let checks: Vec<Value> = r
                .checks
                .iter()
                .map(|c| {
                    json!({
                        "name": c.name,
                        "measured": json_gain(c.measured),
                        "expected": json_gain(c.expected),
                        "tolerance": c.tolerance,
                        "comparison": c.comparison.label(),
                        "pass": c.pass,
                    })
                })
                .collect();
            json!({"id": r.id, "name": r.name, "pass": r.pass, "checks": checks})
        })
        .collect();
    json!({
        "criteria": criteria,
        "pass": reports.iter().all(|r| r.pass),
    })
}

/// Run criteria 1 through 10 in order. Analysis-level failures inside a
/// criterion become failing checks rather than aborting the matrix; only a
/// loop that cannot be built at all errors out.
pub fn run_acceptance(
    config: &AnalysisConfig,
    seed: u64,
) -> Result<Vec<CriterionReport>, LfrError> {
    let g = config.plant_tf();
    let k = config.controller_tf();
    let phi = config.phi();
    let opts = config.srg_options();
    let grid = config.frequency_grid();
    let s_sys = LfrSystem::sensitivity(&g, &k, phi)?;
    let l_sys = LfrSystem::looptransfer(&g, &k, phi)?;

    eprintln!("computing full-space bound");
    let t0 = Instant::now();
    let gamma_full_s = lfr_gamma(&s_sys, InputSpace::FullL2, &opts)?;
    let full_elapsed = t0.elapsed().as_secs_f64();

    eprintln!("sweeping gain bounds over {} frequencies", grid.len());
    let curve_s = sweep(&s_sys, &grid, SweepKinds::all(), &opts)?;
    let curve_l = sweep(&l_sys, &grid, SweepKinds::without_subharmonic(), &opts)?;

    let gamma_s1 = lfr_gamma(&s_sys, InputSpace::Sinusoidal(1.0), &opts)?;
    let gamma_s10 = lfr_gamma(&s_sys, InputSpace::Sinusoidal(10.0), &opts)?;
    let gamma_h3 = lfr_gamma(&s_sys, InputSpace::Harmonic(3.0), &opts)?;
    let gamma_sub2 = lfr_gamma(&s_sys, InputSpace::Subharmonic(2.0), &opts)?;

    eprintln!("running time-domain cross-checks");
    let mut out = Vec::with_capacity(10);
    out.push(c1_full_gain(gamma_full_s, full_elapsed));
    out.push(c2_bandwidths(&curve_s, &curve_l));
    out.push(c3_pointwise_gains(gamma_s1, gamma_s10));
    out.push(c4_divergence_structure(&l_sys, &curve_l, &opts)?);
    out.push(c5_simulation_cross_checks(config, gamma_s1, gamma_s10)?);
    eprintln!("probing incremental gains (600 pairs of runs)");
    out.push(c6_probe_suite(config, seed, gamma_s1, gamma_h3, gamma_sub2)?);
    out.push(c7_orderings(&curve_s, gamma_full_s, &opts));
    eprintln!("checking linear reductions and geometry");
    out.push(c8_linear_reductions(&g, &k, &grid, &opts)?);
    out.push(c9_geometry(&opts));
    out.push(c10_describing_function(&s_sys, &g, &k, config, &opts)?);
    Ok(out)
}

fn c1_full_gain(gamma: f64, elapsed: f64) -> CriterionReport {
    CriterionReport::new(
        1,
        "full-space sensitivity gain",
        vec![
            check("gamma_full_s", Comparison::Within, gamma, 1.29, 0.05),
            check("runtime_seconds", Comparison::AtMost, elapsed, 30.0, 0.0),
        ],
    )
}

fn c2_bandwidths(curve_s: &GainCurve, curve_l: &GainCurve) -> CriterionReport {
    CriterionReport::new(
        2,
        "bandwidth estimates",
        vec![
            check(
                "closed_loop_bandwidth_radps",
                Comparison::Within,
                curve_s.bandwidth_closed.unwrap_or(f64::NAN),
                3.3,
                0.10,
            ),
            check(
                "open_loop_crossover_radps",
                Comparison::Within,
                curve_l.bandwidth_open.unwrap_or(f64::NAN),
                4.58,
                0.10,
            ),
        ],
    )
}

fn c3_pointwise_gains(gamma_s1: f64, gamma_s10: f64) -> CriterionReport {
    CriterionReport::new(
        3,
        "pointwise sinusoidal gains",
        vec![
            check("gamma_sin_at_1_radps", Comparison::Within, gamma_s1, 0.213, 0.05),
            check("gamma_sin_at_10_radps", Comparison::Within, gamma_s10, 1.27, 0.05),
        ],
    )
}

fn c4_divergence_structure(
    l_sys: &LfrSystem,
    curve_l: &GainCurve,
    opts: &SrgOptions,
) -> Result<CriterionReport, LfrError> {
    let low = lfr_gamma(l_sys, InputSpace::Harmonic(0.05), opts)?;
    let mid = lfr_gamma(l_sys, InputSpace::Harmonic(1.0), opts)?;
    // Highest grid frequency whose bound is still infinite; NaN if none is.
    let onset = |col: &[f64]| {
        curve_l
            .frequencies
            .iter()
            .zip(col)
            .filter(|(_, g)| g.is_infinite())
            .map(|(w, _)| *w)
            .fold(f64::NAN, f64::max)
    };
    let recovers = |col: &[f64]| col.iter().any(|g| g.is_finite());
    Ok(CriterionReport::new(
        4,
        "loop-transfer divergence structure",
        vec![
            check(
                "harmonic_bound_at_0.05_radps",
                Comparison::Infinite,
                low,
                f64::INFINITY,
                0.0,
            ),
            check("harmonic_bound_at_1_radps", Comparison::Finite, mid, 0.0, 0.0),
            check(
                "sinusoidal_divergence_onset_radps",
                Comparison::Finite,
                onset(&curve_l.gamma_sin),
                0.0,
                0.0,
            ),
            check_true(
                "sinusoidal_bound_finite_at_high_frequency",
                recovers(&curve_l.gamma_sin),
            ),
            check(
                "harmonic_divergence_onset_radps",
                Comparison::Finite,
                onset(&curve_l.gamma_harm),
                0.0,
                0.0,
            ),
            check_true(
                "harmonic_bound_finite_at_high_frequency",
                recovers(&curve_l.gamma_harm),
            ),
        ],
    ))
}

fn c5_simulation_cross_checks(
    config: &AnalysisConfig,
    gamma_s1: f64,
    gamma_s10: f64,
) -> Result<CriterionReport, LfrError> {
    let g = config.plant_tf();
    let k = config.controller_tf();
    let delta = config.delta();
    let dt = config.sim.dt;
    let model = |r: ReferenceSignal| ClosedLoopModel::new(&g, &k, delta, r);
    let mut checks = Vec::new();

    let step = model(ReferenceSignal::Step {
        t0: 1.0,
        height: 1.0,
    })?;
    match integrate(&step, 60.0, dt) {
        Ok(run) => {
            let w = run.e_window(54.0, 60.0);
            let mean = w.iter().sum::<f64>() / w.len() as f64;
            checks.push(check(
                "step_steady_state_error",
                Comparison::Within,
                mean,
                0.0167,
                0.05,
            ));
        }
        Err(e) => checks.push(failed(format!("step run: {e}"))),
    }

    let ramp = model(ReferenceSignal::Ramp { slope: 1.0 })?;
    match integrate(&ramp, 140.0, dt) {
        Ok(run) => checks.push(check_true(
            "ramp_error_periodic_at_2pi_seconds",
            period_check(&run, TAU),
        )),
        Err(e) => checks.push(failed(format!("ramp run: {e}"))),
    }

    let switched = model(ReferenceSignal::SwitchedSine {
        amplitude: 5.0,
        omega1: 1.0,
        omega2: 10.0,
        t_switch: 50.0,
    })?;
    match integrate(&switched, 100.0, dt) {
        Ok(run) => {
            let amp = |t0: f64, t1: f64| {
                run.e_window(t0, t1)
                    .iter()
                    .fold(0.0f64, |m, &v| m.max(v.abs()))
            };
            // Amplitude read over the last five periods of each segment.
            let amp1 = amp(50.0 - 5.0 * TAU, 50.0);
            let amp2 = amp(100.0 - 5.0 * TAU / 10.0, 100.0);
            checks.push(check(
                "switched_sine_amplitude_1_radps",
                Comparison::Within,
                amp1,
                1.01,
                0.05,
            ));
            checks.push(check(
                "switched_sine_amplitude_10_radps",
                Comparison::Within,
                amp2,
                6.3,
                0.05,
            ));
            checks.push(check(
                "first_segment_under_sinusoidal_bound",
                Comparison::AtMost,
                amp1,
                5.0 * gamma_s1,
                0.02,
            ));
            checks.push(check(
                "second_segment_under_sinusoidal_bound",
                Comparison::AtMost,
                amp2,
                5.0 * gamma_s10,
                0.02,
            ));
            checks.push(check(
                "switch_transient_vs_steady_amplitude",
                Comparison::AtMost,
                amp(50.0, 55.0),
                1.5 * amp2,
                0.0,
            ));
        }
        Err(e) => checks.push(failed(format!("switched-sine run: {e}"))),
    }

    Ok(CriterionReport::new(5, "time-domain cross-checks", checks))
}

fn c6_probe_suite(
    config: &AnalysisConfig,
    seed: u64,
    gamma_s1: f64,
    gamma_h3: f64,
    gamma_sub2: f64,
) -> Result<CriterionReport, LfrError> {
    // The probe swaps in its own references pair by pair.
    let model = ClosedLoopModel::new(
        &config.plant_tf(),
        &config.controller_tf(),
        config.delta(),
        ReferenceSignal::Step {
            t0: 0.0,
            height: 0.0,
        },
    )?;
    let cases = [
        ("sinusoidal_probe_at_1_radps", InputSpace::Sinusoidal(1.0), gamma_s1),
        ("harmonic_probe_at_3_radps", InputSpace::Harmonic(3.0), gamma_h3),
        ("subharmonic_probe_at_2_radps", InputSpace::Subharmonic(2.0), gamma_sub2),
    ];
    let t0 = Instant::now();
    let mut checks = Vec::new();
    for (name, space, bound) in cases {
        match incremental_gain_probe(&model, space, 200, seed) {
            Ok(ratio) => checks.push(check(name, Comparison::AtMost, ratio, bound, 0.02)),
            Err(e) => checks.push(failed(format!("{name}: {e}"))),
        }
    }
    checks.push(check(
        "probe_runtime_seconds",
        Comparison::AtMost,
        t0.elapsed().as_secs_f64(),
        600.0,
        0.0,
    ));
    Ok(CriterionReport::new(6, "incremental-gain probes", checks))
}

fn c7_orderings(curve_s: &GainCurve, gamma_full_s: f64, opts: &SrgOptions) -> CriterionReport {
    // The exact orderings are theorems; the computed radii carry about
    // arc_step^2 of discretization error, and the sinusoidal and
    // subharmonic bounds come from differently discretized loop heads.
    let tol = 1e-6f64.max(opts.resolution.arc_step().powi(2));
    CriterionReport::new(
        7,
        "gain orderings and limits",
        vec![
            check_true("orderings_hold_on_sweep", curve_s.orderings_hold(tol)),
            check(
                "low_frequency_harmonic_vs_full",
                Comparison::Within,
                curve_s.gamma_harm.first().copied().unwrap_or(f64::NAN),
                gamma_full_s,
                0.02,
            ),
            check(
                "high_frequency_subharmonic_vs_full",
                Comparison::Within,
                curve_s.gamma_subharm.last().copied().unwrap_or(f64::NAN),
                gamma_full_s,
                0.02,
            ),
        ],
    )
}

/// Bisect the first |F(jw)| level crossing on a dense log scan; this stays
/// independent of the sweep's own interpolation.
fn lti_crossing(mag: impl Fn(f64) -> f64, level: f64, upward: bool) -> Option<f64> {
    let (lo, hi, n) = (1e-2f64, 1e2f64, 4000);
    let mut prev_w = lo;
    let mut prev_g = mag(lo);
    for k in 1..=n {
        let w = lo * (hi / lo).powf(f64::from(k) / f64::from(n));
        let g = mag(w);
        let crossed = if upward {
            prev_g < level && g >= level
        } else {
            prev_g > level && g <= level
        };
        if crossed {
            let (mut a, mut b) = (prev_w, w);
            for _ in 0..64 {
                let m = (a * b).sqrt();
                let before = if upward { mag(m) < level } else { mag(m) > level };
                if before {
                    a = m;
                } else {
                    b = m;
                }
            }
            return Some((a * b).sqrt());
        }
        prev_w = w;
        prev_g = g;
    }
    None
}

fn c8_linear_reductions(
    g: &TransferFunction,
    k: &TransferFunction,
    grid: &[f64],
    opts: &SrgOptions,
) -> Result<CriterionReport, LfrError> {
    let zero = SectorNonlinearity::new(0.0, 0.0);
    let s0 = LfrSystem::sensitivity(g, k, zero)?;
    let l0 = LfrSystem::looptransfer(g, k, zero)?;
    let kinds_s = SweepKinds {
        sinusoidal: true,
        harmonic: false,
        subharmonic: true,
        full: false,
    };
    let kinds_l = SweepKinds {
        sinusoidal: true,
        harmonic: true,
        subharmonic: false,
        full: false,
    };
    let curve_s0 = sweep(&s0, grid, kinds_s, opts)?;
    let curve_l0 = sweep(&l0, grid, kinds_l, opts)?;

    let max_rel = |col: &[f64], sys: &LfrSystem| -> Result<f64, LfrError> {
        let mut worst = 0.0f64;
        for (i, &w) in grid.iter().enumerate() {
            let mag = sys.blocks.p_out_in.eval_jw(w)?.norm();
            worst = worst.max((col[i] - mag).abs() / mag);
        }
        Ok(worst)
    };
    let dev_s = max_rel(&curve_s0.gamma_sin, &s0)?;
    let dev_l = max_rel(&curve_l0.gamma_sin, &l0)?;

    let s_mag = |w: f64| s0.blocks.p_out_in.eval_jw(w).map_or(f64::NAN, |z| z.norm());
    let l_mag = |w: f64| l0.blocks.p_out_in.eval_jw(w).map_or(f64::NAN, |z| z.norm());
    let wb_lti = lti_crossing(s_mag, std::f64::consts::FRAC_1_SQRT_2, true);
    let wc_lti = lti_crossing(l_mag, 1.0, false);

    // Agreement is judged in grid steps: |ln(wb/wb_lti)| per log spacing.
    let step_ln = if grid.len() > 1 {
        (grid[1] / grid[0]).ln()
    } else {
        f64::NAN
    };
    let offset_steps = |found: Option<f64>, reference: Option<f64>| match (found, reference) {
        (Some(a), Some(b)) => (a / b).ln().abs() / step_ln,
        _ => f64::NAN,
    };

    Ok(CriterionReport::new(
        8,
        "zero-sector linear reductions",
        vec![
            check(
                "sensitivity_curve_vs_lti_max_rel_dev",
                Comparison::AtMost,
                dev_s,
                1e-6,
                0.0,
            ),
            check(
                "loop_curve_vs_lti_max_rel_dev",
                Comparison::AtMost,
                dev_l,
                1e-6,
                0.0,
            ),
            check(
                "closed_bandwidth_offset_grid_steps",
                Comparison::AtMost,
                offset_steps(curve_s0.bandwidth_closed, wb_lti),
                1.0,
                0.0,
            ),
            check(
                "crossover_offset_grid_steps",
                Comparison::AtMost,
                offset_steps(curve_l0.bandwidth_open, wc_lti),
                1.0,
                0.0,
            ),
        ],
    ))
}

fn c9_geometry(opts: &SrgOptions) -> CriterionReport {
    let res = opts.resolution;
    let c = Complex64::new;
    let mut checks = Vec::new();

    // Hull idempotence: re-hulling a hull's boundary reproduces it.
    let cloud: Vec<Complex64> = vec![
        c(0.2, 0.0),
        c(1.0, 0.5),
        c(-0.3, 1.2),
        c(2.0, 0.1),
        c(0.5, 2.0),
        c(-1.1, 0.4),
        c(1.4, 1.4),
    ];
    let h1 = hco(&cloud, res);
    let h2 = hco(&h1.boundary_samples(), res);
    match (h1.radius(), h2.radius()) {
        (Ok(r1), Ok(r2)) => {
            checks.push(check(
                "hull_idempotence_radius_drift",
                Comparison::AtMost,
                (r2 - r1).abs(),
                res.tol(r1),
                0.0,
            ));
            let lost = h1
                .boundary_samples()
                .iter()
                .filter(|z| !h2.contains(**z, res))
                .count();
            checks.push(check(
                "hull_idempotence_lost_points",
                Comparison::AtMost,
                lost as f64,
                0.0,
                0.0,
            ));
        }
        _ => checks.push(failed("hull radius unavailable")),
    }

    // Inversion involution on a disk bounded away from zero.
    let disk = Region::disk(3.0, 1.0, res);
    match disk
        .mobius_invert(res)
        .and_then(|r| r.mobius_invert(res))
        .and_then(|r| r.radius())
    {
        Ok(r) => checks.push(check(
            "inversion_involution_radius",
            Comparison::Within,
            r,
            4.0,
            0.01,
        )),
        Err(e) => checks.push(failed(format!("inversion involution: {e}"))),
    }

    // Radius identities on origin-centered disks: product multiplies radii
    // exactly, sum stays sub-additive.
    let a = Region::disk(0.0, 2.0, res);
    let b = Region::disk(0.0, 3.0, res);
    match minkowski_product(&a, &b, res).and_then(|p| p.radius()) {
        Ok(r) => checks.push(check(
            "product_radius_identity",
            Comparison::Within,
            r,
            6.0,
            0.01,
        )),
        Err(e) => checks.push(failed(format!("product radius: {e}"))),
    }
    match minkowski_sum(&a, &b, res).and_then(|s| s.radius()) {
        Ok(r) => checks.push(check(
            "sum_radius_subadditive",
            Comparison::AtMost,
            r,
            5.0,
            0.01,
        )),
        Err(e) => checks.push(failed(format!("sum radius: {e}"))),
    }

    // Dense-sampling oracle: pairwise sums and products of boundary points
    // must land inside the computed sets.
    let p = Region::disk(1.0, 0.5, res);
    let q = Region::disk(-0.5, 0.25, res);
    let pa = p.boundary_samples();
    let qa = q.boundary_samples();
    let stride = 7;
    match (
        minkowski_sum(&p, &q, res),
        minkowski_product(&p, &q, res),
    ) {
        (Ok(sum), Ok(prod)) => {
            let mut sum_viol = 0usize;
            let mut prod_viol = 0usize;
            for za in pa.iter().step_by(stride) {
                for zb in qa.iter().step_by(stride) {
                    if !sum.contains(za + zb, res) {
                        sum_viol += 1;
                    }
                    if !prod.contains(za * zb, res) {
                        prod_viol += 1;
                    }
                }
            }
            checks.push(check(
                "minkowski_sum_containment_violations",
                Comparison::AtMost,
                sum_viol as f64,
                0.0,
                0.0,
            ));
            checks.push(check(
                "minkowski_product_containment_violations",
                Comparison::AtMost,
                prod_viol as f64,
                0.0,
                0.0,
            ));
        }
        _ => checks.push(failed("minkowski operands unavailable")),
    }

    // Doubling the boundary resolution moves a composite radius < 1%.
    let composite_radius = |r: Resolution| -> Option<f64> {
        let h = hco(&cloud, r);
        let d = Region::disk(0.5, 0.25, r);
        let s = minkowski_sum(&h, &d, r).ok()?;
        let prod = minkowski_product(&h.arc_complete(r), &s, r).ok()?;
        prod.radius().ok()
    };
    match (
        composite_radius(res),
        composite_radius(Resolution::new(2 * res.boundary_points)),
    ) {
        (Some(r1), Some(r2)) => checks.push(check(
            "resolution_doubling_radius_shift",
            Comparison::AtMost,
            (r2 - r1).abs() / r1,
            0.01,
            0.0,
        )),
        _ => checks.push(failed("composite radius unavailable")),
    }

    CriterionReport::new(9, "geometry invariants", checks)
}

fn c10_describing_function(
    s_sys: &LfrSystem,
    g: &TransferFunction,
    k: &TransferFunction,
    config: &AnalysisConfig,
    opts: &SrgOptions,
) -> Result<CriterionReport, LfrError> {
    let amps = config.amplitude_grid();
    let mut checks = Vec::new();

    // Zero sector: the DF collapses to the LTI magnitude identically.
    let s0 = LfrSystem::sensitivity(g, k, SectorNonlinearity::new(0.0, 0.0))?;
    let grid = config.frequency_grid();
    let df0 = df_curve(&s0, &grid, &amps)?;
    let mut dev0 = 0.0f64;
    for (i, &w) in grid.iter().enumerate() {
        let mag = s0.blocks.p_out_in.eval_jw(w)?.norm();
        dev0 = dev0.max((df0.df_gain[i] - mag).abs());
    }
    checks.push(check(
        "zero_sector_df_deviation",
        Comparison::AtMost,
        dev0,
        0.0,
        0.0,
    ));

    // Sector DF sits between the LTI magnitude and the sinusoidal bound.
    let freqs = [0.1, 0.2, 0.5, 1.0, 2.0, 4.0, 6.0, 10.0, 15.0, 20.0];
    let dfc = df_curve(s_sys, &freqs, &amps)?;
    let mut max_over_bound = 0.0f64;
    let mut min_over_lti = f64::INFINITY;
    for (i, &w) in freqs.iter().enumerate() {
        let bound = lfr_gamma(s_sys, InputSpace::Sinusoidal(w), opts)?;
        let mag = s_sys.blocks.p_out_in.eval_jw(w)?.norm();
        max_over_bound = max_over_bound.max(dfc.df_gain[i] / bound);
        min_over_lti = min_over_lti.min(dfc.df_gain[i] / mag);
    }
    checks.push(check(
        "df_to_sinusoidal_bound_max_ratio",
        Comparison::AtMost,
        max_over_bound,
        1.0,
        0.02,
    ));
    checks.push(check(
        "df_to_lti_magnitude_min_ratio",
        Comparison::AtLeast,
        min_over_lti,
        1.0,
        0.02,
    ));

    Ok(CriterionReport::new(
        10,
        "describing-function comparison",
        checks,
    ))
}
