//! Gain bounds for a Lur'e loop pulled into linear fractional form.
//!
//! The closed-loop map from the exogenous input to the chosen output is
//! `P_out_w (phi^{-1} - P_zw)^{-1} P_z_in + P_out_in`, and its SRG over a
//! target input space is bounded by composing the block SRGs with the region
//! algebra. From that come the per-frequency gain bounds, the nonlinear Bode
//! sweep, bandwidth readouts and the small-gain stability certificate.

use crate::cgeom::{minkowski_product, minkowski_sum, set_distance};
use crate::lti::{
    lfr_blocks_looptransfer, lfr_blocks_sensitivity, LoopBlocks, LtiError, TransferFunction,
};
use crate::srg::{
    lti_srg, nonlinearity_srg, space_for_block, BlockRole, InputSpace, SectorNonlinearity, Srg,
    SrgError, SrgOptions,
};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LfrError {
    #[error(transparent)]
    Srg(#[from] SrgError),
    #[error("weighting filter has a pole outside the open left half-plane")]
    UnstableWeight,
}

impl From<LtiError> for LfrError {
    fn from(e: LtiError) -> Self {
        LfrError::Srg(SrgError::from(e))
    }
}

/// A feedback loop in linear fractional form: four LTI blocks around one
/// static sector-bounded nonlinearity.
#[derive(Clone, Debug)]
pub struct LfrSystem {
    pub blocks: LoopBlocks,
    pub phi: SectorNonlinearity,
    pub label: String,
}

impl LfrSystem {
    pub fn new(blocks: LoopBlocks, phi: SectorNonlinearity, label: impl Into<String>) -> Self {
        Self {
            blocks,
            phi,
            label: label.into(),
        }
    }

    /// Reference-to-error map of the unity feedback loop around `g * k`.
    pub fn sensitivity(
        g: &TransferFunction,
        k: &TransferFunction,
        phi: SectorNonlinearity,
    ) -> Result<Self, LfrError> {
        Ok(Self::new(lfr_blocks_sensitivity(g, k)?, phi, "S"))
    }

    /// Error-to-output map (the loop transfer) of the same interconnection.
    pub fn looptransfer(
        g: &TransferFunction,
        k: &TransferFunction,
        phi: SectorNonlinearity,
    ) -> Result<Self, LfrError> {
        Ok(Self::new(lfr_blocks_looptransfer(g, k)?, phi, "L"))
    }
}

/// True when the nonlinearity is identically zero and the loop term drops.
fn zero_sector(phi: &SectorNonlinearity) -> bool {
    phi.alpha == 0.0 && phi.beta == 0.0
}

fn validate_blocks(blocks: &LoopBlocks) -> Result<(), LfrError> {
    for tf in [
        &blocks.p_zw,
        &blocks.p_out_w,
        &blocks.p_z_in,
        &blocks.p_out_in,
    ] {
        if tf.classify_poles().unstable_poles > 0 {
            return Err(SrgError::UnstablePoles.into());
        }
    }
    Ok(())
}

/// Loop-side head of the bound: SRG(P_out_w) · (SRG(phi)^{-1} − SRG(P_zw))^{-1}.
///
/// Divergence is a value, not an error: when the inverted sector touches
/// SRG(P_zw) the middle factor is unbounded and the marker comes back. A
/// sector with 0 on its rim inverts to a half-plane, which the region kinds
/// cannot carry, so it also degrades to the unbounded marker.
fn loop_head(sys: &LfrSystem, loop_space: InputSpace, opts: &SrgOptions) -> Result<Srg, SrgError> {
    let res = opts.resolution;
    let zw = lti_srg(&sys.blocks.p_zw, loop_space, opts)?;
    let ew = lti_srg(&sys.blocks.p_out_w, loop_space, opts)?;
    let (Srg::Region(zw), Srg::Region(ew)) = (&zw, &ew) else {
        return Ok(Srg::Unbounded);
    };
    let phi_inv = match nonlinearity_srg(&sys.phi, res).mobius_invert(res) {
        Ok(r) => r,
        Err(_) => return Ok(Srg::Unbounded),
    };
    match set_distance(&phi_inv, zw, res) {
        Ok(d) if d > 0.0 => {}
        _ => return Ok(Srg::Unbounded),
    }
    let diff = match minkowski_sum(&phi_inv, &zw.negate().chord_complete(res), res) {
        Ok(r) => r,
        Err(_) => return Ok(Srg::Unbounded),
    };
    let mid = match diff.mobius_invert(res) {
        Ok(r) if !r.is_unbounded() => r,
        _ => return Ok(Srg::Unbounded),
    };
    match minkowski_product(&ew.arc_complete(res), &mid, res) {
        Ok(r) => Ok(Srg::Region(r)),
        Err(_) => Ok(Srg::Unbounded),
    }
}

/// Injection-side tail: head · SRG(P_z_in) + SRG(P_out_in) over the target.
fn finish_bound(
    sys: &LfrSystem,
    head: &Srg,
    target: InputSpace,
    opts: &SrgOptions,
) -> Result<Srg, SrgError> {
    let inj = space_for_block(BlockRole::Injection, target);
    let zr = lti_srg(&sys.blocks.p_z_in, inj, opts)?;
    let er = lti_srg(&sys.blocks.p_out_in, inj, opts)?;
    let (Srg::Region(head), Srg::Region(zr), Srg::Region(er)) = (head, &zr, &er) else {
        return Ok(Srg::Unbounded);
    };
    let res = opts.resolution;
    let prod = match minkowski_product(&head.arc_complete(res), zr, res) {
        Ok(r) => r,
        Err(_) => return Ok(Srg::Unbounded),
    };
    match minkowski_sum(&prod, &er.chord_complete(res), res) {
        Ok(r) => Ok(Srg::Region(r)),
        Err(_) => Ok(Srg::Unbounded),
    }
}

/// Region bounding the SRG of the closed-loop map over `target`, or the
/// unbounded marker when any stage of the composition diverges.
///
/// Completions follow the one-operand hypotheses of the SRG calculus: chords
/// on the second operand of each sum, arcs on the first operand of each
/// product. With a zero nonlinearity the loop term is absent and the bound
/// is the SRG of `P_out_in` itself, which keeps the linear special case
/// exact.
pub fn lfr_bound_region(
    sys: &LfrSystem,
    target: InputSpace,
    opts: &SrgOptions,
) -> Result<Srg, LfrError> {
    validate_blocks(&sys.blocks)?;
    if zero_sector(&sys.phi) {
        let inj = space_for_block(BlockRole::Injection, target);
        return Ok(lti_srg(&sys.blocks.p_out_in, inj, opts)?);
    }
    let head = loop_head(sys, space_for_block(BlockRole::Loop, target), opts)?;
    Ok(finish_bound(sys, &head, target, opts)?)
}

/// Radius of the bound region: the guaranteed incremental-gain bound.
pub fn lfr_gamma(sys: &LfrSystem, target: InputSpace, opts: &SrgOptions) -> Result<f64, LfrError> {
    Ok(lfr_bound_region(sys, target, opts)?.radius())
}

/// Which per-frequency gain kinds a sweep computes.
#[derive(Clone, Copy, Debug)]
pub struct SweepKinds {
    pub sinusoidal: bool,
    pub harmonic: bool,
    pub subharmonic: bool,
    pub full: bool,
}

impl SweepKinds {
    pub fn all() -> Self {
        Self {
            sinusoidal: true,
            harmonic: true,
            subharmonic: true,
            full: true,
        }
    }

    /// The loop-transfer diagram: its integrator makes every subharmonic
    /// bound infinite, so that column is left out.
    pub fn without_subharmonic() -> Self {
        Self {
            subharmonic: false,
            ..Self::all()
        }
    }
}

impl Default for SweepKinds {
    fn default() -> Self {
        Self::all()
    }
}

/// Gain bounds over a frequency grid. Entries are +∞ where the bound
/// diverges; the vector of a kind that was not requested stays empty and
/// `gamma_full` is `None` when not requested.
#[derive(Clone, Debug, Default)]
pub struct GainCurve {
    pub frequencies: Vec<f64>,
    pub gamma_sin: Vec<f64>,
    pub gamma_harm: Vec<f64>,
    pub gamma_subharm: Vec<f64>,
    pub gamma_full: Option<f64>,
    pub bandwidth_closed: Option<f64>,
    pub bandwidth_open: Option<f64>,
}

impl GainCurve {
    /// Pointwise gain orderings: sinusoidal never exceeds harmonic or
    /// subharmonic, and nothing exceeds the full-space bound. Infinite
    /// entries compare like IEEE infinities.
    pub fn orderings_hold(&self, rel_tol: f64) -> bool {
        let le = |a: f64, b: f64| a <= b * (1.0 + rel_tol) || b.is_infinite();
        let pair = |lo: &[f64], hi: &[f64]| {
            lo.len() != hi.len() || lo.iter().zip(hi).all(|(&a, &b)| le(a, b))
        };
        let capped = |g: &[f64]| match self.gamma_full {
            Some(full) => g.iter().all(|&a| le(a, full)),
            None => true,
        };
        (self.gamma_harm.is_empty() || pair(&self.gamma_sin, &self.gamma_harm))
            && (self.gamma_subharm.is_empty() || pair(&self.gamma_sin, &self.gamma_subharm))
            && capped(&self.gamma_harm)
            && capped(&self.gamma_subharm)
    }

    /// Lowest frequency where the subharmonic bound rises through 1/√2,
    /// interpolated between the bracketing grid points.
    pub fn closed_loop_bandwidth(&self) -> Option<f64> {
        crossing_up(
            &self.frequencies,
            &self.gamma_subharm,
            std::f64::consts::FRAC_1_SQRT_2,
        )
    }

    /// Lowest frequency where the harmonic bound falls through 1.
    pub fn open_loop_bandwidth(&self) -> Option<f64> {
        crossing_down(&self.frequencies, &self.gamma_harm, 1.0)
    }
}

/// Log-frequency, log-gain linear interpolation of the first upward level
/// crossing (strictly below to at-or-above).
fn crossing_up(w: &[f64], g: &[f64], level: f64) -> Option<f64> {
    for i in 1..g.len().min(w.len()) {
        let (g0, g1) = (g[i - 1], g[i]);
        if g0 < level && g1 >= level {
            return Some(interp_crossing(w[i - 1], w[i], g0, g1, level));
        }
    }
    None
}

fn crossing_down(w: &[f64], g: &[f64], level: f64) -> Option<f64> {
    for i in 1..g.len().min(w.len()) {
        let (g0, g1) = (g[i - 1], g[i]);
        if g0 > level && g1 <= level {
            return Some(interp_crossing(w[i - 1], w[i], g0, g1, level));
        }
    }
    None
}

fn interp_crossing(w0: f64, w1: f64, g0: f64, g1: f64, level: f64) -> f64 {
    // Interpolating in dB is affine in ln, so the 20/ln(10) factor cancels.
    if !(g0.is_finite() && g1.is_finite() && g0 > 0.0 && g1 > 0.0) {
        return w1;
    }
    let t = (level.ln() - g0.ln()) / (g1.ln() - g0.ln());
    w0 * (w1 / w0).powf(t.clamp(0.0, 1.0))
}

/// Logarithmically spaced frequency grid with both endpoints included.
pub fn log_grid(lo: f64, hi: f64, points_per_decade: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && points_per_decade > 0, "bad grid spec");
    let decades = (hi / lo).log10();
    let n = ((decades * points_per_decade as f64).round() as usize).max(2);
    (0..n)
        .map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64))
        .collect()
}

/// Default sweep grid: four decades around the DC-motor loop's crossover.
pub fn default_grid() -> Vec<f64> {
    log_grid(1e-2, 1e2, 50)
}

/// Sweep the gain bounds over a frequency grid.
///
/// Frequencies are independent work items and run as a parallel map, merged
/// back in grid order. A divergent bound records +∞ at that frequency only;
/// neighbours are still evaluated. The loop side of the subharmonic and
/// full-space bounds closes over all of L2 regardless of the grid frequency,
/// so that head is computed once and shared, as is the per-frequency
/// harmonic head between the sinusoidal and harmonic columns.
pub fn sweep(
    sys: &LfrSystem,
    grid: &[f64],
    kinds: SweepKinds,
    opts: &SrgOptions,
) -> Result<GainCurve, LfrError> {
    assert!(
        grid.windows(2).all(|w| w[0] < w[1]) && grid.first().is_none_or(|&w| w > 0.0),
        "frequency grid must be strictly increasing and positive"
    );
    validate_blocks(&sys.blocks)?;
    let zero_phi = zero_sector(&sys.phi);

    let full_head = if !zero_phi && (kinds.subharmonic || kinds.full) {
        Some(loop_head(sys, InputSpace::FullL2, opts)?)
    } else {
        None
    };
    let gamma_full = if kinds.full {
        Some(bound_radius(sys, full_head.as_ref(), InputSpace::FullL2, opts))
    } else {
        None
    };

    let rows: Vec<(f64, f64, f64)> = grid
        .par_iter()
        .map(|&w| {
            let head_h = if (kinds.sinusoidal || kinds.harmonic) && !zero_phi {
                Some(match loop_head(sys, InputSpace::Harmonic(w), opts) {
                    Ok(h) => h,
                    Err(_) => Srg::Unbounded,
                })
            } else {
                None
            };
            let gs = if kinds.sinusoidal {
                bound_radius(sys, head_h.as_ref(), InputSpace::Sinusoidal(w), opts)
            } else {
                f64::NAN
            };
            let gh = if kinds.harmonic {
                bound_radius(sys, head_h.as_ref(), InputSpace::Harmonic(w), opts)
            } else {
                f64::NAN
            };
            let gsub = if kinds.subharmonic {
                bound_radius(sys, full_head.as_ref(), InputSpace::Subharmonic(w), opts)
            } else {
                f64::NAN
            };
            (gs, gh, gsub)
        })
        .collect();

    let column = |on: bool, pick: fn(&(f64, f64, f64)) -> f64| -> Vec<f64> {
        if on {
            rows.iter().map(pick).collect()
        } else {
            Vec::new()
        }
    };
    let mut curve = GainCurve {
        frequencies: grid.to_vec(),
        gamma_sin: column(kinds.sinusoidal, |r| r.0),
        gamma_harm: column(kinds.harmonic, |r| r.1),
        gamma_subharm: column(kinds.subharmonic, |r| r.2),
        gamma_full,
        bandwidth_closed: None,
        bandwidth_open: None,
    };
    curve.bandwidth_closed = curve.closed_loop_bandwidth();
    curve.bandwidth_open = curve.open_loop_bandwidth();
    // Exact orderings hold in the limit; discretized radii can cross by
    // roughly the squared arc step at coarse resolutions.
    let tol = 1e-6f64.max(opts.resolution.arc_step().powi(2));
    debug_assert!(curve.orderings_hold(tol), "gain orderings violated");
    Ok(curve)
}

/// Radius of the bound for one target, reusing a precomputed loop head when
/// the caller has one. Every failure mode maps to +∞.
fn bound_radius(
    sys: &LfrSystem,
    head: Option<&Srg>,
    target: InputSpace,
    opts: &SrgOptions,
) -> f64 {
    if zero_sector(&sys.phi) {
        let inj = space_for_block(BlockRole::Injection, target);
        return match lti_srg(&sys.blocks.p_out_in, inj, opts) {
            Ok(s) => s.radius(),
            Err(_) => f64::INFINITY,
        };
    }
    let owned;
    let head = match head {
        Some(h) => h,
        None => {
            let space = space_for_block(BlockRole::Loop, target);
            owned = match loop_head(sys, space, opts) {
                Ok(h) => h,
                Err(_) => Srg::Unbounded,
            };
            &owned
        }
    };
    match finish_bound(sys, head, target, opts) {
        Ok(s) => s.radius(),
        Err(_) => f64::INFINITY,
    }
}

/// Outcome of the homotopy small-gain test for `phi` in feedback with an
/// LTI block: the loop is incrementally stable when the inverted sector
/// keeps a positive distance to every scaling −τ·SRG(H2), and the gain of
/// the resulting closed loop is at most `1/r_min`.
#[derive(Clone, Copy, Debug)]
pub struct StabilityCertificate {
    pub certified: bool,
    /// Smallest clearance over the homotopy grid; +∞ when the nonlinearity
    /// is identically zero and there is no loop to close.
    pub r_min: f64,
    pub gain_bound: f64,
}

/// Homotopy grid with spacing 0.05 ending at 1.
pub fn default_tau_grid() -> Vec<f64> {
    (1..=20).map(|k| f64::from(k) * 0.05).collect()
}

pub fn stability_certificate(
    phi: &SectorNonlinearity,
    h2: &TransferFunction,
    tau_grid: &[f64],
    opts: &SrgOptions,
) -> Result<StabilityCertificate, LfrError> {
    assert!(
        tau_grid.iter().all(|&t| t > 0.0 && t <= 1.0) && tau_grid.contains(&1.0),
        "homotopy grid must lie in (0, 1] and include 1"
    );
    if zero_sector(phi) {
        return Ok(StabilityCertificate {
            certified: true,
            r_min: f64::INFINITY,
            gain_bound: 0.0,
        });
    }
    let res = opts.resolution;
    let uncertified = StabilityCertificate {
        certified: false,
        r_min: 0.0,
        gain_bound: f64::INFINITY,
    };
    let h2_region = match lti_srg(h2, InputSpace::FullL2, opts)? {
        Srg::Region(r) => r,
        Srg::Unbounded => return Ok(uncertified),
    };
    let phi_inv = match nonlinearity_srg(phi, res).mobius_invert(res) {
        Ok(r) => r,
        Err(_) => return Ok(uncertified),
    };
    let mut r_min = f64::INFINITY;
    for &tau in tau_grid {
        let scaled = h2_region.scale(-tau);
        match set_distance(&phi_inv, &scaled, res) {
            Ok(d) => r_min = r_min.min(d),
            Err(_) => return Ok(uncertified),
        }
    }
    Ok(StabilityCertificate {
        certified: r_min > 0.0,
        r_min,
        gain_bound: if r_min > 0.0 {
            1.0 / r_min
        } else {
            f64::INFINITY
        },
    })
}

/// Reweight the exogenous input and the measured output by stable LTI
/// filters. The loop pair is untouched; only the injection path changes.
pub fn apply_weights(
    sys: &LfrSystem,
    w_in: &TransferFunction,
    w_out: &TransferFunction,
) -> Result<LfrSystem, LfrError> {
    for w in [w_in, w_out] {
        if !w.classify_poles().is_strictly_stable() {
            return Err(LfrError::UnstableWeight);
        }
    }
    Ok(LfrSystem {
        blocks: LoopBlocks {
            p_zw: sys.blocks.p_zw.clone(),
            p_out_w: w_out.mul(&sys.blocks.p_out_w),
            p_z_in: sys.blocks.p_z_in.mul(w_in),
            p_out_in: w_out.mul(&sys.blocks.p_out_in).mul(w_in),
        },
        phi: sys.phi,
        label: sys.label.clone(),
    })
}
