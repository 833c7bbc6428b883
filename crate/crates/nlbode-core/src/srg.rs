//! Scaled relative graphs of LTI blocks over restricted input spaces, and of
//! sector-bounded static nonlinearities.
//!
//! For an LTI operator the SRG over a signal space is the h-convex hull of
//! its frequency response sampled at the frequencies the space can contain:
//! a single point for pure sinusoids, the harmonics `omega*n`, the
//! subharmonics `omega/n`, or the whole imaginary axis. Conjugate points are
//! implied by region symmetry.

use crate::cgeom::{hco, Region, Resolution};
use crate::lti::{LtiError, TransferFunction};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SrgError {
    #[error("LTI block has unstable poles; its SRG is not computable here")]
    UnstablePoles,
    #[error(transparent)]
    Lti(#[from] LtiError),
}

/// Signal space generated by a base frequency, or the unrestricted space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InputSpace {
    Sinusoidal(f64),
    Harmonic(f64),
    Subharmonic(f64),
    FullL2,
}

impl InputSpace {
    pub fn base_frequency(&self) -> Option<f64> {
        match self {
            InputSpace::Sinusoidal(w)
            | InputSpace::Harmonic(w)
            | InputSpace::Subharmonic(w) => Some(*w),
            InputSpace::FullL2 => None,
        }
    }
}

/// Position of an LTI block in the 2x2 LFR: the loop pair processes the
/// post-nonlinearity signal, the injection pair processes the external input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockRole {
    Loop,
    Injection,
}

/// Space each block must be evaluated over so that the composed bound covers
/// the target space. The nonlinearity can create harmonics, so loop blocks
/// see the harmonic closure of the target; injection blocks see the target
/// itself. A subharmonic target closes over all of L2 inside the loop.
pub fn space_for_block(role: BlockRole, target: InputSpace) -> InputSpace {
    match (role, target) {
        (_, InputSpace::Harmonic(w)) => InputSpace::Harmonic(w),
        (_, InputSpace::FullL2) => InputSpace::FullL2,
        (BlockRole::Loop, InputSpace::Sinusoidal(w)) => InputSpace::Harmonic(w),
        (BlockRole::Injection, InputSpace::Sinusoidal(w)) => InputSpace::Sinusoidal(w),
        (BlockRole::Loop, InputSpace::Subharmonic(_)) => InputSpace::FullL2,
        (BlockRole::Injection, InputSpace::Subharmonic(w)) => InputSpace::Subharmonic(w),
    }
}

/// Static nonlinearity with incremental slopes confined to `[alpha, beta]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorNonlinearity {
    pub alpha: f64,
    pub beta: f64,
}

impl SectorNonlinearity {
    pub fn new(alpha: f64, beta: f64) -> Self {
        assert!(alpha <= beta, "sector bounds out of order");
        Self { alpha, beta }
    }

    /// Sector of an odd bounded-slope nonlinearity like `delta * sin`.
    pub fn symmetric(delta: f64) -> Self {
        Self::new(-delta, delta)
    }

    pub fn is_degenerate(&self) -> bool {
        self.alpha == self.beta
    }
}

/// The disk through `alpha` and `beta` on the real axis; a single point when
/// the sector is degenerate.
pub fn nonlinearity_srg(phi: &SectorNonlinearity, res: Resolution) -> Region {
    if phi.is_degenerate() {
        Region::points([Complex64::new(phi.alpha, 0.0)])
    } else {
        Region::disk(0.5 * (phi.alpha + phi.beta), 0.5 * (phi.beta - phi.alpha), res)
    }
}

/// A computed SRG, or the marker for a provably infinite one (an integrator
/// seen by a space whose frequencies reach zero).
#[derive(Clone, Debug)]
pub enum Srg {
    Region(Region),
    Unbounded,
}

impl Srg {
    pub fn radius(&self) -> f64 {
        match self {
            Srg::Region(r) => r.radius().expect("SRG regions are never empty"),
            Srg::Unbounded => f64::INFINITY,
        }
    }

    pub fn region(&self) -> Option<&Region> {
        match self {
            Srg::Region(r) => Some(r),
            Srg::Unbounded => None,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, Srg::Unbounded)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SrgOptions {
    pub resolution: Resolution,
    /// Relative tail threshold for truncating the harmonic point families.
    pub tail_rel_tol: f64,
    pub max_harmonics: usize,
    pub full_grid_lo: f64,
    pub full_grid_hi: f64,
    pub full_points_per_decade: usize,
}

impl Default for SrgOptions {
    fn default() -> Self {
        Self {
            resolution: Resolution::default(),
            tail_rel_tol: 1e-4,
            max_harmonics: 100_000,
            full_grid_lo: 1e-4,
            full_grid_hi: 1e4,
            full_points_per_decade: 2000,
        }
    }
}

/// SRG of a stable (or stable-plus-integrator) LTI block over `space`.
///
/// Integrators are admissible for the sinusoidal and harmonic spaces, whose
/// members have zero mean; the subharmonic and full spaces reach frequency
/// zero, where an integrator has infinite gain, so those SRGs come back as
/// the unbounded marker rather than a region.
pub fn lti_srg(
    g: &TransferFunction,
    space: InputSpace,
    opts: &SrgOptions,
) -> Result<Srg, SrgError> {
    let class = g.classify_poles();
    if class.unstable_poles > 0 {
        return Err(SrgError::UnstablePoles);
    }
    let has_integrator = class.integrators > 0;
    let res = opts.resolution;
    match space {
        InputSpace::Sinusoidal(w) => {
            let p = g.eval_jw(w)?;
            Ok(Srg::Region(Region::points([p])))
        }
        InputSpace::Harmonic(w) => {
            let limit = Complex64::new(g.limit_at_infinity(), 0.0);
            let pts = tail_family(|n| g.eval_jw(w * n as f64), limit, opts)?;
            Ok(Srg::Region(hco(&pts, res)))
        }
        InputSpace::Subharmonic(w) => {
            if has_integrator {
                return Ok(Srg::Unbounded);
            }
            let dc = g.eval(Complex64::new(0.0, 0.0))?;
            let pts = tail_family(|n| g.eval_jw(w / n as f64), dc, opts)?;
            Ok(Srg::Region(hco(&pts, res)))
        }
        InputSpace::FullL2 => {
            if has_integrator {
                return Ok(Srg::Unbounded);
            }
            let pts = nyquist_family(g, opts)?;
            Ok(Srg::Region(hco(&pts, res)))
        }
    }
}

/// Walks `eval(1), eval(2), ...` until three consecutive samples sit within
/// the relative tail tolerance of the accumulation point, which is always
/// part of the family.
fn tail_family(
    eval: impl Fn(u64) -> Result<Complex64, LtiError>,
    limit: Complex64,
    opts: &SrgOptions,
) -> Result<Vec<Complex64>, SrgError> {
    let mut pts = vec![limit];
    let mut radius = limit.norm();
    let mut quiet = 0usize;
    for n in 1..=opts.max_harmonics as u64 {
        let p = eval(n)?;
        radius = radius.max(p.norm());
        pts.push(p);
        if (p - limit).norm() <= opts.tail_rel_tol * radius {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    Ok(pts)
}

/// Log-spaced Nyquist samples plus both frequency limits plus the refined
/// modulus peak. Pinning the true peak keeps the full-space radius at least
/// as large as any pointwise gain taken off the grid.
fn nyquist_family(
    g: &TransferFunction,
    opts: &SrgOptions,
) -> Result<Vec<Complex64>, SrgError> {
    let lo = opts.full_grid_lo;
    let hi = opts.full_grid_hi;
    let ppd = opts.full_points_per_decade as f64;
    let steps = ((hi / lo).log10() * ppd).ceil() as usize;
    let mut pts = Vec::with_capacity(steps + 4);
    let mut peak = (f64::NEG_INFINITY, lo);
    for i in 0..=steps {
        let w = lo * 10f64.powf(i as f64 / ppd);
        let p = g.eval_jw(w)?;
        if p.norm() > peak.0 {
            peak = (p.norm(), w);
        }
        pts.push(p);
    }
    pts.push(g.eval(Complex64::new(0.0, 0.0))?);
    pts.push(Complex64::new(g.limit_at_infinity(), 0.0));
    let gap = 10f64.powf(1.0 / ppd);
    let w_peak = golden_max(
        |w| g.eval_jw(w).map(|p| p.norm()).unwrap_or(f64::NEG_INFINITY),
        peak.1 / gap,
        peak.1 * gap,
    );
    pts.push(g.eval_jw(w_peak)?);
    Ok(pts)
}

/// Golden-section maximization on `[a, b]` to relative abscissa tolerance
/// 1e-6; unimodality holds on the one-grid-cell bracket this is used with.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - (b - a) * INV_PHI;
    let mut d = a + (b - a) * INV_PHI;
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a) > 1e-6 * b.abs().max(1e-12) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * INV_PHI;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * INV_PHI;
            fd = f(d);
        }
    }
    0.5 * (a + b)
}
