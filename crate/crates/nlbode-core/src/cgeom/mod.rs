//! Conjugate-symmetric regions of the complex plane and the set arithmetic
//! needed to combine operator gain sets: hulls, Möbius inversion, Minkowski
//! sums and products, radii and set distances.
//!
//! Every `Region` denotes a subset of ℂ that is symmetric about the real
//! axis, so only the closed upper half-plane part is stored. A bounded
//! region keeps the boundary of its upper-half part as a closed polyline
//! (real-axis stretches included); the only unbounded regions are Möbius
//! inversions of bounded regions whose interior contains 0, and those store
//! the bounded pre-image instead of a boundary.
//!
//! The h-convex hull (closure under minimal arcs of circles centered on the
//! real axis) is computed exactly through the lift (x, y) ↦ (x, x² + y²),
//! which maps such circles to straight lines; see [`hull`].

mod hull;
mod ops;

use num_complex::Complex64;
use thiserror::Error;

pub use hull::hco;
pub use ops::{minkowski_product, minkowski_sum, set_distance};

/// Sampling resolution for boundary polylines and set operations.
///
/// `boundary_points` is the target number of points on a full circle; arcs
/// are discretized at 2π/N radians and straight boundary stretches at a
/// comparable arc length, so a disk boundary carries about N points.
#[derive(Clone, Copy, Debug)]
pub struct Resolution {
    pub boundary_points: usize,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution {
            boundary_points: 720,
        }
    }
}

impl Resolution {
    pub fn new(boundary_points: usize) -> Self {
        Resolution {
            boundary_points: boundary_points.max(16),
        }
    }

    /// Angular step for arc discretization.
    pub fn arc_step(&self) -> f64 {
        std::f64::consts::TAU / self.boundary_points as f64
    }

    /// Cap on the number of boundary samples fed into pairwise set
    /// operations (per operand, both half-planes counted).
    pub fn op_samples(&self) -> usize {
        2 * self.boundary_points
    }

    /// Geometric tolerance for a region of the given radius: a fixed floor
    /// plus the arc-sampling error 2π·radius/N.
    pub fn tol(&self, radius: f64) -> f64 {
        1e-9 + std::f64::consts::TAU * radius.max(0.0) / self.boundary_points as f64
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("radius of empty set undefined")]
    EmptyRadius,
    #[error("inversion of the zero singleton is the point at infinity")]
    InvertZeroPoint,
    #[error("inversion of a region with 0 on its boundary is unbounded")]
    InvertZeroBoundary,
    #[error("sum of two unbounded regions unsupported")]
    UnboundedSum,
    #[error("sum with an unbounded region requires a circular hole")]
    UnboundedSumShape,
    #[error("sum with an unbounded region leaves no hole around 0")]
    HoleVanished,
    #[error("product with an unbounded region unsupported")]
    UnboundedProduct,
    #[error("distance to the empty set undefined")]
    EmptyDistance,
}

/// Circle centered on the real axis; doubles as a disk descriptor.
#[derive(Clone, Copy, Debug)]
pub struct Circle {
    pub center: f64,
    pub radius: f64,
}

/// Boundary of the upper-half part of a bounded region.
///
/// `upper` is a closed polyline (the edge from the last point back to the
/// first is implicit) that lies in Im ≥ 0 and includes any stretch of the
/// region's boundary that runs along the real axis. `circle` is set when the
/// region is known to be a disk, which keeps inversion of disks exact.
#[derive(Clone, Debug)]
pub struct Boundary {
    pub upper: Vec<Complex64>,
    pub contains_zero: bool,
    pub circle: Option<Circle>,
}

/// A conjugate-symmetric subset of the complex plane.
#[derive(Clone, Debug)]
pub enum Region {
    Empty,
    /// Finite set; stored with Im ≥ 0, the mirror points are implied.
    Points(Vec<Complex64>),
    Bounded(Boundary),
    /// Möbius inversion re^{jθ} ↦ (1/r)e^{jθ} of `pre`, which is Bounded
    /// with 0 in its interior. The set is unbounded (it is a neighborhood
    /// of ∞) and excludes a hole around 0; when the pre-image is a disk the
    /// hole rim is the circle in `hole`.
    InvertedBounded {
        pre: Box<Region>,
        hole: Option<Circle>,
    },
}

/// Fold into the closed upper half-plane.
pub(crate) fn fold(z: Complex64) -> Complex64 {
    Complex64::new(z.re, z.im.abs())
}

/// Möbius inversion of a single point: modulus is inverted, angle is kept.
pub(crate) fn mobius(z: Complex64) -> Complex64 {
    z / z.norm_sqr()
}

pub(crate) fn dedup_points(pts: &mut Vec<Complex64>) {
    let scale = pts.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let eps = 1e-12 * (1.0 + scale);
    pts.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    pts.dedup_by(|a, b| (*a - *b).norm() <= eps);
}

impl Region {
    /// Finite symmetric point set from arbitrary representatives.
    pub fn points(pts: impl IntoIterator<Item = Complex64>) -> Region {
        let mut v: Vec<Complex64> = pts.into_iter().map(fold).collect();
        dedup_points(&mut v);
        if v.is_empty() {
            Region::Empty
        } else {
            Region::Points(v)
        }
    }

    /// Disk with real center. Degenerate radius collapses to a point.
    pub fn disk(center: f64, radius: f64, res: Resolution) -> Region {
        if radius.abs() <= 1e-12 * (1.0 + center.abs()) {
            return Region::Points(vec![Complex64::new(center, 0.0)]);
        }
        let n_arc = (res.boundary_points / 2).max(8);
        let mut upper = Vec::with_capacity(n_arc + n_arc / 2);
        // Upper semicircle from center+r over the top to center−r.
        for k in 0..=n_arc {
            let th = std::f64::consts::PI * k as f64 / n_arc as f64;
            upper.push(Complex64::new(
                center + radius * th.cos(),
                radius * th.sin(),
            ));
        }
        // Diameter back along the real axis, endpoints excluded.
        let n_seg = n_arc / 2;
        for k in 1..n_seg {
            let x = center - radius + 2.0 * radius * k as f64 / n_seg as f64;
            upper.push(Complex64::new(x, 0.0));
        }
        Region::Bounded(Boundary {
            upper,
            contains_zero: center.abs() <= radius,
            circle: Some(Circle { center, radius }),
        })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Region::Empty => "empty",
            Region::Points(_) => "point_set",
            Region::Bounded(_) => "bounded",
            Region::InvertedBounded { .. } => "inverted_bounded",
        }
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, Region::InvertedBounded { .. })
    }

    /// Largest modulus over the set; +∞ for inverted regions.
    pub fn radius(&self) -> Result<f64, GeomError> {
        match self {
            Region::Empty => Err(GeomError::EmptyRadius),
            Region::Points(p) => Ok(p.iter().map(|z| z.norm()).fold(0.0, f64::max)),
            // The maximum modulus over a compact region is attained on its
            // boundary, which the stored polyline covers.
            Region::Bounded(b) => Ok(b.upper.iter().map(|z| z.norm()).fold(0.0, f64::max)),
            Region::InvertedBounded { .. } => Ok(f64::INFINITY),
        }
    }

    /// Membership test with the resolution tolerance band around boundaries.
    pub fn contains(&self, z: Complex64, res: Resolution) -> bool {
        let w = fold(z);
        match self {
            Region::Empty => false,
            Region::Points(p) => {
                let tol = res.tol(self.radius().unwrap_or(0.0));
                p.iter().any(|q| (*q - w).norm() <= tol)
            }
            Region::Bounded(b) => {
                let tol = res.tol(self.radius().unwrap_or(0.0));
                hull::polyline_contains(&b.upper, w) || hull::polyline_distance(&b.upper, w) <= tol
            }
            Region::InvertedBounded { pre, .. } => {
                if w.norm_sqr() == 0.0 {
                    return false;
                }
                pre.contains(mobius(w), res)
            }
        }
    }

    pub fn contains_zero(&self, res: Resolution) -> bool {
        match self {
            Region::Bounded(b) => b.contains_zero,
            other => other.contains(Complex64::new(0.0, 0.0), res),
        }
    }

    /// Boundary samples of the full symmetric set (both half-planes).
    pub fn boundary_samples(&self) -> Vec<Complex64> {
        let upper: &[Complex64] = match self {
            Region::Empty => &[],
            Region::Points(p) => p,
            Region::Bounded(b) => &b.upper,
            Region::InvertedBounded { .. } => {
                // The visible boundary of an inverted region is the inverted
                // pre-image boundary (the rim of the hole).
                return self
                    .rim_samples()
                    .map(|rim| {
                        let mut all = rim.clone();
                        all.extend(rim.iter().filter(|z| z.im > 0.0).map(|z| z.conj()));
                        all
                    })
                    .unwrap_or_default();
            }
        };
        let mut all: Vec<Complex64> = upper.to_vec();
        all.extend(upper.iter().filter(|z| z.im > 0.0).map(|z| z.conj()));
        all
    }

    /// Upper-half rim of the hole of an inverted region.
    pub(crate) fn rim_samples(&self) -> Option<Vec<Complex64>> {
        match self {
            Region::InvertedBounded { pre, .. } => match pre.as_ref() {
                Region::Bounded(b) => Some(b.upper.iter().map(|z| mobius(*z)).collect()),
                _ => None,
            },
            _ => None,
        }
    }

    /// Boundary curves for dumps: one polyline per segment, upper half first.
    pub fn segments(&self) -> Vec<Vec<Complex64>> {
        match self {
            Region::Empty => vec![],
            Region::Points(p) => {
                let mut segs: Vec<Vec<Complex64>> = p.iter().map(|z| vec![*z]).collect();
                segs.extend(
                    p.iter()
                        .filter(|z| z.im > 0.0)
                        .map(|z| vec![z.conj()])
                        .collect::<Vec<_>>(),
                );
                segs
            }
            Region::Bounded(b) => {
                let mut closed = b.upper.clone();
                if let Some(first) = closed.first().copied() {
                    closed.push(first);
                }
                let mirror: Vec<Complex64> = closed.iter().rev().map(|z| z.conj()).collect();
                vec![closed, mirror]
            }
            Region::InvertedBounded { .. } => match self.rim_samples() {
                Some(rim) => {
                    let mut closed = rim.clone();
                    if let Some(first) = closed.first().copied() {
                        closed.push(first);
                    }
                    let mirror: Vec<Complex64> = closed.iter().rev().map(|z| z.conj()).collect();
                    vec![closed, mirror]
                }
                None => vec![],
            },
        }
    }

    /// Mirror through the origin. Symmetric sets satisfy −S = {−z̄ : z ∈ S},
    /// so the stored upper half maps to itself.
    pub fn negate(&self) -> Region {
        let flip = |z: &Complex64| Complex64::new(-z.re, z.im);
        match self {
            Region::Empty => Region::Empty,
            Region::Points(p) => Region::Points(p.iter().map(flip).collect()),
            Region::Bounded(b) => Region::Bounded(Boundary {
                upper: b.upper.iter().map(flip).collect(),
                contains_zero: b.contains_zero,
                circle: b.circle.map(|c| Circle {
                    center: -c.center,
                    radius: c.radius,
                }),
            }),
            Region::InvertedBounded { pre, hole } => Region::InvertedBounded {
                pre: Box::new(pre.negate()),
                hole: hole.map(|c| Circle {
                    center: -c.center,
                    radius: c.radius,
                }),
            },
        }
    }

    /// Scale by a real factor.
    pub fn scale(&self, a: f64) -> Region {
        if a < 0.0 {
            return self.scale(-a).negate();
        }
        if a == 0.0 {
            return match self {
                Region::Empty => Region::Empty,
                _ => Region::Points(vec![Complex64::new(0.0, 0.0)]),
            };
        }
        let mul = |z: &Complex64| z * a;
        match self {
            Region::Empty => Region::Empty,
            Region::Points(p) => Region::Points(p.iter().map(mul).collect()),
            Region::Bounded(b) => Region::Bounded(Boundary {
                upper: b.upper.iter().map(mul).collect(),
                contains_zero: b.contains_zero,
                circle: b.circle.map(|c| Circle {
                    center: a * c.center,
                    radius: a * c.radius,
                }),
            }),
            Region::InvertedBounded { pre, hole } => Region::InvertedBounded {
                pre: Box::new(pre.scale(1.0 / a)),
                hole: hole.map(|c| Circle {
                    center: a * c.center,
                    radius: a * c.radius,
                }),
            },
        }
    }

    /// Möbius inversion of the whole set.
    ///
    /// Bounded regions with 0 in the interior become `InvertedBounded`;
    /// bounded regions away from 0 map to bounded regions (boundary samples
    /// are inverted and re-hulled; disks invert exactly). Inverting an
    /// inverted region returns the pre-image, so the involution is exact.
    pub fn mobius_invert(&self, res: Resolution) -> Result<Region, GeomError> {
        match self {
            Region::Empty => Ok(Region::Empty),
            Region::Points(p) => {
                let scale = self.radius().unwrap_or(0.0);
                if p.iter().any(|z| z.norm() <= 1e-14 * (1.0 + scale)) {
                    return Err(GeomError::InvertZeroPoint);
                }
                Ok(Region::Points(p.iter().map(|z| mobius(*z)).collect()))
            }
            Region::Bounded(b) => {
                let radius = self.radius()?;
                let tol = res.tol(radius);
                let zero = Complex64::new(0.0, 0.0);
                // Distance from 0 to the rim of the full symmetric region.
                // Stretches along the real axis are interior to that region
                // whenever it has height, so they only count for flat ones.
                // A disk hint gives the rim distance exactly, so only the
                // float-level floor applies instead of the arc tolerance.
                let near_boundary = if let Some(c) = b.circle {
                    (c.center.abs() - c.radius).abs() <= 1e-9 * (1.0 + radius)
                } else {
                    let axis_eps = 1e-12 * (1.0 + radius);
                    let n = b.upper.len();
                    let mut d_rim = f64::INFINITY;
                    let mut has_rim = false;
                    for i in 0..n {
                        let a = b.upper[i];
                        let q = b.upper[(i + 1) % n];
                        if a.im <= axis_eps && q.im <= axis_eps {
                            continue;
                        }
                        has_rim = true;
                        d_rim = d_rim.min(hull::segment_distance(a, q, zero));
                    }
                    if !has_rim {
                        d_rim = hull::polyline_distance(&b.upper, zero);
                    }
                    d_rim <= tol
                };
                if b.contains_zero && !near_boundary {
                    let hole = b.circle.map(|c| {
                        // Hole rim passes through the inverted diameter
                        // endpoints 1/(c−r) and 1/(c+r).
                        let a = 1.0 / (c.center - c.radius);
                        let b2 = 1.0 / (c.center + c.radius);
                        Circle {
                            center: 0.5 * (a + b2),
                            radius: 0.5 * (b2 - a).abs(),
                        }
                    });
                    return Ok(Region::InvertedBounded {
                        pre: Box::new(self.clone()),
                        hole,
                    });
                }
                if near_boundary {
                    return Err(GeomError::InvertZeroBoundary);
                }
                if let Some(c) = b.circle {
                    let a = 1.0 / (c.center - c.radius);
                    let b2 = 1.0 / (c.center + c.radius);
                    return Ok(Region::disk(0.5 * (a + b2), 0.5 * (b2 - a).abs(), res));
                }
                let inv: Vec<Complex64> = b.upper.iter().map(|z| mobius(*z)).collect();
                Ok(hco(&inv, res))
            }
            Region::InvertedBounded { pre, .. } => Ok(pre.as_ref().clone()),
        }
    }

    /// Close the set under straight chords: the Euclidean convex hull.
    pub fn chord_complete(&self, res: Resolution) -> Region {
        match self {
            Region::Empty => Region::Empty,
            Region::InvertedBounded { .. } => self.clone(),
            _ => {
                let samples = self.boundary_samples();
                hull::convex_region(&samples, res)
            }
        }
    }

    /// Close the set under minimal arcs: the h-convex hull.
    pub fn arc_complete(&self, res: Resolution) -> Region {
        match self {
            Region::Empty => Region::Empty,
            Region::InvertedBounded { .. } => self.clone(),
            _ => hco(&self.boundary_samples(), res),
        }
    }
}
