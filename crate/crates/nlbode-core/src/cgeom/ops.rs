//! Minkowski sums and products of regions, and distances between them.
//!
//! Bounded operands are combined through all pairwise sums/products of their
//! stored boundary samples (both half-planes), followed by the h-convex
//! hull. The convex hull of the result always contains the convex hull of
//! the exact Minkowski combination, because extreme points of a sum or
//! product of sets are attained at boundary points; maximum-modulus and
//! distance queries on the results are therefore conservative. Translation
//! by a real point, scaling by a real point, and sums involving an
//! exterior-of-disk region are handled by closed forms and stay exact.

use super::{hull, Boundary, Circle, GeomError, Region, Resolution};
use num_complex::Complex64;

/// Minkowski sum of two regions.
///
/// At most one operand may be unbounded, and that operand must carry a
/// circular hole; the sum is then the complement of the set of points whose
/// whole translate of the bounded operand fits inside the hole, which is
/// computed exactly as a star-shaped region (see [`exterior_sum`]).
pub fn minkowski_sum(a: &Region, b: &Region, res: Resolution) -> Result<Region, GeomError> {
    match (a, b) {
        (Region::Empty, _) | (_, Region::Empty) => Ok(Region::Empty),
        (Region::InvertedBounded { .. }, Region::InvertedBounded { .. }) => {
            Err(GeomError::UnboundedSum)
        }
        (Region::InvertedBounded { hole, .. }, other)
        | (other, Region::InvertedBounded { hole, .. }) => exterior_sum(*hole, other, res),
        (Region::Points(p), Region::Points(q)) => {
            let pf = symmetric(p);
            let qf = symmetric(q);
            let mut sums = Vec::with_capacity(pf.len() * qf.len());
            for x in &pf {
                for y in &qf {
                    sums.push(x + y);
                }
            }
            Ok(Region::points(sums))
        }
        _ => {
            if let Some(t) = real_singleton(a) {
                return Ok(translate(b, t));
            }
            if let Some(t) = real_singleton(b) {
                return Ok(translate(a, t));
            }
            let sa = capped_samples(a, res);
            let sb = capped_samples(b, res);
            let mut sums = Vec::with_capacity(sa.len() * sb.len());
            for x in &sa {
                for y in &sb {
                    sums.push(x + y);
                }
            }
            Ok(hull::hco_cloud(&sums, res))
        }
    }
}

/// Minkowski product of two regions. Unbounded operands are rejected.
pub fn minkowski_product(a: &Region, b: &Region, res: Resolution) -> Result<Region, GeomError> {
    match (a, b) {
        (Region::Empty, _) | (_, Region::Empty) => Ok(Region::Empty),
        (Region::InvertedBounded { .. }, _) | (_, Region::InvertedBounded { .. }) => {
            Err(GeomError::UnboundedProduct)
        }
        (Region::Points(p), Region::Points(q)) => {
            let pf = symmetric(p);
            let qf = symmetric(q);
            let mut prods = Vec::with_capacity(pf.len() * qf.len());
            for x in &pf {
                for y in &qf {
                    prods.push(x * y);
                }
            }
            Ok(Region::points(prods))
        }
        _ => {
            if let Some(t) = real_singleton(a) {
                return Ok(b.scale(t));
            }
            if let Some(t) = real_singleton(b) {
                return Ok(a.scale(t));
            }
            let sa = capped_samples(a, res);
            let sb = capped_samples(b, res);
            let mut prods = Vec::with_capacity(sa.len() * sb.len());
            for x in &sa {
                for y in &sb {
                    prods.push(x * y);
                }
            }
            Ok(hull::hco_cloud(&prods, res))
        }
    }
}

/// Distance between two regions, zero when they intersect.
pub fn set_distance(a: &Region, b: &Region, res: Resolution) -> Result<f64, GeomError> {
    match (a, b) {
        (Region::Empty, _) | (_, Region::Empty) => Err(GeomError::EmptyDistance),
        // Two neighborhoods of infinity always overlap.
        (Region::InvertedBounded { .. }, Region::InvertedBounded { .. }) => Ok(0.0),
        (inv @ Region::InvertedBounded { .. }, other)
        | (other, inv @ Region::InvertedBounded { .. }) => Ok(exterior_distance(inv, other, res)),
        _ => Ok(bounded_distance(a, b, res)),
    }
}

/// Full symmetric expansion of an upper-half point list.
fn symmetric(p: &[Complex64]) -> Vec<Complex64> {
    let mut v = p.to_vec();
    v.extend(p.iter().filter(|z| z.im > 0.0).map(|z| z.conj()));
    v
}

fn real_singleton(r: &Region) -> Option<f64> {
    match r {
        Region::Points(p) if p.len() == 1 && p[0].im == 0.0 => Some(p[0].re),
        _ => None,
    }
}

/// Full symmetric boundary samples, strided down to the operation cap. The
/// largest-modulus sample always survives the stride: pairwise products and
/// sums attain their maximum modulus at extreme boundary points, so dropping
/// it would deflate radii and break the monotonicity of composed bounds.
fn capped_samples(r: &Region, res: Resolution) -> Vec<Complex64> {
    let all = r.boundary_samples();
    let cap = res.op_samples().max(2);
    if all.len() <= cap {
        return all;
    }
    let peak = all
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap();
    let stride = all.len().div_ceil(cap);
    let mut kept: Vec<Complex64> = all.into_iter().step_by(stride).collect();
    if kept.iter().all(|z| *z != peak) {
        kept.push(peak);
    }
    kept
}

/// Translation by a real offset; circles centered on the real axis stay
/// circles, so this is exact for every region kind stored here.
fn translate(r: &Region, t: f64) -> Region {
    let shift = |z: &Complex64| z + t;
    match r {
        Region::Empty => Region::Empty,
        Region::Points(p) => Region::Points(p.iter().map(shift).collect()),
        Region::Bounded(b) => {
            let upper: Vec<Complex64> = b.upper.iter().map(shift).collect();
            let zero = Complex64::new(0.0, 0.0);
            let contains_zero = hull::polyline_contains(&upper, zero)
                || hull::polyline_distance(&upper, zero) <= 1e-12;
            Region::Bounded(Boundary {
                upper,
                contains_zero,
                circle: b.circle.map(|c| Circle {
                    center: c.center + t,
                    radius: c.radius,
                }),
            })
        }
        Region::InvertedBounded { .. } => unreachable!("translation of unbounded regions unused"),
    }
}

/// Sum of the closed exterior of a disk with a bounded region.
///
/// With hole D(c, ρ) and bounded operand B, a point q misses the sum exactly
/// when q − B lies inside the open hole, i.e. |q − c − b| < ρ for every
/// b ∈ B. The complement of the sum is therefore the intersection of the
/// open disks D(c + b, ρ), a convex set star-shaped around 0 as long as
/// every |c + b| stays below ρ; its radial profile is the minimum over b of
/// the ray-exit distance of D(c + b, ρ). The sum is stored inverted, with
/// the star region (radial profile 1/t(θ)) as the pre-image.
fn exterior_sum(
    hole: Option<Circle>,
    other: &Region,
    res: Resolution,
) -> Result<Region, GeomError> {
    let hole = hole.ok_or(GeomError::UnboundedSumShape)?;
    if matches!(other, Region::Empty) {
        return Ok(Region::Empty);
    }
    let samples = capped_samples(other, res);
    let shifted: Vec<Complex64> = samples.iter().map(|q| q + hole.center).collect();
    let rho = hole.radius;
    let worst = shifted.iter().map(|q| q.norm()).fold(0.0, f64::max);
    if worst >= rho * (1.0 - 1e-12) {
        return Err(GeomError::HoleVanished);
    }

    // A single real point or a disk keeps the complement a disk; build the
    // exact inverted representation in that case.
    if let Some(c) = sum_hole_circle(&hole, other) {
        let a1 = 1.0 / (c.center - c.radius);
        let a2 = 1.0 / (c.center + c.radius);
        let pre = Region::disk(0.5 * (a1 + a2), 0.5 * (a2 - a1).abs(), res);
        return Ok(Region::InvertedBounded {
            pre: Box::new(pre),
            hole: Some(c),
        });
    }

    let m = (res.boundary_points / 2).max(16);
    let mut pre_upper = Vec::with_capacity(m + 1 + m / 2);
    for k in 0..=m {
        let th = std::f64::consts::PI * k as f64 / m as f64;
        let (cth, sth) = (th.cos(), th.sin());
        let mut t = f64::INFINITY;
        for q in &shifted {
            let bp = q.re * cth + q.im * sth;
            // |q| < ρ keeps the discriminant positive.
            let disc = rho * rho - (q.norm_sqr() - bp * bp);
            t = t.min(bp + disc.sqrt());
        }
        let r = 1.0 / t;
        pre_upper.push(Complex64::new(r * cth, (r * sth).max(0.0)));
    }
    // Close the pre-image boundary along the real axis through 0.
    let right = pre_upper[0].re;
    let left = pre_upper[m].re;
    let n_seg = (m / 2).max(4);
    for k in 1..n_seg {
        let x = left + (right - left) * k as f64 / n_seg as f64;
        pre_upper.push(Complex64::new(x, 0.0));
    }
    Ok(Region::InvertedBounded {
        pre: Box::new(Region::Bounded(Boundary {
            upper: pre_upper,
            contains_zero: true,
            circle: None,
        })),
        hole: None,
    })
}

/// Hole circle of an exterior-plus-bounded sum when the bounded operand is a
/// single real point or a disk; `None` otherwise.
fn sum_hole_circle(hole: &Circle, other: &Region) -> Option<Circle> {
    match other {
        Region::Points(p) if p.len() == 1 && p[0].im == 0.0 => Some(Circle {
            center: hole.center + p[0].re,
            radius: hole.radius,
        }),
        Region::Bounded(b) => b.circle.map(|c| Circle {
            center: hole.center + c.center,
            radius: hole.radius - c.radius,
        }),
        _ => None,
    }
}

fn exterior_distance(inv: &Region, other: &Region, res: Resolution) -> f64 {
    let samples = other.boundary_samples();
    if let Region::InvertedBounded {
        hole: Some(hole), ..
    } = inv
    {
        // Distance from a point inside the hole to the exterior is the gap
        // to the rim; the farthest sample decides.
        let reach = samples
            .iter()
            .map(|s| (s - hole.center).norm())
            .fold(0.0, f64::max);
        return (hole.radius - reach).max(0.0);
    }
    if samples.iter().any(|s| inv.contains(*s, res)) {
        return 0.0;
    }
    let rim = match inv.rim_samples() {
        Some(r) => r,
        None => return 0.0,
    };
    if rim.iter().any(|r| other.contains(*r, res)) {
        return 0.0;
    }
    samples
        .iter()
        .map(|s| {
            hull::polyline_distance(&rim, *s).min(hull::polyline_distance(&rim, s.conj()))
        })
        .fold(f64::INFINITY, f64::min)
}

fn bounded_distance(a: &Region, b: &Region, res: Resolution) -> f64 {
    let sa = a.boundary_samples();
    let sb = b.boundary_samples();
    if sa.iter().any(|s| b.contains(*s, res)) || sb.iter().any(|s| a.contains(*s, res)) {
        return 0.0;
    }
    let d_ab = sa
        .iter()
        .map(|s| dist_to_boundary(*s, b))
        .fold(f64::INFINITY, f64::min);
    let d_ba = sb
        .iter()
        .map(|s| dist_to_boundary(*s, a))
        .fold(f64::INFINITY, f64::min);
    d_ab.min(d_ba)
}

fn dist_to_boundary(z: Complex64, r: &Region) -> f64 {
    match r {
        Region::Empty => f64::INFINITY,
        Region::Points(p) => symmetric(p)
            .iter()
            .map(|q| (z - q).norm())
            .fold(f64::INFINITY, f64::min),
        Region::Bounded(b) => {
            hull::polyline_distance(&b.upper, z).min(hull::polyline_distance(&b.upper, z.conj()))
        }
        Region::InvertedBounded { .. } => match r.rim_samples() {
            Some(rim) => {
                hull::polyline_distance(&rim, z).min(hull::polyline_distance(&rim, z.conj()))
            }
            None => f64::INFINITY,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cgeom::hco;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn res() -> Resolution {
        Resolution::default()
    }

    /// Membership equivalence against an exact disk, skipping probes within
    /// the tolerance band of the rim.
    fn assert_is_disk(r: &Region, center: f64, radius: f64, re: Resolution) {
        let tol = 2.0 * re.tol(radius + center.abs());
        for i in -24..=24 {
            for j in 0..=24 {
                let z = c(center + i as f64 * radius / 10.0, j as f64 * radius / 10.0);
                let d = (z - c(center, 0.0)).norm();
                if (d - radius).abs() <= tol {
                    continue;
                }
                assert_eq!(
                    r.contains(z, re),
                    d < radius,
                    "probe {z} at distance {d} from center, radius {radius}"
                );
            }
        }
    }

    #[test]
    fn sum_with_real_singleton_translates_exactly() {
        let re = res();
        let d = Region::disk(0.0, 1.0, re);
        let p = Region::points([c(3.0, 0.0)]);
        let s = minkowski_sum(&d, &p, re).unwrap();
        assert_is_disk(&s, 3.0, 1.0, re);
        // The center is in the sum even though it is far from all pairwise
        // boundary sums; translation keeps the filled disk intact.
        assert!(s.contains(c(3.0, 0.0), re));
        assert!((s.radius().unwrap() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn sum_of_concentric_disks_fills_the_hole() {
        let re = res();
        let d1 = Region::disk(0.0, 1.0, re);
        let d2 = Region::disk(0.0, 2.0, re);
        let s = minkowski_sum(&d1, &d2, re).unwrap();
        assert!((s.radius().unwrap() - 3.0).abs() < 1e-6);
        // Exact sum is the disk of radius 3; the origin and mid points come
        // from sums of diameter points, not circle points.
        assert!(s.contains(c(0.0, 0.0), re));
        assert!(s.contains(c(0.0, 1.5), re));
        assert!(s.contains(c(-1.2, 0.7), re));
        assert!(!s.contains(c(3.1, 0.0), re));
    }

    #[test]
    fn sum_of_offset_disks_matches_exact_disk() {
        let re = res();
        let d1 = Region::disk(1.0, 0.5, re);
        let d2 = Region::disk(-0.25, 1.25, re);
        let s = minkowski_sum(&d1, &d2, re).unwrap();
        assert_is_disk(&s, 0.75, 1.75, re);
    }

    #[test]
    fn sum_of_point_sets_is_pairwise() {
        let re = res();
        let p = Region::points([c(0.0, 1.0)]);
        let q = Region::points([c(0.0, 1.0)]);
        let s = minkowski_sum(&p, &q, re).unwrap();
        // {±j} + {±j} = {±2j, 0}.
        assert!(s.contains(c(0.0, 2.0), re));
        assert!(s.contains(c(0.0, -2.0), re));
        assert!(s.contains(c(0.0, 0.0), re));
        assert!(!s.contains(c(0.0, 1.0), re));
    }

    #[test]
    fn sum_radius_is_subadditive_and_tight() {
        let re = res();
        let a = hco(&[c(1.0, 1.0), c(-0.5, 0.2), c(0.3, 0.0)], re);
        let b = hco(&[c(2.0, 0.5), c(0.1, 1.4)], re);
        let s = minkowski_sum(&a, &b, re).unwrap();
        let ra = a.radius().unwrap();
        let rb = b.radius().unwrap();
        let rs = s.radius().unwrap();
        assert!(rs <= ra + rb + 1e-9);
        // Dense pairwise oracle over the stored boundaries; the sum strides
        // its samples down to the operation cap, hence the arc tolerance.
        let oracle = a
            .boundary_samples()
            .iter()
            .flat_map(|x| b.boundary_samples().iter().map(|y| x + y).collect::<Vec<_>>())
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!((rs - oracle).abs() <= re.tol(oracle), "rs={rs} oracle={oracle}");
    }

    #[test]
    fn sum_covers_generator_points() {
        let re = res();
        // Hull vertices only, so every generator lies on a stored boundary.
        let pa = [c(-0.6, 0.3), c(0.9, 0.0), c(0.1, 1.2)];
        let pb = [c(1.5, 0.2), c(0.7, 0.9), c(2.0, 0.0)];
        let a = hco(&pa, re);
        let b = hco(&pb, re);
        let s = minkowski_sum(&a, &b, re).unwrap();
        for x in pa.iter().flat_map(|z| [*z, z.conj()]) {
            for y in pb.iter().flat_map(|z| [*z, z.conj()]) {
                let z = x + y;
                assert!(s.contains(z, re), "missing generator sum {z}");
            }
        }
    }

    #[test]
    fn sum_with_exterior_region_is_exact_exterior_disk() {
        let re = res();
        // Exterior of the open disk of radius 2 around 0.
        let ext = Region::disk(0.0, 0.5, re).mobius_invert(re).unwrap();
        let p = Region::points([c(0.3, 0.0)]);
        let s = minkowski_sum(&ext, &p, re).unwrap();
        assert!(s.is_unbounded());
        match &s {
            Region::InvertedBounded { hole: Some(h), .. } => {
                assert!((h.center - 0.3).abs() < 1e-12);
                assert!((h.radius - 2.0).abs() < 1e-12);
            }
            _ => panic!("expected exact hole"),
        }
        assert!(!s.contains(c(0.3, 0.0), re));
        assert!(!s.contains(c(2.0, 0.0), re));
        assert!(s.contains(c(2.4, 0.0), re));
        assert!(s.contains(c(0.3, 2.1), re));
        // Inverting the sum gives a bounded star region with exact radius
        // 1/(ρ − |shift|).
        let inv = s.mobius_invert(re).unwrap();
        assert!((inv.radius().unwrap() - 1.0 / 1.7).abs() < 1e-9);
    }

    #[test]
    fn sum_of_exterior_and_disk_shrinks_the_hole() {
        let re = res();
        let ext = Region::disk(0.0, 0.5, re).mobius_invert(re).unwrap(); // hole radius 2
        let d = Region::disk(0.25, 0.75, re);
        let s = minkowski_sum(&ext, &d, re).unwrap();
        match &s {
            Region::InvertedBounded { hole: Some(h), .. } => {
                assert!((h.center - 0.25).abs() < 1e-12);
                assert!((h.radius - 1.25).abs() < 1e-12);
            }
            _ => panic!("expected exact hole"),
        }
        assert!(!s.contains(c(1.2, 0.0), re));
        assert!(s.contains(c(1.6, 0.0), re));
    }

    #[test]
    fn sum_with_general_bounded_operand_uses_star_profile() {
        let re = res();
        let ext = Region::disk(0.0, 0.5, re).mobius_invert(re).unwrap(); // hole radius 2
        // Conjugate point pair, not a disk: complement is a lens.
        let p = Region::points([c(0.5, 0.3)]);
        let s = minkowski_sum(&ext, &p, re).unwrap();
        assert!(s.is_unbounded());
        // Oracle: q is outside the sum iff both |q − (0.5 ± 0.3j)| < 2. The
        // 0.06 band absorbs the membership tolerance, which the Möbius map
        // magnifies by |q|² out at the rim.
        let outside = |q: Complex64| {
            (q - c(0.5, 0.3)).norm() < 2.0 - 0.06 && (q - c(0.5, -0.3)).norm() < 2.0 - 0.06
        };
        let inside = |q: Complex64| {
            (q - c(0.5, 0.3)).norm() > 2.0 + 0.06 || (q - c(0.5, -0.3)).norm() > 2.0 + 0.06
        };
        for i in -30..=30 {
            for j in -30..=30 {
                let q = c(i as f64 * 0.12, j as f64 * 0.12);
                if outside(q) {
                    assert!(!s.contains(q, re), "q={q} should be outside the sum");
                } else if inside(q) {
                    assert!(s.contains(q, re), "q={q} should be in the sum");
                }
            }
        }
        // Radius of the inverted sum: 1/(ρ − max|shift|), up to the angular
        // grid of the star profile.
        let inv = s.mobius_invert(re).unwrap();
        let want = 1.0 / (2.0 - c(0.5, 0.3).norm());
        assert!((inv.radius().unwrap() - want).abs() < 1e-5);
    }

    #[test]
    fn sum_fails_when_the_hole_vanishes() {
        let re = res();
        let ext = Region::disk(0.0, 1.0, re).mobius_invert(re).unwrap(); // hole radius 1
        let d = Region::disk(0.0, 2.0, re);
        assert_eq!(
            minkowski_sum(&ext, &d, re).unwrap_err(),
            GeomError::HoleVanished
        );
    }

    #[test]
    fn sum_of_two_exterior_regions_fails() {
        let re = res();
        let ext = Region::disk(0.0, 0.5, re).mobius_invert(re).unwrap();
        assert_eq!(
            minkowski_sum(&ext, &ext.clone(), re).unwrap_err(),
            GeomError::UnboundedSum
        );
    }

    #[test]
    fn product_with_real_singleton_scales_exactly() {
        let re = res();
        let d = Region::disk(2.0, 1.0, re);
        let s = minkowski_product(&d, &Region::points([c(2.0, 0.0)]), re).unwrap();
        assert_is_disk(&s, 4.0, 2.0, re);
        let n = minkowski_product(&Region::points([c(-1.0, 0.0)]), &d, re).unwrap();
        assert_is_disk(&n, -2.0, 1.0, re);
    }

    #[test]
    fn product_of_imaginary_points_is_symmetric() {
        let re = res();
        let p = Region::points([c(0.0, 2.0)]);
        let q = Region::points([c(0.0, 3.0)]);
        let s = minkowski_product(&p, &q, re).unwrap();
        // {±2j}·{±3j} = {±6}: the symmetric set, not a single point.
        assert!(s.contains(c(-6.0, 0.0), re));
        assert!(s.contains(c(6.0, 0.0), re));
        assert!((s.radius().unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn product_radius_is_multiplicative() {
        let re = res();
        let a = hco(&[c(1.0, 1.0), c(-0.5, 0.2), c(0.3, 0.0)], re);
        let b = hco(&[c(2.0, 0.5), c(0.1, 1.4)], re);
        let p = minkowski_product(&a, &b, re).unwrap();
        let want = a.radius().unwrap() * b.radius().unwrap();
        assert!((p.radius().unwrap() - want).abs() < 1e-9);
    }

    #[test]
    fn product_covers_generator_points() {
        let re = res();
        let pa = [c(-0.6, 0.3), c(0.9, 0.0), c(0.1, 1.2)];
        let pb = [c(1.5, 0.2), c(0.7, 0.9)];
        let a = hco(&pa, re);
        let b = hco(&pb, re);
        let s = minkowski_product(&a, &b, re).unwrap();
        for x in pa.iter().flat_map(|z| [*z, z.conj()]) {
            for y in pb.iter().flat_map(|z| [*z, z.conj()]) {
                let z = x * y;
                assert!(s.contains(z, re), "missing generator product {z}");
            }
        }
    }

    #[test]
    fn product_with_exterior_region_fails() {
        let re = res();
        let ext = Region::disk(0.0, 0.5, re).mobius_invert(re).unwrap();
        let d = Region::disk(1.0, 0.5, re);
        assert_eq!(
            minkowski_product(&ext, &d, re).unwrap_err(),
            GeomError::UnboundedProduct
        );
    }

    #[test]
    fn distance_between_disjoint_disks() {
        let re = res();
        let a = Region::disk(0.0, 1.0, re);
        let b = Region::disk(5.0, 2.0, re);
        let d = set_distance(&a, &b, re).unwrap();
        assert!((d - 2.0).abs() < 1e-6);
    }

    #[test]
    fn distance_of_overlapping_regions_is_zero() {
        let re = res();
        let a = Region::disk(0.0, 1.0, re);
        let b = Region::disk(1.5, 1.0, re);
        assert_eq!(set_distance(&a, &b, re).unwrap(), 0.0);
    }

    #[test]
    fn distance_from_point_inside_hole_to_exterior() {
        let re = res();
        let ext = Region::disk(0.0, 0.5, re).mobius_invert(re).unwrap(); // hole radius 2
        let p = Region::points([c(0.5, 0.0)]);
        let d = set_distance(&ext, &p, re).unwrap();
        assert!((d - 1.5).abs() < 1e-12);
        let q = Region::points([c(2.5, 0.0)]);
        assert_eq!(set_distance(&ext, &q, re).unwrap(), 0.0);
    }

    #[test]
    fn distance_between_exterior_regions_is_zero() {
        let re = res();
        let ext = Region::disk(0.0, 0.5, re).mobius_invert(re).unwrap();
        assert_eq!(set_distance(&ext, &ext.clone(), re).unwrap(), 0.0);
    }

    #[test]
    fn distance_between_point_sets() {
        let re = res();
        let p = Region::points([c(0.0, 1.0)]);
        let q = Region::points([c(3.0, 1.0)]);
        let d = set_distance(&p, &q, re).unwrap();
        assert!((d - 3.0).abs() < 1e-12);
        // Conjugate mirror pairs can be closer than the stored upper points.
        let r = Region::points([c(0.0, -1.2)]);
        let d2 = set_distance(&p, &r, re).unwrap();
        assert!((d2 - 0.2).abs() < 1e-12, "d2={d2}");
    }

    #[test]
    fn distance_to_empty_set_fails() {
        let re = res();
        let p = Region::points([c(0.0, 1.0)]);
        assert_eq!(
            set_distance(&p, &Region::Empty, re).unwrap_err(),
            GeomError::EmptyDistance
        );
    }
}
