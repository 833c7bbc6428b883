//! Hull construction.
//!
//! Circles centered on the real axis become straight lines under the lift
//! (x, y) ↦ (u, v) = (x, x² + y²), and the closed upper half-plane maps onto
//! the epigraph of the parabola v = u². The h-convex hull of a point set is
//! therefore the pre-image of the Euclidean convex hull of the lifted
//! points, computed here with a monotone chain; polygon edges map back to
//! boundary arcs (vertical edges to vertical segments), which are sampled
//! into the stored polyline.

use super::{dedup_points, fold, Boundary, Region, Resolution};
use num_complex::Complex64;

/// h-convex hull of a set of points (arbitrary representatives; the set is
/// symmetrized first). Degenerate inputs collapse: a single distinct point
/// gives a `Points` region, collinear lifted points give a boundary polyline
/// that traces a bare arc out and back.
pub fn hco(points: &[Complex64], res: Resolution) -> Region {
    let mut pts: Vec<Complex64> = points.iter().map(|z| fold(*z)).collect();
    dedup_points(&mut pts);
    match pts.len() {
        0 => return Region::Empty,
        1 => return Region::Points(pts),
        _ => {}
    }
    let lifted: Vec<(f64, f64)> = pts.iter().map(|z| lift(*z)).collect();
    let hull = convex_hull(&lifted);
    let upper = sample_lifted_polygon(&hull, res);
    let zero = Complex64::new(0.0, 0.0);
    let contains_zero =
        polyline_contains(&upper, zero) || polyline_distance(&upper, zero) <= 1e-12;
    Region::Bounded(Boundary {
        upper,
        contains_zero,
        circle: None,
    })
}

/// h-convex hull of a large sample cloud. Same construction as [`hco`] after
/// thinning the lifted cloud to per-slot vertical extremes, which keeps
/// every maximum-modulus point exactly.
pub(crate) fn hco_cloud(points: &[Complex64], res: Resolution) -> Region {
    let thinned = thin_lifted(points, 4 * res.boundary_points);
    hco(&thinned, res)
}

/// Euclidean convex hull of a symmetric sample set, stored as the upper-half
/// part of the hull polygon (clipped against Im ≥ 0).
pub(crate) fn convex_region(samples: &[Complex64], res: Resolution) -> Region {
    let mut pts: Vec<Complex64> = samples.to_vec();
    pts.extend(samples.iter().map(|z| z.conj()));
    let mut xy: Vec<(f64, f64)> = pts.iter().map(|z| (z.re, z.im)).collect();
    xy.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xy.dedup();
    if xy.len() == 1 {
        return Region::Points(vec![Complex64::new(xy[0].0, xy[0].1.abs())]);
    }
    let hull = convex_hull(&xy);
    let clipped = clip_upper(&hull);
    if clipped.len() < 2 {
        return Region::points(clipped.iter().map(|p| Complex64::new(p.0, p.1)));
    }
    let scale = clipped
        .iter()
        .map(|p| (p.0 * p.0 + p.1 * p.1).sqrt())
        .fold(0.0, f64::max);
    let seg_step = (std::f64::consts::TAU * scale.max(1e-9) / res.boundary_points as f64).max(1e-12);
    let mut upper = Vec::new();
    let m = clipped.len();
    for i in 0..m {
        let a = clipped[i];
        let b = clipped[(i + 1) % m];
        let len = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
        let n = ((len / seg_step).ceil() as usize).clamp(1, res.boundary_points);
        for k in 0..n {
            let t = k as f64 / n as f64;
            upper.push(Complex64::new(
                a.0 + t * (b.0 - a.0),
                (a.1 + t * (b.1 - a.1)).max(0.0),
            ));
        }
    }
    let contains_zero = polyline_contains(&upper, Complex64::new(0.0, 0.0))
        || polyline_distance(&upper, Complex64::new(0.0, 0.0)) <= 1e-12;
    Region::Bounded(Boundary {
        upper,
        contains_zero,
        circle: None,
    })
}

pub(crate) fn lift(z: Complex64) -> (f64, f64) {
    (z.re, z.re * z.re + z.im * z.im)
}

fn unlift(p: (f64, f64)) -> Complex64 {
    Complex64::new(p.0, (p.1 - p.0 * p.0).max(0.0).sqrt())
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Monotone-chain convex hull, counterclockwise, collinear points dropped.
/// Collinear input degenerates to the two extreme points.
pub(crate) fn convex_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    let n = pts.len();
    if n <= 2 {
        return pts;
    }
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(2 * n);
    for &p in pts.iter() {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev() {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Thin a cloud by keeping, per vertical slot in the lifted plane, the
/// points of smallest and largest v. Hull vertices move by at most one slot
/// width; maximum-modulus points survive untouched.
fn thin_lifted(points: &[Complex64], slots: usize) -> Vec<Complex64> {
    if points.len() <= 2 * slots {
        return points.to_vec();
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for z in points {
        lo = lo.min(z.re);
        hi = hi.max(z.re);
    }
    if !(hi > lo) {
        return vec![points[0]];
    }
    let mut min_v: Vec<Option<(f64, Complex64)>> = vec![None; slots];
    let mut max_v: Vec<Option<(f64, Complex64)>> = vec![None; slots];
    let w = (hi - lo) / slots as f64;
    for z in points {
        let z = fold(*z);
        let k = (((z.re - lo) / w) as usize).min(slots - 1);
        let v = z.re * z.re + z.im * z.im;
        if min_v[k].map_or(true, |(best, _)| v < best) {
            min_v[k] = Some((v, z));
        }
        if max_v[k].map_or(true, |(best, _)| v > best) {
            max_v[k] = Some((v, z));
        }
    }
    let mut out = Vec::with_capacity(2 * slots);
    for k in 0..slots {
        if let Some((_, z)) = min_v[k] {
            out.push(z);
        }
        if let Some((_, z)) = max_v[k] {
            out.push(z);
        }
    }
    out
}

/// Sample the pre-image of a lifted hull polygon into a closed upper-half
/// polyline. Each polygon edge is an arc of a circle centered on the real
/// axis (vertical edges map to vertical segments); points are placed at the
/// angular resolution, capped by arc length so near-degenerate bumps do not
/// soak up samples.
fn sample_lifted_polygon(hull: &[(f64, f64)], res: Resolution) -> Vec<Complex64> {
    let scale = hull
        .iter()
        .map(|p| p.1.max(0.0).sqrt())
        .fold(0.0, f64::max)
        .max(1e-9);
    let arc_step = res.arc_step();
    let seg_step = (std::f64::consts::TAU * scale / res.boundary_points as f64).max(1e-15);
    // A two-vertex hull degenerates to a single arc, traced out and back so
    // the polyline still closes.
    let m = hull.len();
    let mut upper = Vec::with_capacity(res.boundary_points + m);
    for i in 0..m {
        let a = hull[i];
        let b = hull[(i + 1) % m];
        sample_edge(a, b, arc_step, seg_step, res.boundary_points, &mut upper);
    }
    upper
}

fn sample_edge(
    a: (f64, f64),
    b: (f64, f64),
    arc_step: f64,
    seg_step: f64,
    max_pts: usize,
    out: &mut Vec<Complex64>,
) {
    let za = unlift(a);
    let zb = unlift(b);
    let du = b.0 - a.0;
    let span = a.0.abs().max(b.0.abs()).max(1.0);
    if du.abs() <= 1e-14 * span {
        // Vertical segment.
        let len = (zb.im - za.im).abs();
        let n = ((len / seg_step).ceil() as usize).clamp(1, max_pts);
        for k in 0..n {
            let t = k as f64 / n as f64;
            out.push(Complex64::new(za.re, za.im + t * (zb.im - za.im)));
        }
        return;
    }
    // Circle through both endpoints centered on the real axis.
    let c = (b.1 - a.1) / (2.0 * du);
    let r = (a.1 - 2.0 * c * a.0 + c * c).max(0.0).sqrt();
    if r <= 1e-300 {
        out.push(za);
        return;
    }
    let th_a = za.im.atan2(za.re - c);
    let th_b = zb.im.atan2(zb.re - c);
    let sweep = th_b - th_a;
    let len = r * sweep.abs();
    let by_angle = sweep.abs() / arc_step;
    let by_len = len / seg_step;
    let n = (by_angle.min(by_len).ceil() as usize).clamp(1, max_pts);
    for k in 0..n {
        let th = th_a + sweep * k as f64 / n as f64;
        out.push(Complex64::new(c + r * th.cos(), r * th.sin().max(0.0)));
    }
}

/// Sutherland–Hodgman clip of a polygon against Im ≥ 0.
fn clip_upper(poly: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(poly.len() + 2);
    let m = poly.len();
    for i in 0..m {
        let a = poly[i];
        let b = poly[(i + 1) % m];
        let a_in = a.1 >= 0.0;
        let b_in = b.1 >= 0.0;
        if a_in {
            out.push(a);
        }
        if a_in != b_in {
            let t = a.1 / (a.1 - b.1);
            out.push((a.0 + t * (b.0 - a.0), 0.0));
        }
    }
    out.dedup_by(|p, q| (p.0 - q.0).abs() + (p.1 - q.1).abs() <= 1e-14);
    if out.len() >= 2 {
        let (first, last) = (out[0], out[out.len() - 1]);
        if (first.0 - last.0).abs() + (first.1 - last.1).abs() <= 1e-14 {
            out.pop();
        }
    }
    out
}

/// Even-odd membership against a closed polyline.
pub(crate) fn polyline_contains(poly: &[Complex64], p: Complex64) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    let mut inside = false;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if (a.im > p.im) != (b.im > p.im) {
            let x = a.re + (p.im - a.im) * (b.re - a.re) / (b.im - a.im);
            if x > p.re {
                inside = !inside;
            }
        }
    }
    inside
}

/// Distance from a point to a closed polyline.
pub(crate) fn polyline_distance(poly: &[Complex64], p: Complex64) -> f64 {
    let n = poly.len();
    if n == 0 {
        return f64::INFINITY;
    }
    if n == 1 {
        return (poly[0] - p).norm();
    }
    let mut best = f64::INFINITY;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        best = best.min(segment_distance(a, b, p));
    }
    best
}

pub(crate) fn segment_distance(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    let ab = b - a;
    let l2 = ab.norm_sqr();
    if l2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / l2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cgeom::Region;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hull_of_singleton_is_point_set() {
        let r = hco(&[c(1.0, 0.0)], Resolution::default());
        match r {
            Region::Points(p) => assert_eq!(p, vec![c(1.0, 0.0)]),
            _ => panic!("expected point set"),
        }
    }

    #[test]
    fn hull_of_conjugate_pair_collapses() {
        let res = Resolution::default();
        let r = hco(&[c(1.0, 1.0), c(1.0, -1.0)], res);
        assert!(r.contains(c(1.0, 1.0), res));
        assert!(r.contains(c(1.0, -1.0), res));
        assert!((r.radius().unwrap() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn hull_of_two_real_points_is_the_arc_over_them() {
        let res = Resolution::default();
        let r = hco(&[c(1.0, 0.0), c(2.0, 0.0)], res);
        // Minimal arc between two real points is the semicircle over the
        // segment; the apex sits at 1.5 + 0.5j.
        assert!(r.contains(c(1.5, 0.5), res));
        assert!(r.contains(c(1.0, 0.0), res));
        // Interior of that semicircle is not part of the set.
        assert!(!r.contains(c(1.5, 0.1), res));
        assert!((r.radius().unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn hull_interior_point_matches_raster_closure_oracle() {
        // Independent oracle: rasterize arc-closure on a 400x400 grid. Two
        // closure rounds mark every cell needed for a containment check.
        let pts = [c(2.0, 0.0), c(1.0, 1.0), c(0.5, 0.0)];
        let probe = c(1.2, 0.8);
        let (nx, ny) = (400usize, 400usize);
        let (x0, x1, y0, y1) = (0.0, 2.5, 0.0, 1.6);
        let mut grid = vec![false; nx * ny];
        let cell = |x: f64, y: f64| -> Option<usize> {
            if x < x0 || x > x1 || y < y0 || y > y1 {
                return None;
            }
            let i = (((x - x0) / (x1 - x0)) * (nx as f64 - 1.0)).round() as usize;
            let j = (((y - y0) / (y1 - y0)) * (ny as f64 - 1.0)).round() as usize;
            Some(j * nx + i)
        };
        let mark_arc = |a: Complex64, b: Complex64, grid: &mut Vec<bool>| {
            let steps = 400;
            if (a.re - b.re).abs() < 1e-12 {
                for k in 0..=steps {
                    let t = k as f64 / steps as f64;
                    if let Some(ix) = cell(a.re, a.im + t * (b.im - a.im)) {
                        grid[ix] = true;
                    }
                }
                return;
            }
            let cc = (b.re * b.re + b.im * b.im - a.re * a.re - a.im * a.im)
                / (2.0 * (b.re - a.re));
            let r = ((a.re - cc).powi(2) + a.im * a.im).sqrt();
            let (t0, t1) = (a.im.atan2(a.re - cc), b.im.atan2(b.re - cc));
            for k in 0..=steps {
                let th = t0 + (t1 - t0) * k as f64 / steps as f64;
                if let Some(ix) = cell(cc + r * th.cos(), r * th.sin()) {
                    grid[ix] = true;
                }
            }
        };
        // Round 1: arcs between the seed points.
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                mark_arc(pts[i], pts[j], &mut grid);
            }
        }
        // Round 2: arcs between points marked so far (thinned for cost).
        let marked: Vec<Complex64> = grid
            .iter()
            .enumerate()
            .filter(|(_, m)| **m)
            .map(|(ix, _)| {
                c(
                    x0 + (ix % nx) as f64 / (nx as f64 - 1.0) * (x1 - x0),
                    y0 + (ix / nx) as f64 / (ny as f64 - 1.0) * (y1 - y0),
                )
            })
            .step_by(7)
            .collect();
        for i in 0..marked.len() {
            for j in (i + 1)..marked.len().min(i + 120) {
                mark_arc(marked[i], marked[j], &mut grid);
            }
        }
        assert!(
            grid[cell(probe.re, probe.im).unwrap()],
            "oracle: raster closure must reach the probe point"
        );
        let res = Resolution::default();
        let r = hco(&[pts[0], c(1.0, 1.0), c(1.0, -1.0), pts[2]], res);
        assert!(r.contains(probe, res));
    }

    #[test]
    fn hull_idempotent() {
        let res = Resolution::default();
        let pts = [c(2.0, 0.0), c(1.0, 1.0), c(0.5, 0.0), c(0.8, 0.6)];
        let h1 = hco(&pts, res);
        let h2 = h1.arc_complete(res);
        let tol = res.tol(h1.radius().unwrap());
        for z in h1.boundary_samples() {
            assert!(h2.contains(z, res), "hull grew at {z}");
        }
        for z in h2.boundary_samples() {
            assert!(
                h1.contains(z, res) || polyline_distance_to(&h1, z) <= tol,
                "hull shrank at {z}"
            );
        }
        assert!((h1.radius().unwrap() - h2.radius().unwrap()).abs() <= tol);
    }

    fn polyline_distance_to(r: &Region, z: Complex64) -> f64 {
        match r {
            Region::Bounded(b) => polyline_distance(&b.upper, fold(z)),
            _ => f64::INFINITY,
        }
    }

    #[test]
    fn hull_radius_equals_input_max_modulus() {
        let res = Resolution::default();
        let pts = [c(0.3, 0.1), c(-1.2, 0.7), c(0.4, -1.9), c(0.0, 0.2)];
        let r = hco(&pts, res);
        let want = pts.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!((r.radius().unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn convex_region_covers_chords() {
        let res = Resolution::default();
        // Conjugate pair: the chord through them is vertical, so the convex
        // hull contains the real midpoint, unlike the h-convex hull.
        let r = convex_region(&[c(1.0, 1.0), c(1.0, -1.0)], res);
        assert!(r.contains(c(1.0, 0.0), res));
        assert!(r.contains(c(1.0, 0.99), res));
        assert!(!r.contains(c(1.2, 0.0), res));
    }

    #[test]
    fn degenerate_arc_endpoints_are_kept_exactly() {
        let res = Resolution::default();
        let z = c(0.3, 0.45);
        let r = hco(&[z, c(0.3000000001, 0.45)], res);
        assert!(r.contains(z, res));
    }
}
