use super::curve::{Point, Segment};
use super::interval::EdgeInterval;

/// Clamp a parameter to `[0, 1]`, normalizing `-0.0` to `+0.0` so the shared
/// tie-break order never distinguishes signed zeros.
pub(crate) fn clamp01(t: f64) -> f64 {
    let t = if t < 0.0 {
        0.0
    } else if t > 1.0 {
        1.0
    } else {
        t
    };
    t + 0.0
}

/// Euclidean distance from `p` to the closed segment.
pub fn point_segment_distance(p: &Point, seg: &Segment<'_>) -> f64 {
    debug_assert_eq!(p.dim(), seg.dim());
    let a = seg.start().coords();
    let b = seg.end().coords();
    let c = p.coords();
    let mut len_sq = 0.0;
    let mut proj = 0.0;
    for k in 0..c.len() {
        let v = b[k] - a[k];
        len_sq += v * v;
        proj += (c[k] - a[k]) * v;
    }
    let t = (proj / len_sq).clamp(0.0, 1.0);
    let mut d_sq = 0.0;
    for k in 0..c.len() {
        let e = a[k] + t * (b[k] - a[k]) - c[k];
        d_sq += e * e;
    }
    d_sq.sqrt()
}

/// Parameter range `{t in [0,1] : |seg(t) - center| <= delta}` of the closed
/// ball of radius `delta` around `center`, intersected with the segment.
///
/// Segment-endpoint membership is decided by the exact squared-distance tests
/// `|start-center|^2 <= delta^2` and `|end-center|^2 <= delta^2`, so a clamped
/// bound of exactly `0.0` or `1.0` is equivalent to the corresponding vertex
/// lying in the ball. Every consumer of clamped endpoints relies on that.
pub fn ball_segment_intersection(
    center: &Point,
    seg: &Segment<'_>,
    delta: f64,
) -> EdgeInterval {
    debug_assert_eq!(center.dim(), seg.dim());
    debug_assert!(delta >= 0.0, "delta must be nonnegative");
    let a_pt = seg.start().coords();
    let b_pt = seg.end().coords();
    let c_pt = center.coords();

    // Quadratic |u + t v|^2 - delta^2 with u = start - center, v = end - start.
    let mut a = 0.0; // |v|^2
    let mut half_b = 0.0; // <u, v>
    let mut u_sq = 0.0; // |u|^2
    let mut w_sq = 0.0; // |end - center|^2
    for k in 0..c_pt.len() {
        let u = a_pt[k] - c_pt[k];
        let v = b_pt[k] - a_pt[k];
        let w = b_pt[k] - c_pt[k];
        a += v * v;
        half_b += u * v;
        u_sq += u * u;
        w_sq += w * w;
    }
    let b = 2.0 * half_b;
    let cc = u_sq - delta * delta;
    let end_val = w_sq - delta * delta;
    let inside_start = cc <= 0.0;
    let inside_end = end_val <= 0.0;

    if inside_start && inside_end {
        return EdgeInterval::new(0.0, 1.0);
    }

    let disc = b * b - 4.0 * a * cc;
    let roots = if disc >= 0.0 {
        let sq = disc.sqrt();
        let q = if b >= 0.0 {
            -0.5 * (b + sq)
        } else {
            -0.5 * (b - sq)
        };
        if q != 0.0 {
            let r1 = q / a;
            let r2 = cc / q;
            Some((r1.min(r2), r1.max(r2)))
        } else {
            Some((0.0, 0.0))
        }
    } else {
        None
    };

    if inside_start {
        // The start vertex is in the ball; cc <= 0 forces disc >= 0.
        let (_, t_hi) = roots.expect("inside_start implies real roots");
        return EdgeInterval::new(0.0, clamp01(t_hi).max(0.0));
    }
    if inside_end {
        // Cancellation can round disc negative even though the end vertex is
        // provably inside; collapse to the vertex in that case.
        let t_lo = match roots {
            Some((t_lo, _)) => clamp01(t_lo),
            None => 1.0,
        };
        return EdgeInterval::new(t_lo.min(1.0), 1.0);
    }
    match roots {
        None => EdgeInterval::EMPTY,
        Some((t_lo, t_hi)) => {
            if t_lo > 1.0 || t_hi < 0.0 {
                return EdgeInterval::EMPTY;
            }
            let lo = clamp01(t_lo);
            let hi = clamp01(t_hi);
            if lo > hi {
                EdgeInterval::EMPTY
            } else {
                EdgeInterval::new(lo, hi)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::curve::pt2;

    #[test]
    fn symmetric_crossing() {
        let c = pt2(0.0, 0.0);
        let p = pt2(-2.0, 0.0);
        let q = pt2(2.0, 0.0);
        let seg = Segment::new(&p, &q).unwrap();
        let i = ball_segment_intersection(&c, &seg, 1.0);
        assert_eq!(i.bounds(), Some((0.25, 0.75)));
    }

    #[test]
    fn ball_misses_line() {
        let c = pt2(0.0, 5.0);
        let p = pt2(0.0, 0.0);
        let q = pt2(1.0, 0.0);
        let seg = Segment::new(&p, &q).unwrap();
        assert!(ball_segment_intersection(&c, &seg, 1.0).is_empty());
    }

    #[test]
    fn matches_dense_parameter_scan() {
        let c = pt2(0.3, 0.1);
        let p = pt2(0.0, 0.0);
        let q = pt2(1.0, 0.0);
        let seg = Segment::new(&p, &q).unwrap();
        let delta = 0.7;
        let i = ball_segment_intersection(&c, &seg, delta);
        // Brute-force oracle: scan 10^6 parameter steps.
        let steps = 1_000_000;
        let mut scan_lo = None;
        let mut scan_hi = None;
        for s in 0..=steps {
            let t = s as f64 / steps as f64;
            if seg.at(t).dist(&c) <= delta {
                if scan_lo.is_none() {
                    scan_lo = Some(t);
                }
                scan_hi = Some(t);
            }
        }
        let (lo, hi) = i.bounds().unwrap();
        let tol = 2.0 / steps as f64;
        assert!((lo - scan_lo.unwrap()).abs() <= tol);
        assert!((hi - scan_hi.unwrap()).abs() <= tol);
    }

    #[test]
    fn endpoint_membership_is_exact() {
        // delta exactly the distance to the segment end: hi must be exactly 1.
        let c = pt2(3.0, 4.0);
        let p = pt2(0.0, 0.0);
        let q = pt2(1.0, 4.0);
        let seg = Segment::new(&p, &q).unwrap();
        let delta = c.dist(&q);
        let i = ball_segment_intersection(&c, &seg, delta);
        assert_eq!(i.hi(), Some(1.0));
    }

    #[test]
    fn tangent_ball_yields_single_point() {
        let c = pt2(0.5, 1.0);
        let p = pt2(0.0, 0.0);
        let q = pt2(1.0, 0.0);
        let seg = Segment::new(&p, &q).unwrap();
        let i = ball_segment_intersection(&c, &seg, 1.0);
        let (lo, hi) = i.bounds().unwrap();
        assert!((lo - 0.5).abs() < 1e-12 && (hi - 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_delta_on_segment() {
        let c = pt2(0.5, 0.0);
        let p = pt2(0.0, 0.0);
        let q = pt2(1.0, 0.0);
        let seg = Segment::new(&p, &q).unwrap();
        let i = ball_segment_intersection(&c, &seg, 0.0);
        let (lo, hi) = i.bounds().unwrap();
        assert_eq!((lo, hi), (0.5, 0.5));
    }

    #[test]
    fn point_segment_distance_cases() {
        let p = pt2(0.0, 1.0);
        let a = pt2(-1.0, 0.0);
        let b = pt2(1.0, 0.0);
        let seg = Segment::new(&a, &b).unwrap();
        assert!((point_segment_distance(&p, &seg) - 1.0).abs() < 1e-15);

        let p_on = pt2(0.25, 0.0);
        assert_eq!(point_segment_distance(&p_on, &seg), 0.0);

        // Distance to the nearest endpoint when the foot falls outside.
        let far = pt2(3.0, 4.0);
        let a2 = pt2(0.0, 0.0);
        let b2 = pt2(1.0, 0.0);
        let seg2 = Segment::new(&a2, &b2).unwrap();
        let want = (4.0f64 + 16.0).sqrt();
        assert!((point_segment_distance(&far, &seg2) - want).abs() < 1e-12);
    }

    #[test]
    fn point_segment_distance_matches_dense_scan() {
        let p = pt2(0.7, -0.4);
        let a = pt2(-0.2, 0.3);
        let b = pt2(1.1, 0.9);
        let seg = Segment::new(&a, &b).unwrap();
        let steps = 100_000;
        let scan = (0..=steps)
            .map(|s| seg.at(s as f64 / steps as f64).dist(&p))
            .fold(f64::INFINITY, f64::min);
        assert!((point_segment_distance(&p, &seg) - scan).abs() < 1e-9);
    }
}
