//! The square-root-free predicate suite, each predicate implemented twice:
//! once as a cascade of polynomial sign tests and once directly from computed
//! ball-edge intersections. The two routes must agree away from ties; near
//! sign flips, floating point may resolve them differently, which is why the
//! cross-validation tests exclude configurations within a small margin of a
//! flip (see [`Predicate::tie_margin`]).
//!
//! Index conventions (0-based): `P1(i, j)` asks `d(w_j, v_i v_{i+1}) <= delta`
//! and `P2(i, j)` asks `d(v_i, w_j w_{j+1}) <= delta`. P3/P5/P7 compare
//! endpoints of `B_{w_j}` and `B_{w_j2}` intersections on the tau-edge `i`;
//! P4/P6/P8 compare endpoints of `B_{v_i}` and `B_{v_i2}` intersections on the
//! sigma-edge `j`. P9-P13 locate a query parameter `y` on the sigma-edge `j`
//! against the intersection of `B_{v_i}` with that edge.

use super::curve::{Curve, Point, Segment};
use super::intersect::{ball_segment_intersection, point_segment_distance};
use super::order::EndpointKind;

fn dot_diff(a: &Point, b: &Point, c: &Point, d: &Point) -> f64 {
    let (a, b, c, d) = (a.coords(), b.coords(), c.coords(), d.coords());
    let mut acc = 0.0;
    for k in 0..a.len() {
        acc += (a[k] - b[k]) * (c[k] - d[k]);
    }
    acc
}

/// `d(c, aff(seg))^2 * |seg|^2`, expanded so no square root is needed.
fn dist_aff_sq_l2(c: &Point, seg: &Segment<'_>) -> f64 {
    let (a, b) = (seg.start(), seg.end());
    dot_diff(c, b, c, b) * seg.len_sq() - dot_diff(c, b, a, b).powi(2)
}

/// Polynomial route for "the ball of radius `delta` around `c` meets the
/// segment": the sign cascade over `f_{1,1}..f_{1,5}`.
pub fn poly_ball_reaches(c: &Point, seg: &Segment<'_>, delta: f64) -> bool {
    let (a, b) = (seg.start(), seg.end());
    let f11 = dist_aff_sq_l2(c, seg) - delta * delta * seg.len_sq();
    if f11 > 0.0 {
        return false;
    }
    let f12 = dot_diff(c, a, b, a);
    let f13 = dot_diff(c, b, a, b);
    if f12 >= 0.0 && f13 >= 0.0 {
        return true;
    }
    if f12 < 0.0 {
        dot_diff(c, a, c, a) - delta * delta <= 0.0
    } else {
        dot_diff(c, b, c, b) - delta * delta <= 0.0
    }
}

/// Comparison of intersection endpoints of two balls on one segment, by sign
/// tests only. `z1` is the distance between the projections of the centers,
/// `z2`/`z3` the half-chords of the first/second ball; all comparisons reduce
/// to one linear sign and at most two polynomial signs.
fn poly_tilde_le(
    c1: &Point,
    k1: EndpointKind,
    c2: &Point,
    k2: EndpointKind,
    seg: &Segment<'_>,
    delta: f64,
) -> bool {
    let (a, b) = (seg.start(), seg.end());
    let l2 = seg.len_sq();
    let g1 = dot_diff(c2, c1, b, a);
    let a1 = delta * delta * l2 - dist_aff_sq_l2(c1, seg); // z2^2 * l2
    let a2 = delta * delta * l2 - dist_aff_sq_l2(c2, seg); // z3^2 * l2
    match (k1, k2) {
        (EndpointKind::Start, EndpointKind::Start) => {
            if g1 >= 0.0 {
                // le iff z1 + z2 >= z3
                let f32_ = a2 - a1 - g1 * g1;
                f32_ <= 0.0 || 4.0 * g1 * g1 * a1 - f32_ * f32_ >= 0.0
            } else {
                // le iff z2 >= z1 + z3
                let f34 = a1 - a2 - g1 * g1;
                f34 >= 0.0 && f34 * f34 - 4.0 * g1 * g1 * a2 >= 0.0
            }
        }
        (EndpointKind::End, EndpointKind::End) => {
            if g1 >= 0.0 {
                // le iff z1 + z3 >= z2
                let f51 = a1 - a2 - g1 * g1;
                f51 <= 0.0 || 4.0 * g1 * g1 * a2 - f51 * f51 >= 0.0
            } else {
                // le iff z3 >= z1 + z2
                let f53 = a2 - a1 - g1 * g1;
                f53 >= 0.0 && f53 * f53 - 4.0 * g1 * g1 * a1 >= 0.0
            }
        }
        (EndpointKind::Start, EndpointKind::End) => {
            if g1 >= 0.0 {
                true
            } else {
                // le iff z2 + z3 >= z1
                let f71 = g1 * g1 - a1 - a2;
                f71 <= 0.0 || 4.0 * a1 * a2 - f71 * f71 >= 0.0
            }
        }
        (EndpointKind::End, EndpointKind::Start) => {
            unreachable!("no predicate compares an end against a start")
        }
    }
}

/// Polynomial route for "endpoint `k1` of ball `c1` is not behind endpoint
/// `k2` of ball `c2` on the segment", including the null checks.
pub fn poly_endpoint_le(
    c1: &Point,
    k1: EndpointKind,
    c2: &Point,
    k2: EndpointKind,
    seg: &Segment<'_>,
    delta: f64,
) -> bool {
    if !poly_ball_reaches(c1, seg, delta) || !poly_ball_reaches(c2, seg, delta) {
        return false;
    }
    let (a, b) = (seg.start(), seg.end());
    let d2 = delta * delta;
    let at_start = |c: &Point| dot_diff(c, a, c, a) - d2 <= 0.0;
    let at_end = |c: &Point| dot_diff(c, b, c, b) - d2 <= 0.0;
    match (k1, k2) {
        (EndpointKind::Start, EndpointKind::Start) => {
            if at_start(c1) {
                // The start endpoint is clamped to the segment start, which is
                // not behind anything.
                true
            } else if at_start(c2) {
                false
            } else {
                poly_tilde_le(c1, k1, c2, k2, seg, delta)
            }
        }
        (EndpointKind::End, EndpointKind::End) => {
            if at_end(c1) {
                at_end(c2)
            } else if at_end(c2) {
                true
            } else {
                poly_tilde_le(c1, k1, c2, k2, seg, delta)
            }
        }
        (EndpointKind::Start, EndpointKind::End) => {
            if at_start(c1) || at_end(c2) {
                true
            } else {
                poly_tilde_le(c1, k1, c2, k2, seg, delta)
            }
        }
        (EndpointKind::End, EndpointKind::Start) => {
            unreachable!("no predicate compares an end against a start")
        }
    }
}

/// Direct route for the same comparison, via computed intersection intervals.
pub fn direct_endpoint_le(
    c1: &Point,
    k1: EndpointKind,
    c2: &Point,
    k2: EndpointKind,
    seg: &Segment<'_>,
    delta: f64,
) -> bool {
    let i1 = ball_segment_intersection(c1, seg, delta);
    let i2 = ball_segment_intersection(c2, seg, delta);
    let p1 = match k1 {
        EndpointKind::Start => i1.lo(),
        EndpointKind::End => i1.hi(),
    };
    let p2 = match k2 {
        EndpointKind::Start => i2.lo(),
        EndpointKind::End => i2.hi(),
    };
    matches!((p1, p2), (Some(p1), Some(p2)) if p1 <= p2)
}

/// One of the thirteen predicates, with its arguments bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Predicate {
    P1 { i: usize, j: usize },
    P2 { i: usize, j: usize },
    P3 { i: usize, j: usize, j2: usize },
    P4 { i: usize, i2: usize, j: usize },
    P5 { i: usize, j: usize, j2: usize },
    P6 { i: usize, i2: usize, j: usize },
    P7 { i: usize, j: usize, j2: usize },
    P8 { i: usize, i2: usize, j: usize },
    P9 { i: usize, j: usize },
    P10 { i: usize, j: usize, y: f64 },
    P11 { i: usize, j: usize, y: f64 },
    P12 { i: usize, j: usize, y: f64 },
    P13 { i: usize, j: usize, y: f64 },
}

use EndpointKind::{End, Start};

impl Predicate {
    pub fn eval_direct(&self, tau: &Curve, sigma: &Curve, delta: f64) -> bool {
        match *self {
            Predicate::P1 { i, j } => {
                point_segment_distance(sigma.vertex(j), &tau.edge(i)) <= delta
            }
            Predicate::P2 { i, j } => {
                point_segment_distance(tau.vertex(i), &sigma.edge(j)) <= delta
            }
            Predicate::P3 { i, j, j2 } => direct_endpoint_le(
                sigma.vertex(j),
                Start,
                sigma.vertex(j2),
                Start,
                &tau.edge(i),
                delta,
            ),
            Predicate::P4 { i, i2, j } => direct_endpoint_le(
                tau.vertex(i),
                Start,
                tau.vertex(i2),
                Start,
                &sigma.edge(j),
                delta,
            ),
            Predicate::P5 { i, j, j2 } => direct_endpoint_le(
                sigma.vertex(j),
                End,
                sigma.vertex(j2),
                End,
                &tau.edge(i),
                delta,
            ),
            Predicate::P6 { i, i2, j } => direct_endpoint_le(
                tau.vertex(i),
                End,
                tau.vertex(i2),
                End,
                &sigma.edge(j),
                delta,
            ),
            Predicate::P7 { i, j, j2 } => direct_endpoint_le(
                sigma.vertex(j),
                Start,
                sigma.vertex(j2),
                End,
                &tau.edge(i),
                delta,
            ),
            Predicate::P8 { i, i2, j } => direct_endpoint_le(
                tau.vertex(i),
                Start,
                tau.vertex(i2),
                End,
                &sigma.edge(j),
                delta,
            ),
            Predicate::P9 { i, j } => {
                point_segment_distance(tau.vertex(i), &sigma.edge(j)) <= delta
            }
            Predicate::P10 { i, j, y } => {
                let iv = ball_segment_intersection(tau.vertex(i), &sigma.edge(j), delta);
                matches!(iv.lo(), Some(lo) if y <= lo)
            }
            Predicate::P11 { i, j, y } => {
                let iv = ball_segment_intersection(tau.vertex(i), &sigma.edge(j), delta);
                matches!(iv.hi(), Some(hi) if y <= hi)
            }
            Predicate::P12 { i, j, y } => {
                let iv = ball_segment_intersection(tau.vertex(i), &sigma.edge(j), delta);
                iv.lo() == Some(y)
            }
            Predicate::P13 { i, j, y } => {
                let iv = ball_segment_intersection(tau.vertex(i), &sigma.edge(j), delta);
                iv.hi() == Some(y)
            }
        }
    }

    pub fn eval_poly(&self, tau: &Curve, sigma: &Curve, delta: f64) -> bool {
        match *self {
            Predicate::P1 { i, j } => poly_ball_reaches(sigma.vertex(j), &tau.edge(i), delta),
            Predicate::P2 { i, j } => poly_ball_reaches(tau.vertex(i), &sigma.edge(j), delta),
            Predicate::P3 { i, j, j2 } => poly_endpoint_le(
                sigma.vertex(j),
                Start,
                sigma.vertex(j2),
                Start,
                &tau.edge(i),
                delta,
            ),
            Predicate::P4 { i, i2, j } => poly_endpoint_le(
                tau.vertex(i),
                Start,
                tau.vertex(i2),
                Start,
                &sigma.edge(j),
                delta,
            ),
            Predicate::P5 { i, j, j2 } => poly_endpoint_le(
                sigma.vertex(j),
                End,
                sigma.vertex(j2),
                End,
                &tau.edge(i),
                delta,
            ),
            Predicate::P6 { i, i2, j } => poly_endpoint_le(
                tau.vertex(i),
                End,
                tau.vertex(i2),
                End,
                &sigma.edge(j),
                delta,
            ),
            Predicate::P7 { i, j, j2 } => poly_endpoint_le(
                sigma.vertex(j),
                Start,
                sigma.vertex(j2),
                End,
                &tau.edge(i),
                delta,
            ),
            Predicate::P8 { i, i2, j } => poly_endpoint_le(
                tau.vertex(i),
                Start,
                tau.vertex(i2),
                End,
                &sigma.edge(j),
                delta,
            ),
            Predicate::P9 { i, j } => poly_ball_reaches(tau.vertex(i), &sigma.edge(j), delta),
            Predicate::P10 { i, j, y } => {
                Self::poly_locate(tau.vertex(i), &sigma.edge(j), y, delta).0
            }
            Predicate::P11 { i, j, y } => {
                Self::poly_locate_end(tau.vertex(i), &sigma.edge(j), y, delta).0
            }
            Predicate::P12 { i, j, y } => {
                Self::poly_locate(tau.vertex(i), &sigma.edge(j), y, delta).1
            }
            Predicate::P13 { i, j, y } => {
                Self::poly_locate_end(tau.vertex(i), &sigma.edge(j), y, delta).1
            }
        }
    }

    /// Sign-test route for (P10, P12): `y` not behind / equal to the start of
    /// the ball-edge intersection.
    fn poly_locate(v: &Point, seg: &Segment<'_>, y: f64, delta: f64) -> (bool, bool) {
        if !poly_ball_reaches(v, seg, delta) {
            return (false, false);
        }
        let (a, b) = (seg.start(), seg.end());
        let y_pt = seg.at(y);
        let f10_1 = dot_diff(v, &y_pt, b, a);
        if f10_1 >= 0.0 {
            // y is not behind the projection of v.
            let f10_5 = dot_diff(v, &y_pt, v, &y_pt) - delta * delta;
            let f10_4 = dot_diff(&y_pt, a, b, a);
            let p10 = f10_5 >= 0.0 || f10_4 == 0.0;
            let p12 = f10_5 == 0.0 || (f10_4 == 0.0 && f10_5 < 0.0);
            (p10, p12)
        } else {
            let f10_2 = dot_diff(v, a, b, a);
            let f10_3 = dot_diff(v, b, a, b);
            if f10_2 >= 0.0 && f10_3 >= 0.0 {
                // Projection lies on the segment and strictly before y; the
                // start cannot be behind it.
                (false, false)
            } else {
                // Projection falls before the segment, so the start clamps to
                // the segment start.
                let f10_4 = dot_diff(&y_pt, a, b, a);
                (f10_4 <= 0.0, f10_4 == 0.0)
            }
        }
    }

    /// Sign-test route for (P11, P13): `y` not behind / equal to the end of
    /// the ball-edge intersection.
    fn poly_locate_end(v: &Point, seg: &Segment<'_>, y: f64, delta: f64) -> (bool, bool) {
        if !poly_ball_reaches(v, seg, delta) {
            return (false, false);
        }
        let (a, b) = (seg.start(), seg.end());
        let y_pt = seg.at(y);
        let d2 = delta * delta;
        let f10_1 = dot_diff(v, &y_pt, b, a);
        let f10_5 = dot_diff(v, &y_pt, v, &y_pt) - d2;
        let f11_1 = dot_diff(b, &y_pt, b, a);
        let end_clamped_eq = f11_1 == 0.0 && dot_diff(v, b, v, b) - d2 <= 0.0;
        if f10_1 >= 0.0 {
            let f10_2 = dot_diff(v, a, b, a);
            let f10_3 = dot_diff(v, b, a, b);
            if f10_2 >= 0.0 && f10_3 >= 0.0 {
                // End is at or after the projection, which is at or after y.
                let p13 = (f10_1 == 0.0 && f10_5 == 0.0) || end_clamped_eq;
                (true, p13)
            } else {
                // Projection beyond the segment end; the end clamps there.
                (f11_1 >= 0.0, f11_1 == 0.0)
            }
        } else {
            let p11 = f10_5 <= 0.0;
            let p13 = f10_5 == 0.0 || end_clamped_eq;
            (p11, p13)
        }
    }

    /// Smallest absolute margin among the sign tests this predicate depends
    /// on, in the squared-quantity scale used by the polynomial route.
    /// Configurations with a tiny margin sit numerically on a sign flip and
    /// are excluded from cross-validation counts.
    pub fn tie_margin(&self, tau: &Curve, sigma: &Curve, delta: f64) -> f64 {
        let dist_margin = |c: &Point, seg: &Segment<'_>| -> f64 {
            (point_segment_distance(c, seg) - delta).abs()
        };
        let pair_margin = |c1: &Point, k1: EndpointKind, c2: &Point, k2, seg: &Segment<'_>| {
            let mut m = dist_margin(c1, seg).min(dist_margin(c2, seg));
            m = m.min((c1.dist(seg.start()) - delta).abs());
            m = m.min((c1.dist(seg.end()) - delta).abs());
            m = m.min((c2.dist(seg.start()) - delta).abs());
            m = m.min((c2.dist(seg.end()) - delta).abs());
            let i1 = ball_segment_intersection(c1, seg, delta);
            let i2 = ball_segment_intersection(c2, seg, delta);
            let p1 = match k1 {
                EndpointKind::Start => i1.lo(),
                EndpointKind::End => i1.hi(),
            };
            let p2 = match k2 {
                EndpointKind::Start => i2.lo(),
                EndpointKind::End => i2.hi(),
            };
            if let (Some(p1), Some(p2)) = (p1, p2) {
                m = m.min((p1 - p2).abs());
            }
            m
        };
        let locate_margin = |v: &Point, seg: &Segment<'_>, y: f64| -> f64 {
            let mut m = dist_margin(v, seg);
            m = m.min((v.dist(&seg.at(y)) - delta).abs());
            let iv = ball_segment_intersection(v, seg, delta);
            if let Some((lo, hi)) = iv.bounds() {
                m = m.min((y - lo).abs()).min((y - hi).abs());
            }
            m
        };
        match *self {
            Predicate::P1 { i, j } => dist_margin(sigma.vertex(j), &tau.edge(i)),
            Predicate::P2 { i, j } => dist_margin(tau.vertex(i), &sigma.edge(j)),
            Predicate::P3 { i, j, j2 } => {
                pair_margin(sigma.vertex(j), Start, sigma.vertex(j2), Start, &tau.edge(i))
            }
            Predicate::P4 { i, i2, j } => {
                pair_margin(tau.vertex(i), Start, tau.vertex(i2), Start, &sigma.edge(j))
            }
            Predicate::P5 { i, j, j2 } => {
                pair_margin(sigma.vertex(j), End, sigma.vertex(j2), End, &tau.edge(i))
            }
            Predicate::P6 { i, i2, j } => {
                pair_margin(tau.vertex(i), End, tau.vertex(i2), End, &sigma.edge(j))
            }
            Predicate::P7 { i, j, j2 } => {
                pair_margin(sigma.vertex(j), Start, sigma.vertex(j2), End, &tau.edge(i))
            }
            Predicate::P8 { i, i2, j } => {
                pair_margin(tau.vertex(i), Start, tau.vertex(i2), End, &sigma.edge(j))
            }
            Predicate::P9 { i, j } => dist_margin(tau.vertex(i), &sigma.edge(j)),
            Predicate::P10 { i, j, y }
            | Predicate::P11 { i, j, y }
            | Predicate::P12 { i, j, y }
            | Predicate::P13 { i, j, y } => locate_margin(tau.vertex(i), &sigma.edge(j), y),
        }
    }
}
