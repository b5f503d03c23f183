//! The classic reachability-interval dynamic program. This is the ground
//! truth the blocked procedure is verified against: one rolling frontier in
//! production, a fully materialized table in debug mode.

use crate::error::{Error, Result};
use crate::geometry::{ball_segment_intersection, Curve, EdgeInterval};

/// Reachability state along the current row of the table: `row_intervals[j]`
/// is the interval of `v_i` on the sigma-edge `j`, `col_intervals[i]` the
/// interval of `w_1` on the tau-edge `i` (the left table boundary).
#[derive(Debug, Clone)]
pub struct Frontier {
    pub row_intervals: Vec<EdgeInterval>,
    pub col_intervals: Vec<EdgeInterval>,
}

#[derive(Debug, Clone)]
pub struct DecisionResult {
    pub reachable: bool,
    /// Materialized interval table, present in debug mode only.
    pub table: Option<FreeSpaceTable>,
}

/// Full table of reachability intervals: `rows[i][j]` is the interval of
/// vertex `v_{i+1}` (0-based row i holds R_{i+1} in 1-based terms) on
/// sigma-edge `j`; `cols[j][i]` the interval of `w_{j+1}` on tau-edge `i`.
#[derive(Debug, Clone)]
pub struct FreeSpaceTable {
    pub rows: Vec<Vec<EdgeInterval>>,
    pub cols: Vec<Vec<EdgeInterval>>,
}

fn check_dims(tau: &Curve, sigma: &Curve) -> Result<()> {
    if tau.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(tau.dim(), sigma.dim()));
    }
    Ok(())
}

/// Initial reachability intervals of `v_1` on every sigma edge and of `w_1`
/// on every tau edge. The chain rule: the interval on edge `j` is the full
/// ball-edge intersection if every previous interval reached its edge's end
/// vertex, and the ball contains this edge's start vertex; otherwise null.
pub fn init_frontiers(tau: &Curve, sigma: &Curve, delta: f64) -> Frontier {
    Frontier {
        row_intervals: init_row(tau, sigma, delta),
        col_intervals: init_row(sigma, tau, delta),
    }
}

fn init_row(from: &Curve, along: &Curve, delta: f64) -> Vec<EdgeInterval> {
    let origin = from.vertex(0);
    let mut out = Vec::with_capacity(along.edge_count());
    let mut chain = true;
    for j in 0..along.edge_count() {
        let iv = ball_segment_intersection(origin, &along.edge(j), delta);
        // The ball contains w_j exactly when the clamped start is 0.
        let reaches_start = iv.lo() == Some(0.0);
        if chain && reaches_start {
            out.push(iv);
            chain = iv.hi() == Some(1.0);
        } else {
            out.push(EdgeInterval::EMPTY);
            chain = false;
        }
    }
    out
}

/// One cell step: from the lower interval `r_ij` (= R_i[j]) and the left
/// interval `rp_ji` (= R'_j[i]), produce the upper interval R_{i+1}[j] and the
/// right interval R'_{j+1}[i]. `ball_up` is the intersection of the ball
/// around `v_{i+1}` with the sigma-edge `j`; `ball_right` the intersection of
/// the ball around `w_{j+1}` with the tau-edge `i`.
pub fn propagate_cell(
    r_ij: EdgeInterval,
    rp_ji: EdgeInterval,
    ball_up: EdgeInterval,
    ball_right: EdgeInterval,
) -> (EdgeInterval, EdgeInterval) {
    (
        advance(rp_ji, r_ij, ball_up),
        advance(r_ij, rp_ji, ball_right),
    )
}

/// If the side interval is nonempty the whole ball-edge intersection is
/// reachable; otherwise the new interval starts at the first point of the
/// intersection not in front of the old start.
fn advance(side: EdgeInterval, straight: EdgeInterval, ball: EdgeInterval) -> EdgeInterval {
    if !side.is_empty() {
        return ball;
    }
    let Some(ell) = straight.lo() else {
        return EdgeInterval::EMPTY;
    };
    match ball.bounds() {
        None => EdgeInterval::EMPTY,
        Some((s, e)) => {
            if s >= ell {
                ball
            } else if e >= ell {
                EdgeInterval::new(ell, e)
            } else {
                EdgeInterval::EMPTY
            }
        }
    }
}

/// Decide `d_F(tau, sigma) <= delta` by the rolling-frontier DP.
pub fn naive_decide(tau: &Curve, sigma: &Curve, delta: f64) -> Result<DecisionResult> {
    decide_impl(tau, sigma, delta, false)
}

/// Like [`naive_decide`] but materializes the full interval table.
pub fn naive_decide_debug(tau: &Curve, sigma: &Curve, delta: f64) -> Result<DecisionResult> {
    decide_impl(tau, sigma, delta, true)
}

fn decide_impl(tau: &Curve, sigma: &Curve, delta: f64, keep_table: bool) -> Result<DecisionResult> {
    check_dims(tau, sigma)?;
    if tau.len() == 1 || sigma.len() == 1 {
        return Ok(DecisionResult {
            reachable: decide_degenerate(tau, sigma, delta),
            table: None,
        });
    }
    let n_edges = tau.edge_count();
    let m_edges = sigma.edge_count();
    let init = init_frontiers(tau, sigma, delta);
    let mut row = init.row_intervals.clone();
    let mut table = keep_table.then(|| FreeSpaceTable {
        rows: Vec::with_capacity(n_edges),
        cols: vec![Vec::with_capacity(n_edges); m_edges],
    });

    for i in 0..n_edges {
        let mut right = init.col_intervals[i];
        let upper_vertex = tau.vertex(i + 1);
        for j in 0..m_edges {
            let ball_up = ball_segment_intersection(upper_vertex, &sigma.edge(j), delta);
            let ball_right =
                ball_segment_intersection(sigma.vertex(j + 1), &tau.edge(i), delta);
            let (up, next_right) = propagate_cell(row[j], right, ball_up, ball_right);
            row[j] = up;
            right = next_right;
            if let Some(t) = table.as_mut() {
                t.cols[j].push(next_right);
            }
        }
        if let Some(t) = table.as_mut() {
            t.rows.push(row.clone());
        }
    }

    // d_F <= delta iff w_m lies in R_n[m-1]: the final interval is nonempty
    // and its end is the edge's end vertex.
    let last = row[m_edges - 1];
    let reachable = !last.is_empty() && last.hi() == Some(1.0);
    Ok(DecisionResult {
        reachable,
        table,
    })
}

/// A single-vertex curve matches iff every point of the other curve lies in
/// its ball; the maximum distance to a segment is attained at a vertex.
fn decide_degenerate(tau: &Curve, sigma: &Curve, delta: f64) -> bool {
    let all_within = |p: &crate::geometry::Point, c: &Curve| {
        c.vertices().iter().all(|q| p.dist_sq(q) <= delta * delta)
    };
    if tau.len() == 1 {
        all_within(tau.vertex(0), sigma)
    } else {
        all_within(sigma.vertex(0), tau)
    }
}

/// Debug-mode structural check: every nonempty interval ends at its ball-edge
/// intersection end, and starts at the ball-edge intersection start of some
/// earlier (or its own) vertex on the same edge.
pub fn check_end_rule(table: &FreeSpaceTable, tau: &Curve, sigma: &Curve, delta: f64) -> bool {
    for (i0, row) in table.rows.iter().enumerate() {
        for (j, iv) in row.iter().enumerate() {
            let Some((lo, hi)) = iv.bounds() else {
                continue;
            };
            let vertex = i0 + 1; // row i0 stores intervals of vertex i0+1
            let ball = ball_segment_intersection(tau.vertex(vertex), &sigma.edge(j), delta);
            if ball.hi() != Some(hi) {
                return false;
            }
            let lo_is_some_start = (0..=vertex).any(|i| {
                ball_segment_intersection(tau.vertex(i), &sigma.edge(j), delta).lo() == Some(lo)
            });
            if !lo_is_some_start {
                return false;
            }
        }
    }
    for (j0, col) in table.cols.iter().enumerate() {
        for (i, iv) in col.iter().enumerate() {
            let Some((lo, hi)) = iv.bounds() else {
                continue;
            };
            let vertex = j0 + 1;
            let ball = ball_segment_intersection(sigma.vertex(vertex), &tau.edge(i), delta);
            if ball.hi() != Some(hi) {
                return false;
            }
            let lo_is_some_start = (0..=vertex).any(|jv| {
                ball_segment_intersection(sigma.vertex(jv), &tau.edge(i), delta).lo() == Some(lo)
            });
            if !lo_is_some_start {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn curve(coords: &[(f64, f64)]) -> Curve {
        Curve::new(coords.iter().map(|&(x, y)| Point::new(vec![x, y])).collect()).unwrap()
    }

    #[test]
    fn identical_curves_at_zero_delta() {
        let tau = curve(&[(0.0, 0.0), (1.0, 0.5), (2.0, -0.25), (3.5, 1.0)]);
        assert!(naive_decide(&tau, &tau, 0.0).unwrap().reachable);
    }

    #[test]
    fn init_identical_curves_zero_delta() {
        let tau = curve(&[(0.0, 0.0), (1.0, 0.0), (2.0, 1.0)]);
        let f = init_frontiers(&tau, &tau, 0.0);
        assert_eq!(f.row_intervals[0].bounds(), Some((0.0, 0.0)));
        assert!(f.row_intervals[1].is_empty());
    }

    #[test]
    fn init_all_null_when_start_vertices_far() {
        let tau = curve(&[(0.0, 0.0), (1.0, 0.0)]);
        let sigma = curve(&[(10.0, 10.0), (11.0, 10.0)]);
        let f = init_frontiers(&tau, &sigma, 1.0);
        assert!(f.row_intervals.iter().all(|iv| iv.is_empty()));
        assert!(f.col_intervals.iter().all(|iv| iv.is_empty()));
    }

    #[test]
    fn two_parallel_segments() {
        let tau = curve(&[(0.0, 0.0), (1.0, 0.0)]);
        let sigma = curve(&[(0.0, 1.0), (1.0, 1.0)]);
        assert!(!naive_decide(&tau, &sigma, 0.5).unwrap().reachable);
        assert!(naive_decide(&tau, &sigma, 1.0).unwrap().reachable);
    }

    #[test]
    fn translated_copy_threshold() {
        let tau = curve(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0), (3.0, 2.0)]);
        let shift = 0.75;
        let sigma = Curve::new(
            tau.vertices()
                .iter()
                .map(|p| Point::new(vec![p.coords()[0] + shift, p.coords()[1]]))
                .collect(),
        )
        .unwrap();
        assert!(naive_decide(&tau, &sigma, shift).unwrap().reachable);
        assert!(!naive_decide(&tau, &sigma, shift * 0.999).unwrap().reachable);
    }

    #[test]
    fn propagate_cell_null_inputs() {
        let ball = EdgeInterval::new(0.2, 0.8);
        let (up, right) =
            propagate_cell(EdgeInterval::EMPTY, EdgeInterval::EMPTY, ball, ball);
        assert!(up.is_empty() && right.is_empty());
    }

    #[test]
    fn propagate_cell_side_nonempty_ball_missing() {
        let side = EdgeInterval::new(0.1, 0.4);
        let (up, _) = propagate_cell(
            EdgeInterval::EMPTY,
            side,
            EdgeInterval::EMPTY,
            EdgeInterval::EMPTY,
        );
        assert!(up.is_empty());
    }

    #[test]
    fn propagate_cell_start_inherited() {
        // Straight predecessor with start strictly inside the new ball span:
        // the new interval keeps that start.
        let below = EdgeInterval::new(0.5, 0.9);
        let ball_up = EdgeInterval::new(0.2, 0.8);
        let (up, _) = propagate_cell(below, EdgeInterval::EMPTY, ball_up, EdgeInterval::EMPTY);
        assert_eq!(up.bounds(), Some((0.5, 0.8)));
    }

    #[test]
    fn symmetry_and_monotonicity() {
        let tau = curve(&[(0.0, 0.0), (1.0, 1.0), (2.5, 0.0), (3.0, -1.0)]);
        let sigma = curve(&[(0.2, 0.1), (1.4, 0.8), (2.0, 0.4), (3.3, -0.8)]);
        for delta in [0.2, 0.4, 0.6, 0.9, 1.5] {
            let a = naive_decide(&tau, &sigma, delta).unwrap().reachable;
            let b = naive_decide(&sigma, &tau, delta).unwrap().reachable;
            assert_eq!(a, b);
            if a {
                assert!(naive_decide(&tau, &sigma, delta * 1.5).unwrap().reachable);
            }
        }
    }

    #[test]
    fn endpoint_necessity() {
        let tau = curve(&[(0.0, 0.0), (2.0, 0.0)]);
        let sigma = curve(&[(0.0, 0.9), (2.0, 0.9)]);
        let delta = 0.95;
        if naive_decide(&tau, &sigma, delta).unwrap().reachable {
            assert!(tau.vertex(0).dist(sigma.vertex(0)) <= delta);
            assert!(tau.vertex(1).dist(sigma.vertex(1)) <= delta);
        }
    }

    #[test]
    fn single_vertex_curves() {
        let p = curve_1(&[(0.0, 0.0)]);
        let sigma = curve(&[(0.0, 1.0), (3.0, 1.0)]);
        assert!(!naive_decide(&p, &sigma, 2.0).unwrap().reachable);
        assert!(naive_decide(&p, &sigma, (9.0f64 + 1.0).sqrt()).unwrap().reachable);
    }

    fn curve_1(coords: &[(f64, f64)]) -> Curve {
        Curve::new(coords.iter().map(|&(x, y)| Point::new(vec![x, y])).collect()).unwrap()
    }

    #[test]
    fn debug_table_respects_end_rule() {
        let tau = curve(&[(0.0, 0.0), (1.0, 0.6), (2.0, -0.3), (3.0, 0.4)]);
        let sigma = curve(&[(0.1, 0.2), (1.2, 0.1), (2.2, 0.5), (2.9, -0.1)]);
        for delta in [0.3, 0.6, 1.0, 2.0] {
            let res = naive_decide_debug(&tau, &sigma, delta).unwrap();
            assert!(check_end_rule(res.table.as_ref().unwrap(), &tau, &sigma, delta));
        }
    }
}
