//! The shared total order for ball-edge intersection endpoints along an edge.
//!
//! Every place that sorts endpoints or ranks a point among them (signatures,
//! code propagation, predecessor location) uses this one order so that the
//! naive and the blocked decision procedures quantize geometry identically:
//! primary key is the parameter value, ties broken by kind (start before end),
//! then by smaller vertex index.

use super::interval::EdgeInterval;
use std::cmp::Ordering;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EndpointKind {
    Start,
    End,
}

/// One non-null intersection endpoint: its parameter on the edge, whether it
/// is the start or the end of its ball's intersection, and the 0-based offset
/// of the owning vertex within the block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endpoint {
    pub param: f64,
    pub kind: EndpointKind,
    pub vertex_offset: usize,
}

impl Endpoint {
    fn cmp_total(&self, other: &Endpoint) -> Ordering {
        self.param
            .total_cmp(&other.param)
            .then(self.kind.cmp(&other.kind))
            .then(self.vertex_offset.cmp(&other.vertex_offset))
    }
}

/// Materialize and sort the non-null endpoints of `block_points` (one
/// interval per block vertex, in vertex order) under the shared order.
pub fn sorted_endpoints(block_points: &[EdgeInterval]) -> Vec<Endpoint> {
    let mut out = Vec::with_capacity(2 * block_points.len());
    for (vertex_offset, iv) in block_points.iter().enumerate() {
        if let Some((lo, hi)) = iv.bounds() {
            out.push(Endpoint {
                param: lo,
                kind: EndpointKind::Start,
                vertex_offset,
            });
            out.push(Endpoint {
                param: hi,
                kind: EndpointKind::End,
                vertex_offset,
            });
        }
    }
    out.sort_by(|a, b| a.cmp_total(b));
    out
}

/// Where a query parameter sits among the sorted endpoints.
///
/// `rank` is 1-based in the sorted order. Two sentinel values exist: `rank ==
/// 0` means the query lies strictly before every non-null endpoint (no
/// predecessor), and `rank == 2 * (W + 1) + 1` (for `W + 1` block vertices)
/// means every endpoint is null. For the query points the algorithms actually
/// produce (starts of nonempty reachability intervals) neither sentinel can
/// occur, because the block's own first ball contains the query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankLocation {
    pub rank: usize,
    pub is_equal: bool,
}

/// Rank of the immediate predecessor of `y_param`. When some endpoint's
/// parameter equals `y_param` exactly, the predecessor is the *first* such
/// endpoint; otherwise it is the last endpoint strictly before `y_param`.
///
/// Equal-parameter endpoints occupy a contiguous rank range, so anchoring the
/// equality case at the low end makes "`q` is not in front of `y`" decidable
/// from ranks alone: with `is_equal` it is `rank(q) >= rank`, without it
/// `rank(q) > rank`, exactly. Clamped intersections tie routinely at 0 and 1,
/// so this matters in practice, not just on degenerate inputs.
pub fn predecessor_rank(y_param: f64, block_points: &[EdgeInterval]) -> RankLocation {
    let sorted = sorted_endpoints(block_points);
    if sorted.is_empty() {
        return RankLocation {
            rank: 2 * block_points.len() + 1,
            is_equal: false,
        };
    }
    let mut last_before = 0usize;
    for (idx, ep) in sorted.iter().enumerate() {
        if ep.param < y_param {
            last_before = idx + 1;
        } else if ep.param == y_param {
            return RankLocation {
                rank: idx + 1,
                is_equal: true,
            };
        } else {
            break;
        }
    }
    RankLocation {
        rank: last_before,
        is_equal: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> EdgeInterval {
        EdgeInterval::new(lo, hi)
    }

    #[test]
    fn ties_resolved_start_first_then_vertex() {
        // Vertices 0 and 1 both clamp their starts to 0.0; vertex 1's end
        // coincides with vertex 2's start at 0.5.
        let pts = vec![iv(0.0, 0.3), iv(0.0, 0.5), iv(0.5, 0.9)];
        let sorted = sorted_endpoints(&pts);
        let ids: Vec<(EndpointKind, usize)> =
            sorted.iter().map(|e| (e.kind, e.vertex_offset)).collect();
        assert_eq!(
            ids,
            vec![
                (EndpointKind::Start, 0),
                (EndpointKind::Start, 1),
                (EndpointKind::End, 0),
                (EndpointKind::Start, 2),
                (EndpointKind::End, 1),
                (EndpointKind::End, 2),
            ]
        );
    }

    #[test]
    fn predecessor_equal_hits_first_of_tie_group() {
        let pts = vec![iv(0.0, 0.3), iv(0.0, 0.5)];
        // Sorted: s0(0.0) s1(0.0) e0(0.3) e1(0.5); query 0.0 anchors at rank 1.
        let loc = predecessor_rank(0.0, &pts);
        assert_eq!(loc, RankLocation { rank: 1, is_equal: true });
        // Query strictly inside picks the last endpoint before it.
        let loc = predecessor_rank(0.4, &pts);
        assert_eq!(loc, RankLocation { rank: 3, is_equal: false });
        // Exact match on a unique endpoint.
        let loc = predecessor_rank(0.5, &pts);
        assert_eq!(loc, RankLocation { rank: 4, is_equal: true });
    }

    #[test]
    fn predecessor_sentinels() {
        let all_null = vec![EdgeInterval::EMPTY, EdgeInterval::EMPTY];
        assert_eq!(
            predecessor_rank(0.5, &all_null),
            RankLocation { rank: 5, is_equal: false }
        );
        let pts = vec![iv(0.4, 0.6)];
        assert_eq!(
            predecessor_rank(0.1, &pts),
            RankLocation { rank: 0, is_equal: false }
        );
    }

    #[test]
    fn predecessor_matches_brute_force_scan() {
        // Deterministic pseudo-random configurations, checked against an
        // independent sort-and-scan.
        let mut state: u64 = 0x9e3779b97f4a7c15;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..500 {
            let mut pts = Vec::new();
            for _ in 0..3 {
                if next() < 0.25 {
                    pts.push(EdgeInterval::EMPTY);
                } else {
                    let a = next();
                    let b = next();
                    pts.push(iv(a.min(b), a.max(b)));
                }
            }
            let y = next();
            let got = predecessor_rank(y, &pts);
            // Oracle: collect, sort, scan for the first equal endpoint or the
            // last strictly-smaller one.
            let sorted = sorted_endpoints(&pts);
            let expect = if sorted.is_empty() {
                RankLocation { rank: 2 * pts.len() + 1, is_equal: false }
            } else if let Some(i) = sorted.iter().position(|ep| ep.param == y) {
                RankLocation { rank: i + 1, is_equal: true }
            } else {
                let rank = sorted.iter().filter(|ep| ep.param < y).count();
                RankLocation { rank, is_equal: false }
            };
            assert_eq!(got, expect);
        }
    }
}
