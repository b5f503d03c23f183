//! Points, segments, curves, ball-edge intersections, and the square-root-free
//! predicate suite. Everything here is pure and safe to share across threads.

mod curve;
mod intersect;
mod interval;
pub mod order;
pub mod predicates;

pub use curve::{Curve, Point, Segment};
pub use intersect::{ball_segment_intersection, point_segment_distance};
pub use interval::EdgeInterval;
pub use order::{predecessor_rank, sorted_endpoints, Endpoint, EndpointKind, RankLocation};
