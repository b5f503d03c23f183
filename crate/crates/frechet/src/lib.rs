//! Curve-similarity toolkit built around the continuous Fréchet distance.
//!
//! The crate decides `d_F(tau, sigma) <= delta` two ways: the classic
//! reachability-interval dynamic program ([`freespace::naive_decide`]) and a
//! blocked variant ([`blocked_dp::boxed_decide`]) that partitions the DP table
//! into boxes, encodes reachability frontiers as small rank-based codes, and
//! memoizes whole-box transitions keyed by box signatures. Distances are then
//! computed from either decider by critical-value search or bisection
//! ([`distance`]).

pub mod blocked_dp;
pub mod distance;
pub mod encoding;
pub mod error;
pub mod freespace;
pub mod geometry;
pub mod io;

pub use error::{Error, Result};
pub use geometry::{Curve, EdgeInterval, Point, Segment};
