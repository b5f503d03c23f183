//! Rank-based encodings of reachability frontiers.
//!
//! A block of `W` consecutive edges contributes `W + 1` vertex balls. Against
//! one edge of the other curve, the sorted order of the `2(W+1)` intersection
//! endpoints is the edge's *signature*; a reachability interval crossing the
//! block is compressed to a [`ReachCode`] that names its start either as one
//! of the block's intersection starts or as the carried block-entry start
//! located among the sorted endpoints. Propagating codes across a whole box
//! uses only the signatures, never the geometry, which is what makes box
//! transitions memoizable.

use crate::error::{Error, Result};
use crate::geometry::{
    ball_segment_intersection, predecessor_rank, sorted_endpoints, Curve, EdgeInterval,
    EndpointKind, Segment,
};
use serde::{Deserialize, Serialize};

/// A run of consecutive edges on one curve: vertices `first_vertex ..=
/// first_vertex + width`, edges `first_vertex .. first_vertex + width`
/// (0-based). The final block of a partition may be narrower than the global
/// block width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub first_vertex: usize,
    pub width: usize,
}

impl BlockSpec {
    pub fn new(first_vertex: usize, width: usize) -> BlockSpec {
        assert!(width >= 1);
        BlockSpec {
            first_vertex,
            width,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.width + 1
    }

    pub fn last_vertex(&self) -> usize {
        self.first_vertex + self.width
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<usize> {
        self.first_vertex..=self.last_vertex()
    }

    pub fn edges(&self) -> std::ops::Range<usize> {
        self.first_vertex..self.first_vertex + self.width
    }

    /// Ball-edge intersections of every block vertex with `edge`, in vertex
    /// order.
    pub fn intersections(
        &self,
        block_curve: &Curve,
        edge: &Segment<'_>,
        delta: f64,
    ) -> Vec<EdgeInterval> {
        self.vertices()
            .map(|v| ball_segment_intersection(block_curve.vertex(v), edge, delta))
            .collect()
    }
}

/// Ranks of the `2(W+1)` intersection endpoints of one block against one
/// edge, under the shared tie-break order. Null endpoints carry the sentinel
/// rank `2(W+1) + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    width: usize,
    ranks: Vec<u16>,
}

impl Signature {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn sentinel(&self) -> u16 {
        (2 * (self.width + 1) + 1) as u16
    }

    /// Rank of the intersection start of block-vertex `offset` (0-based
    /// within the block), or the sentinel.
    pub fn s_rank(&self, offset: usize) -> u16 {
        self.ranks[2 * offset]
    }

    /// Rank of the intersection end of block-vertex `offset`.
    pub fn e_rank(&self, offset: usize) -> u16 {
        self.ranks[2 * offset + 1]
    }

    pub fn ranks(&self) -> &[u16] {
        &self.ranks
    }

    /// Canonical byte serialization used for memo-key digests.
    pub fn canonical_bytes(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.width as u32).to_le_bytes());
        for &r in &self.ranks {
            out.extend_from_slice(&r.to_le_bytes());
        }
    }
}

/// Signature of `block` (on `block_curve`) against one oriented edge of the
/// other curve.
pub fn compute_signature(
    block: BlockSpec,
    block_curve: &Curve,
    edge: &Segment<'_>,
    delta: f64,
) -> Signature {
    let intersections = block.intersections(block_curve, edge, delta);
    let sorted = sorted_endpoints(&intersections);
    let sentinel = (2 * block.vertex_count() + 1) as u16;
    let mut ranks = vec![sentinel; 2 * block.vertex_count()];
    for (idx, ep) in sorted.iter().enumerate() {
        let slot = match ep.kind {
            EndpointKind::Start => 2 * ep.vertex_offset,
            EndpointKind::End => 2 * ep.vertex_offset + 1,
        };
        ranks[slot] = (idx + 1) as u16;
    }
    Signature {
        width: block.width,
        ranks,
    }
}

/// Compact encoding of one reachability interval with respect to a block.
/// `Null` encodes the empty interval. `VertexStart { offset }` says the
/// interval starts at the intersection start of block-vertex `offset`
/// (the 3-tuple form `gamma = offset + 1`). `Carried` says the interval
/// starts at the block-entry start, located among the sorted endpoints by the
/// rank of its immediate predecessor and an equality flag (`gamma = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReachCode {
    Null,
    Carried { pred_rank: u16, at_pred: bool },
    VertexStart { offset: u16 },
}

impl ReachCode {
    pub fn is_null(&self) -> bool {
        matches!(self, ReachCode::Null)
    }

    /// The canonical `(pi, beta, gamma)` 3-tuple for a block of width `w`:
    /// the sentinel `pi = 2(w+1)+1` marks null; `gamma in [1, w+1]` names a
    /// vertex start with `pi = beta = 0`; `gamma = 0` carries the block-entry
    /// start with its predecessor rank and equality bit.
    pub fn to_tuple(self, w: usize) -> (u16, u8, u16) {
        match self {
            ReachCode::Null => ((2 * (w + 1) + 1) as u16, 0, 0),
            ReachCode::Carried {
                pred_rank,
                at_pred,
            } => (pred_rank, at_pred as u8, 0),
            ReachCode::VertexStart { offset } => (0, 0, offset + 1),
        }
    }
}

/// Input or output frontier codes of one box: `col_codes[c]` encodes the
/// interval entering column `c` (with respect to the row block), `row_codes[r]`
/// the interval entering row `r` (with respect to the column block).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxIo {
    pub col_codes: Vec<ReachCode>,
    pub row_codes: Vec<ReachCode>,
}

/// Encode a block-entry reachability start with respect to `block`. A
/// nonempty start always lies inside the block's first vertex ball, so it
/// always has a predecessor among the block endpoints.
pub fn encode_start(
    ell: Option<f64>,
    block: BlockSpec,
    block_curve: &Curve,
    edge: &Segment<'_>,
    delta: f64,
) -> Result<ReachCode> {
    let Some(ell) = ell else {
        return Ok(ReachCode::Null);
    };
    let intersections = block.intersections(block_curve, edge, delta);
    let loc = predecessor_rank(ell, &intersections);
    if loc.rank == 0 || loc.rank == 2 * intersections.len() + 1 {
        return Err(Error::NoPredecessor);
    }
    Ok(ReachCode::Carried {
        pred_rank: loc.rank as u16,
        at_pred: loc.is_equal,
    })
}

/// Recover the concrete start parameter from a code. `carried_ell` is the
/// concrete block-entry start carried alongside the frontier; it is required
/// exactly when the code is `Carried`.
pub fn decode_start(
    code: ReachCode,
    block: BlockSpec,
    block_curve: &Curve,
    edge: &Segment<'_>,
    carried_ell: Option<f64>,
    delta: f64,
) -> Result<Option<f64>> {
    match code {
        ReachCode::Null => Ok(None),
        ReachCode::Carried { .. } => carried_ell
            .map(Some)
            .ok_or(Error::InconsistentCarriedStart),
        ReachCode::VertexStart { offset } => {
            let vertex = block.first_vertex + offset as usize;
            let iv = ball_segment_intersection(block_curve.vertex(vertex), edge, delta);
            iv.lo().map(Some).ok_or(Error::InconsistentCarriedStart)
        }
    }
}

/// "The point with rank `q_rank` is not in front of the encoded start." For a
/// vertex start this is exact because the tie-break order places the queried
/// points (starts and ends of later vertices) after it at equal parameters.
/// For a carried start it is exact because [`predecessor_rank`] anchors the
/// equality case at the first endpoint of its tie group: with the equality
/// bit set, the endpoints not in front of the start are exactly those ranked
/// at or above `pred_rank`; without it, exactly those ranked above it.
fn rank_not_in_front(code: ReachCode, q_rank: u16, sig: &Signature) -> bool {
    match code {
        ReachCode::VertexStart { offset } => q_rank > sig.s_rank(offset as usize),
        ReachCode::Carried {
            pred_rank,
            at_pred,
        } => {
            if at_pred {
                q_rank >= pred_rank
            } else {
                q_rank > pred_rank
            }
        }
        ReachCode::Null => unreachable!("null code has no start"),
    }
}

/// One cell of the box DP on codes alone. `col_code` encodes the interval
/// below the cell (row block frame, column signature `col_sig`), `row_code`
/// the interval left of the cell (column block frame, row signature
/// `row_sig`); `r` and `c` are the cell's offsets inside the box. Returns the
/// codes of the upper and right intervals.
pub fn propagate_code_cell(
    col_code: ReachCode,
    row_code: ReachCode,
    col_sig: &Signature,
    row_sig: &Signature,
    r: usize,
    c: usize,
) -> (ReachCode, ReachCode) {
    (
        advance_code(row_code, col_code, col_sig, r),
        advance_code(col_code, row_code, row_sig, c),
    )
}

fn advance_code(
    side: ReachCode,
    straight: ReachCode,
    sig: &Signature,
    offset: usize,
) -> ReachCode {
    let next = offset + 1;
    let s_rank = sig.s_rank(next);
    if s_rank == sig.sentinel() {
        // The next vertex's ball misses the edge entirely.
        return ReachCode::Null;
    }
    if !side.is_null() {
        return ReachCode::VertexStart {
            offset: next as u16,
        };
    }
    if straight.is_null() {
        return ReachCode::Null;
    }
    if rank_not_in_front(straight, s_rank, sig) {
        ReachCode::VertexStart {
            offset: next as u16,
        }
    } else if rank_not_in_front(straight, sig.e_rank(next), sig) {
        straight
    } else {
        ReachCode::Null
    }
}

/// Process a whole box row by row on codes: `col_sigs[c]` is the signature of
/// the row block against the box's `c`-th column edge, `row_sigs[r]` the
/// signature of the column block against the box's `r`-th row edge. The
/// output depends on the signatures and input codes only.
pub fn process_box(input: &BoxIo, col_sigs: &[Signature], row_sigs: &[Signature]) -> BoxIo {
    let rows = row_sigs.len();
    let cols = col_sigs.len();
    assert_eq!(input.col_codes.len(), cols);
    assert_eq!(input.row_codes.len(), rows);
    let mut col_codes = input.col_codes.clone();
    let mut row_codes = Vec::with_capacity(rows);
    for r in 0..rows {
        let mut row_code = input.row_codes[r];
        for c in 0..cols {
            let (up, right) =
                propagate_code_cell(col_codes[c], row_code, &col_sigs[c], &row_sigs[r], r, c);
            col_codes[c] = up;
            row_code = right;
        }
        row_codes.push(row_code);
    }
    BoxIo {
        col_codes,
        row_codes,
    }
}

// ---------------------------------------------------------------------------
// Packed representation.
//
// Stable bit layout, little-endian within the byte stream: all column codes,
// then all row codes. Each code is the canonical 3-tuple (pi, beta, gamma)
// packed as pi (ceil(log2(2(W+1)+2)) bits), beta (1 bit), gamma
// (ceil(log2(W+2)) bits), where W is the width of the frame block: the row
// block for column codes, the column block for row codes.
// ---------------------------------------------------------------------------

fn bits_for(values: usize) -> u32 {
    // Number of bits for values in [0, values-1].
    usize::BITS - (values - 1).leading_zeros()
}

fn pi_bits(w: usize) -> u32 {
    bits_for(2 * (w + 1) + 2)
}

fn gamma_bits(w: usize) -> u32 {
    bits_for(w + 2)
}

struct BitWriter {
    bytes: Vec<u8>,
    bit: u32,
}

impl BitWriter {
    fn new() -> BitWriter {
        BitWriter {
            bytes: Vec::new(),
            bit: 0,
        }
    }

    fn push(&mut self, value: u64, width: u32) {
        debug_assert!(width == 64 || value < (1u64 << width));
        for k in 0..width {
            if self.bit % 8 == 0 {
                self.bytes.push(0);
            }
            let b = (value >> k) & 1;
            let idx = (self.bit / 8) as usize;
            self.bytes[idx] |= (b as u8) << (self.bit % 8);
            self.bit += 1;
        }
    }
}

struct BitReader<'a> {
    bytes: &'a [u8],
    bit: u32,
}

impl<'a> BitReader<'a> {
    fn read(&mut self, width: u32) -> u64 {
        let mut v = 0u64;
        for k in 0..width {
            let idx = (self.bit / 8) as usize;
            let b = (self.bytes[idx] >> (self.bit % 8)) & 1;
            v |= (b as u64) << k;
            self.bit += 1;
        }
        v
    }
}

/// Total packed size in bytes for a box with row-block width `row_w` (frames
/// the column codes) and column-block width `col_w` (frames the row codes).
pub fn packed_len(row_w: usize, col_w: usize, cols: usize, rows: usize) -> usize {
    let bits = cols as u32 * (pi_bits(row_w) + 1 + gamma_bits(row_w))
        + rows as u32 * (pi_bits(col_w) + 1 + gamma_bits(col_w));
    bits.div_ceil(8) as usize
}

/// Pack a box frontier into its canonical bitstring.
pub fn pack_box_io(io: &BoxIo, row_w: usize, col_w: usize) -> Vec<u8> {
    let mut w = BitWriter::new();
    for &code in &io.col_codes {
        let (pi, beta, gamma) = code.to_tuple(row_w);
        w.push(pi as u64, pi_bits(row_w));
        w.push(beta as u64, 1);
        w.push(gamma as u64, gamma_bits(row_w));
    }
    for &code in &io.row_codes {
        let (pi, beta, gamma) = code.to_tuple(col_w);
        w.push(pi as u64, pi_bits(col_w));
        w.push(beta as u64, 1);
        w.push(gamma as u64, gamma_bits(col_w));
    }
    w.bytes
}

fn decode_tuple(pi: u64, beta: u64, gamma: u64, w: usize, index: usize) -> Result<ReachCode> {
    let sentinel = (2 * (w + 1) + 1) as u64;
    let invalid = Error::PackedFieldInvalid { index };
    if pi == sentinel {
        if beta != 0 || gamma != 0 {
            return Err(invalid);
        }
        return Ok(ReachCode::Null);
    }
    if gamma >= 1 {
        if gamma > (w + 1) as u64 || pi != 0 || beta != 0 {
            return Err(invalid);
        }
        return Ok(ReachCode::VertexStart {
            offset: (gamma - 1) as u16,
        });
    }
    if pi < 1 || pi > sentinel - 1 {
        return Err(invalid);
    }
    Ok(ReachCode::Carried {
        pred_rank: pi as u16,
        at_pred: beta == 1,
    })
}

/// Inverse of [`pack_box_io`]. Rejects length mismatches, nonzero padding
/// bits, out-of-domain fields, and non-canonical encodings, so distinct valid
/// `BoxIo` values correspond one-to-one to distinct byte strings.
pub fn unpack_box_io(
    bytes: &[u8],
    row_w: usize,
    col_w: usize,
    cols: usize,
    rows: usize,
) -> Result<BoxIo> {
    let expected = packed_len(row_w, col_w, cols, rows);
    if bytes.len() != expected {
        return Err(Error::PackedLengthMismatch {
            got: bytes.len(),
            expected,
        });
    }
    let mut r = BitReader { bytes, bit: 0 };
    let mut col_codes = Vec::with_capacity(cols);
    for index in 0..cols {
        let pi = r.read(pi_bits(row_w));
        let beta = r.read(1);
        let gamma = r.read(gamma_bits(row_w));
        col_codes.push(decode_tuple(pi, beta, gamma, row_w, index)?);
    }
    let mut row_codes = Vec::with_capacity(rows);
    for index in 0..rows {
        let pi = r.read(pi_bits(col_w));
        let beta = r.read(1);
        let gamma = r.read(gamma_bits(col_w));
        row_codes.push(decode_tuple(pi, beta, gamma, col_w, cols + index)?);
    }
    // Padding bits must be zero for canonical byte strings.
    let used = r.bit;
    let total = bytes.len() as u32 * 8;
    let mut check = BitReader { bytes, bit: used };
    if check.read(total - used) != 0 {
        return Err(Error::PackedFieldInvalid {
            index: cols + rows,
        });
    }
    Ok(BoxIo {
        col_codes,
        row_codes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn curve(coords: &[(f64, f64)]) -> Curve {
        Curve::new(coords.iter().map(|&(x, y)| Point::new(vec![x, y])).collect()).unwrap()
    }

    /// The ordering template from the worked example: five balls on one edge
    /// whose endpoint order is s1 e1 s2 e2 s3 s4 e3 e4 with the fifth ball
    /// missing the edge.
    #[test]
    fn signature_matches_figure_template() {
        let tau = curve(&[
            (1.0, 0.0),
            (4.0, 0.0),
            (6.2, 0.0),
            (6.6, 0.0),
            (20.0, 20.0),
        ]);
        let sigma = curve(&[(0.0, 0.0), (10.0, 0.0)]);
        let block = BlockSpec::new(0, 4);
        let sig = compute_signature(block, &tau, &sigma.edge(0), 1.0);
        assert_eq!(sig.ranks(), &[1, 2, 3, 4, 5, 7, 6, 8, 11, 11]);
    }

    #[test]
    fn signature_all_sentinel_when_all_balls_miss() {
        let tau = curve(&[(0.0, 50.0), (1.0, 50.0), (2.0, 50.0)]);
        let sigma = curve(&[(0.0, 0.0), (1.0, 0.0)]);
        let block = BlockSpec::new(0, 2);
        let sig = compute_signature(block, &tau, &sigma.edge(0), 1.0);
        assert!(sig.ranks().iter().all(|&r| r == sig.sentinel()));
        assert_eq!(sig.sentinel(), 7);
    }

    #[test]
    fn signature_equals_brute_force_on_random_blocks() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let w = rng.gen_range(1..=5);
            let tau = Curve::new(
                (0..=w)
                    .map(|_| Point::new(vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]))
                    .collect(),
            );
            let Ok(tau) = tau else { continue };
            let sigma = curve(&[(-1.0, 0.3), (1.5, -0.2)]);
            let delta = rng.gen_range(0.0..2.0);
            let block = BlockSpec::new(0, w);
            let sig = compute_signature(block, &tau, &sigma.edge(0), delta);
            // Brute force: materialize, sort, assign.
            let ivs = block.intersections(&tau, &sigma.edge(0), delta);
            let sorted = sorted_endpoints(&ivs);
            for (idx, ep) in sorted.iter().enumerate() {
                let got = match ep.kind {
                    EndpointKind::Start => sig.s_rank(ep.vertex_offset),
                    EndpointKind::End => sig.e_rank(ep.vertex_offset),
                };
                assert_eq!(got as usize, idx + 1);
            }
            let non_null = sorted.len();
            let sentinels = sig.ranks().iter().filter(|&&r| r == sig.sentinel()).count();
            assert_eq!(sentinels, 2 * (w + 1) - non_null);
        }
    }

    #[test]
    fn encode_decode_round_trip() {
        let tau = curve(&[(0.0, 0.5), (1.0, 0.4), (2.0, 0.6), (3.0, 0.5)]);
        let sigma = curve(&[(0.0, 0.0), (3.0, 0.0)]);
        let block = BlockSpec::new(0, 3);
        let edge = sigma.edge(0);
        let delta = 0.9;
        // Null round-trips.
        let null = encode_start(None, block, &tau, &edge, delta).unwrap();
        assert_eq!(null, ReachCode::Null);
        assert_eq!(
            decode_start(null, block, &tau, &edge, None, delta).unwrap(),
            None
        );
        // A start inside the first ball round-trips through the carried slot.
        let iv = ball_segment_intersection(tau.vertex(0), &edge, delta);
        let (lo, hi) = iv.bounds().unwrap();
        for f in [0.0, 0.25, 0.5, 1.0] {
            let ell = lo + f * (hi - lo);
            let code = encode_start(Some(ell), block, &tau, &edge, delta).unwrap();
            assert!(matches!(code, ReachCode::Carried { .. }));
            let back = decode_start(code, block, &tau, &edge, Some(ell), delta).unwrap();
            assert_eq!(back, Some(ell));
        }
        // Equality flag set when the start coincides with an endpoint.
        let code = encode_start(Some(lo), block, &tau, &edge, delta).unwrap();
        let ReachCode::Carried { at_pred, .. } = code else {
            panic!()
        };
        assert!(at_pred);
    }

    #[test]
    fn decode_carried_without_value_errors() {
        let tau = curve(&[(0.0, 0.5), (1.0, 0.4)]);
        let sigma = curve(&[(0.0, 0.0), (3.0, 0.0)]);
        let block = BlockSpec::new(0, 1);
        let code = ReachCode::Carried {
            pred_rank: 1,
            at_pred: false,
        };
        let err = decode_start(code, block, &tau, &sigma.edge(0), None, 0.9).unwrap_err();
        assert!(matches!(err, Error::InconsistentCarriedStart));
    }

    #[test]
    fn propagate_all_null() {
        let tau = curve(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        let sigma = curve(&[(0.0, 1.0), (1.0, 1.0), (2.0, 1.0)]);
        let block = BlockSpec::new(0, 2);
        let col_sig = compute_signature(block, &tau, &sigma.edge(0), 0.5);
        let row_sig = compute_signature(BlockSpec::new(0, 2), &sigma, &tau.edge(0), 0.5);
        let (up, right) = propagate_code_cell(
            ReachCode::Null,
            ReachCode::Null,
            &col_sig,
            &row_sig,
            0,
            0,
        );
        assert!(up.is_null() && right.is_null());
    }

    #[test]
    fn pack_unpack_identity_and_injectivity() {
        use std::collections::HashSet;
        let row_w = 3;
        let col_w = 2;
        let codes_for = |w: usize| {
            let mut v = vec![ReachCode::Null];
            for offset in 0..=(w as u16) {
                v.push(ReachCode::VertexStart { offset });
            }
            for rank in 1..=(2 * (w + 1)) as u16 {
                v.push(ReachCode::Carried {
                    pred_rank: rank,
                    at_pred: rank % 2 == 0,
                });
            }
            v
        };
        let col_pool = codes_for(row_w);
        let row_pool = codes_for(col_w);
        let mut seen = HashSet::new();
        let mut count = 0;
        for a in &col_pool {
            for b in &col_pool {
                for c in &row_pool {
                    let io = BoxIo {
                        col_codes: vec![*a, *b],
                        row_codes: vec![*c],
                    };
                    let bytes = pack_box_io(&io, row_w, col_w);
                    assert_eq!(bytes.len(), packed_len(row_w, col_w, 2, 1));
                    let back = unpack_box_io(&bytes, row_w, col_w, 2, 1).unwrap();
                    assert_eq!(back, io);
                    assert!(seen.insert(bytes), "duplicate packing");
                    count += 1;
                }
            }
        }
        assert!(count > 500);
    }

    #[test]
    fn unpack_rejects_bad_input() {
        let io = BoxIo {
            col_codes: vec![ReachCode::Null, ReachCode::VertexStart { offset: 1 }],
            row_codes: vec![ReachCode::Null],
        };
        let bytes = pack_box_io(&io, 3, 2);
        // Wrong length.
        assert!(matches!(
            unpack_box_io(&bytes[..bytes.len() - 1], 3, 2, 2, 1),
            Err(Error::PackedLengthMismatch { .. })
        ));
        // Corrupt padding.
        let mut bad = bytes.clone();
        *bad.last_mut().unwrap() |= 0x80;
        assert!(unpack_box_io(&bad, 3, 2, 2, 1).is_err());
    }

    #[test]
    fn all_sentinel_packs_canonically() {
        let io = BoxIo {
            col_codes: vec![ReachCode::Null; 2],
            row_codes: vec![ReachCode::Null; 3],
        };
        let bytes = pack_box_io(&io, 2, 2);
        let again = pack_box_io(
            &unpack_box_io(&bytes, 2, 2, 2, 3).unwrap(),
            2,
            2,
        );
        assert_eq!(bytes, again);
    }
}
