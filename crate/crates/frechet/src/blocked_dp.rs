//! The blocked decision procedure: partition the DP table into boxes of
//! `alpha x theta` cells, drive [`process_box`] through a memo table keyed by
//! (signature digest, packed input codes, box widths), and recode frontier
//! codes at block boundaries. Row codes are recoded at every box step
//! rightward; column codes once per block row.

use crate::encoding::{
    compute_signature, decode_start, encode_start, pack_box_io, process_box, unpack_box_io,
    BlockSpec, BoxIo, ReachCode, Signature,
};
use crate::error::{Error, Result};
use crate::freespace::{self, DecisionResult};
use crate::geometry::{ball_segment_intersection, Curve};
use sha2::{Digest, Sha256};
use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

/// Version of the packed code layout; bumped whenever the bit layout or the
/// digest serialization changes. Persisted memo files carry it.
pub const CODE_LAYOUT_VERSION: u32 = 1;

/// Block tiling of both curves. Blocks overlap in exactly one vertex; final
/// blocks may be narrower.
#[derive(Debug, Clone)]
pub struct Partition {
    pub alpha: usize,
    pub theta: usize,
    pub row_blocks: Vec<BlockSpec>,
    pub col_blocks: Vec<BlockSpec>,
}

impl Partition {
    pub fn box_count(&self) -> usize {
        self.row_blocks.len() * self.col_blocks.len()
    }
}

fn tile(edge_count: usize, width: usize) -> Vec<BlockSpec> {
    let mut blocks = Vec::new();
    let mut first = 0;
    while first < edge_count {
        let w = width.min(edge_count - first);
        blocks.push(BlockSpec::new(first, w));
        first += w;
    }
    blocks
}

/// Build the tiling for curves with `n` and `m` vertices. Defaults:
/// `alpha = max(2, floor(log2 m / log2 log2 m))` and
/// `theta = max(1, floor(sqrt(alpha)))`.
pub fn make_partition(
    n: usize,
    m: usize,
    alpha: Option<usize>,
    theta: Option<usize>,
) -> Result<Partition> {
    assert!(n >= 2 && m >= 2);
    let alpha = match alpha {
        Some(a) if a >= 1 => a,
        Some(_) => return Err(Error::BadPartitionParameter),
        None => default_alpha(m),
    };
    let theta = match theta {
        Some(t) if t >= 1 => t,
        Some(_) => return Err(Error::BadPartitionParameter),
        None => ((alpha as f64).sqrt().floor() as usize).max(1),
    };
    Ok(Partition {
        alpha,
        theta,
        row_blocks: tile(n - 1, alpha),
        col_blocks: tile(m - 1, theta),
    })
}

pub fn default_alpha(m: usize) -> usize {
    let lm = (m as f64).log2();
    let llm = lm.log2();
    if llm <= 0.0 {
        2
    } else {
        ((lm / llm).floor() as usize).max(2)
    }
}

// ---------------------------------------------------------------------------
// Memo table.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct MemoKey {
    digest: [u8; 16],
    row_w: u16,
    col_w: u16,
    input: Vec<u8>,
}

struct MemoEntry {
    output: Vec<u8>,
    /// Retained in debug mode for digest-collision auditing.
    sigs: Option<(Vec<Signature>, Vec<Signature>)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemoStats {
    pub entries: usize,
    pub hits: u64,
    pub misses: u64,
}

/// Memoized (box signature, input encoding) -> output encoding map. In debug
/// mode every hit is recomputed through [`process_box`] and compared
/// bit-exactly, and stored signatures are checked against the queried ones to
/// audit digest collisions.
pub struct MemoTable {
    map: HashMap<MemoKey, MemoEntry>,
    hits: u64,
    misses: u64,
    debug: bool,
    verified_hits: u64,
}

impl Default for MemoTable {
    fn default() -> Self {
        MemoTable::new()
    }
}

impl MemoTable {
    pub fn new() -> MemoTable {
        MemoTable {
            map: HashMap::new(),
            hits: 0,
            misses: 0,
            debug: false,
            verified_hits: 0,
        }
    }

    pub fn with_debug_verification() -> MemoTable {
        MemoTable {
            debug: true,
            ..MemoTable::new()
        }
    }

    pub fn stats(&self) -> MemoStats {
        MemoStats {
            entries: self.map.len(),
            hits: self.hits,
            misses: self.misses,
        }
    }

    pub fn verified_hits(&self) -> u64 {
        self.verified_hits
    }

    fn digest(col_sigs: &[Signature], row_sigs: &[Signature]) -> [u8; 16] {
        let mut bytes = Vec::new();
        bytes.extend_from_slice(&(col_sigs.len() as u32).to_le_bytes());
        for s in col_sigs {
            s.canonical_bytes(&mut bytes);
        }
        bytes.extend_from_slice(&(row_sigs.len() as u32).to_le_bytes());
        for s in row_sigs {
            s.canonical_bytes(&mut bytes);
        }
        let full = Sha256::digest(&bytes);
        let mut out = [0u8; 16];
        out.copy_from_slice(&full[..16]);
        out
    }

    /// Look up the output codes for `input` under the given box signatures,
    /// computing and caching them on a miss.
    pub fn lookup_or_process(
        &mut self,
        input: &BoxIo,
        col_sigs: &[Signature],
        row_sigs: &[Signature],
        row_w: usize,
        col_w: usize,
    ) -> Result<BoxIo> {
        let key = MemoKey {
            digest: Self::digest(col_sigs, row_sigs),
            row_w: row_w as u16,
            col_w: col_w as u16,
            input: pack_box_io(input, row_w, col_w),
        };
        if let Some(entry) = self.map.get(&key) {
            self.hits += 1;
            if self.debug {
                let recomputed = process_box(input, col_sigs, row_sigs);
                if pack_box_io(&recomputed, row_w, col_w) != entry.output {
                    return Err(Error::MemoAuditFailure);
                }
                if let Some((cs, rs)) = &entry.sigs {
                    if cs.as_slice() != col_sigs || rs.as_slice() != row_sigs {
                        return Err(Error::MemoAuditFailure);
                    }
                }
                self.verified_hits += 1;
            }
            return unpack_box_io(&entry.output, row_w, col_w, col_sigs.len(), row_sigs.len());
        }
        self.misses += 1;
        let output = process_box(input, col_sigs, row_sigs);
        let entry = MemoEntry {
            output: pack_box_io(&output, row_w, col_w),
            sigs: self
                .debug
                .then(|| (col_sigs.to_vec(), row_sigs.to_vec())),
        };
        self.map.insert(key, entry);
        Ok(output)
    }

    /// Persist entries as a versioned binary file, additionally keyed by the
    /// partition parameters the table was built for.
    pub fn save(&self, path: &Path, alpha: usize, theta: usize) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        w.write_all(b"FMEMO\0")?;
        w.write_all(&CODE_LAYOUT_VERSION.to_le_bytes())?;
        w.write_all(&(alpha as u32).to_le_bytes())?;
        w.write_all(&(theta as u32).to_le_bytes())?;
        w.write_all(&(self.map.len() as u64).to_le_bytes())?;
        let mut keys: Vec<&MemoKey> = self.map.keys().collect();
        keys.sort_by(|a, b| {
            (a.digest, a.row_w, a.col_w, &a.input).cmp(&(b.digest, b.row_w, b.col_w, &b.input))
        });
        for key in keys {
            let entry = &self.map[key];
            w.write_all(&key.digest)?;
            w.write_all(&key.row_w.to_le_bytes())?;
            w.write_all(&key.col_w.to_le_bytes())?;
            w.write_all(&(key.input.len() as u32).to_le_bytes())?;
            w.write_all(&key.input)?;
            w.write_all(&(entry.output.len() as u32).to_le_bytes())?;
            w.write_all(&entry.output)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path, alpha: usize, theta: usize) -> Result<MemoTable> {
        let bytes = std::fs::read(path)?;
        Self::load_from_bytes(&bytes, alpha, theta)
    }

    /// Parse a persisted memo table. The `alpha`/`theta` arguments are the
    /// parameters of the partition the caller is about to use; a mismatch is
    /// an error.
    pub fn load_from_bytes(bytes: &[u8], alpha: usize, theta: usize) -> Result<MemoTable> {
        let mut r = bytes;
        let mut magic = [0u8; 6];
        read_exact(&mut r, &mut magic)?;
        if &magic != b"FMEMO\0" {
            return Err(Error::MemoFileMalformed("bad magic".into()));
        }
        let version = read_u32(&mut r)?;
        if version != CODE_LAYOUT_VERSION {
            return Err(Error::MemoVersionMismatch {
                got: version,
                expected: CODE_LAYOUT_VERSION,
            });
        }
        let file_alpha = read_u32(&mut r)? as usize;
        let file_theta = read_u32(&mut r)? as usize;
        if file_alpha != alpha || file_theta != theta {
            return Err(Error::MemoParamMismatch {
                file_alpha,
                file_theta,
            });
        }
        let count = read_u64(&mut r)?;
        if count > (bytes.len() as u64) {
            return Err(Error::MemoFileMalformed("entry count too large".into()));
        }
        let mut map = HashMap::new();
        for _ in 0..count {
            let mut digest = [0u8; 16];
            read_exact(&mut r, &mut digest)?;
            let mut w2 = [0u8; 2];
            read_exact(&mut r, &mut w2)?;
            let row_w = u16::from_le_bytes(w2);
            read_exact(&mut r, &mut w2)?;
            let col_w = u16::from_le_bytes(w2);
            if row_w == 0 || col_w == 0 || row_w > 4096 || col_w > 4096 {
                return Err(Error::MemoFileMalformed("implausible box widths".into()));
            }
            let input = read_vec(&mut r)?;
            let output = read_vec(&mut r)?;
            map.insert(
                MemoKey {
                    digest,
                    row_w,
                    col_w,
                    input,
                },
                MemoEntry {
                    output,
                    sigs: None,
                },
            );
        }
        if !r.is_empty() {
            return Err(Error::MemoFileMalformed("trailing bytes".into()));
        }
        Ok(MemoTable {
            map,
            hits: 0,
            misses: 0,
            debug: false,
            verified_hits: 0,
        })
    }
}

fn read_exact(r: &mut &[u8], buf: &mut [u8]) -> Result<()> {
    r.read_exact(buf)
        .map_err(|_| Error::MemoFileMalformed("unexpected end of file".into()))
}

fn read_u32(r: &mut &[u8]) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact(r, &mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64(r: &mut &[u8]) -> Result<u64> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_vec(r: &mut &[u8]) -> Result<Vec<u8>> {
    let len = read_u32(r)? as usize;
    if len > r.len() {
        return Err(Error::MemoFileMalformed("length prefix too large".into()));
    }
    let (head, tail) = r.split_at(len);
    *r = tail;
    Ok(head.to_vec())
}

/// Exact counters: `(entries, hits, misses)`.
pub fn memo_stats(memo: &MemoTable) -> MemoStats {
    memo.stats()
}

// ---------------------------------------------------------------------------
// Frontiers.
// ---------------------------------------------------------------------------

/// One frontier record: the code of a reachability interval plus, when the
/// code refers to the block-entry start, the concrete parameter it stands
/// for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontierRec {
    pub code: ReachCode,
    pub carried_ell: Option<f64>,
}

impl FrontierRec {
    fn normalized(code: ReachCode, carried: Option<f64>) -> FrontierRec {
        let carried_ell = match code {
            ReachCode::Carried { .. } => carried,
            _ => None,
        };
        FrontierRec { code, carried_ell }
    }
}

/// Translate frontier records from `old_block`'s frame into `new_block`'s:
/// decode each start to its concrete parameter, then re-encode and carry the
/// decoded value. Record `k` lives on `other.edge(edge_offset + k)`.
pub fn recode_frontier(
    recs: &mut [FrontierRec],
    old_block: BlockSpec,
    new_block: BlockSpec,
    block_curve: &Curve,
    other: &Curve,
    edge_offset: usize,
    delta: f64,
) -> Result<()> {
    for (k, rec) in recs.iter_mut().enumerate() {
        let edge = other.edge(edge_offset + k);
        let ell = decode_start(
            rec.code,
            old_block,
            block_curve,
            &edge,
            rec.carried_ell,
            delta,
        )?;
        let code = encode_start(ell, new_block, block_curve, &edge, delta)?;
        *rec = FrontierRec::normalized(code, ell);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Boxed decision.
// ---------------------------------------------------------------------------

/// Decide `d_F(tau, sigma) <= delta` by processing the table box by box.
/// Produces the same answer as [`freespace::naive_decide`]; the memo table
/// may be shared across calls, deltas, and curve pairs, because the packed
/// transition depends only on signatures and input codes.
pub fn boxed_decide(
    tau: &Curve,
    sigma: &Curve,
    delta: f64,
    partition: &Partition,
    memo: &mut MemoTable,
) -> Result<DecisionResult> {
    if tau.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(tau.dim(), sigma.dim()));
    }
    if tau.len() == 1 || sigma.len() == 1 {
        return freespace::naive_decide(tau, sigma, delta);
    }
    let init = freespace::init_frontiers(tau, sigma, delta);
    let m_edges = sigma.edge_count();

    // Horizontal frontier: codes of the current row-block entry intervals on
    // every sigma edge, in the current row block's frame.
    let first_row_block = partition.row_blocks[0];
    let mut horiz: Vec<FrontierRec> = Vec::with_capacity(m_edges);
    for (j, iv) in init.row_intervals.iter().enumerate() {
        let code = encode_start(iv.lo(), first_row_block, tau, &sigma.edge(j), delta)?;
        horiz.push(FrontierRec::normalized(code, iv.lo()));
    }

    for (k, &row_block) in partition.row_blocks.iter().enumerate() {
        // Vertical frontier: left-boundary intervals of this block row, in
        // the first column block's frame.
        let first_col_block = partition.col_blocks[0];
        let mut vert: Vec<FrontierRec> = Vec::with_capacity(row_block.width);
        for i in row_block.edges() {
            let iv = init.col_intervals[i];
            let code = encode_start(iv.lo(), first_col_block, sigma, &tau.edge(i), delta)?;
            vert.push(FrontierRec::normalized(code, iv.lo()));
        }

        for (l, &col_block) in partition.col_blocks.iter().enumerate() {
            let col_sigs: Vec<Signature> = col_block
                .edges()
                .map(|j| compute_signature(row_block, tau, &sigma.edge(j), delta))
                .collect();
            let row_sigs: Vec<Signature> = row_block
                .edges()
                .map(|i| compute_signature(col_block, sigma, &tau.edge(i), delta))
                .collect();
            let input = BoxIo {
                col_codes: col_block
                    .edges()
                    .map(|j| horiz[j].code)
                    .collect(),
                row_codes: vert.iter().map(|r| r.code).collect(),
            };
            let output = memo.lookup_or_process(
                &input,
                &col_sigs,
                &row_sigs,
                row_block.width,
                col_block.width,
            )?;
            for (c, j) in col_block.edges().enumerate() {
                let carried = horiz[j].carried_ell;
                horiz[j] = FrontierRec::normalized(output.col_codes[c], carried);
            }
            for (r, rec) in vert.iter_mut().enumerate() {
                *rec = FrontierRec::normalized(output.row_codes[r], rec.carried_ell);
            }
            if l + 1 < partition.col_blocks.len() {
                recode_frontier(
                    &mut vert,
                    col_block,
                    partition.col_blocks[l + 1],
                    sigma,
                    tau,
                    row_block.first_vertex,
                    delta,
                )?;
            }
        }

        if k + 1 < partition.row_blocks.len() {
            recode_frontier(
                &mut horiz,
                row_block,
                partition.row_blocks[k + 1],
                tau,
                sigma,
                0,
                delta,
            )?;
        }
    }

    // Decode the last column's code in the final block's frame and test
    // whether the curve ends match up.
    let last_block = *partition.row_blocks.last().unwrap();
    let last_edge = sigma.edge(m_edges - 1);
    let rec = &horiz[m_edges - 1];
    let ell = decode_start(rec.code, last_block, tau, &last_edge, rec.carried_ell, delta)?;
    let reachable = match ell {
        None => false,
        Some(_) => {
            let ball = ball_segment_intersection(tau.vertex(tau.len() - 1), &last_edge, delta);
            ball.hi() == Some(1.0)
        }
    };
    Ok(DecisionResult {
        reachable,
        table: None,
    })
}
