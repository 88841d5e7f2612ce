//! Parallel stream creation and partitioning.
//!
//! Four ways to hand out non-overlapping randomness to workers:
//!
//! * [`spawn_generators`] — one seeded generator per spawned child sequence;
//!   each stream is re-derivable from `(entropy, spawn_key)`.
//! * [`jumped`] — clone a PCG64 stream and skip it ahead by a fixed huge
//!   stride per jump.
//! * [`leapfrog`] — task `t` of `T` takes every `T`-th output of the mother
//!   stream.
//! * [`assign_block`] — task `t` takes the contiguous words `[tN, (t+1)N)`,
//!   with a [`BlockLedger`] refusing to hand out the same block twice.

use std::collections::BTreeSet;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::bitgen::{BitGeneratorState, BitSource};
use crate::dispatch::GeneratorHandle;
use crate::error::{Error, Result};
use crate::seedseq::SeedSequence;

/// Jump stride for PCG64: floor((phi - 1) * 2^128) with phi the golden
/// ratio, computed in exact integer arithmetic (see `jump_stride_derivation`
/// in the tests).
pub const PCG64_JUMP_STRIDE: u128 = 0x9e37_79b9_7f4a_7c15_f39c_c060_5ced_c834;

/// Spawn `n` child generators from a seed sequence. Each handle is seeded
/// from one spawned child, so it is independently re-derivable from the
/// root entropy plus the child's spawn key, and grandchildren can be spawned
/// from a child's own sequence.
pub fn spawn_generators(seq: &mut SeedSequence, n: usize) -> Result<Vec<GeneratorHandle>> {
    Ok(seq
        .spawn(n)?
        .into_iter()
        .map(GeneratorHandle::from_seed_sequence)
        .collect())
}

/// A new handle whose state has been advanced by `jumps` times the PCG64
/// jump stride. The original handle is untouched. Only PCG64 supports
/// jump-ahead here; other engines report an unsupported-operation error.
pub fn jumped(handle: &GeneratorHandle, jumps: u128) -> Result<GeneratorHandle> {
    match handle.snapshot() {
        BitGeneratorState::Pcg64(mut gen) => {
            gen.advance(PCG64_JUMP_STRIDE.wrapping_mul(jumps));
            Ok(handle.derived(BitGeneratorState::Pcg64(gen)))
        }
        other => Err(Error::JumpUnsupported {
            generator: other.kind().name(),
        }),
    }
}

/// Position of one task inside a partitioned mother stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StreamPartition {
    /// Total task count T.
    pub total: u64,
    /// This task's index t, 0 <= t < T.
    pub index: u64,
    /// Block length N for blocking mode; absent for leap-frogging.
    pub block_len: Option<u64>,
}

impl StreamPartition {
    pub fn striding(total: u64, index: u64) -> Result<Self> {
        if total == 0 {
            return Err(Error::ZeroTaskCount);
        }
        if index >= total {
            return Err(Error::TaskOutOfRange { task: index, total });
        }
        Ok(StreamPartition {
            total,
            index,
            block_len: None,
        })
    }

    pub fn blocking(total: u64, index: u64, block_len: u64) -> Result<Self> {
        if block_len == 0 {
            return Err(Error::ZeroBlockLength);
        }
        let mut partition = Self::striding(total, index)?;
        partition.block_len = Some(block_len);
        Ok(partition)
    }
}

/// Leap-frog view: output `j` equals mother-stream output `j*T + t`.
///
/// The view owns a copy of the mother state taken at creation, so the views
/// for `t = 0..T` interleave back into the mother stream exactly. Skipping is
/// done by discarding draws, which is correct for every engine at the cost of
/// generating T words per output.
#[derive(Debug)]
pub struct Leapfrog {
    gen: BitGeneratorState,
    stride: u64,
}

pub fn leapfrog(handle: &GeneratorHandle, total: u64, index: u64) -> Result<Leapfrog> {
    let partition = StreamPartition::striding(total, index)?;
    let mut gen = handle.snapshot();
    for _ in 0..partition.index {
        let _ = gen.next_u64();
    }
    Ok(Leapfrog {
        gen,
        stride: partition.total,
    })
}

impl Leapfrog {
    pub fn next_u64(&mut self) -> u64 {
        let word = self.gen.next_u64();
        for _ in 1..self.stride {
            let _ = self.gen.next_u64();
        }
        word
    }
}

impl BitSource for Leapfrog {
    fn next_u64(&mut self) -> u64 {
        Leapfrog::next_u64(self)
    }
}

/// One assigned block: words `[offset, offset + length)` of a named stream.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockDescriptor {
    pub stream_id: String,
    pub task: u64,
    pub offset: u128,
    pub length: u64,
}

/// Record of handed-out blocks, preventing overlap reuse. Optionally persisted
/// as an append-only text file (one record per line, tab-separated, with a
/// per-line checksum so truncation or editing is detected on reload).
#[derive(Debug, Default)]
pub struct BlockLedger {
    assigned: BTreeSet<(String, u64)>,
    path: Option<PathBuf>,
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &byte in bytes {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(0x100_0000_01b3);
    }
    hash
}

fn ledger_record(stream_id: &str, task: u64, block_len: u64) -> String {
    let body = format!("{stream_id}\t{task}\t{block_len}");
    let checksum = fnv1a64(body.as_bytes());
    format!("{body}\t{checksum:016x}\n")
}

impl BlockLedger {
    /// Ledger without persistence.
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Ledger backed by `path`; existing records are loaded and verified.
    pub fn with_persistence(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut assigned = BTreeSet::new();
        if path.exists() {
            let contents = std::fs::read_to_string(&path)?;
            for (idx, line) in contents.lines().enumerate() {
                let line_no = idx + 1;
                let fields: Vec<&str> = line.split('\t').collect();
                if fields.len() != 4 {
                    return Err(Error::LedgerCorrupt {
                        line: line_no,
                        reason: format!("expected 4 tab-separated fields, got {}", fields.len()),
                    });
                }
                let task: u64 = fields[1].parse().map_err(|_| Error::LedgerCorrupt {
                    line: line_no,
                    reason: format!("bad task index {:?}", fields[1]),
                })?;
                let block_len: u64 = fields[2].parse().map_err(|_| Error::LedgerCorrupt {
                    line: line_no,
                    reason: format!("bad block length {:?}", fields[2]),
                })?;
                let body = format!("{}\t{}\t{}", fields[0], task, block_len);
                let expected = format!("{:016x}", fnv1a64(body.as_bytes()));
                if fields[3] != expected {
                    return Err(Error::LedgerCorrupt {
                        line: line_no,
                        reason: "checksum mismatch".to_string(),
                    });
                }
                assigned.insert((fields[0].to_string(), task));
            }
        }
        Ok(BlockLedger {
            assigned,
            path: Some(path),
        })
    }

    pub fn len(&self) -> usize {
        self.assigned.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assigned.is_empty()
    }

    pub fn is_assigned(&self, stream_id: &str, task: u64) -> bool {
        self.assigned.contains(&(stream_id.to_string(), task))
    }

    /// Record `(stream_id, task)` and return the block descriptor. A second
    /// assignment of the same pair is an overlap error; the set only grows.
    pub fn assign(
        &mut self,
        stream_id: &str,
        task: u64,
        block_len: u64,
    ) -> Result<BlockDescriptor> {
        if stream_id.is_empty() || stream_id.contains(['\t', '\n', '\r']) {
            return Err(Error::InvalidStreamId(stream_id.to_string()));
        }
        if block_len == 0 {
            return Err(Error::ZeroBlockLength);
        }
        let key = (stream_id.to_string(), task);
        if self.assigned.contains(&key) {
            return Err(Error::BlockOverlap {
                stream_id: stream_id.to_string(),
                task,
            });
        }
        if let Some(path) = &self.path {
            let mut file = OpenOptions::new().create(true).append(true).open(path)?;
            file.write_all(ledger_record(stream_id, task, block_len).as_bytes())?;
            file.flush()?;
        }
        self.assigned.insert(key);
        Ok(BlockDescriptor {
            stream_id: stream_id.to_string(),
            task,
            offset: u128::from(task) * u128::from(block_len),
            length: block_len,
        })
    }
}

/// Assign block `task` of length `block_len` from `base`'s stream, recording
/// it in the ledger, and return the descriptor together with a handle
/// positioned at the block start (the base stream advanced by `task *
/// block_len` draws via jump-ahead).
pub fn assign_block(
    ledger: &mut BlockLedger,
    base: &GeneratorHandle,
    stream_id: &str,
    task: u64,
    block_len: u64,
) -> Result<(BlockDescriptor, GeneratorHandle)> {
    // Refuse unsupported engines before touching the ledger.
    let mut gen = match base.snapshot() {
        BitGeneratorState::Pcg64(gen) => gen,
        other => {
            return Err(Error::JumpUnsupported {
                generator: other.kind().name(),
            })
        }
    };
    let descriptor = ledger.assign(stream_id, task, block_len)?;
    gen.advance(descriptor.offset);
    let handle = base.derived(BitGeneratorState::Pcg64(gen));
    Ok((descriptor, handle))
}

/// Exact probability that `n` streams keyed with `key_bits` independent
/// uniform bits contain at least one key collision:
/// `1 - prod_{i=1}^{n-1} (1 - i / 2^key_bits)`.
///
/// Evaluated in fixed-point big-integer arithmetic with at least 256
/// fractional bits; a double product would round any factor within `2^-53`
/// of one to exactly one.
pub fn collision_probability(n_streams: u64, key_bits: u32) -> f64 {
    assert!(key_bits >= 1, "key_bits must be at least 1");
    if n_streams < 2 {
        return 0.0;
    }
    let cells = BigUint::one() << key_bits;
    if BigUint::from(n_streams - 1) >= cells {
        return 1.0; // more streams than keys: collision certain
    }

    let frac_bits = 256u32.max(key_bits + 64);
    let one = BigUint::one() << frac_bits;
    let mut product = one.clone();
    for i in 1..n_streams {
        // 1 - i/2^k scaled by 2^frac_bits, exact because frac_bits >= k.
        let factor = &one - (BigUint::from(i) << (frac_bits - key_bits));
        product = (product * factor) >> frac_bits;
    }
    big_ratio_to_f64(&(&one - &product), frac_bits)
}

/// The standard birthday approximation `1 - exp(-n(n-1) / 2^(key_bits+1))`.
pub fn collision_probability_approx(n_streams: u64, key_bits: u32) -> f64 {
    assert!(key_bits >= 1, "key_bits must be at least 1");
    if n_streams < 2 {
        return 0.0;
    }
    let pairs = u128::from(n_streams) * u128::from(n_streams - 1);
    let exponent = pairs.to_f64().expect("u128 converts") / pow2_f64(key_bits + 1);
    -(-exponent).exp_m1()
}

fn big_ratio_to_f64(numerator: &BigUint, frac_bits: u32) -> f64 {
    numerator.to_f64().unwrap_or(f64::INFINITY) / pow2_f64(frac_bits)
}

fn pow2_f64(bits: u32) -> f64 {
    if bits >= 1024 {
        f64::INFINITY
    } else {
        2f64.powi(bits as i32)
    }
}
