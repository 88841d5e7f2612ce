//! Seed sequences: entropy conditioning for generator initialization.
//!
//! A [`SeedSequence`] condenses an arbitrary-size integer seed (or fresh OS
//! entropy) into a well-mixed 128-bit pool, from which any amount of
//! initialization material can be drawn via [`SeedSequence::generate_state_u32`]
//! and [`SeedSequence::generate_state_u64`]. Child sequences for parallel
//! streams are derived with [`SeedSequence::spawn`]; each child is keyed by its
//! position in the spawn tree, so the whole family is re-derivable from the
//! root entropy plus a key path.
//!
//! The hashing and mixing constants are those of NumPy's `SeedSequence`
//! (itself derived from Melissa O'Neill's `seed_seq` redesign), so state
//! vectors produced here are bit-identical to that implementation. The
//! conformance suite pins this with recorded reference vectors.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bitgen::os_entropy;
use crate::error::{Error, Result};

// Hash/mix constants of the reference seed-sequence design.
const INIT_A: u32 = 0x43b0_d7e5;
const MULT_A: u32 = 0x931e_8875;
const INIT_B: u32 = 0x8b51_f9dd;
const MULT_B: u32 = 0x58f3_8ded;
const MIX_MULT_L: u32 = 0xca01_f9dd;
const MIX_MULT_R: u32 = 0x4973_f715;
const XSHIFT: u32 = 16;

/// Pool size in 32-bit words. Fixed at four words (128 bits).
pub const POOL_SIZE: usize = 4;

/// Entropy drawn for an unseeded sequence, in bits.
pub const DEFAULT_ENTROPY_BITS: usize = POOL_SIZE * 32;

/// Decompose a non-negative integer into 32-bit words, lowest bits first.
///
/// The result satisfies `n == sum(words[i] * 2^(32 i))`; zero maps to `[0]`.
pub fn int_to_word_array(n: &BigUint) -> Vec<u32> {
    if n.is_zero() {
        return vec![0];
    }
    n.to_u32_digits()
}

/// Reassemble the integer a word array stands for (inverse of
/// [`int_to_word_array`] up to trailing zero words).
pub fn word_array_to_int(words: &[u32]) -> BigUint {
    BigUint::new(words.to_vec())
}

/// Parse a decimal seed string. Rejects signs, whitespace and non-digits, so
/// negative seeds are reported as a domain error rather than wrapping.
pub fn parse_decimal_seed(s: &str) -> Result<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::SeedParse(s.to_string()));
    }
    s.parse::<BigUint>()
        .map_err(|_| Error::SeedParse(s.to_string()))
}

fn hashmix(value: u32, hash_const: &mut u32) -> u32 {
    let mut value = value ^ *hash_const;
    *hash_const = hash_const.wrapping_mul(MULT_A);
    value = value.wrapping_mul(*hash_const);
    value ^ (value >> XSHIFT)
}

fn mix(x: u32, y: u32) -> u32 {
    let r = x
        .wrapping_mul(MIX_MULT_L)
        .wrapping_sub(y.wrapping_mul(MIX_MULT_R));
    r ^ (r >> XSHIFT)
}

/// JSON-facing identity of a seed sequence: the entropy integer as a decimal
/// string plus the spawn-key path. Enough to re-create the sequence (and
/// therefore the full generator stream) anywhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpawnDescriptor {
    pub entropy: String,
    pub spawn_key: Vec<u32>,
}

/// An entropy pool plus spawn-tree position.
///
/// The pool is a pure function of `(entropy_words, spawn_key)`: re-creating a
/// sequence from the same pair yields an identical pool on any platform. The
/// only mutable piece is the child counter advanced by [`SeedSequence::spawn`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedSequence {
    entropy_words: Vec<u32>,
    spawn_key: Vec<u32>,
    pool: [u32; POOL_SIZE],
    children_spawned: u32,
}

impl SeedSequence {
    /// Build a sequence from an integer seed of unbounded size.
    pub fn from_entropy(seed: &BigUint) -> Self {
        Self::assemble(int_to_word_array(seed), Vec::new())
    }

    /// Convenience constructor for seeds that fit in 128 bits.
    pub fn from_u128(seed: u128) -> Self {
        Self::from_entropy(&BigUint::from(seed))
    }

    /// Build a sequence from raw 32-bit entropy words (lowest-order first).
    ///
    /// Note that a trailing zero word is not representable in the decimal
    /// entropy report: `[1, 0]` and `[1]` report the same integer but mix to
    /// different pools. Prefer the integer constructors when the sequence
    /// must round-trip through a [`SpawnDescriptor`].
    pub fn from_words(words: &[u32]) -> Self {
        Self::assemble(words.to_vec(), Vec::new())
    }

    /// Build a sequence at an explicit spawn-tree position.
    pub fn with_spawn_key(seed: &BigUint, spawn_key: &[u32]) -> Self {
        Self::assemble(int_to_word_array(seed), spawn_key.to_vec())
    }

    /// Parse a decimal seed string into a root sequence.
    pub fn from_decimal_str(s: &str) -> Result<Self> {
        Ok(Self::from_entropy(&parse_decimal_seed(s)?))
    }

    /// Draw 128 bits of fresh OS entropy and build a root sequence from them.
    ///
    /// The entropy is retained, so the sequence can be reported via
    /// [`SeedSequence::entropy_int`] and re-created later for an exact replay
    /// of an otherwise-unseeded run.
    pub fn from_os_entropy() -> Result<Self> {
        let bytes = os_entropy(DEFAULT_ENTROPY_BITS / 8)?;
        Ok(Self::from_entropy(&BigUint::from_bytes_le(&bytes)))
    }

    /// Re-create a sequence from its reported identity.
    pub fn from_descriptor(descriptor: &SpawnDescriptor) -> Result<Self> {
        let entropy = parse_decimal_seed(&descriptor.entropy)?;
        Ok(Self::assemble(
            int_to_word_array(&entropy),
            descriptor.spawn_key.clone(),
        ))
    }

    fn assemble(entropy_words: Vec<u32>, spawn_key: Vec<u32>) -> Self {
        let mut seq = SeedSequence {
            entropy_words,
            spawn_key,
            pool: [0; POOL_SIZE],
            children_spawned: 0,
        };
        seq.pool = mix_entropy(&seq.assembled_entropy());
        seq
    }

    /// Entropy words combined with the spawn key, as fed to the mixer. When a
    /// spawn key is present the entropy is zero-padded to the pool size first
    /// so key words can never collide with entropy words.
    fn assembled_entropy(&self) -> Vec<u32> {
        let mut assembled = self.entropy_words.clone();
        if !self.spawn_key.is_empty() && assembled.len() < POOL_SIZE {
            assembled.resize(POOL_SIZE, 0);
        }
        assembled.extend_from_slice(&self.spawn_key);
        assembled
    }

    pub fn entropy_words(&self) -> &[u32] {
        &self.entropy_words
    }

    /// The seed as an integer, suitable for reporting and re-seeding.
    pub fn entropy_int(&self) -> BigUint {
        word_array_to_int(&self.entropy_words)
    }

    pub fn spawn_key(&self) -> &[u32] {
        &self.spawn_key
    }

    pub fn pool(&self) -> &[u32; POOL_SIZE] {
        &self.pool
    }

    pub fn children_spawned(&self) -> u32 {
        self.children_spawned
    }

    /// The JSON-facing identity of this sequence.
    pub fn descriptor(&self) -> SpawnDescriptor {
        SpawnDescriptor {
            entropy: self.entropy_int().to_str_radix(10),
            spawn_key: self.spawn_key.clone(),
        }
    }

    /// Generate `n_words` 32-bit state words from the pool.
    ///
    /// Pure: repeated calls return identical words, and a shorter request is
    /// a prefix of a longer one.
    pub fn generate_state_u32(&self, n_words: usize) -> Result<Vec<u32>> {
        if n_words == 0 {
            return Err(Error::EmptyStateRequest);
        }
        Ok(self.state_words(n_words))
    }

    /// Generate `n_words` 64-bit state words. Each word is assembled from two
    /// consecutive 32-bit outputs, low word first.
    pub fn generate_state_u64(&self, n_words: usize) -> Result<Vec<u64>> {
        if n_words == 0 {
            return Err(Error::EmptyStateRequest);
        }
        let halves = self.state_words(n_words * 2);
        Ok(halves
            .chunks_exact(2)
            .map(|pair| u64::from(pair[0]) | (u64::from(pair[1]) << 32))
            .collect())
    }

    fn state_words(&self, n_words: usize) -> Vec<u32> {
        let mut hash_const = INIT_B;
        (0..n_words)
            .map(|i| {
                let mut v = self.pool[i % POOL_SIZE] ^ hash_const;
                hash_const = hash_const.wrapping_mul(MULT_B);
                v = v.wrapping_mul(hash_const);
                v ^ (v >> XSHIFT)
            })
            .collect()
    }

    /// Spawn `n` child sequences. The i-th child overall carries spawn key
    /// `parent_key ++ [i]`; keys are never re-issued.
    ///
    /// Spawning takes `&mut self` (the child counter advances), so do it from
    /// one owner and distribute the children; each child is independently
    /// owned and safe to move to another thread.
    pub fn spawn(&mut self, n: usize) -> Result<Vec<SeedSequence>> {
        if n == 0 {
            return Err(Error::ZeroSpawnCount);
        }
        let n_u32 = u32::try_from(n).map_err(|_| Error::SpawnKeyExhausted)?;
        let end = self
            .children_spawned
            .checked_add(n_u32)
            .ok_or(Error::SpawnKeyExhausted)?;
        let children = (self.children_spawned..end)
            .map(|child_index| {
                let mut key = self.spawn_key.clone();
                key.push(child_index);
                Self::assemble(self.entropy_words.clone(), key)
            })
            .collect();
        self.children_spawned = end;
        Ok(children)
    }
}

fn mix_entropy(assembled: &[u32]) -> [u32; POOL_SIZE] {
    let mut hash_const = INIT_A;
    let mut pool = [0u32; POOL_SIZE];

    // Seed the pool from the leading entropy words, running the hash out on
    // zeros if there are fewer words than pool slots.
    for (i, slot) in pool.iter_mut().enumerate() {
        *slot = hashmix(assembled.get(i).copied().unwrap_or(0), &mut hash_const);
    }

    // Cross-mix so late pool words affect earlier ones.
    for i_src in 0..POOL_SIZE {
        for i_dst in 0..POOL_SIZE {
            if i_src != i_dst {
                pool[i_dst] = mix(pool[i_dst], hashmix(pool[i_src], &mut hash_const));
            }
        }
    }

    // Fold any remaining entropy words into every pool word.
    for &word in assembled.iter().skip(POOL_SIZE) {
        for slot in pool.iter_mut() {
            *slot = mix(*slot, hashmix(word, &mut hash_const));
        }
    }

    pool
}
