//! ChaCha20 in counter mode, used as the cryptographically secure generator.
//!
//! The state is a 256-bit cipher key, a 64-bit block counter and a position
//! into the current 64-byte output block. This is the original
//! 64-bit-counter layout with a zero nonce; stream uniqueness comes from the
//! per-instance key. The key is drawn from the OS and is unreachable through
//! the public API: no accessor, no serialization, and `Debug` redacts it.

use crate::bitgen::os_entropy;
use crate::error::Result;

const SIGMA: [u32; 4] = [0x6170_7865, 0x3320_646e, 0x7962_2d32, 0x6b20_6574];
const ROUNDS: usize = 20;
const BLOCK_U64S: usize = 8;

#[derive(Clone)]
pub struct ChaCha20Rng {
    key: [u32; 8],
    counter: u64,
    buf: [u64; BLOCK_U64S],
    buf_pos: usize,
}

impl std::fmt::Debug for ChaCha20Rng {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        // Key and buffered output stay out of debug logs.
        f.debug_struct("ChaCha20Rng")
            .field("key", &"<redacted>")
            .field("counter", &self.counter)
            .field("buf_pos", &self.buf_pos)
            .finish()
    }
}

impl ChaCha20Rng {
    /// Create a generator keyed with 256 bits of fresh OS entropy.
    ///
    /// Not seedable and not reproducible; OS failure is propagated, never
    /// silently substituted.
    pub fn from_os_entropy() -> Result<Self> {
        let bytes = os_entropy(32)?;
        let mut key = [0u32; 8];
        for (word, chunk) in key.iter_mut().zip(bytes.chunks_exact(4)) {
            *word = u32::from_le_bytes(chunk.try_into().expect("4-byte chunk"));
        }
        Ok(Self::with_key(key, 0))
    }

    #[cfg(test)]
    pub(crate) fn from_raw_key(key_bytes: [u8; 32]) -> Self {
        let mut key = [0u32; 8];
        for (word, chunk) in key.iter_mut().zip(key_bytes.chunks_exact(4)) {
            *word = u32::from_le_bytes(chunk.try_into().expect("4-byte chunk"));
        }
        Self::with_key(key, 0)
    }

    #[cfg(test)]
    pub(crate) fn from_raw_key_and_counter(key_bytes: [u8; 32], counter: u64) -> Self {
        let mut gen = Self::from_raw_key(key_bytes);
        gen.counter = counter;
        gen
    }

    fn with_key(key: [u32; 8], counter: u64) -> Self {
        ChaCha20Rng {
            key,
            counter,
            buf: [0; BLOCK_U64S],
            buf_pos: BLOCK_U64S,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        if self.buf_pos == BLOCK_U64S {
            self.buf = block(&self.key, self.counter);
            // The counter only ever increases; 2^64 blocks is unreachable.
            self.counter = self
                .counter
                .checked_add(1)
                .expect("block counter exhausted");
            self.buf_pos = 0;
        }
        let word = self.buf[self.buf_pos];
        self.buf_pos += 1;
        word
    }
}

fn quarter_round(state: &mut [u32; 16], a: usize, b: usize, c: usize, d: usize) {
    state[a] = state[a].wrapping_add(state[b]);
    state[d] = (state[d] ^ state[a]).rotate_left(16);
    state[c] = state[c].wrapping_add(state[d]);
    state[b] = (state[b] ^ state[c]).rotate_left(12);
    state[a] = state[a].wrapping_add(state[b]);
    state[d] = (state[d] ^ state[a]).rotate_left(8);
    state[c] = state[c].wrapping_add(state[d]);
    state[b] = (state[b] ^ state[c]).rotate_left(7);
}

/// One 64-byte keystream block, returned as eight little-endian 64-bit words.
fn block(key: &[u32; 8], counter: u64) -> [u64; BLOCK_U64S] {
    let mut state = [0u32; 16];
    state[..4].copy_from_slice(&SIGMA);
    state[4..12].copy_from_slice(key);
    state[12] = counter as u32;
    state[13] = (counter >> 32) as u32;
    // state[14..16] is the nonce, fixed to zero.

    let input = state;
    for _ in 0..ROUNDS / 2 {
        quarter_round(&mut state, 0, 4, 8, 12);
        quarter_round(&mut state, 1, 5, 9, 13);
        quarter_round(&mut state, 2, 6, 10, 14);
        quarter_round(&mut state, 3, 7, 11, 15);
        quarter_round(&mut state, 0, 5, 10, 15);
        quarter_round(&mut state, 1, 6, 11, 12);
        quarter_round(&mut state, 2, 7, 8, 13);
        quarter_round(&mut state, 3, 4, 9, 14);
    }

    let mut out = [0u64; BLOCK_U64S];
    for (i, word) in out.iter_mut().enumerate() {
        let lo = state[2 * i].wrapping_add(input[2 * i]);
        let hi = state[2 * i + 1].wrapping_add(input[2 * i + 1]);
        *word = u64::from(lo) | (u64::from(hi) << 32);
    }
    out
}
