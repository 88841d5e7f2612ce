//! MT19937 Mersenne Twister, canonical 2002 constants.

use crate::seedseq::SeedSequence;

const N: usize = 624;
const M: usize = 397;
const MATRIX_A: u32 = 0x9908_b0df;
const UPPER_MASK: u32 = 0x8000_0000;
const LOWER_MASK: u32 = 0x7fff_ffff;
const INIT_MULTIPLIER: u32 = 1_812_433_253;

/// Number of 32-bit words in the MT19937 state vector.
pub const STATE_WORDS: usize = N;

#[derive(Clone)]
pub struct Mt19937 {
    key: [u32; N],
    pos: usize,
}

impl std::fmt::Debug for Mt19937 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Mt19937")
            .field("pos", &self.pos)
            .finish_non_exhaustive()
    }
}

impl Mt19937 {
    /// Seed the full 624-word state from a seed sequence.
    ///
    /// Matches the reference bit-generator seeding: the state is filled with
    /// `generate_state(624)`, except the leading word is pinned to
    /// `0x8000_0000` (guaranteeing a nonzero state) and the output cursor
    /// starts on the final seeded word, so exactly one seeded word is emitted
    /// before the first twist.
    pub fn from_seed_seq(seq: &SeedSequence) -> Self {
        let words = seq.generate_state_u32(N).expect("state request is nonzero");
        let mut key = [0u32; N];
        key.copy_from_slice(&words);
        key[0] = 0x8000_0000;
        Mt19937 { key, pos: N - 1 }
    }

    /// Classic single-word initialization (Knuth multiplicative recurrence).
    ///
    /// This is the seeding path whose first-output gaps the bias scanner
    /// measures; it must stay bit-identical to the published algorithm.
    pub fn from_u32(seed: u32) -> Self {
        let mut key = [0u32; N];
        key[0] = seed;
        for i in 1..N {
            key[i] = INIT_MULTIPLIER
                .wrapping_mul(key[i - 1] ^ (key[i - 1] >> 30))
                .wrapping_add(i as u32);
        }
        Mt19937 { key, pos: N }
    }

    /// The raw state vector and output cursor.
    pub fn state(&self) -> (&[u32; N], usize) {
        (&self.key, self.pos)
    }

    fn twist(&mut self) {
        for i in 0..N {
            let y = (self.key[i] & UPPER_MASK) | (self.key[(i + 1) % N] & LOWER_MASK);
            let mag = if y & 1 == 1 { MATRIX_A } else { 0 };
            self.key[i] = self.key[(i + M) % N] ^ (y >> 1) ^ mag;
        }
        self.pos = 0;
    }

    pub fn next_u32(&mut self) -> u32 {
        if self.pos >= N {
            self.twist();
        }
        let y = self.key[self.pos];
        self.pos += 1;
        temper(y)
    }

    /// Two 32-bit draws combined high word first.
    pub fn next_u64(&mut self) -> u64 {
        let hi = u64::from(self.next_u32());
        let lo = u64::from(self.next_u32());
        (hi << 32) | lo
    }
}

fn temper(mut y: u32) -> u32 {
    y ^= y >> 11;
    y ^= (y << 7) & 0x9d2c_5680;
    y ^= (y << 15) & 0xefc6_0000;
    y ^ (y >> 18)
}

/// First 32-bit output of `Mt19937::from_u32(seed)` without materializing the
/// full state. Only the recurrence prefix up to word `M` feeds the first
/// twisted word, which makes exhaustive seed scans tractable.
pub fn first_output_from_u32(seed: u32) -> u32 {
    let mut prev = seed;
    let mut w1 = 0u32;
    let mut w_m = 0u32;
    for i in 1..=M {
        prev = INIT_MULTIPLIER
            .wrapping_mul(prev ^ (prev >> 30))
            .wrapping_add(i as u32);
        if i == 1 {
            w1 = prev;
        }
        if i == M {
            w_m = prev;
        }
    }
    let y = (seed & UPPER_MASK) | (w1 & LOWER_MASK);
    let mag = if y & 1 == 1 { MATRIX_A } else { 0 };
    temper(w_m ^ (y >> 1) ^ mag)
}
