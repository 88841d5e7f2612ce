//! PCG64: the XSL-RR 128/64 "setseq" permuted congruential generator.

use crate::seedseq::SeedSequence;

/// Default LCG multiplier for the 128-bit PCG family.
const MULTIPLIER: u128 = 0x2360_ed05_1fc6_5da4_4385_df64_9fcc_f645;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pcg64 {
    state: u128,
    increment: u128,
}

impl Pcg64 {
    /// Seed from four 64-bit state words: 128 bits of initial state and 128
    /// bits of stream selector, as drawn from the seed sequence. The first
    /// word of each pair is the high half. The increment is forced odd by the
    /// stream-selection step, so every seeding yields a full-period stream.
    pub fn from_seed_seq(seq: &SeedSequence) -> Self {
        let w = seq.generate_state_u64(4).expect("state request is nonzero");
        let initstate = (u128::from(w[0]) << 64) | u128::from(w[1]);
        let initseq = (u128::from(w[2]) << 64) | u128::from(w[3]);
        Self::seeded(initstate, initseq)
    }

    fn seeded(initstate: u128, initseq: u128) -> Self {
        let mut gen = Pcg64 {
            state: 0,
            increment: (initseq << 1) | 1,
        };
        gen.step();
        gen.state = gen.state.wrapping_add(initstate);
        gen.step();
        gen
    }

    pub fn state(&self) -> u128 {
        self.state
    }

    pub fn increment(&self) -> u128 {
        self.increment
    }

    fn step(&mut self) {
        self.state = self
            .state
            .wrapping_mul(MULTIPLIER)
            .wrapping_add(self.increment);
    }

    pub fn next_u64(&mut self) -> u64 {
        self.step();
        output(self.state)
    }

    /// Skip ahead as if `delta` outputs had been drawn (mod 2^128), in
    /// O(log delta) time. Brown's LCG advance: build the composed affine map
    /// by repeated squaring of the transition.
    pub fn advance(&mut self, delta: u128) {
        let mut acc_mult: u128 = 1;
        let mut acc_plus: u128 = 0;
        let mut cur_mult = MULTIPLIER;
        let mut cur_plus = self.increment;
        let mut delta = delta;
        while delta > 0 {
            if delta & 1 == 1 {
                acc_mult = acc_mult.wrapping_mul(cur_mult);
                acc_plus = acc_plus.wrapping_mul(cur_mult).wrapping_add(cur_plus);
            }
            cur_plus = cur_mult.wrapping_add(1).wrapping_mul(cur_plus);
            cur_mult = cur_mult.wrapping_mul(cur_mult);
            delta >>= 1;
        }
        self.state = acc_mult.wrapping_mul(self.state).wrapping_add(acc_plus);
    }
}

/// XSL-RR output permutation: xor-fold the halves, rotate by the top bits.
fn output(state: u128) -> u64 {
    let rot = (state >> 122) as u32;
    (((state >> 64) as u64) ^ (state as u64)).rotate_right(rot)
}
