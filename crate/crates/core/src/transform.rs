//! Minimal bit-transformation layer: uniform doubles, unbiased bounded
//! integers, and the Laplace inverse CDF.

use crate::bitgen::BitSource;
use crate::error::{Error, Result};

/// 2^-53, the spacing of the uniform-double grid.
const DOUBLE_UNIT: f64 = 1.0 / 9_007_199_254_740_992.0;

/// Uniform double in [0, 1) with 53-bit granularity: the top 53 bits of one
/// 64-bit draw. Consumes exactly one 64-bit word (two 32-bit draws for
/// MT19937, high word first).
pub fn next_double(src: &mut impl BitSource) -> f64 {
    ((src.next_u64() >> 11) as f64) * DOUBLE_UNIT
}

/// Exactly uniform integer in the inclusive range `[low, high]`.
///
/// Uses threshold rejection: draws below `2^64 mod range` are discarded so
/// the final reduction carries no modulo bias. The number of words consumed
/// varies (expected < 2 even in the worst case).
pub fn bounded_int(src: &mut impl BitSource, low: u64, high: u64) -> Result<u64> {
    if low > high {
        return Err(Error::InvalidBounds { low, high });
    }
    let span = high - low;
    if span == u64::MAX {
        return Ok(src.next_u64());
    }
    let range = span + 1;
    let threshold = range.wrapping_neg() % range;
    loop {
        let word = src.next_u64();
        if word >= threshold {
            return Ok(low + (word % range));
        }
    }
}

/// Inverse CDF of the zero-centered Laplace distribution with the given
/// scale: `-scale * sign(u - 1/2) * ln(1 - 2|u - 1/2|)`.
///
/// Monotone in `u`, median zero, and exactly antisymmetric around `u = 1/2`
/// whenever `1 - u` is representable.
pub fn laplace_inverse_cdf(u: f64, scale: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::UnitIntervalDomain(u));
    }
    if scale.is_nan() || scale <= 0.0 || scale.is_infinite() {
        return Err(Error::NonPositiveScale(scale));
    }
    let centered = u - 0.5;
    Ok(-scale * centered.signum() * (-2.0 * centered.abs()).ln_1p())
}
