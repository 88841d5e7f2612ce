//! The Laplace mechanism, the consumer that exercises the whole seeding
//! contract: integer seeds give repeatable outputs, a shared handle gives
//! unique-but-replayable outputs, and no seed at all forces secure noise.

use crate::dispatch::{check_random_state, resolve_dp_noise_source, NoiseSource, RandomStateSpec};
use crate::error::{Error, Result};
use crate::transform;

/// Adds Laplace noise with scale `sensitivity / epsilon`.
#[derive(Debug)]
pub struct LaplaceMechanism {
    epsilon: f64,
    sensitivity: f64,
    noise: NoiseSource,
}

impl LaplaceMechanism {
    /// The noise source is resolved from `random_state` at construction; an
    /// absent spec yields a secure source.
    pub fn new(epsilon: f64, sensitivity: f64, random_state: RandomStateSpec) -> Result<Self> {
        if epsilon.is_nan() || epsilon <= 0.0 || epsilon.is_infinite() {
            return Err(Error::InvalidEpsilon(epsilon));
        }
        if sensitivity.is_nan() || sensitivity < 0.0 || sensitivity.is_infinite() {
            return Err(Error::InvalidSensitivity(sensitivity));
        }
        let handle = check_random_state(random_state)?;
        let noise = resolve_dp_noise_source(&handle)?;
        Ok(LaplaceMechanism {
            epsilon,
            sensitivity,
            noise,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn sensitivity(&self) -> f64 {
        self.sensitivity
    }

    pub fn scale(&self) -> f64 {
        self.sensitivity / self.epsilon
    }

    /// Whether the mechanism draws from a secure (CSPRNG) noise source.
    pub fn noise_is_secure(&self) -> bool {
        self.noise.is_secure()
    }

    /// The value plus one Laplace draw of scale `sensitivity / epsilon`.
    ///
    /// The uniform variate is shifted into the open interval by re-drawing on
    /// an exact zero (probability 2^-53 per draw), keeping the inverse-CDF
    /// domain valid without clamping. Zero sensitivity adds no noise at all.
    pub fn randomise(&mut self, value: f64) -> Result<f64> {
        if !value.is_finite() {
            return Err(Error::NonFiniteValue(value));
        }
        let scale = self.scale();
        if scale == 0.0 {
            return Ok(value);
        }
        let u = loop {
            let u = self.noise.uniform();
            if u > 0.0 {
                break u;
            }
        };
        Ok(value + transform::laplace_inverse_cdf(u, scale)?)
    }
}
