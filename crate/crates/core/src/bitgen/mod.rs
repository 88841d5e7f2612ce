//! Bit-generation engines and the OS entropy source.

mod chacha;
mod mt19937;
mod pcg64;

pub use chacha::ChaCha20Rng;
pub use mt19937::{first_output_from_u32 as mt19937_first_output, Mt19937, STATE_WORDS};
pub use pcg64::Pcg64;

use crate::error::{Error, Result};
use crate::seedseq::SeedSequence;
use serde::{Deserialize, Serialize};

/// Anything that yields a stream of raw 64-bit words.
pub trait BitSource {
    fn next_u64(&mut self) -> u64;
}

impl BitSource for Mt19937 {
    fn next_u64(&mut self) -> u64 {
        Mt19937::next_u64(self)
    }
}

impl BitSource for Pcg64 {
    fn next_u64(&mut self) -> u64 {
        Pcg64::next_u64(self)
    }
}

impl BitSource for ChaCha20Rng {
    fn next_u64(&mut self) -> u64 {
        ChaCha20Rng::next_u64(self)
    }
}

/// Which engine backs a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorKind {
    Mt19937,
    Pcg64,
    Csprng,
}

impl GeneratorKind {
    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::Mt19937 => "mt19937",
            GeneratorKind::Pcg64 => "pcg64",
            GeneratorKind::Csprng => "csprng",
        }
    }

    /// Native word width of the raw stream dump, in bytes.
    pub fn word_size_bytes(self) -> usize {
        match self {
            GeneratorKind::Mt19937 => 4,
            GeneratorKind::Pcg64 | GeneratorKind::Csprng => 8,
        }
    }
}

impl std::fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for GeneratorKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "mt19937" => Ok(GeneratorKind::Mt19937),
            "pcg64" => Ok(GeneratorKind::Pcg64),
            "csprng" => Ok(GeneratorKind::Csprng),
            other => Err(format!(
                "unknown generator {other:?} (expected mt19937, pcg64 or csprng)"
            )),
        }
    }
}

/// Tagged union over the three engines, so one value can hold any of them.
/// The MT19937 state vector is boxed; it dwarfs the other variants.
#[derive(Clone, Debug)]
pub enum BitGeneratorState {
    Mt19937(Box<Mt19937>),
    Pcg64(Pcg64),
    Csprng(ChaCha20Rng),
}

impl BitGeneratorState {
    /// Seed a deterministic engine from a seed sequence. The CSPRNG is not
    /// seedable by design.
    pub fn from_seed_seq(kind: GeneratorKind, seq: &SeedSequence) -> Result<Self> {
        match kind {
            GeneratorKind::Mt19937 => Ok(BitGeneratorState::Mt19937(Box::new(
                Mt19937::from_seed_seq(seq),
            ))),
            GeneratorKind::Pcg64 => Ok(BitGeneratorState::Pcg64(Pcg64::from_seed_seq(seq))),
            GeneratorKind::Csprng => Err(Error::NotSeedable("csprng")),
        }
    }

    pub fn secure() -> Result<Self> {
        Ok(BitGeneratorState::Csprng(ChaCha20Rng::from_os_entropy()?))
    }

    pub fn kind(&self) -> GeneratorKind {
        match self {
            BitGeneratorState::Mt19937(_) => GeneratorKind::Mt19937,
            BitGeneratorState::Pcg64(_) => GeneratorKind::Pcg64,
            BitGeneratorState::Csprng(_) => GeneratorKind::Csprng,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        match self {
            BitGeneratorState::Mt19937(gen) => gen.next_u64(),
            BitGeneratorState::Pcg64(gen) => gen.next_u64(),
            BitGeneratorState::Csprng(gen) => gen.next_u64(),
        }
    }

    /// Append one native word as little-endian bytes: 4 bytes for MT19937,
    /// 8 for the 64-bit engines. This is the raw dump format.
    pub fn write_word_le(&mut self, out: &mut Vec<u8>) {
        match self {
            BitGeneratorState::Mt19937(gen) => out.extend_from_slice(&gen.next_u32().to_le_bytes()),
            BitGeneratorState::Pcg64(gen) => out.extend_from_slice(&gen.next_u64().to_le_bytes()),
            BitGeneratorState::Csprng(gen) => out.extend_from_slice(&gen.next_u64().to_le_bytes()),
        }
    }
}

impl BitSource for BitGeneratorState {
    fn next_u64(&mut self) -> u64 {
        BitGeneratorState::next_u64(self)
    }
}

/// Read `n_bytes` from the OS randomness facility. Failures propagate as
/// errors; there is no fallback source.
pub fn os_entropy(n_bytes: usize) -> Result<Vec<u8>> {
    let mut buf = vec![0u8; n_bytes];
    if n_bytes > 0 {
        getrandom::getrandom(&mut buf).map_err(|e| Error::OsEntropy(e.to_string()))?;
    }
    Ok(buf)
}
