//! Resolution of user-supplied randomness specs into generator handles, and
//! the provenance tag that lets privacy mechanisms insist on secure noise
//! when no seed was given.
//!
//! A mechanism parameter can be absent, an integer seed, or an existing
//! handle. [`check_random_state`] maps those to a [`GeneratorHandle`]: absent
//! becomes a fresh CSPRNG tagged [`Provenance::DefaultSecure`]; an integer
//! seeds a PCG64 tagged [`Provenance::Seeded`]; a handle passes through
//! untouched, so its state keeps advancing across calls and a script that
//! reuses one handle gets unique but reproducible outputs.

use std::sync::{Arc, Mutex};

use num_bigint::BigUint;

use crate::bitgen::{BitGeneratorState, BitSource, ChaCha20Rng, GeneratorKind};
use crate::error::Result;
use crate::seedseq::SeedSequence;
use crate::transform;

/// Where a generator's randomness came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Built from an explicit integer seed or spawned seed sequence.
    Seeded,
    /// Wrapped around a caller-constructed generator state.
    UserProvided,
    /// Fresh OS-keyed CSPRNG issued because no seed was supplied.
    DefaultSecure,
}

/// The three accepted shapes of a `random_state` argument.
#[derive(Clone, Debug)]
pub enum RandomStateSpec {
    Absent,
    IntegerSeed(BigUint),
    Instance(GeneratorHandle),
}

/// A shared bit generator plus its seed provenance.
///
/// Handles are cheap to clone; clones alias the same underlying state, which
/// is what makes pass-a-handle-around seeding work: every holder sees the
/// stream advance. Seeded handles also carry their originating seed sequence
/// so the stream can be reported and re-created.
#[derive(Clone, Debug)]
pub struct GeneratorHandle {
    state: Arc<Mutex<BitGeneratorState>>,
    provenance: Provenance,
    seed: Option<SeedSequence>,
}

impl GeneratorHandle {
    /// Seed the default deterministic engine (PCG64) from a seed sequence.
    pub fn from_seed_sequence(seq: SeedSequence) -> Self {
        let state = BitGeneratorState::from_seed_seq(GeneratorKind::Pcg64, &seq)
            .expect("pcg64 is seedable");
        GeneratorHandle {
            state: Arc::new(Mutex::new(state)),
            provenance: Provenance::Seeded,
            seed: Some(seq),
        }
    }

    /// Seed a specific deterministic engine from a seed sequence.
    pub fn from_seed_sequence_with(kind: GeneratorKind, seq: SeedSequence) -> Result<Self> {
        let state = BitGeneratorState::from_seed_seq(kind, &seq)?;
        Ok(GeneratorHandle {
            state: Arc::new(Mutex::new(state)),
            provenance: Provenance::Seeded,
            seed: Some(seq),
        })
    }

    /// Wrap a caller-built generator state.
    pub fn user_provided(state: BitGeneratorState) -> Self {
        GeneratorHandle {
            state: Arc::new(Mutex::new(state)),
            provenance: Provenance::UserProvided,
            seed: None,
        }
    }

    /// A fresh OS-keyed CSPRNG handle, issued when no seed was supplied.
    pub fn default_secure() -> Result<Self> {
        Ok(GeneratorHandle {
            state: Arc::new(Mutex::new(BitGeneratorState::secure()?)),
            provenance: Provenance::DefaultSecure,
            seed: None,
        })
    }

    /// New handle over the given state, inheriting this handle's provenance
    /// and seed report. Used for jump-ahead and block positioning.
    pub(crate) fn derived(&self, state: BitGeneratorState) -> Self {
        GeneratorHandle {
            state: Arc::new(Mutex::new(state)),
            provenance: self.provenance,
            seed: self.seed.clone(),
        }
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// The originating seed sequence, present on seeded handles.
    pub fn seed_sequence(&self) -> Option<&SeedSequence> {
        self.seed.as_ref()
    }

    pub fn kind(&self) -> GeneratorKind {
        self.lock().kind()
    }

    /// True when both handles alias the same underlying generator state.
    pub fn same_instance(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.state, &other.state)
    }

    pub fn next_u64(&self) -> u64 {
        self.lock().next_u64()
    }

    pub fn next_double(&self) -> f64 {
        transform::next_double(&mut *self.lock())
    }

    pub fn bounded_int(&self, low: u64, high: u64) -> Result<u64> {
        transform::bounded_int(&mut *self.lock(), low, high)
    }

    /// Copy of the current generator state (does not advance the stream).
    pub fn snapshot(&self) -> BitGeneratorState {
        self.lock().clone()
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, BitGeneratorState> {
        self.state.lock().expect("generator mutex poisoned")
    }
}

impl BitSource for GeneratorHandle {
    fn next_u64(&mut self) -> u64 {
        GeneratorHandle::next_u64(self)
    }
}

impl BitSource for &GeneratorHandle {
    fn next_u64(&mut self) -> u64 {
        GeneratorHandle::next_u64(self)
    }
}

/// Resolve a `random_state` spec to a handle.
///
/// Absent specs yield a fresh [`Provenance::DefaultSecure`] CSPRNG; integer
/// seeds build a new seeded PCG64; an instance is returned as-is, the
/// identical shared state rather than a copy.
pub fn check_random_state(spec: RandomStateSpec) -> Result<GeneratorHandle> {
    match spec {
        RandomStateSpec::Absent => GeneratorHandle::default_secure(),
        RandomStateSpec::IntegerSeed(seed) => Ok(GeneratorHandle::from_seed_sequence(
            SeedSequence::from_entropy(&seed),
        )),
        RandomStateSpec::Instance(handle) => Ok(handle),
    }
}

/// The uniform noise-source interface privacy mechanisms draw from. Both
/// backends expose the same `uniform()`, hiding the interface differences
/// between the secure and deterministic engines.
#[derive(Debug)]
pub struct NoiseSource {
    backend: NoiseBackend,
}

#[derive(Debug)]
enum NoiseBackend {
    /// Independent CSPRNG created at resolution time.
    Secure(ChaCha20Rng),
    /// The resolved handle's own generator, shared with every other holder.
    Shared(GeneratorHandle),
}

impl NoiseSource {
    /// Uniform double in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        transform::next_double(self)
    }

    pub fn is_secure(&self) -> bool {
        matches!(self.backend, NoiseBackend::Secure(_))
    }
}

impl BitSource for NoiseSource {
    fn next_u64(&mut self) -> u64 {
        match &mut self.backend {
            NoiseBackend::Secure(gen) => gen.next_u64(),
            NoiseBackend::Shared(handle) => handle.next_u64(),
        }
    }
}

/// View a handle as a noise source for DP mechanisms.
///
/// A [`Provenance::DefaultSecure`] handle resolves to a fresh CSPRNG each
/// time (resolutions are independent streams); seeded and user-provided
/// handles are authoritative and resolve to their own generator.
pub fn resolve_dp_noise_source(handle: &GeneratorHandle) -> Result<NoiseSource> {
    let backend = match handle.provenance() {
        Provenance::DefaultSecure => NoiseBackend::Secure(ChaCha20Rng::from_os_entropy()?),
        Provenance::Seeded | Provenance::UserProvided => NoiseBackend::Shared(handle.clone()),
    };
    Ok(NoiseSource { backend })
}
