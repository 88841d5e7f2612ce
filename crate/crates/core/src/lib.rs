//! Reproducible random number streams for differential-privacy workloads.
//!
//! The crate covers the full seeding story a privacy library needs:
//!
//! * [`seedseq`] — NumPy-compatible seed sequences: entropy mixing,
//!   arbitrary-size integer seeds, and hierarchically keyed spawning for
//!   parallel streams.
//! * [`bitgen`] — the bit generators: MT19937, PCG64 (with O(log n)
//!   jump-ahead) and a ChaCha20-based CSPRNG, plus the raw OS entropy source.
//! * [`transform`] — uniform doubles, unbiased bounded integers, and the
//!   Laplace inverse CDF.
//! * [`dispatch`] — the `random_state` resolution contract: absent seeds
//!   resolve to secure noise, integer seeds to reproducible PCG64 streams,
//!   and existing handles pass through untouched.
//! * [`parallel`] — spawn trees, jump-ahead blocking with an overlap ledger,
//!   leap-frogging, and the birthday-collision estimator.
//! * [`dpmech`] — the Laplace mechanism wired through the dispatch contract.
//! * [`stattests`] — a small audit battery (monobit, runs, chi-square) and
//!   the MT19937 first-output bias scanner.
//!
//! Determinism is the point: every seeded stream is bit-reproducible across
//! platforms, and seeded state vectors match NumPy's `SeedSequence`/`PCG64`
//! reference behavior exactly, so seeds and results can be exchanged with
//! that ecosystem:
//!
//! ```
//! use dpseedkit::{transform, Pcg64, SeedSequence};
//!
//! // Generator(PCG64(287955962967732827663192315245491885249)).random()
//! // gives the same value in NumPy.
//! let seq = SeedSequence::from_decimal_str("287955962967732827663192315245491885249")?;
//! let mut gen = Pcg64::from_seed_seq(&seq);
//! assert_eq!(transform::next_double(&mut gen), 0.07296271584154868);
//! # Ok::<(), dpseedkit::Error>(())
//! ```

#![forbid(unsafe_code)]

pub mod bitgen;
pub mod dispatch;
pub mod dpmech;
pub mod error;
pub mod parallel;
pub mod seedseq;
pub mod stattests;
pub mod transform;

pub use bitgen::{BitGeneratorState, BitSource, ChaCha20Rng, GeneratorKind, Mt19937, Pcg64};
pub use dispatch::{
    check_random_state, resolve_dp_noise_source, GeneratorHandle, NoiseSource, Provenance,
    RandomStateSpec,
};
pub use dpmech::LaplaceMechanism;
pub use error::{Error, Result};
pub use parallel::{BlockDescriptor, BlockLedger, Leapfrog, StreamPartition};
pub use seedseq::{SeedSequence, SpawnDescriptor};
pub use stattests::{BiasScanReport, Bits, TestReport, Verdict};
