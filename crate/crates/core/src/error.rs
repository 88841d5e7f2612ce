use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("seed must be a non-negative decimal integer, got {0:?}")]
    SeedParse(String),
    #[error("requested zero state words")]
    EmptyStateRequest,
    #[error("spawn count must be at least 1")]
    ZeroSpawnCount,
    #[error("spawn key space exhausted")]
    SpawnKeyExhausted,
    #[error("{0} cannot be seeded")]
    NotSeedable(&'static str),
    #[error("invalid bounds: low {low} > high {high}")]
    InvalidBounds { low: u64, high: u64 },
    #[error("uniform variate {0} outside the open interval (0, 1)")]
    UnitIntervalDomain(f64),
    #[error("scale must be positive and finite, got {0}")]
    NonPositiveScale(f64),
    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
    #[error("sensitivity must be non-negative and finite, got {0}")]
    InvalidSensitivity(f64),
    #[error("value must be finite, got {0}")]
    NonFiniteValue(f64),
    #[error("task count must be at least 1")]
    ZeroTaskCount,
    #[error("task index {task} out of range for {total} tasks")]
    TaskOutOfRange { task: u64, total: u64 },
    #[error("block length must be at least 1")]
    ZeroBlockLength,
    #[error("block {task} of stream {stream_id:?} already assigned")]
    BlockOverlap { stream_id: String, task: u64 },
    #[error("stream id must be non-empty and free of tabs and newlines, got {0:?}")]
    InvalidStreamId(String),
    #[error("{generator} does not support jump-ahead")]
    JumpUnsupported { generator: &'static str },
    #[error("OS entropy source failed: {0}")]
    OsEntropy(String),
    #[error("bit string too short: need at least {required} bits, got {actual}")]
    BitsTooShort { required: usize, actual: usize },
    #[error("invalid character {0:?} in bit string")]
    InvalidBitChar(char),
    #[error("bin count must be at least 2")]
    InvalidBinCount,
    #[error("sample {value} does not fit in {bins} bins")]
    SampleOutOfRange { value: u64, bins: u64 },
    #[error("undersampled bins: expected {expected:.3} per bin, need at least {minimum}")]
    UndersampledBins { expected: f64, minimum: f64 },
    #[error("ledger line {line}: {reason}")]
    LedgerCorrupt { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("invalid spawn descriptor: {0}")]
    Descriptor(String),
}

pub type Result<T> = std::result::Result<T, Error>;
