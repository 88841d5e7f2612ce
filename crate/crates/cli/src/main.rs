//! `dpseedkit` — reproducible random streams, DP noise and randomness audits.
//!
//! Exit codes: 0 success (all tests passed), 1 statistical test failure,
//! 2 usage or domain error, 3 I/O error.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dpseedkit::bitgen::{BitGeneratorState, GeneratorKind};
use dpseedkit::dispatch::{check_random_state, GeneratorHandle, RandomStateSpec};
use dpseedkit::dpmech::LaplaceMechanism;
use dpseedkit::parallel::{assign_block, BlockLedger};
use dpseedkit::seedseq::{parse_decimal_seed, SeedSequence, SpawnDescriptor};
use dpseedkit::stattests::{
    chi_square_uniform, exhaustive_first_output_scan, first_output_bias_scan, monobit, runs_test,
    BiasScanReport, Bits, TestReport,
};

const LEDGER_ENV: &str = "DPSEEDKIT_LEDGER";
const DEFAULT_LEDGER: &str = "dpseedkit-ledger.txt";

#[derive(Parser)]
#[command(
    name = "dpseedkit",
    version,
    about = "Reproducible random streams, differential-privacy noise and randomness audits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GeneratorArg {
    Mt19937,
    Pcg64,
    Csprng,
}

impl From<GeneratorArg> for GeneratorKind {
    fn from(arg: GeneratorArg) -> Self {
        match arg {
            GeneratorArg::Mt19937 => GeneratorKind::Mt19937,
            GeneratorArg::Pcg64 => GeneratorKind::Pcg64,
            GeneratorArg::Csprng => GeneratorKind::Csprng,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print a fresh 128-bit entropy integer (decimal) for later seeding
    Entropy,
    /// Spawn child-stream descriptors from a seed, as JSON
    Spawn {
        /// Root seed, a non-negative decimal integer of any size
        #[arg(long)]
        seed: String,
        /// Number of children to spawn
        #[arg(long)]
        n: u32,
    },
    /// Write a raw little-endian word dump (plus a .json metadata sidecar)
    Sample {
        /// Seed, a non-negative decimal integer of any size
        #[arg(long, conflicts_with = "descriptor")]
        seed: Option<String>,
        /// Spawn descriptor: inline JSON or a path to a JSON file
        #[arg(long)]
        descriptor: Option<String>,
        #[arg(long, value_enum, default_value_t = GeneratorArg::Pcg64)]
        generator: GeneratorArg,
        /// Number of words to write (4-byte words for mt19937, 8-byte otherwise)
        #[arg(long)]
        n: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the statistical battery on a word dump; exit 0 iff every test passes
    Test {
        #[arg(long)]
        input: PathBuf,
        /// Significance level
        #[arg(long, default_value_t = 0.001)]
        alpha: f64,
    },
    /// Measure generator throughput (words/second)
    Bench {
        /// Restrict to one generator; all three when omitted
        #[arg(long, value_enum)]
        generator: Option<GeneratorArg>,
        /// Words to generate per engine
        #[arg(long)]
        n: u64,
    },
    /// Add Laplace noise to a value
    Dpnoise {
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        sensitivity: f64,
        #[arg(long)]
        value: f64,
        /// Seed for reproducible noise; omit for secure noise
        #[arg(long)]
        seed: Option<String>,
    },
    /// Scan MT19937 single-word-seed first outputs for unreachable targets
    Biasscan {
        /// Number of seeds to sample (ignored with --exhaustive)
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
        /// Scan every 32-bit seed (hours of CPU, runs in parallel)
        #[arg(long)]
        exhaustive: bool,
        /// Target first outputs to count, comma separated
        #[arg(long, value_delimiter = ',', default_values_t = vec![3u32, 7u32])]
        targets: Vec<u32>,
        /// Seed for the sampling generator; fresh entropy when omitted
        #[arg(long)]
        sample_seed: Option<String>,
    },
    /// Assign a non-overlapping block of a stream, tracked in the ledger
    /// (path from $DPSEEDKIT_LEDGER, default ./dpseedkit-ledger.txt)
    Block {
        /// Stream seed, decimal
        #[arg(long)]
        seed: String,
        /// Name under which the stream's blocks are tracked
        #[arg(long)]
        stream_id: String,
        /// Task index t; the block covers words [t*n, (t+1)*n)
        #[arg(long)]
        task: u64,
        /// Block length in words
        #[arg(long)]
        n: u64,
        /// Also dump the block's words to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum CliError {
    Core(dpseedkit::Error),
    Usage(String),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(err) => err.fmt(f),
            CliError::Usage(msg) => msg.fmt(f),
            CliError::Io(err) => err.fmt(f),
        }
    }
}

impl From<dpseedkit::Error> for CliError {
    fn from(err: dpseedkit::Error) -> Self {
        CliError::Core(err)
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Core(err) => match err {
                dpseedkit::Error::Io(_)
                | dpseedkit::Error::LedgerCorrupt { .. }
                | dpseedkit::Error::OsEntropy(_) => 3,
                _ => 2,
            },
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Entropy => cmd_entropy(),
        Command::Spawn { seed, n } => cmd_spawn(&seed, n),
        Command::Sample {
            seed,
            descriptor,
            generator,
            n,
            out,
        } => cmd_sample(
            seed.as_deref(),
            descriptor.as_deref(),
            generator.into(),
            n,
            &out,
        ),
        Command::Test { input, alpha } => cmd_test(&input, alpha),
        Command::Bench { generator, n } => cmd_bench(generator.map(Into::into), n),
        Command::Dpnoise {
            epsilon,
            sensitivity,
            value,
            seed,
        } => cmd_dpnoise(epsilon, sensitivity, value, seed.as_deref()),
        Command::Biasscan {
            n,
            exhaustive,
            targets,
            sample_seed,
        } => cmd_biasscan(n, exhaustive, &targets, sample_seed.as_deref()),
        Command::Block {
            seed,
            stream_id,
            task,
            n,
            out,
        } => cmd_block(&seed, &stream_id, task, n, out.as_deref()),
    }
}

fn cmd_entropy() -> Result<ExitCode, CliError> {
    let seq = SeedSequence::from_os_entropy()?;
    println!("{}", seq.entropy_int());
    Ok(ExitCode::SUCCESS)
}

fn cmd_spawn(seed: &str, n: u32) -> Result<ExitCode, CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".to_string()));
    }
    let mut root = SeedSequence::from_decimal_str(seed)?;
    let descriptors: Vec<SpawnDescriptor> = root
        .spawn(n as usize)?
        .iter()
        .map(SeedSequence::descriptor)
        .collect();
    println!(
        "{}",
        serde_json::to_string_pretty(&descriptors).expect("serializable")
    );
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SampleMetadata {
    generator: GeneratorKind,
    word_size_bytes: usize,
    n_words: u64,
    /// Identity of the stream; absent for the unseedable secure generator.
    seed: Option<SpawnDescriptor>,
    secure: bool,
}

fn resolve_sample_sequence(
    seed: Option<&str>,
    descriptor: Option<&str>,
) -> Result<SeedSequence, CliError> {
    match (seed, descriptor) {
        (Some(seed), None) => Ok(SeedSequence::from_decimal_str(seed)?),
        (None, Some(descriptor)) => {
            let json = if descriptor.trim_start().starts_with('{') {
                descriptor.to_string()
            } else {
                std::fs::read_to_string(Path::new(descriptor))?
            };
            let parsed: SpawnDescriptor = serde_json::from_str(&json)
                .map_err(|e| dpseedkit::Error::Descriptor(e.to_string()))?;
            Ok(SeedSequence::from_descriptor(&parsed)?)
        }
        (None, None) => Ok(SeedSequence::from_os_entropy()?),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    }
}

fn cmd_sample(
    seed: Option<&str>,
    descriptor: Option<&str>,
    kind: GeneratorKind,
    n_words: u64,
    out: &Path,
) -> Result<ExitCode, CliError> {
    let (mut gen, metadata) = if kind == GeneratorKind::Csprng {
        if seed.is_some() || descriptor.is_some() {
            return Err(CliError::Usage(
                "the csprng generator is not seedable; drop --seed/--descriptor".to_string(),
            ));
        }
        (
            BitGeneratorState::secure()?,
            SampleMetadata {
                generator: kind,
                word_size_bytes: kind.word_size_bytes(),
                n_words,
                seed: None,
                secure: true,
            },
        )
    } else {
        let seq = resolve_sample_sequence(seed, descriptor)?;
        let gen = BitGeneratorState::from_seed_seq(kind, &seq)?;
        (
            gen,
            SampleMetadata {
                generator: kind,
                word_size_bytes: kind.word_size_bytes(),
                n_words,
                seed: Some(seq.descriptor()),
                secure: false,
            },
        )
    };

    let written = write_word_dump(&mut gen, n_words, out)?;

    let sidecar = sidecar_path(out);
    std::fs::write(
        &sidecar,
        serde_json::to_string_pretty(&metadata).expect("serializable"),
    )?;
    eprintln!(
        "wrote {written} bytes to {} (metadata: {})",
        out.display(),
        sidecar.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_os_string();
    name.push(".json");
    PathBuf::from(name)
}

/// Stream `n_words` native words to `path` in 64 KiB batches; returns the
/// byte count.
fn write_word_dump(
    gen: &mut BitGeneratorState,
    n_words: u64,
    path: &Path,
) -> Result<u64, CliError> {
    use std::io::Write;
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    let batch_words = 65_536 / gen.kind().word_size_bytes() as u64;
    let mut remaining = n_words;
    let mut buf = Vec::with_capacity(65_536);
    let mut written = 0u64;
    while remaining > 0 {
        buf.clear();
        for _ in 0..remaining.min(batch_words) {
            gen.write_word_le(&mut buf);
        }
        file.write_all(&buf)?;
        written += buf.len() as u64;
        remaining -= remaining.min(batch_words);
    }
    file.flush()?;
    Ok(written)
}

fn cmd_test(input: &Path, alpha: f64) -> Result<ExitCode, CliError> {
    let bytes = std::fs::read(input)?;
    let samples: Vec<u64> = bytes.iter().map(|&b| u64::from(b)).collect();
    let bits = Bits::from_bytes(bytes);
    let reports: Vec<TestReport> = vec![
        monobit(&bits, alpha)?,
        runs_test(&bits, alpha)?,
        chi_square_uniform(&samples, 256, alpha)?,
    ];
    println!(
        "{}",
        serde_json::to_string_pretty(&reports).expect("serializable")
    );
    if reports.iter().all(TestReport::passed) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

#[derive(Serialize)]
struct BenchReport {
    generator: GeneratorKind,
    n_words: u64,
    elapsed_seconds: f64,
    words_per_second: f64,
}

fn cmd_bench(generator: Option<GeneratorKind>, n_words: u64) -> Result<ExitCode, CliError> {
    if n_words == 0 {
        return Err(CliError::Usage("--n must be at least 1".to_string()));
    }
    let kinds = match generator {
        Some(kind) => vec![kind],
        None => vec![
            GeneratorKind::Pcg64,
            GeneratorKind::Mt19937,
            GeneratorKind::Csprng,
        ],
    };
    let mut reports = Vec::with_capacity(kinds.len());
    for kind in kinds {
        let mut gen = match kind {
            GeneratorKind::Csprng => BitGeneratorState::secure()?,
            seedable => {
                BitGeneratorState::from_seed_seq(seedable, &SeedSequence::from_os_entropy()?)?
            }
        };
        // Warm-up keeps first-block setup out of the measurement.
        let mut sink = 0u64;
        for _ in 0..1024 {
            sink = sink.wrapping_add(gen.next_u64());
        }
        let start = Instant::now();
        for _ in 0..n_words {
            sink = sink.wrapping_add(gen.next_u64());
        }
        let elapsed = start.elapsed().as_secs_f64();
        std::hint::black_box(sink);
        reports.push(BenchReport {
            generator: kind,
            n_words,
            elapsed_seconds: elapsed,
            words_per_second: n_words as f64 / elapsed,
        });
    }
    reports.sort_by(|a, b| {
        b.words_per_second
            .partial_cmp(&a.words_per_second)
            .expect("finite throughput")
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&reports).expect("serializable")
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_dpnoise(
    epsilon: f64,
    sensitivity: f64,
    value: f64,
    seed: Option<&str>,
) -> Result<ExitCode, CliError> {
    let spec = match seed {
        Some(seed) => RandomStateSpec::IntegerSeed(parse_decimal_seed(seed)?),
        None => RandomStateSpec::Absent,
    };
    let mut mech = LaplaceMechanism::new(epsilon, sensitivity, spec)?;
    println!("{}", mech.randomise(value)?);
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct BiasScanOutput {
    mode: &'static str,
    sample_seed: Option<String>,
    report: BiasScanReport,
}

fn cmd_biasscan(
    n: u64,
    exhaustive: bool,
    targets: &[u32],
    sample_seed: Option<&str>,
) -> Result<ExitCode, CliError> {
    if targets.is_empty() {
        return Err(CliError::Usage("--targets must not be empty".to_string()));
    }
    let mut seen = std::collections::HashSet::new();
    let targets: Vec<u32> = targets
        .iter()
        .copied()
        .filter(|t| seen.insert(*t))
        .collect();
    let targets = targets.as_slice();
    let output = if exhaustive {
        BiasScanOutput {
            mode: "exhaustive",
            sample_seed: None,
            report: exhaustive_first_output_scan(targets),
        }
    } else {
        if n == 0 {
            return Err(CliError::Usage("--n must be at least 1".to_string()));
        }
        let seq = match sample_seed {
            Some(seed) => SeedSequence::from_decimal_str(seed)?,
            None => SeedSequence::from_os_entropy()?,
        };
        let sample_seed = seq.entropy_int().to_string();
        let handle = GeneratorHandle::from_seed_sequence(seq);
        let seeds = (0..n).map(|_| handle.next_u64() as u32);
        BiasScanOutput {
            mode: "sampled",
            sample_seed: Some(sample_seed),
            report: first_output_bias_scan(seeds, targets),
        }
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&output).expect("serializable")
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_block(
    seed: &str,
    stream_id: &str,
    task: u64,
    block_len: u64,
    out: Option<&Path>,
) -> Result<ExitCode, CliError> {
    let ledger_path = std::env::var(LEDGER_ENV).unwrap_or_else(|_| DEFAULT_LEDGER.to_string());
    let mut ledger = BlockLedger::with_persistence(&ledger_path)?;
    let base = check_random_state(RandomStateSpec::IntegerSeed(parse_decimal_seed(seed)?))?;
    let (descriptor, handle) = assign_block(&mut ledger, &base, stream_id, task, block_len)?;
    if let Some(out) = out {
        let mut gen = handle.snapshot();
        write_word_dump(&mut gen, block_len, out)?;
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&descriptor).expect("serializable")
    );
    Ok(ExitCode::SUCCESS)
}
