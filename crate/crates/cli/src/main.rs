//! Batch command-line front end: runs the alignment-free protocols and the
//! self-verification suite, and emits machine-readable reports.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use dfs_photonics::protocols::bb84::{run_bb84, run_bb84_polarization_control};
use dfs_photonics::protocols::chsh::{run_chsh, ChshSettings};
use dfs_photonics::protocols::dense_coding::run_dense_coding;
use dfs_photonics::protocols::hardy::{run_hardy, HardySettings};
use dfs_photonics::protocols::report::{to_csv, to_json, SCHEMA_VERSION};
use dfs_photonics::protocols::teleport::{run_teleportation, TeleportInput, TeleportMode};
use dfs_photonics::protocols::{setup_rng, ChannelModel};

#[derive(Parser)]
#[command(
    name = "dfs-photonics",
    version,
    about = "Simulates alignment-free quantum communication with rotation-protected photonic qubits",
    after_help = "Reports embed {artifact_version, seed, config}; identical flags and seed give \
                  byte-identical output. DFS_PHOTONICS_THREADS optionally caps worker threads \
                  (trials currently run sequentially, so any positive cap is honored)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// BB84 key distribution; --trials is the number of transmitted bits.
    Bb84(Bb84Args),
    /// CHSH test on the shared logical Bell state.
    Chsh(ChshArgs),
    /// Hardy nonlocality ladder on non-maximally entangled states.
    Hardy(HardyArgs),
    /// Three-symbol dense coding through the partial Bell analyzer.
    DenseCoding(CommonArgs),
    /// Teleportation of a logical qubit.
    Teleport(TeleportArgs),
    /// Dump the detection-event classifier as JSON.
    BsmTable(OutputArgs),
    /// Run the self-verification suite (exit 1 on any failure).
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Number of Monte Carlo trials (BB84: transmitted bits).
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// RNG seed; every randomized quantity derives from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Channel rotation in radians, or "random" to draw once per session.
    #[arg(long, default_value = "random")]
    theta: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Bb84Args {
    #[command(flatten)]
    common: CommonArgs,
    /// Channel model; defaults to per-session when --theta is "random",
    /// fixed otherwise.
    #[arg(long, value_enum)]
    channel: Option<ChannelArg>,
    /// What carries the key bit.
    #[arg(long, value_enum, default_value_t = EncodingArg::Logical)]
    encoding: EncodingArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChannelArg {
    Fixed,
    PerSession,
    PerPhoton,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EncodingArg {
    Logical,
    Polarization,
}

#[derive(Args)]
struct ChshArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Analyzer angles "a,a',b,b'" in radians.
    #[arg(long, value_parser = parse_four_angles)]
    settings: Option<std::vec::Vec<f64>>,
}

#[derive(Args)]
struct HardyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Entanglement angle ε; omitted means "optimize".
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<f64>,
    /// Analyzer angles "a1,a2,b1,b2"; omitted means the exact
    /// zero-condition solution for ε.
    #[arg(long, value_parser = parse_four_angles, requires = "epsilon")]
    settings: Option<std::vec::Vec<f64>>,
}

#[derive(Args)]
struct TeleportArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Which analyzer results count as success.
    #[arg(long, value_enum, default_value_t = ModeArg::Coincidence)]
    mode: ModeArg,
    /// State preparation for each trial.
    #[arg(long, value_enum, default_value_t = InputArg::Haar)]
    input: InputArg,
    /// Fixed-input amplitude of the logical 0 level, as "re" or "re,im".
    #[arg(long, value_parser = parse_complex, requires = "beta", allow_hyphen_values = true)]
    alpha: Option<Complex64>,
    /// Fixed-input amplitude of the logical 1 level, as "re" or "re,im".
    #[arg(long, value_parser = parse_complex, requires = "alpha", allow_hyphen_values = true)]
    beta: Option<Complex64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Unambiguous,
    Coincidence,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputArg {
    Haar,
    Fixed,
}

#[derive(Args)]
struct VerifyArgs {
    /// Seed for the randomized checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_four_angles(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(format!(
            "expected four comma-separated angles, got {}",
            parts.len()
        ));
    }
    parts
        .iter()
        .map(|part| {
            part.trim()
                .parse()
                .map_err(|e| format!("bad angle {part:?}: {e}"))
        })
        .collect()
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [re] => Ok(Complex64::new(
            re.trim()
                .parse()
                .map_err(|e| format!("bad number {re:?}: {e}"))?,
            0.0,
        )),
        [re, im] => Ok(Complex64::new(
            re.trim()
                .parse()
                .map_err(|e| format!("bad number {re:?}: {e}"))?,
            im.trim()
                .parse()
                .map_err(|e| format!("bad number {im:?}: {e}"))?,
        )),
        _ => Err("expected \"re\" or \"re,im\"".into()),
    }
}

/// Resolves --theta: an explicit angle, or one uniform draw from the
/// session stream of the seed.
fn resolve_theta(theta: &str, seed: u64) -> Result<f64, String> {
    if theta == "random" {
        use rand::Rng;
        Ok(setup_rng(seed).gen::<f64>() * std::f64::consts::TAU)
    } else {
        theta.trim().parse::<f64>().map_err(|_| {
            format!("--theta must be a number in radians or \"random\", got {theta:?}")
        })
    }
}

fn check_thread_cap() -> Result<(), String> {
    match std::env::var("DFS_PHOTONICS_THREADS") {
        Err(_) => Ok(()),
        Ok(raw) => match raw.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(()),
            _ => Err(format!(
                "DFS_PHOTONICS_THREADS must be a positive integer, got {raw:?}"
            )),
        },
    }
}

fn emit(out: &OutputArgs, report: &impl serde::Serialize) -> Result<(), String> {
    let text = match out.format {
        Format::Json => to_json(report),
        Format::Csv => to_csv(report),
    };
    match &out.output {
        None => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| format!("write failed: {e}"))?;
        }
        Some(path) => {
            std::fs::write(path, text).map_err(|e| format!("cannot write {path:?}: {e}"))?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, String> {
    check_thread_cap()?;
    match cli.command {
        Command::Bb84(args) => {
            let channel = match (args.channel, args.common.theta.as_str()) {
                (Some(ChannelArg::Fixed), theta) => ChannelModel::Fixed {
                    theta: resolve_theta(theta, args.common.seed)?,
                },
                (Some(ChannelArg::PerSession), _) => ChannelModel::RandomPerSession,
                (Some(ChannelArg::PerPhoton), _) => ChannelModel::RandomPerPhoton,
                (None, "random") => ChannelModel::RandomPerSession,
                (None, theta) => ChannelModel::Fixed {
                    theta: resolve_theta(theta, args.common.seed)?,
                },
            };
            let report = match args.encoding {
                EncodingArg::Logical => run_bb84(args.common.trials, channel, args.common.seed),
                EncodingArg::Polarization => {
                    let ChannelModel::Fixed { theta } = channel else {
                        return Err(
                            "the polarization control run needs a fixed channel angle \
                             (--theta <radians>, or --channel fixed)"
                                .into(),
                        );
                    };
                    run_bb84_polarization_control(args.common.trials, theta, args.common.seed)
                }
            };
            emit(&args.common.output, &report)?;
            Ok(0)
        }
        Command::Chsh(args) => {
            let theta = resolve_theta(&args.common.theta, args.common.seed)?;
            let settings = match args.settings.as_deref() {
                Some([a, a_prime, b, b_prime]) => ChshSettings {
                    a: *a,
                    a_prime: *a_prime,
                    b: *b,
                    b_prime: *b_prime,
                },
                Some(_) => unreachable!("parser enforces four angles"),
                None => ChshSettings::default(),
            };
            let report = run_chsh(&settings, theta, args.common.trials, args.common.seed);
            emit(&args.common.output, &report)?;
            Ok(0)
        }
        Command::Hardy(args) => {
            let theta = resolve_theta(&args.common.theta, args.common.seed)?;
            let settings = match args.settings.as_deref() {
                Some([a1, a2, b1, b2]) => Some(HardySettings {
                    a1: *a1,
                    a2: *a2,
                    b1: *b1,
                    b2: *b2,
                }),
                Some(_) => unreachable!("parser enforces four angles"),
                None => None,
            };
            let report = run_hardy(
                args.epsilon,
                settings,
                theta,
                args.common.trials,
                args.common.seed,
            )
            .map_err(|e| e.to_string())?;
            emit(&args.common.output, &report)?;
            Ok(0)
        }
        Command::DenseCoding(common) => {
            let theta = resolve_theta(&common.theta, common.seed)?;
            let report = run_dense_coding(common.trials, common.seed, theta);
            emit(&common.output, &report)?;
            Ok(0)
        }
        Command::Teleport(args) => {
            let theta = resolve_theta(&args.common.theta, args.common.seed)?;
            let mode = match args.mode {
                ModeArg::Unambiguous => TeleportMode::Unambiguous,
                ModeArg::Coincidence => TeleportMode::CoincidenceBasis,
            };
            let input = match args.input {
                InputArg::Haar => TeleportInput::HaarRandom,
                InputArg::Fixed => match (args.alpha, args.beta) {
                    (Some(alpha), Some(beta)) => TeleportInput::Fixed { alpha, beta },
                    _ => return Err("--input fixed requires --alpha and --beta".into()),
                },
            };
            let report =
                run_teleportation(mode, args.common.trials, args.common.seed, input, theta)
                    .map_err(|e| e.to_string())?;
            emit(&args.common.output, &report)?;
            Ok(0)
        }
        Command::BsmTable(out) => {
            let report = bsm_table_report();
            emit(&out, &report)?;
            Ok(0)
        }
        Command::Verify(args) => {
            let results = dfs_photonics::verify::run_all(args.seed);
            let all_passed = results.iter().all(|r| r.passed);
            for r in &results {
                eprintln!(
                    "{} {} ({})",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.detail
                );
            }
            let report = VerifyReport {
                schema_version: SCHEMA_VERSION,
                artifact_version: dfs_photonics::ARTIFACT_VERSION,
                protocol: "verify",
                seed: args.seed,
                config: EmptyConfig {},
                passed: all_passed,
                checks: results,
            };
            emit(&args.output, &report)?;
            Ok(if all_passed { 0 } else { 1 })
        }
    }
}

/// Placeholder so that every report carries a `config` object.
#[derive(serde::Serialize)]
struct EmptyConfig {}

#[derive(serde::Serialize)]
struct VerifyReport {
    schema_version: u32,
    artifact_version: &'static str,
    protocol: &'static str,
    seed: u64,
    config: EmptyConfig,
    passed: bool,
    checks: Vec<dfs_photonics::verify::CheckResult>,
}

#[derive(serde::Serialize)]
struct BsmTableReport {
    schema_version: u32,
    artifact_version: &'static str,
    protocol: &'static str,
    seed: u64,
    config: EmptyConfig,
    entries: Vec<BsmTableEntry>,
}

#[derive(serde::Serialize)]
struct BsmTableEntry {
    event: [String; 2],
    coincidence: bool,
    class: dfs_photonics::bsm::BellClass,
}

fn bsm_table_report() -> BsmTableReport {
    let entries = dfs_photonics::bsm::classifier()
        .table()
        .into_iter()
        .map(|(event, class)| {
            let [a, b] = event.bins();
            BsmTableEntry {
                event: [a.to_string(), b.to_string()],
                coincidence: event.is_coincidence(),
                class,
            }
        })
        .collect();
    BsmTableReport {
        schema_version: SCHEMA_VERSION,
        artifact_version: dfs_photonics::ARTIFACT_VERSION,
        protocol: "bsm_table",
        seed: 0,
        config: EmptyConfig {},
        entries,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
