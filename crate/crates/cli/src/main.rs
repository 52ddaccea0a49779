//! `wallsun` — Pisano periods, Fibonacci-Wieferich scans, heuristics,
//! and Fibonacci abc-triple tables from the command line.
//!
//! Exit codes: 0 success; 2 usage or invalid input; 3 factorization or
//! budget incompleteness; 4 internal sanity violation or a failed
//! verification suite — a criteria disagreement must never be silent.

mod output;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wallsun_core::abc_triples::{self, factor};
use wallsun_core::heuristics::{self, HeuristicModel};
use wallsun_core::periods;
use wallsun_core::wieferich::{self, scan::ScanConfig, ScanSummary};
use wallsun_core::Error as CoreError;

use output::{writer, Format};

#[derive(Parser)]
#[command(name = "wallsun", version, about, max_term_width = 100)]
struct Cli {
    /// Output format where tabular (each command has a sensible default)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for randomized internals (cross-check sampling); 0 is the
    /// reproducible default
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads (flag wins over the WALLSUN_THREADS variable;
    /// default is the available parallelism)
    #[arg(long, global = true, env = "WALLSUN_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pisano period profile of a modulus m ≥ 2
    Pisano { m: u64 },
    /// Rank of apparition l(m): least n > 0 with F(n) ≡ 0 mod m
    Rank { m: u64 },
    /// Fibonacci-Wieferich test of a single prime
    Fwtest {
        p: u64,
        /// Near-miss bound on |k|
        #[arg(long, default_value_t = 100)]
        threshold: u64,
    },
    /// Scan a prime range for Fibonacci-Wieferich primes and near misses
    Scan {
        #[arg(long, default_value_t = 7)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long, default_value_t = 100)]
        threshold: u64,
        #[arg(long, default_value_t = wieferich::scan::DEFAULT_SEGMENT_SIZE)]
        segment_size: u64,
        /// Checkpoint file for kill/resume
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Fraction of primes double-checked against the α-criterion
        #[arg(long, default_value_t = wieferich::scan::DEFAULT_SAMPLE_RATE)]
        sample_rate: f64,
        /// Also write the JSON summary to this file (it always goes to stderr)
        #[arg(long)]
        summary_out: Option<PathBuf>,
    },
    /// Expected Fibonacci-Wieferich counts under a heuristic model
    Heuristic {
        #[arg(long, default_value = "cdp")]
        model: HeuristicModel,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Report the expected near-miss count at this threshold instead
        #[arg(long)]
        near_miss: Option<u64>,
    },
    /// Expected-vs-observed near-miss comparison for a completed scan
    NearmissReport {
        /// JSON summary produced by `scan`
        #[arg(long, conflicts_with_all = ["from", "to"])]
        summary: Option<PathBuf>,
        #[arg(long, requires = "to")]
        from: Option<u64>,
        #[arg(long, requires = "from")]
        to: Option<u64>,
        #[arg(long, default_value_t = 100)]
        threshold: u64,
        #[arg(long, default_value = "cdp")]
        model: HeuristicModel,
    },
    /// Height, radical, and quality of the abc-triple (√5Fₙ, −αⁿ, ᾱⁿ)
    AbcTriple {
        n: u64,
        #[arg(long, default_value_t = abc_triples::DEFAULT_PRECISION_BITS)]
        precision: u32,
    },
    /// Quality table for n = 1..=max_n
    AbcTable {
        #[arg(long)]
        max_n: u64,
    },
    /// Run a verification suite; nonzero exit on any violation
    Verify {
        #[arg(long, value_enum)]
        suite: verify::Suite,
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

/// 2 for bad input, 3 for budget/incompleteness, 4 for sanity violations
/// and failed verification, 1 otherwise (I/O and the like).
fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<CoreError>() {
        Some(
            CoreError::ConfigInvalid(_)
            | CoreError::RangeInvalid { .. }
            | CoreError::PeriodUndefined { .. }
            | CoreError::LegendreUndefined
            | CoreError::NotInvertible { .. }
            | CoreError::OrderNotDividing { .. }
            | CoreError::CheckpointCorrupt(_),
        ) => 2,
        Some(
            CoreError::CapExceeded { .. }
            | CoreError::FactorizationBudgetExceeded { .. }
            | CoreError::IncompleteFactorization { .. },
        ) => 3,
        Some(CoreError::SanityViolation(_)) => 4,
        Some(CoreError::Io(_)) => 1,
        None => {
            if err.downcast_ref::<verify::SuiteFailed>().is_some() {
                4
            } else {
                1
            }
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let threads = cli.threads.unwrap_or_else(|| {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    });

    match cli.command {
        Command::Pisano { m } => {
            let profile = periods::pisano(m)?;
            let mut w = writer(&cli.out)?;
            match cli.format.unwrap_or(Format::Text) {
                Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&profile)?)?,
                Format::Csv => writeln!(w, "{},{},{}", profile.m, profile.pi, profile.rank)?,
                Format::Text => {
                    writeln!(w, "π({}) = {}", profile.m, profile.pi)?;
                    writeln!(w, "l({}) = {}", profile.m, profile.rank)?;
                    for f in &profile.factors {
                        writeln!(
                            w,
                            "  {}^{}: π = {}, l = {}  [{:?}]",
                            f.p, f.e, f.pi, f.rank, f.provenance
                        )?;
                    }
                    if let Some(e0) = profile.lift_exponent {
                        writeln!(w, "  lift exponent e₀ = {e0}")?;
                    }
                }
            }
        }

        Command::Rank { m } => {
            let rank = periods::rank_of_apparition(m)?;
            let mut w = writer(&cli.out)?;
            match cli.format.unwrap_or(Format::Text) {
                Format::Json => writeln!(w, "{}", serde_json::json!({ "m": m, "rank": rank }))?,
                Format::Csv => writeln!(w, "{m},{rank}")?,
                Format::Text => writeln!(w, "l({m}) = {rank}")?,
            }
        }

        Command::Fwtest { p, threshold } => {
            if !factor::is_prime_u64(p) {
                anyhow::bail!(CoreError::ConfigInvalid(format!("{p} is not prime")));
            }
            let record = wieferich::fw_test(p, threshold)?;
            let mut w = writer(&cli.out)?;
            match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => writeln!(w, "{}", record.csv_row())?,
                Format::Json => writeln!(w, "{}", serde_json::to_string(&record)?)?,
                Format::Text => writeln!(
                    w,
                    "p = {}: ε = {}, k = {}, k_p = {} + {}α, is_fw = {}, near_miss(T={}) = {}",
                    record.p, record.epsilon, record.k, record.a, record.b, record.is_fw,
                    threshold, record.is_near_miss
                )?,
            }
        }

        Command::Scan {
            from,
            to,
            threshold,
            segment_size,
            checkpoint,
            sample_rate,
            summary_out,
        } => {
            let config = ScanConfig {
                range_start: from,
                range_end: to,
                threshold,
                segment_size,
                worker_count: threads,
                checkpoint_path: checkpoint,
                cross_check_sample_rate: sample_rate,
                seed: cli.seed,
            };
            let outcome = wieferich::scan(&config)?;
            let mut w = writer(&cli.out)?;
            match cli.format.unwrap_or(Format::Csv) {
                Format::Json => {
                    for r in &outcome.records {
                        writeln!(w, "{}", serde_json::to_string(r)?)?;
                    }
                }
                _ => {
                    for r in &outcome.records {
                        writeln!(w, "{}", r.csv_row())?;
                    }
                }
            }
            let summary_json = serde_json::to_string(&outcome.summary)?;
            eprintln!("{summary_json}");
            if let Some(path) = summary_out {
                std::fs::write(path, format!("{summary_json}\n"))?;
            }
        }

        Command::Heuristic { model, from, to, near_miss } => {
            let (kind, expectation) = match near_miss {
                Some(t) => ("near_miss", heuristics::expected_near_misses_for(model, from, to, t)?),
                None => ("fw", heuristics::expected_fw_count(model, from, to)?),
            };
            let mut w = writer(&cli.out)?;
            let body = serde_json::json!({
                "model": model,
                "description": model.description(),
                "kind": kind,
                "range": [from, to],
                "threshold": near_miss,
                "expected": expectation.value,
                "approximate": expectation.approximate,
            });
            match cli.format.unwrap_or(Format::Json) {
                Format::Csv => writeln!(
                    w,
                    "{model},{kind},{from},{to},{},{}",
                    expectation.value, expectation.approximate as u8
                )?,
                _ => writeln!(w, "{body}")?,
            }
        }

        Command::NearmissReport { summary, from, to, threshold, model } => {
            let summary: ScanSummary = match (summary, from, to) {
                (Some(path), _, _) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
                (None, Some(from), Some(to)) => {
                    let mut config = ScanConfig::new(from, to);
                    config.threshold = threshold;
                    config.worker_count = threads;
                    config.seed = cli.seed;
                    wieferich::scan(&config)?.summary
                }
                _ => anyhow::bail!(CoreError::ConfigInvalid(
                    "provide --summary FILE or --from/--to".into()
                )),
            };
            let report = heuristics::compare(&summary, model)?;
            let mut w = writer(&cli.out)?;
            writeln!(w, "{}", serde_json::to_string_pretty(&report)?)?;
        }

        Command::AbcTriple { n, precision } => {
            let report = abc_triples::triple_report_with(
                n,
                abc_triples::DEFAULT_INDEX_CAP,
                precision,
                &factor::FactorBudget::default(),
            )?;
            let mut w = writer(&cli.out)?;
            match cli.format.unwrap_or(Format::Json) {
                Format::Csv => writeln!(w, "{}", abc_csv_row(&report))?,
                _ => writeln!(w, "{}", serde_json::to_string_pretty(&report)?)?,
            }
        }

        Command::AbcTable { max_n } => {
            let mut w = writer(&cli.out)?;
            let json = cli.format == Some(Format::Json);
            if json {
                writeln!(w, "[")?;
            } else {
                writeln!(w, "n,f_n,u_n,v_n,log_height,log_radical,quality,height_ok,radical_ok")?;
            }
            for n in 1..=max_n {
                let report = abc_triples::triple_report_with(
                    n,
                    max_n.max(abc_triples::DEFAULT_INDEX_CAP),
                    abc_triples::DEFAULT_PRECISION_BITS,
                    &factor::FactorBudget::default(),
                )?;
                if json {
                    let sep = if n == max_n { "" } else { "," };
                    writeln!(w, "{}{sep}", serde_json::to_string(&report)?)?;
                } else {
                    writeln!(w, "{}", abc_csv_row(&report))?;
                }
            }
            if json {
                writeln!(w, "]")?;
            }
        }

        Command::Verify { suite, bound } => {
            verify::run_suite(suite, bound, threads)?;
        }
    }
    Ok(())
}

fn abc_csv_row(r: &abc_triples::AbcTripleReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}",
        r.n,
        r.f_n,
        r.u_n,
        r.v_n,
        r.log_height,
        r.log_radical,
        r.quality,
        r.height_bound_ok as u8,
        r.radical_bound_ok as u8
    )
}
