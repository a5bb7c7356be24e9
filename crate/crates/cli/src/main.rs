use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use syracuse::descent::Integrality;
use syracuse::{
    case34_identity_check, case34_m, case34_r, classify, decompose, descend, f_step, g_step,
    orbit_stats, preimages, records, verify_range, CaseTag, ClaimId, Decomposition, Error, Nat,
    OddNat, Verdict, VerifyConfig, DEFAULT_BUDGET,
};
use syracuse_cli::{
    ClassifyPayload, DescendPayload, ExpandPayload, Format, Output, PeakPayload, RecordRow, StepF,
    StepG,
};

const EXIT_OK: u8 = 0;
const EXIT_COUNTEREXAMPLE: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_USAGE: u8 = 3;
const EXIT_CHECKPOINT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "syracuse",
    version,
    about = "Syracuse/Collatz dynamics: exact maps, case analysis, descent witnesses, claim checking, and bounded range verification",
    disable_help_subcommand = true
)]
struct Cli {
    /// Output format for data records on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MapChoice {
    G,
    F,
}

#[derive(Subcommand)]
enum Command {
    /// Apply the Collatz map g or the Syracuse map f.
    Step {
        /// Starting value (odd required for f).
        k: String,
        #[arg(long, value_enum, default_value_t = MapChoice::G)]
        map: MapChoice,
        /// Number of applications.
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
    /// Write k as 2^p·h − 1 with h odd.
    Decompose { k: String },
    /// Case of an odd k >= 3, with the attached data.
    Classify { k: String },
    /// Per-case descent evidence: a witness for cases 1-4, the
    /// nonexistence record for cases 5/6.
    Descend { k: String },
    /// All odd m with f(m) = k at valuation up to --s-max.
    Preimages {
        k: String,
        #[arg(long = "s-max")]
        s_max: u32,
    },
    /// The closed-form iterates 3^n·2^(p−n)·h − 1 for n = 1..p−1.
    Expand {
        /// Odd integer to decompose (alternative to --p/--h).
        k: Option<String>,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        h: Option<String>,
    },
    /// 3^p·h − 1 and its odd part f^p(k).
    Peak {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        h: String,
    },
    /// Orbit statistics: stopping times, peak, bounded membership.
    Orbit {
        k: String,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Verify every odd integer in a range reaches 1 (or the frontier).
    Verify {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long = "chunk-size")]
        chunk_size: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Treat every odd integer below --from as already verified.
        #[arg(long = "assume-verified-below")]
        assume_verified_below: bool,
    },
    /// Stopping-time and peak record setters over a range.
    Records {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Check registered claims over a range, searching for the smallest
    /// counterexamples.
    Claims {
        /// Single claim id (default: the whole registry).
        #[arg(long)]
        id: Option<String>,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Maximum counterexamples to collect per claim.
        #[arg(long, default_value_t = 10)]
        limit: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::from(EXIT_OK);
            }
            // One-line diagnostic on the error stream.
            let message = e.to_string();
            eprintln!("{}", message.lines().next().unwrap_or("invalid usage"));
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let format = cli.format;
    match run(cli.command) {
        Ok((output, code)) => {
            if !output.is_empty() {
                println!("{}", output.render(format));
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(
            Error::CheckpointCorrupt(_)
            | Error::CheckpointConfigMismatch { .. }
            | Error::CheckpointMissing(_),
        ) => EXIT_CHECKPOINT,
        _ => EXIT_USAGE,
    }
}

fn parse_nat(s: &str, what: &str) -> Result<Nat> {
    Nat::from_str(s).with_context(|| format!("invalid {what}"))
}

fn parse_odd(s: &str, what: &str) -> Result<OddNat> {
    OddNat::from_str(s).with_context(|| format!("invalid {what}"))
}

fn run(command: Command) -> Result<(Output, u8)> {
    let mut out = Output::default();
    let code = match command {
        Command::Step { k, map, count } => {
            if count == 0 {
                bail!("--count must be at least 1");
            }
            match map {
                MapChoice::G => {
                    let mut value = parse_nat(&k, "k")?;
                    for index in 1..=count {
                        let next = g_step(&value)?;
                        out.push(
                            "step",
                            &StepG {
                                map: "g".into(),
                                index,
                                input: value.clone(),
                                value: next.clone(),
                            },
                        );
                        value = next;
                    }
                }
                MapChoice::F => {
                    let mut value = parse_odd(&k, "k (the Syracuse map needs an odd input)")?;
                    for index in 1..=count {
                        let step = f_step(&value);
                        out.push(
                            "step",
                            &StepF {
                                map: "f".into(),
                                index,
                                k: value.clone(),
                                next: step.next.clone(),
                                valuation: step.valuation,
                            },
                        );
                        value = step.next;
                    }
                }
            }
            EXIT_OK
        }
        Command::Decompose { k } => {
            let k = parse_odd(&k, "k")?;
            out.push("decompose", &decompose(&k));
            EXIT_OK
        }
        Command::Classify { k } => {
            let k = parse_odd(&k, "k")?;
            let d = decompose(&k);
            let tag = classify(&k)?;
            out.push(
                "classify",
                &ClassifyPayload {
                    k,
                    case: tag.kind(),
                    p: d.p(),
                    h: d.h().clone(),
                    ell: tag.ell().cloned(),
                    hbar: tag.hbar().cloned(),
                },
            );
            EXIT_OK
        }
        Command::Descend { k } => {
            let k = parse_odd(&k, "k")?;
            let outcome = descend(&k)?;
            // For cases 3/4 with integral r, attach the exact identity.
            let identity = match classify(&k)? {
                CaseTag::Case3 { .. } | CaseTag::Case4 { .. } => match case34_r(&case34_m(&k)?)? {
                    Integrality::Integral(r) => Some(case34_identity_check(&k, &r)?),
                    Integrality::NonIntegral { .. } => None,
                },
                _ => None,
            };
            out.push("descend", &DescendPayload { outcome, identity });
            EXIT_OK
        }
        Command::Preimages { k, s_max } => {
            if s_max == 0 {
                bail!("--s-max must be at least 1");
            }
            let k = parse_odd(&k, "k")?;
            out.push("preimages", &preimages(&k, s_max)?);
            EXIT_OK
        }
        Command::Expand { k, p, h } => {
            let d = expand_input(k, p, h)?;
            if d.p() < 2 {
                bail!("the expansion phase needs p >= 2 (k = 2h-1 has none)");
            }
            for n in 1..d.p() {
                let value = syracuse::expansion(&d, n)?;
                out.push(
                    "expand",
                    &ExpandPayload {
                        k: d.k().clone(),
                        p: d.p(),
                        h: d.h().clone(),
                        n,
                        value,
                    },
                );
            }
            EXIT_OK
        }
        Command::Peak { p, h } => {
            let h = parse_odd(&h, "h")?;
            let d = Decomposition::from_parts(p, h)?;
            let pv = syracuse::peak_value(&d)?;
            out.push(
                "peak",
                &PeakPayload {
                    k: d.k().clone(),
                    p: d.p(),
                    h: d.h().clone(),
                    pre_division: pv.pre_division,
                    odd_part: pv.odd_part,
                    valuation: pv.valuation,
                },
            );
            EXIT_OK
        }
        Command::Orbit { k, budget } => {
            let k = parse_odd(&k, "k")?;
            let budget = budget.unwrap_or(DEFAULT_BUDGET);
            if budget == 0 {
                bail!("--budget must be at least 1");
            }
            let stats = orbit_stats(&k, budget);
            let exhausted = stats.budget_exhausted;
            out.push("orbit", &stats);
            if exhausted {
                EXIT_BUDGET
            } else {
                EXIT_OK
            }
        }
        Command::Verify {
            from,
            to,
            chunk_size,
            workers,
            checkpoint,
            assume_verified_below,
        } => {
            let mut config =
                VerifyConfig::new(parse_nat(&from, "--from")?, parse_nat(&to, "--to")?);
            if let Some(chunk_size) = chunk_size {
                config.chunk_size = chunk_size;
            }
            if let Some(workers) = workers {
                config.worker_count = workers;
            }
            config.checkpoint_path = checkpoint;
            config.assume_below_lo_verified = assume_verified_below;
            let report = verify_range(&config)?;
            let code = if !report.failures.is_empty() {
                EXIT_COUNTEREXAMPLE
            } else if !report.budget_exceeded.is_empty() {
                EXIT_BUDGET
            } else {
                EXIT_OK
            };
            out.push("verify", &report);
            code
        }
        Command::Records { from, to } => {
            let report = records(&parse_nat(&from, "--from")?, &parse_nat(&to, "--to")?)?;
            for record in &report.stopping_time_records {
                out.push(
                    "records",
                    &RecordRow {
                        list: "stopping_time".into(),
                        k: record.k.clone(),
                        collatz_steps: Some(record.collatz_steps),
                        peak: None,
                    },
                );
            }
            for record in &report.peak_records {
                out.push(
                    "records",
                    &RecordRow {
                        list: "peak".into(),
                        k: record.k.clone(),
                        collatz_steps: None,
                        peak: Some(record.peak.clone()),
                    },
                );
            }
            if report.budget_exceeded.is_empty() {
                EXIT_OK
            } else {
                eprintln!(
                    "warning: {} seed(s) exhausted the step budget and are absent from the records",
                    report.budget_exceeded.len()
                );
                EXIT_BUDGET
            }
        }
        Command::Claims {
            id,
            from,
            to,
            limit,
        } => {
            let lo = parse_nat(&from, "--from")?;
            let hi = parse_nat(&to, "--to")?;
            let claims: Vec<ClaimId> = match id {
                Some(id) => vec![ClaimId::from_str(&id)?],
                None => ClaimId::ALL.to_vec(),
            };
            let mut any_fails = false;
            for claim in claims {
                let report = syracuse::check_claim(claim, &lo, &hi, limit)?;
                any_fails |= report.verdict == Verdict::Fails;
                out.push("claims", &report);
            }
            if any_fails {
                EXIT_COUNTEREXAMPLE
            } else {
                EXIT_OK
            }
        }
    };
    Ok((out, code))
}

fn expand_input(k: Option<String>, p: Option<u32>, h: Option<String>) -> Result<Decomposition> {
    match (k, p, h) {
        (Some(k), None, None) => Ok(decompose(&parse_odd(&k, "k")?)),
        (None, Some(p), Some(h)) => {
            Ok(Decomposition::from_parts(p, parse_odd(&h, "--h")?).map_err(|e| anyhow!(e))?)
        }
        _ => bail!("expand takes either a bare k or both --p and --h"),
    }
}
