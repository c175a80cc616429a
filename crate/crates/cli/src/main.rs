//! `mlcs`: multi-sequence LCS and alignment-distance toolkit.
//!
//! Every command reads plain text (one sequence per line, `#` lines ignored,
//! the first line is `s_1`) and emits a single structured JSON document with
//! a fixed field order. Runs are deterministic per `--seed`.

use clap::{Args, Parser, Subcommand, ValueEnum};
use mlcs_core::alignment::Alignment;
use mlcs_core::exact::banded::BandedOutcome;
use mlcs_core::rat::{display, parse_decimal, Rat};
use mlcs_core::seq::{AlphabetMode, Interner, Sequence};
use mlcs_core::testkit::{gen_instance, ratio_audit, InstanceSpec, Planting};
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Read;
use std::process::ExitCode;

const SEED_ENV: &str = "MLCS_SEED";

#[derive(Parser)]
#[command(name = "mlcs", version, about = "multi-sequence LCS / alignment distance toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Dp,
    Candidates,
    Banded,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Alphabet {
    Bytes,
    Tokens,
}

#[derive(Args)]
struct InputArgs {
    /// Input file; `-` reads standard input.
    #[arg(long, default_value = "-")]
    input: String,
    /// How text maps to symbols.
    #[arg(long, value_enum, default_value_t = Alphabet::Bytes)]
    alphabet: Alphabet,
    /// Run seed (default: the MLCS_SEED environment variable, else 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Cap on internal parallelism.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Exact LCS / alignment distance with a selectable engine.
    Exact {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Engine::Dp)]
        engine: Engine,
        /// Distance threshold for the banded engine.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Below-2 approximation of the alignment distance (large-distance
    /// regime), optionally with c-group composition.
    AlignApprox {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        epsilon: String,
        /// Even group-count parameter c.
        #[arg(long)]
        groups: Option<usize>,
    },
    /// Multi-sequence LCS approximation.
    LcsApprox {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        epsilon: String,
    },
    /// Windowed below-2 pipeline for a pseudorandom first string.
    PseudoAlign {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        p: String,
        #[arg(long = "B")]
        b: usize,
        #[arg(long)]
        epsilon: String,
        /// Re-verify the pseudorandomness hypothesis first.
        #[arg(long)]
        verify: bool,
    },
    /// Exhaustive (p, B)-pseudorandomness check of the first sequence.
    CheckPseudorandom {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        p: String,
        #[arg(long = "B")]
        b: usize,
    },
    /// Deterministic instance generation.
    Gen {
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        alphabet_size: u32,
        #[arg(long)]
        seed: Option<u64>,
        /// none | common-core | bounded-distance | pseudorandom-base
        #[arg(long, default_value = "none")]
        planting: String,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        theta: Option<String>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long = "B")]
        b: Option<usize>,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Oracle-backed ratio audits (line-delimited records plus a summary).
    Audit {
        /// engines | similarity | gap-sweep | lcs-floor
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

/// The structured result document; field order is fixed.
#[derive(Serialize)]
struct Doc {
    command: String,
    params: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    distance: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lcs_length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unaligned_s1: Option<Vec<u32>>,
    diagnostics: serde_json::Value,
    seed: u64,
}

impl Doc {
    fn new(command: &str, seed: u64) -> Self {
        Doc {
            command: command.to_string(),
            params: BTreeMap::new(),
            distance: None,
            lcs_length: None,
            witness: None,
            unaligned_s1: None,
            diagnostics: serde_json::Value::Null,
            seed,
        }
    }

    fn print(&self) {
        println!(
            "{}",
            serde_json::to_string_pretty(self).expect("document serializes")
        );
    }
}

enum CliError {
    Input(String),
    Core(mlcs_core::Error),
}

impl From<mlcs_core::Error> for CliError {
    fn from(e: mlcs_core::Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn seed_of(explicit: Option<u64>) -> u64 {
    explicit.unwrap_or_else(|| {
        std::env::var(SEED_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(0)
    })
}

fn parse_rat(name: &str, value: &str) -> CliResult<Rat> {
    parse_decimal(value)
        .ok_or_else(|| CliError::Input(format!("cannot parse --{name} value `{value}`")))
}

fn read_sequences(input: &InputArgs) -> CliResult<(Vec<Sequence>, Interner)> {
    let text = if input.input == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Input(format!("reading stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(&input.input)
            .map_err(|e| CliError::Input(format!("reading {}: {e}", input.input)))?
    };
    let mode = match input.alphabet {
        Alphabet::Bytes => AlphabetMode::Bytes,
        Alphabet::Tokens => AlphabetMode::Tokens,
    };
    let mut interner = Interner::new(mode);
    let mut sequences = Vec::new();
    for line in text.lines() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let symbols = interner.intern_line(line);
        sequences.push(Sequence::new(sequences.len() as u32 + 1, symbols));
    }
    if sequences.is_empty() {
        return Err(CliError::Input("no sequences in input".into()));
    }
    Ok((sequences, interner))
}

fn witness_fields(
    doc: &mut Doc,
    witness: &Alignment,
    strings: &[Sequence],
    interner: &Interner,
) {
    doc.witness = Some(interner.render(&witness.symbols(&strings[0])));
    doc.unaligned_s1 = Some(witness.unaligned_indices(0, strings[0].len()));
}

fn init_threads(threads: usize) {
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build_global();
}

fn run() -> CliResult<u8> {
    let cli = Cli::parse();
    match cli.command {
        Command::Exact { input, engine, k } => {
            init_threads(input.threads);
            let seed = seed_of(input.seed);
            let (strings, interner) = read_sequences(&input)?;
            let mut doc = Doc::new("exact", seed);
            doc.params.insert(
                "engine".into(),
                match engine {
                    Engine::Dp => "dp",
                    Engine::Candidates => "candidates",
                    Engine::Banded => "banded",
                }
                .into(),
            );
            let equal_lengths = strings.iter().all(|s| s.len() == strings[0].len());
            match engine {
                Engine::Dp => {
                    let (len, witness) = mlcs_core::exact::lcs_exact(&strings)?;
                    doc.lcs_length = Some(len);
                    if equal_lengths {
                        doc.distance = Some((strings[0].len() - len).to_string());
                    }
                    witness_fields(&mut doc, &witness, &strings, &interner);
                }
                Engine::Candidates => {
                    let (len, witness) =
                        mlcs_core::exact::lcs_candidates_witness(&strings)?;
                    doc.lcs_length = Some(len);
                    if equal_lengths {
                        doc.distance = Some((strings[0].len() - len).to_string());
                    }
                    witness_fields(&mut doc, &witness, &strings, &interner);
                }
                Engine::Banded => {
                    let k = k.ok_or_else(|| {
                        CliError::Input("--k is required for the banded engine".into())
                    })?;
                    doc.params.insert("k".into(), k.to_string());
                    match mlcs_core::exact::banded::banded_distance_seeded(&strings, k, seed)? {
                        BandedOutcome::Distance(d) => {
                            doc.distance = Some(d.to_string());
                            doc.lcs_length = Some(strings[0].len() - d);
                        }
                        BandedOutcome::ExceedsThreshold => {
                            doc.distance = Some("exceeds-threshold".into());
                            doc.print();
                            return Ok(1);
                        }
                    }
                }
            }
            doc.print();
            Ok(0)
        }
        Command::AlignApprox {
            input,
            epsilon,
            groups,
        } => {
            init_threads(input.threads);
            let seed = seed_of(input.seed);
            let eps = parse_rat("epsilon", &epsilon)?;
            let (strings, interner) = read_sequences(&input)?;
            let mut doc = Doc::new("align-approx", seed);
            doc.params.insert("epsilon".into(), epsilon.clone());
            let (cost, witness) = match groups {
                Some(c) => {
                    doc.params.insert("groups".into(), c.to_string());
                    mlcs_core::large_align::group_align(&strings, c, &eps)?
                }
                None => mlcs_core::large_align::large_align(&strings, &eps)?,
            };
            doc.distance = Some(cost.to_string());
            doc.lcs_length = Some(witness.len());
            witness_fields(&mut doc, &witness, &strings, &interner);
            doc.print();
            Ok(0)
        }
        Command::LcsApprox { input, epsilon } => {
            init_threads(input.threads);
            let seed = seed_of(input.seed);
            let eps = parse_rat("epsilon", &epsilon)?;
            let (strings, interner) = read_sequences(&input)?;
            let mut doc = Doc::new("lcs-approx", seed);
            doc.params.insert("epsilon".into(), epsilon.clone());
            let witness = mlcs_core::lcs_approx::multi_lcs_approx(&strings, &eps)?;
            doc.lcs_length = Some(witness.len());
            witness_fields(&mut doc, &witness, &strings, &interner);
            let empty = witness.is_empty();
            doc.print();
            Ok(u8::from(empty))
        }
        Command::PseudoAlign {
            input,
            p,
            b,
            epsilon,
            verify,
        } => {
            init_threads(input.threads);
            let seed = seed_of(input.seed);
            let p_rat = parse_rat("p", &p)?;
            let eps = parse_rat("epsilon", &epsilon)?;
            let (strings, _) = read_sequences(&input)?;
            let mut doc = Doc::new("pseudo-align", seed);
            doc.params.insert("p".into(), p.clone());
            doc.params.insert("B".into(), b.to_string());
            doc.params.insert("epsilon".into(), epsilon.clone());
            doc.params.insert("verify".into(), verify.to_string());
            let params = mlcs_core::pseudorandom::PipelineParams::new(p_rat, b, eps)?
                .with_seed(seed)
                .with_verify(verify);
            let (value, report) = mlcs_core::pseudorandom::pseudo_align(&strings, &params)?;
            doc.distance = Some(display(&value));
            doc.diagnostics =
                serde_json::to_value(&report).expect("report serializes");
            doc.print();
            Ok(0)
        }
        Command::CheckPseudorandom { input, p, b } => {
            init_threads(input.threads);
            let seed = seed_of(input.seed);
            let p_rat = parse_rat("p", &p)?;
            let (strings, _) = read_sequences(&input)?;
            let mut doc = Doc::new("check-pseudorandom", seed);
            doc.params.insert("p".into(), p.clone());
            doc.params.insert("B".into(), b.to_string());
            let ok = mlcs_core::pseudorandom::verify_pseudorandom(&strings[0], &p_rat, b)?;
            doc.diagnostics = serde_json::json!({ "pseudorandom": ok });
            doc.print();
            Ok(u8::from(!ok))
        }
        Command::Gen {
            m,
            n,
            alphabet_size,
            seed,
            planting,
            lambda,
            theta,
            p,
            b,
            budget,
        } => {
            let seed = seed_of(seed);
            let planting = match planting.as_str() {
                "none" => Planting::None,
                "common-core" => Planting::CommonCore {
                    lambda: parse_rat(
                        "lambda",
                        lambda.as_deref().ok_or_else(|| {
                            CliError::Input("--lambda required for common-core".into())
                        })?,
                    )?,
                },
                "bounded-distance" => Planting::BoundedDistance {
                    theta: parse_rat(
                        "theta",
                        theta.as_deref().ok_or_else(|| {
                            CliError::Input("--theta required for bounded-distance".into())
                        })?,
                    )?,
                },
                "pseudorandom-base" => Planting::PseudorandomBase {
                    p: parse_rat(
                        "p",
                        p.as_deref().ok_or_else(|| {
                            CliError::Input("--p required for pseudorandom-base".into())
                        })?,
                    )?,
                    b: b.ok_or_else(|| {
                        CliError::Input("--B required for pseudorandom-base".into())
                    })?,
                    budget: budget.ok_or_else(|| {
                        CliError::Input("--budget required for pseudorandom-base".into())
                    })?,
                },
                other => {
                    return Err(CliError::Input(format!("unknown planting `{other}`")));
                }
            };
            let spec = InstanceSpec {
                m,
                n,
                alphabet_size,
                seed,
                planting,
            };
            let inst = gen_instance(&spec)?;
            let header = serde_json::json!({
                "command": "gen",
                "m": m,
                "n": n,
                "alphabet_size": alphabet_size,
                "seed": seed,
                "realized_lcs": inst.realized_lcs,
                "realized_distance": inst.realized_distance,
                "pseudorandom_ok": inst.pseudorandom_ok,
            });
            println!("# {header}");
            let tokens = alphabet_size > 62;
            for s in &inst.strings {
                if tokens {
                    let line: Vec<String> =
                        s.symbols().iter().map(|x| x.to_string()).collect();
                    println!("{}", line.join(" "));
                } else {
                    let line: String = s
                        .symbols()
                        .iter()
                        .map(|&x| {
                            let x = x as u8;
                            char::from(match x {
                                0..=9 => b'0' + x,
                                10..=35 => b'a' + x - 10,
                                _ => b'A' + x - 36,
                            })
                        })
                        .collect();
                    println!("{line}");
                }
            }
            Ok(0)
        }
        Command::Audit {
            suite,
            count,
            seed,
            threads,
        } => {
            init_threads(threads);
            let seed = seed_of(seed);
            let report = ratio_audit(&suite, seed, count)?;
            print!("{}", report.to_jsonl());
            let mut doc = Doc::new("audit", seed);
            doc.params.insert("suite".into(), suite.clone());
            doc.params.insert("count".into(), count.to_string());
            doc.diagnostics = serde_json::json!({
                "instances": report.instances,
                "violations": report.violations,
                "skipped": report.skipped,
            });
            doc.print();
            Ok(u8::from(report.violations > 0))
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
