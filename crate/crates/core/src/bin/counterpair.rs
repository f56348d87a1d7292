use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use counterpair::canonical::assemble;
use counterpair::deformation::{build_template, codimension};
use counterpair::firstorder::{
    induced_map, injectivity, proof_predicate, spec_id, sweep_with_progress, theorem_predicate,
    write_csv, SweepConfig, Verdict,
};
use counterpair::orbit::reduce_first_order;
use counterpair::recovery::{equivalent, randomize, recover};
use counterpair::{CanonicalSpec, Error, ExactMatrix, ExactScalar, Result};

/// Exact computations on counter matrix pairs under contragredient equivalence.
#[derive(Parser)]
#[command(name = "counterpair", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Arguments named SPEC or PAIR take inline JSON or a path to a JSON file.
#[derive(Subcommand)]
enum Command {
    /// Assemble the canonical pair of a spec: {"A": .., "B": ..}
    CanonBuild { spec: String },
    /// Star positions of the miniversal template (1-based)
    Template { spec: String },
    /// Number of independent parameters of the template
    Codim { spec: String },
    /// Matrix of the induced first-order map on template parameters
    Induced { spec: String },
    /// Rank oracle and both size predicates for one spec
    Check { spec: String },
    /// Compare the rank oracle with both predicates over all small specs
    Sweep {
        #[arg(long)]
        max_size: usize,
        #[arg(long)]
        max_blocks: usize,
        /// CSV destination; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// Eigenvalue-bearing specs appended to the eigenvalue-free ones
        #[arg(long, default_value_t = 0)]
        eigen_samples: usize,
        /// Emit one JSON line per finished spec on stderr
        #[arg(long)]
        progress: bool,
    },
    /// Split a perturbation PAIR of the canonical pair into tangent and template parts
    Reduce { spec: String, perturbation: String },
    /// Recover the canonical spec of a pair
    Recover {
        pair: String,
        /// JSON list of candidate nonzero eigenvalues of AB, e.g. '[["3","0"]]'
        #[arg(long, default_value = "[]")]
        eigs: String,
    },
    /// Decide contragredient equivalence of two pairs (exit 1 when inequivalent)
    Equiv {
        pair: String,
        other: String,
        #[arg(long, default_value = "[]")]
        eigs: String,
    },
    /// Apply a seeded random equivalence transformation
    Randomize {
        pair: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Pair {
    #[serde(rename = "A", alias = "a")]
    a: ExactMatrix,
    #[serde(rename = "B", alias = "b")]
    b: ExactMatrix,
}

#[derive(Serialize)]
struct CheckOut {
    k: usize,
    rank: usize,
    injective: bool,
    pred_theorem: bool,
    pred_proof: bool,
}

#[derive(Serialize)]
struct InducedOut {
    k: usize,
    rank: usize,
    matrix: ExactMatrix,
}

#[derive(Serialize)]
struct ProgressLine<'a> {
    done: usize,
    total: usize,
    spec_id: &'a str,
    injective: bool,
}

#[derive(Serialize)]
struct SweepSummary {
    rows: usize,
    verdict: &'static str,
    disagreements_theorem: usize,
    disagreements_proof: usize,
}

#[derive(Serialize)]
struct ReduceOut {
    params: Vec<ExactScalar>,
    x: ExactMatrix,
    y: ExactMatrix,
}

enum Outcome {
    Ok,
    /// Oracle disagreement or inequivalence.
    Negative,
}

fn read_json_arg(arg: &str) -> Result<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        Ok(arg.to_string())
    } else if arg == "-" {
        Ok(io::read_to_string(io::stdin())?)
    } else {
        Ok(std::fs::read_to_string(arg)?)
    }
}

fn parse_spec(arg: &str) -> Result<CanonicalSpec> {
    let spec = CanonicalSpec::from_json(&read_json_arg(arg)?)?;
    spec.ensure_valid()?;
    Ok(spec)
}

fn parse_pair(arg: &str) -> Result<Pair> {
    let pair: Pair = serde_json::from_str(&read_json_arg(arg)?)?;
    let (m, n) = pair.a.shape();
    if pair.b.shape() != (n, m) {
        return Err(Error::Dimension(format!(
            "B must be {n}x{m} for A of shape {m}x{n}, got {}x{}",
            pair.b.rows(),
            pair.b.cols()
        )));
    }
    Ok(pair)
}

fn parse_eigs(arg: &str) -> Result<Vec<ExactScalar>> {
    Ok(serde_json::from_str(&read_json_arg(arg)?)?)
}

fn print_json(value: &impl Serialize) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::TheoremOnly => "theorem_predicate",
        Verdict::ProofOnly => "proof_predicate",
        Verdict::Both => "both",
        Verdict::Neither => "neither",
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::CanonBuild { spec } => {
            let (a, b) = assemble(&parse_spec(&spec)?)?;
            print_json(&Pair { a, b })?;
        }
        Command::Template { spec } => print_json(&build_template(&parse_spec(&spec)?)?.to_json())?,
        Command::Codim { spec } => println!("{}", codimension(&parse_spec(&spec)?)?),
        Command::Induced { spec } => {
            let phi = induced_map(&parse_spec(&spec)?)?;
            print_json(&InducedOut {
                k: phi.matrix.cols(),
                rank: phi.rank(),
                matrix: phi.matrix,
            })?;
        }
        Command::Check { spec } => {
            let spec = parse_spec(&spec)?;
            let inj = injectivity(&spec)?;
            print_json(&CheckOut {
                k: inj.k,
                rank: inj.rank,
                injective: inj.injective(),
                pred_theorem: theorem_predicate(&spec),
                pred_proof: proof_predicate(&spec),
            })?;
        }
        Command::Sweep {
            max_size,
            max_blocks,
            out,
            eigen_samples,
            progress,
        } => {
            let mut config = SweepConfig::new(max_size, max_blocks);
            config.eigen_samples = eigen_samples;
            let report = sweep_with_progress(&config, |row, done, total| {
                if progress {
                    let id = spec_id(&row.spec);
                    let line = ProgressLine {
                        done,
                        total,
                        spec_id: &id,
                        injective: row.injective,
                    };
                    eprintln!("{}", serde_json::to_string(&line).expect("progress line"));
                }
            })?;
            let verdict = report.verdict();
            let summary = SweepSummary {
                rows: report.rows.len(),
                verdict: verdict_name(verdict),
                disagreements_theorem: report.disagreements_theorem().count(),
                disagreements_proof: report.disagreements_proof().count(),
            };
            match out {
                Some(path) => {
                    write_csv(&report.rows, BufWriter::new(File::create(path)?))?;
                    print_json(&summary)?;
                }
                None => {
                    write_csv(&report.rows, io::stdout().lock())?;
                    eprintln!("{}", serde_json::to_string(&summary)?);
                }
            }
            if verdict == Verdict::Neither {
                return Ok(Outcome::Negative);
            }
        }
        Command::Reduce { spec, perturbation } => {
            let spec = parse_spec(&spec)?;
            let p = parse_pair(&perturbation)?;
            let r = reduce_first_order(&spec, &p.a, &p.b)?;
            print_json(&ReduceOut {
                params: r.params,
                x: r.x,
                y: r.y,
            })?;
        }
        Command::Recover { pair, eigs } => {
            let p = parse_pair(&pair)?;
            print_json(&recover(&p.a, &p.b, &parse_eigs(&eigs)?)?)?;
        }
        Command::Equiv { pair, other, eigs } => {
            let (p, q) = (parse_pair(&pair)?, parse_pair(&other)?);
            let same = p.a.shape() == q.a.shape()
                && equivalent(&p.a, &p.b, &q.a, &q.b, &parse_eigs(&eigs)?)?;
            println!("{same}");
            if !same {
                return Ok(Outcome::Negative);
            }
        }
        Command::Randomize { pair, seed } => {
            let p = parse_pair(&pair)?;
            let (a, b) = randomize(&p.a, &p.b, seed)?;
            print_json(&Pair { a, b })?;
        }
    }
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Invariant(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
