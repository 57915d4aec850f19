//! Command-line front end. Exit codes: 0 accept or ok, 1 reject or
//! violation, 2 usage or input error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use torus_stab::cli::{emit_csv, generate, run_bench, summarize, Algorithm, ExperimentConfig, InstanceKind, InstanceSource};
use torus_stab::stabilizer::{stabilize, StabilizerParams};
use torus_stab::structure::{majority_structure_verdict, thr2_structure_check};
use torus_stab::tester::{run_naive_tester, run_tester, Decision, QueryOracle, TesterParams};
use torus_stab::torus::{apply_rule, classify_all, find_period, format_grid, parse_grid, CellClass, Rule, TorusConfig};

#[derive(Parser)]
#[command(name = "torus-stab", version, about = "Stability tools for threshold automata on a torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Structural,
    Naive,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Apply the rule a number of times and print the result.
    Step {
        #[arg(long, default_value = "thr2")]
        rule: Rule,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// Grid file; standard input when omitted.
        file: Option<PathBuf>,
    },
    /// Exit 0 if the configuration is stable under the rule, 1 otherwise.
    Stable {
        #[arg(long, default_value = "thr2")]
        rule: Rule,
        #[arg(long)]
        json: bool,
        file: Option<PathBuf>,
    },
    /// Run the structural characterisation (thr2 or maj).
    Structure {
        #[arg(long, default_value = "thr2")]
        rule: Rule,
        #[arg(long)]
        json: bool,
        file: Option<PathBuf>,
    },
    /// Run the Threshold-2 stability tester.
    Test {
        #[arg(long, default_value = "thr2")]
        rule: Rule,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use the naive tester with this many sampled cells instead.
        #[arg(long)]
        naive: Option<usize>,
        #[arg(long)]
        json: bool,
        file: Option<PathBuf>,
    },
    /// Move the configuration to a nearby Threshold-2 stable one.
    Stabilize {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the step report as JSON on standard error.
        #[arg(long)]
        json: bool,
        file: Option<PathBuf>,
    },
    /// Write a generated instance.
    Gen {
        #[arg(long)]
        instance: InstanceKind,
        #[arg(long)]
        n: usize,
        /// Rows; defaults to `n`.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run many tester trials and write one CSV line per trial.
    Bench {
        /// Generated instance family; conflicts with `--file`.
        #[arg(long, conflicts_with = "file")]
        instance: Option<InstanceKind>,
        #[arg(long, required_unless_present = "file")]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value = "thr2")]
        rule: Rule,
        /// Comma-separated list.
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "structural")]
        algorithm: AlgoArg,
        #[arg(long, default_value_t = 50)]
        sample: usize,
        /// Fail when a structural trial reads more cells than this.
        #[arg(long)]
        budget: Option<u64>,
        /// Write zero wall times so that repeated runs are byte-identical.
        #[arg(long)]
        no_wall: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print per-(eps, algorithm) summaries as JSON lines.
        #[arg(long)]
        json: bool,
    },
}

/// Outcome of a subcommand that maps to exit code 0 or 1.
enum Status {
    Ok,
    Fail,
}

fn read_input(file: Option<&Path>) -> Result<TorusConfig> {
    let text = match file {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("reading standard input")?;
            s
        }
    };
    Ok(parse_grid(&text)?)
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing standard output"),
    }
}

fn print_json(value: &impl Serialize) -> Result<()> {
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Step { rule, steps, file } => {
            let mut sigma = read_input(file.as_deref())?;
            for _ in 0..steps {
                sigma = apply_rule(&sigma, rule);
            }
            write_output(None, &format_grid(&sigma))?;
            Ok(Status::Ok)
        }
        Command::Stable { rule, json, file } => {
            let sigma = read_input(file.as_deref())?;
            let classes = classify_all(&sigma, rule);
            let unstable = classes.iter().filter(|&&c| c == CellClass::Unstable).count();
            let toggling = classes.iter().filter(|&&c| c == CellClass::Toggling).count();
            if json {
                let period = find_period(&sigma, rule, 4 * sigma.len())?;
                print_json(&json!({
                    "rule": rule.to_string(),
                    "stable": unstable == 0,
                    "unstable_cells": unstable,
                    "toggling_cells": toggling,
                    "preperiod": period.preperiod,
                    "period": period.period,
                }))?;
            } else {
                println!("{} ({unstable} unstable cells)", if unstable == 0 { "stable" } else { "unstable" });
            }
            Ok(if unstable == 0 { Status::Ok } else { Status::Fail })
        }
        Command::Structure { rule, json, file } => {
            let sigma = read_input(file.as_deref())?;
            let (check, verdict) = match rule {
                Rule::THR2 => ("thr2_structure", thr2_structure_check(&sigma)),
                Rule::MAJORITY => ("majority_structure", majority_structure_verdict(&sigma)),
                other => bail!("no structural characterisation for {other}; use thr2 or maj"),
            };
            let record = verdict.to_record(check);
            if json {
                print_json(&record)?;
            } else {
                println!("{}", record.result);
            }
            Ok(if verdict.is_ok() { Status::Ok } else { Status::Fail })
        }
        Command::Test { rule, eps, seed, naive, json, file } => {
            if rule != Rule::THR2 {
                bail!("the tester supports thr2 only (got {rule})");
            }
            let sigma = read_input(file.as_deref())?;
            let mut oracle = QueryOracle::new(&sigma);
            let (algorithm, decision, fallback) = match naive {
                Some(sample) => {
                    use rand::SeedableRng;
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                    ("naive", run_naive_tester(&mut oracle, Rule::THR2, sample, &mut rng), false)
                }
                None => {
                    let out = run_tester(&mut oracle, &TesterParams::new(eps, seed)?)?;
                    ("structural", out.decision, out.fallback)
                }
            };
            let queries = oracle.queries();
            let (cells, kind) = match &decision {
                Decision::Accept => (Vec::new(), None),
                Decision::Reject(r) => (r.cells.iter().map(|c| [c.row, c.col]).collect(), Some(r.kind)),
            };
            if json {
                print_json(&json!({
                    "check": "tester",
                    "result": decision.label(),
                    "witness_cells": cells,
                    "witness_kind": kind,
                    "algorithm": algorithm,
                    "queries": queries,
                    "fallback": fallback,
                }))?;
            } else {
                println!("{} ({queries} queries)", decision.label());
            }
            Ok(if decision.is_accept() { Status::Ok } else { Status::Fail })
        }
        Command::Stabilize { eps, out, json, file } => {
            let sigma = read_input(file.as_deref())?;
            let (fixed, report) = stabilize(&sigma, &StabilizerParams::new(eps)?)?;
            write_output(out.as_deref(), &format_grid(&fixed))?;
            if json {
                eprintln!("{}", serde_json::to_string(&report)?);
            } else {
                eprintln!(
                    "changed {} cells (wraparound {}, rectangulation {}, boxes {}, clean-up {})",
                    report.total(),
                    report.step1,
                    report.step2,
                    report.step3,
                    report.step4
                );
            }
            Ok(Status::Ok)
        }
        Command::Gen { instance, n, m, seed, out } => {
            let sigma = generate(instance, m.unwrap_or(n), n, seed)?;
            write_output(out.as_deref(), &format_grid(&sigma))?;
            Ok(Status::Ok)
        }
        Command::Bench { instance, n, m, file, rule, eps, trials, seed, algorithm, sample, budget, no_wall, out, json } => {
            let source = match (file, instance) {
                (Some(f), _) => InstanceSource::File(f),
                (None, kind) => {
                    let n = n.context("--n is required with --instance")?;
                    InstanceSource::Generator { kind: kind.unwrap_or(InstanceKind::HardThr2), m: m.unwrap_or(n), n }
                }
            };
            let mut config = ExperimentConfig::new(source, eps, trials, seed);
            config.rule = rule;
            config.naive_sample = sample;
            config.query_budget = budget;
            config.zero_wall = no_wall;
            config.algorithms = match algorithm {
                AlgoArg::Structural => vec![Algorithm::Structural],
                AlgoArg::Naive => vec![Algorithm::Naive],
                AlgoArg::Both => vec![Algorithm::Structural, Algorithm::Naive],
            };
            let records = run_bench(&config)?;
            match out.as_deref() {
                Some(p) => emit_csv(&records, fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)?,
                None => emit_csv(&records, io::stdout().lock())?,
            }
            for s in summarize(&records) {
                if json {
                    eprintln!("{}", serde_json::to_string(&s)?);
                } else {
                    eprintln!(
                        "eps {} {}: rejection rate {:.3} over {} trials, max queries {}",
                        s.eps, s.algorithm, s.rejection_rate, s.trials, s.max_queries
                    );
                }
            }
            let over = config.over_budget(&records);
            if let Some(r) = over.first() {
                eprintln!("{} trials exceeded the query budget (first: trial {} with {} queries)", over.len(), r.trial, r.queries);
                return Ok(Status::Fail);
            }
            Ok(Status::Ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
