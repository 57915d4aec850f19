//! Experiment harness behind the `torus-stab` binary: instance sources,
//! per-trial records, the CSV writer and the parallel benchmark sweep.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{gen_clean_majority, gen_hard_majority, gen_hard_thr2, gen_stable_majority, gen_stable_thr2, GenSpec};
use crate::tester::{run_naive_tester, run_tester, QueryOracle, TesterParams};
use crate::torus::{parse_grid, Rule, TorusConfig};

/// Environment variable capping the bench worker pool.
pub const THREADS_ENV: &str = "TORUS_STAB_THREADS";

/// Header of every CSV written by [`emit_csv`].
pub const CSV_HEADER: &str = "trial,m,n,eps,seed,algorithm,decision,queries,wall_ms";

/// Named instance families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InstanceKind {
    HardThr2,
    HardMajority,
    CleanMajority,
    StableThr2,
    StableMajority,
    /// Independent cells with probability one half.
    Random,
}

impl InstanceKind {
    pub const NAMES: [&'static str; 6] = ["hard-thr2", "hard-maj", "clean-maj", "stable-thr2", "stable-maj", "random"];

    /// Whether the instance depends on the seed.
    pub fn is_seeded(self) -> bool {
        matches!(self, InstanceKind::StableThr2 | InstanceKind::StableMajority | InstanceKind::Random)
    }
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "hard-thr2" => InstanceKind::HardThr2,
            "hard-maj" => InstanceKind::HardMajority,
            "clean-maj" => InstanceKind::CleanMajority,
            "stable-thr2" => InstanceKind::StableThr2,
            "stable-maj" => InstanceKind::StableMajority,
            "random" => InstanceKind::Random,
            _ => return Err(Error::InvalidParam(format!("unknown instance {s:?}; expected one of {:?}", Self::NAMES))),
        })
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InstanceKind::HardThr2 => "hard-thr2",
            InstanceKind::HardMajority => "hard-maj",
            InstanceKind::CleanMajority => "clean-maj",
            InstanceKind::StableThr2 => "stable-thr2",
            InstanceKind::StableMajority => "stable-maj",
            InstanceKind::Random => "random",
        })
    }
}

/// Where a trial's configuration comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum InstanceSource {
    File(PathBuf),
    Generator { kind: InstanceKind, m: usize, n: usize },
}

impl InstanceSource {
    /// Builds the configuration for one seed.
    pub fn build(&self, seed: u64) -> Result<TorusConfig> {
        match self {
            InstanceSource::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidParam(format!("cannot read {}: {e}", path.display())))?;
                parse_grid(&text)
            }
            &InstanceSource::Generator { kind, m, n } => generate(kind, m, n, seed),
        }
    }
}

/// One instance of a family. Hard and clean instances are square and use `n`.
pub fn generate(kind: InstanceKind, m: usize, n: usize, seed: u64) -> Result<TorusConfig> {
    match kind {
        InstanceKind::HardThr2 => gen_hard_thr2(n),
        InstanceKind::HardMajority => gen_hard_majority(n),
        InstanceKind::CleanMajority => gen_clean_majority(n),
        InstanceKind::StableThr2 => {
            let rects = (1, (m * n / 256).max(1));
            let wraparound_rows = if n % 2 == 0 && m >= 8 { (seed % 3) as usize } else { 0 };
            gen_stable_thr2(&GenSpec { rects, wraparound_rows, ..GenSpec::new(m, n, Rule::THR2, seed) })
        }
        InstanceKind::StableMajority => gen_stable_majority(&GenSpec::new(m, n, Rule::MAJORITY, seed)),
        InstanceKind::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            TorusConfig::from_fn(m, n, |_| rng.random_bool(0.5))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Structural,
    Naive,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Structural => "structural",
            Algorithm::Naive => "naive",
        })
    }
}

/// A benchmark sweep: every `(ε, algorithm, trial)` triple is one record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub source: InstanceSource,
    pub rule: Rule,
    pub eps: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub algorithms: Vec<Algorithm>,
    /// Sample size of the naive tester.
    pub naive_sample: usize,
    /// Upper bound every structural run must respect; defaults to the
    /// tester's own cap.
    pub query_budget: Option<u64>,
    /// Constant of the correctness analysis. Reported, never used.
    pub c3: f64,
    /// Record `wall_ms` as zero so that output is reproducible byte for byte.
    pub zero_wall: bool,
}

impl ExperimentConfig {
    pub const DEFAULT_C3: f64 = 4.0;

    pub fn new(source: InstanceSource, eps: Vec<f64>, trials: usize, seed: u64) -> Self {
        ExperimentConfig {
            source,
            rule: Rule::THR2,
            eps,
            trials,
            seed,
            algorithms: vec![Algorithm::Structural],
            naive_sample: 50,
            query_budget: None,
            c3: Self::DEFAULT_C3,
            zero_wall: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParam("trials must be at least 1".into()));
        }
        if self.eps.is_empty() {
            return Err(Error::InvalidParam("at least one eps is required".into()));
        }
        if let Some(&e) = self.eps.iter().find(|&&e| !(e > 0.0 && e <= 1.0)) {
            return Err(Error::InvalidEpsilon(e));
        }
        if self.rule != Rule::THR2 {
            return Err(Error::InvalidParam(format!("only thr2 has a tester (got {})", self.rule)));
        }
        if self.algorithms.contains(&Algorithm::Naive) && self.naive_sample == 0 {
            return Err(Error::InvalidParam("naive sample size must be at least 1".into()));
        }
        Ok(())
    }

    /// Structural records whose query count exceeds the budget override, or
    /// the tester's cap when no override is set.
    pub fn over_budget<'r>(&self, records: &'r [TrialRecord]) -> Vec<&'r TrialRecord> {
        records
            .iter()
            .filter(|r| r.algorithm == Algorithm::Structural)
            .filter(|r| {
                let cap = self.query_budget.unwrap_or_else(|| TesterParams::new(r.eps, 0).map_or(u64::MAX, |p| p.query_cap()));
                r.queries > cap
            })
            .collect()
    }

    /// Seed of trial `t`, also the seed of its instance when that is random.
    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.seed.wrapping_add(trial as u64)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub m: usize,
    pub n: usize,
    pub eps: f64,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub decision: String,
    pub queries: u64,
    pub wall_ms: f64,
}

/// Writes the header and one line per record, in the order given.
pub fn emit_csv(records: &[TrialRecord], out: impl Write) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let io = |e: csv::Error| Error::InvalidParam(format!("csv output failed: {e}"));
    w.write_record(CSV_HEADER.split(',')).map_err(io)?;
    for r in records {
        w.write_record([
            r.trial.to_string(),
            r.m.to_string(),
            r.n.to_string(),
            r.eps.to_string(),
            r.seed.to_string(),
            r.algorithm.to_string(),
            r.decision.clone(),
            r.queries.to_string(),
            format!("{:.3}", r.wall_ms),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidParam(format!("csv output failed: {e}")))
}

/// Worker count from [`THREADS_ENV`], if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&t| t > 0)
}

fn run_trial(config: &ExperimentConfig, shared: Option<&TorusConfig>, trial: usize, eps: f64, algorithm: Algorithm) -> Result<TrialRecord> {
    let seed = config.trial_seed(trial);
    let own;
    let sigma = match shared {
        Some(s) => s,
        None => {
            own = config.source.build(seed)?;
            &own
        }
    };
    let start = Instant::now();
    let (decision, queries) = match algorithm {
        Algorithm::Structural => {
            let params = TesterParams::new(eps, seed)?;
            let mut oracle = QueryOracle::new(sigma);
            let out = run_tester(&mut oracle, &params)?;
            (out.decision.label(), out.queries)
        }
        Algorithm::Naive => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut oracle = QueryOracle::new(sigma);
            let d = run_naive_tester(&mut oracle, Rule::THR2, config.naive_sample, &mut rng);
            (d.label(), oracle.queries())
        }
    };
    let wall_ms = if config.zero_wall { 0.0 } else { start.elapsed().as_secs_f64() * 1e3 };
    Ok(TrialRecord {
        trial,
        m: sigma.m(),
        n: sigma.n(),
        eps,
        seed,
        algorithm,
        decision: decision.to_string(),
        queries,
        wall_ms,
    })
}

/// Runs every trial of the sweep on a worker pool and returns the records
/// ordered by `(ε, algorithm, trial)` as listed in the config.
pub fn run_bench(config: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    config.validate()?;
    let seeded = match &config.source {
        InstanceSource::File(_) => false,
        InstanceSource::Generator { kind, .. } => kind.is_seeded(),
    };
    let shared = if seeded { None } else { Some(config.source.build(config.seed)?) };
    let jobs: Vec<(f64, Algorithm, usize)> = config
        .eps
        .iter()
        .flat_map(|&e| config.algorithms.iter().flat_map(move |&a| (0..config.trials).map(move |t| (e, a, t))))
        .collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = thread_cap() {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| Error::InvalidParam(format!("worker pool: {e}")))?;
    let records: Vec<Result<TrialRecord>> =
        pool.install(|| jobs.par_iter().map(|&(e, a, t)| run_trial(config, shared.as_ref(), t, e, a)).collect());
    records.into_iter().collect()
}

/// Aggregate of one `(ε, algorithm)` cell of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub eps: f64,
    pub algorithm: Algorithm,
    pub trials: usize,
    pub rejection_rate: f64,
    pub max_queries: u64,
    pub mean_queries: f64,
}

pub fn summarize(records: &[TrialRecord]) -> Vec<BenchSummary> {
    let mut out: Vec<BenchSummary> = Vec::new();
    for r in records {
        let pos = out.iter().position(|s| s.eps == r.eps && s.algorithm == r.algorithm);
        let s = match pos {
            Some(i) => &mut out[i],
            None => {
                out.push(BenchSummary { eps: r.eps, algorithm: r.algorithm, trials: 0, rejection_rate: 0.0, max_queries: 0, mean_queries: 0.0 });
                out.last_mut().expect("just pushed")
            }
        };
        s.trials += 1;
        s.rejection_rate += f64::from(u8::from(r.decision == "reject"));
        s.max_queries = s.max_queries.max(r.queries);
        s.mean_queries += r.queries as f64;
    }
    for s in &mut out {
        s.rejection_rate /= s.trials as f64;
        s.mean_queries /= s.trials as f64;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(trial: usize) -> TrialRecord {
        TrialRecord {
            trial,
            m: 4,
            n: 4,
            eps: 0.1,
            seed: 7,
            algorithm: Algorithm::Naive,
            decision: "accept".into(),
            queries: 12,
            wall_ms: 0.0,
        }
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        emit_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{CSV_HEADER}\n"));
        let mut buf = Vec::new();
        emit_csv(&(0..300).map(record).collect::<Vec<_>>(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 301);
        assert_eq!(text.lines().nth(1).unwrap(), "0,4,4,0.1,7,naive,accept,12,0.000");
    }

    #[test]
    fn instance_names_round_trip() {
        for name in InstanceKind::NAMES {
            assert_eq!(name.parse::<InstanceKind>().unwrap().to_string(), name);
        }
        assert!("nope".parse::<InstanceKind>().is_err());
    }

    #[test]
    fn config_validation() {
        let src = InstanceSource::Generator { kind: InstanceKind::HardThr2, m: 16, n: 16 };
        let ok = ExperimentConfig::new(src.clone(), vec![0.1], 3, 0);
        assert!(ok.validate().is_ok());
        assert!(ExperimentConfig { trials: 0, ..ok.clone() }.validate().is_err());
        assert!(ExperimentConfig { eps: vec![1.5], ..ok.clone() }.validate().is_err());
        assert!(ExperimentConfig { rule: Rule::MAJORITY, ..ok }.validate().is_err());
    }
}
