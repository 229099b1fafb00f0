//! Randomized verification campaigns.

use std::collections::BTreeMap;
use std::time::Instant;

use maslov_core::iteration::verify::VerdictReport;
use maslov_core::maslov::CONVENTION;
use maslov_core::random::mix_seed;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{RunConfig, ToleranceSpec, SCHEMA_VERSION};
use crate::exit;
use crate::report::VerdictJson;
use crate::suites::{resolve_suite, run_check, Check, Ranges};

/// Env var capping the number of worker threads.
pub const THREADS_VAR: &str = "MASLOV_ITER_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    /// An identity did not hold, or an instance failed a structural check.
    Fail,
    /// A rank, gauge or subdivision decision could not be made reliably.
    Unstable,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub check: &'static str,
    /// Seed of the trial; the check's instance is drawn from `mix_seed(seed, salt)`.
    pub seed: u64,
    pub status: Status,
    pub verdicts: Vec<VerdictJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub passed: u64,
    pub failed: u64,
    pub unstable: u64,
}

impl Tally {
    fn add(&mut self, s: Status) {
        match s {
            Status::Pass => self.passed += 1,
            Status::Fail => self.failed += 1,
            Status::Unstable => self.unstable += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.passed + self.failed + self.unstable
    }
}

/// Everything needed to rerun one failing trial alone.
#[derive(Debug, Clone, Serialize)]
pub struct Reproduction {
    pub check: &'static str,
    pub trial: u64,
    pub replay_seed: u64,
    pub config: RunConfig,
    pub command: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Environment {
    pub version: &'static str,
    pub os: &'static str,
    pub arch: &'static str,
    pub threads: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CampaignReport {
    pub schema_version: u32,
    pub suite: String,
    pub master_seed: u64,
    pub trials: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay_seed: Option<u64>,
    pub dims: [usize; 2],
    pub k_range: [usize; 2],
    pub tolerances: ToleranceSpec,
    pub convention: &'static str,
    pub totals: Tally,
    pub per_check: BTreeMap<&'static str, Tally>,
    pub records: Vec<TrialRecord>,
    pub reproductions: Vec<Reproduction>,
    pub environment: Environment,
    pub elapsed_seconds: f64,
}

impl CampaignReport {
    pub fn exit_code(&self) -> i32 {
        if self.totals.unstable > 0 {
            exit::NUMERICAL
        } else if self.totals.failed > 0 {
            exit::VIOLATION
        } else {
            exit::OK
        }
    }

    pub fn all_passed(&self) -> bool {
        self.totals.failed == 0 && self.totals.unstable == 0
    }
}

/// Worker count from [`THREADS_VAR`], if set.
pub fn thread_cap() -> Result<Option<usize>, String> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("{THREADS_VAR}='{v}' is not a positive integer")),
        },
    }
}

fn classify(result: &maslov_core::Result<Vec<VerdictReport>>) -> Status {
    match result {
        Ok(vs) if vs.iter().all(|v| v.matched) => Status::Pass,
        Ok(_) => Status::Fail,
        Err(e) if e.is_numerical() => Status::Unstable,
        Err(_) => Status::Fail,
    }
}

fn run_one(check: Check, trial: u64, seed: u64, ranges: &Ranges, tol: ToleranceSpec) -> TrialRecord {
    let result = run_check(check, mix_seed(seed, check.salt()), ranges);
    let status = classify(&result);
    let (verdicts, error) = match result {
        Ok(vs) => (vs.iter().map(|v| VerdictJson::new(v, tol)).collect(), None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    TrialRecord {
        trial,
        check: check.name(),
        seed,
        status,
        verdicts,
        error,
    }
}

/// Runs `cfg.trials` trials of every check of `cfg.suite`, or the single trial
/// with seed `replay` when given.
pub fn run_campaign(cfg: &RunConfig, replay: Option<u64>) -> Result<CampaignReport, String> {
    cfg.validate()?;
    let checks = resolve_suite(&cfg.suite).ok_or_else(|| format!("unknown suite '{}'", cfg.suite))?;
    let ranges = Ranges {
        dims: cfg.dims,
        k: cfg.k_range,
        tol: cfg.tolerances(),
    };
    let tol = cfg.tolerances;
    let jobs: Vec<(u64, u64, Check)> = match replay {
        Some(seed) => checks.iter().map(|&c| (0, seed, c)).collect(),
        None => (0..cfg.trials)
            .flat_map(|t| checks.iter().map(move |&c| (t, mix_seed(cfg.master_seed, t), c)))
            .collect(),
    };
    let cap = thread_cap()?;
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = cap {
            b = b.num_threads(n);
        }
        b.build().map_err(|e| format!("thread pool: {e}"))?
    };
    let started = Instant::now();
    let records: Vec<TrialRecord> = pool.install(|| {
        jobs.par_iter()
            .map(|&(trial, seed, check)| run_one(check, trial, seed, &ranges, tol))
            .collect()
    });
    let elapsed_seconds = started.elapsed().as_secs_f64();

    let mut totals = Tally::default();
    let mut per_check: BTreeMap<&'static str, Tally> = BTreeMap::new();
    for rec in &records {
        totals.add(rec.status);
        per_check.entry(rec.check).or_default().add(rec.status);
    }
    let reproductions = records
        .iter()
        .filter(|r| r.status != Status::Pass)
        .map(|r| {
            let mut config = cfg.clone();
            config.suite = r.check.to_string();
            config.trials = 1;
            config.output = None;
            Reproduction {
                check: r.check,
                trial: r.trial,
                replay_seed: r.seed,
                config,
                command: format!("maslov-iter verify --config <bundle config> --replay {}", r.seed),
            }
        })
        .collect();
    Ok(CampaignReport {
        schema_version: SCHEMA_VERSION,
        suite: cfg.suite.clone(),
        master_seed: cfg.master_seed,
        trials: if replay.is_some() { 1 } else { cfg.trials },
        replay_seed: replay,
        dims: cfg.dims,
        k_range: cfg.k_range,
        tolerances: tol,
        convention: CONVENTION,
        totals,
        per_check,
        records,
        reproductions,
        environment: Environment {
            version: env!("CARGO_PKG_VERSION"),
            os: std::env::consts::OS,
            arch: std::env::consts::ARCH,
            threads: pool.current_num_threads(),
        },
        elapsed_seconds,
    })
}
