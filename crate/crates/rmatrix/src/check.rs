//! Runs a Yang–Baxter check over seeded random points, in parallel.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::rmt::RTable;
use crate::sample::Domain;
use crate::scalar::{Backend, HelperSet, Hp, Real};
use crate::ybe::{check, CheckOptions, CheckReport, Identity};

#[derive(Clone, Copy, Debug)]
pub struct TrialConfig {
    pub identity: Identity,
    pub trials: usize,
    pub seed: u64,
    pub domain: Domain,
    pub opts: CheckOptions,
    /// Record per-trial wall time (makes output run-dependent).
    pub timed: bool,
}

impl TrialConfig {
    pub fn new(identity: Identity, trials: usize, seed: u64) -> Self {
        TrialConfig { identity, trials, seed, domain: Domain::default(), opts: CheckOptions::default(), timed: false }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub trials: usize,
    pub passed: usize,
    pub worst_rel: f64,
    pub pass: bool,
}

impl Summary {
    pub fn of(reports: &[CheckReport]) -> Summary {
        let passed = reports.iter().filter(|r| r.pass).count();
        let worst_rel = reports.iter().map(|r| r.residual_rel).fold(0.0, f64::max);
        Summary { trials: reports.len(), passed, worst_rel, pass: passed == reports.len() }
    }
}

fn run_one<R: Real>(table: &RTable, helpers: &HelperSet, cfg: &TrialConfig, trial: usize) -> Result<CheckReport, Error> {
    let p = cfg.domain.sample(table.m, cfg.identity.needs_v(), cfg.seed, trial);
    let start = Instant::now();
    let mut r = check::<R>(cfg.identity, table, helpers, &p, &cfg.opts)?;
    if cfg.timed {
        r.wall_time = Some(start.elapsed().as_secs_f64());
    }
    r.seed = Some(cfg.seed);
    r.trial = Some(trial);
    Ok(r)
}

/// One report per trial, in trial order regardless of completion order.
pub fn run_trials_with<R: Real>(table: &RTable, helpers: &HelperSet, cfg: &TrialConfig) -> Result<Vec<CheckReport>, Error> {
    (0..cfg.trials).into_par_iter().map(|t| run_one::<R>(table, helpers, cfg, t)).collect()
}

pub fn run_trials(backend: Backend, table: &RTable, helpers: &HelperSet, cfg: &TrialConfig) -> Result<Vec<CheckReport>, Error> {
    match backend {
        Backend::Binary64 => run_trials_with::<f64>(table, helpers, cfg),
        Backend::HighPrecision => run_trials_with::<Hp>(table, helpers, cfg),
    }
}
