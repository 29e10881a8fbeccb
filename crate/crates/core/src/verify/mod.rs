//! Randomized and exact checks of the structural claims, each addressable
//! by a stable identifier.

mod battery;
mod continuity;
mod dini;
mod limits;
mod majorization;
mod optimality;
mod perturbation;
mod usc;

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::rng::{self, Rng};
use crate::solvers::SolveOptions;
use crate::sumtrans::Problem;

pub use battery::{battery, fenton_scenarios, named, NamedProblem};

/// Oracle grid step for the battery cross-checks.
pub const BATTERY_ORACLE_H: f64 = 1.0 / 400.0;

/// Witnesses kept per report.
const MAX_WITNESSES: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub config: usize,
    pub trial: usize,
    pub margin: f64,
    pub input: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    pub trials: usize,
    pub violations: usize,
    /// Smallest slack seen; negative exactly when some trial violated.
    pub worst_margin: f64,
    pub witnesses: Vec<Witness>,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

/// Outcome of one trial.
#[derive(Debug, Clone)]
pub struct Trial {
    /// Number of elementary samples the trial covered.
    pub samples: usize,
    pub margin: f64,
    pub violated: bool,
    pub input: Value,
    pub details: Value,
}

impl Trial {
    pub fn new(margin: f64, violated: bool, input: Value) -> Self {
        Trial {
            samples: 1,
            margin,
            violated,
            input,
            details: Value::Null,
        }
    }

    /// A trial whose hypotheses do not apply; it counts but cannot fail.
    pub fn vacuous(input: Value) -> Self {
        Trial::new(f64::INFINITY, false, input)
    }
}

#[derive(Clone)]
pub struct CheckContext {
    pub seed: u64,
    /// Overrides each check's default trial count.
    pub trials: Option<usize>,
    pub problems: Vec<NamedProblem>,
    pub kernels: Vec<(String, Kernel)>,
    pub options: SolveOptions,
    /// Strictness margin for strict inequalities.
    pub margin: f64,
    /// Tolerance for `minimax = maximin`.
    pub value_tol: f64,
    /// Tolerance on equioscillation values across starts.
    pub equi_tol: f64,
    pub deltas: Vec<f64>,
    pub etas: Vec<f64>,
    /// Largest `n` cross-checked against the brute-force oracle.
    pub oracle_max_n: usize,
}

impl CheckContext {
    pub fn new(seed: u64) -> Self {
        CheckContext {
            seed,
            trials: None,
            problems: battery(),
            kernels: vec![
                ("log".into(), Kernel::log()),
                ("sqrt".into(), Kernel::sqrt()),
            ],
            options: SolveOptions {
                seed,
                oracle_h: BATTERY_ORACLE_H,
                ..SolveOptions::default()
            },
            margin: 1e-9,
            value_tol: 1e-3,
            equi_tol: 1e-5,
            deltas: vec![1e-2, 1e-3, 1e-4],
            etas: vec![0.2, 0.1, 0.05, 0.02, 0.01],
            oracle_max_n: 2,
        }
    }

    pub fn with_problems(mut self, problems: Vec<NamedProblem>) -> Self {
        self.problems = problems;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = Some(trials);
        self
    }

    pub fn problem(&self, config: usize) -> &Problem {
        &self.problems[config].problem
    }
}

pub trait Check: Send + Sync {
    fn id(&self) -> &'static str;

    fn default_trials(&self) -> usize;

    /// Number of independent configurations (problems, kernels, ...).
    fn configs(&self, ctx: &CheckContext) -> usize {
        ctx.problems.len()
    }

    fn trials_per_config(&self, ctx: &CheckContext) -> usize {
        ctx.trials.unwrap_or_else(|| self.default_trials())
    }

    fn trial(
        &self,
        ctx: &CheckContext,
        config: usize,
        index: usize,
        rng: &mut Rng,
    ) -> Result<Trial>;

    fn run(&self, ctx: &CheckContext) -> Result<CheckReport> {
        run_trials(self, ctx)
    }

    /// Re-runs the trial behind a witness; `true` if it still violates.
    fn replay(&self, ctx: &CheckContext, w: &Witness) -> Result<bool> {
        let mut rng = trial_rng(ctx, self.id(), w.config, w.trial);
        Ok(self.trial(ctx, w.config, w.trial, &mut rng)?.violated)
    }
}

fn fnv(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x100_0000_01b3)
    })
}

/// Stream for one trial, fixed by `(seed, check, config, trial)`.
pub fn trial_rng(ctx: &CheckContext, id: &str, config: usize, trial: usize) -> Rng {
    let base = ctx.seed ^ fnv(id) ^ (config as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    rng::stream(base, trial as u64)
}

/// Runs every `(config, trial)` pair concurrently and merges in order.
pub fn run_trials<C: Check + ?Sized>(check: &C, ctx: &CheckContext) -> Result<CheckReport> {
    let per = check.trials_per_config(ctx);
    let units: Vec<(usize, usize)> = (0..check.configs(ctx))
        .flat_map(|c| (0..per).map(move |i| (c, i)))
        .collect();
    let outcomes: Vec<Result<Trial>> = units
        .par_iter()
        .map(|&(c, i)| {
            let mut rng = trial_rng(ctx, check.id(), c, i);
            check.trial(ctx, c, i, &mut rng)
        })
        .collect();
    let mut report = CheckReport {
        check_id: check.id().to_string(),
        trials: 0,
        violations: 0,
        worst_margin: f64::INFINITY,
        witnesses: Vec::new(),
        passed: true,
        details: Value::Null,
    };
    let mut details = Vec::new();
    for (&(config, trial), outcome) in units.iter().zip(outcomes) {
        let t = outcome?;
        report.trials += t.samples;
        report.worst_margin = report.worst_margin.min(t.margin);
        if !t.details.is_null() {
            details.push(t.details);
        }
        if t.violated {
            report.violations += 1;
            if report.witnesses.len() < MAX_WITNESSES {
                report.witnesses.push(Witness {
                    config,
                    trial,
                    margin: t.margin,
                    input: t.input,
                });
            }
        }
    }
    report.passed = report.violations == 0;
    if !details.is_empty() {
        report.details = Value::Array(details);
    }
    Ok(report)
}

/// Checks addressable by identifier.
#[derive(Clone)]
pub struct CheckRegistry {
    checks: BTreeMap<&'static str, Arc<dyn Check>>,
}

impl Default for CheckRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl CheckRegistry {
    pub fn empty() -> Self {
        CheckRegistry {
            checks: BTreeMap::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut r = Self::empty();
        for case in perturbation::Case::ALL {
            r.register(Arc::new(perturbation::Perturbation(case)));
        }
        r.register(Arc::new(majorization::NoStrictMajorization));
        r.register(Arc::new(optimality::MinimaxEqualsMaximin));
        r.register(Arc::new(optimality::EquioscillationValue));
        r.register(Arc::new(usc::UscInvariances));
        r.register(Arc::new(dini::DiniMax));
        r.register(Arc::new(limits::KernelLimits));
        r.register(Arc::new(continuity::Continuity));
        r
    }

    pub fn register(&mut self, c: Arc<dyn Check>) {
        self.checks.insert(c.id(), c);
    }

    pub fn ids(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.checks.keys().copied()
    }

    pub fn get(&self, id: &str) -> Result<&dyn Check> {
        self.checks
            .get(id)
            .map(|c| c.as_ref())
            .ok_or_else(|| Error::param("check", format!("unknown check id {id:?}")))
    }

    pub fn run(&self, id: &str, ctx: &CheckContext) -> Result<CheckReport> {
        self.get(id)?.run(ctx)
    }

    pub fn run_all(&self, ctx: &CheckContext) -> Result<Vec<CheckReport>> {
        self.checks.values().map(|c| c.run(ctx)).collect()
    }
}

/// Relative slack helper: `a - b` measured against `tol` scaled by the
/// operand size.
pub(crate) fn scaled_tol(tol: f64, a: f64, b: f64) -> f64 {
    tol * (1.0 + a.abs().max(b.abs()))
}
