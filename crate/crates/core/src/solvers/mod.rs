//! Minimax, maximin and equioscillation solvers, with brute-force grid
//! oracles for small `n`.

mod brute;
mod equioscillation;
mod pattern;
mod registry;
mod sampling;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::nodes::NodeSystem;
use crate::sumtrans::{MaximaVector, Problem};

pub use brute::{
    brute_force, brute_maximin, brute_minimax, BruteReport, BRUTE_BUDGET, BRUTE_MAX_N,
};
pub use equioscillation::solve_equioscillation;
pub use registry::{Solver, SolverRegistry};
pub use sampling::{sample_y, starts};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveOptions {
    pub tol_residual: f64,
    pub tol_step: f64,
    pub max_iters: usize,
    pub multistarts: usize,
    pub continuation_etas: Vec<f64>,
    pub fd_step: f64,
    pub seed: u64,
    /// Grid step for the brute-force oracles.
    pub oracle_h: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol_residual: 1e-8,
            tol_step: 1e-10,
            max_iters: 200,
            multistarts: 16,
            continuation_etas: vec![0.2, 0.1, 0.05, 0.02, 0.01, 0.0],
            fd_step: 1e-6,
            seed: 0,
            oracle_h: 1.0 / 1024.0,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tol_residual", self.tol_residual),
            ("tol_step", self.tol_step),
            ("fd_step", self.fd_step),
            ("oracle_h", self.oracle_h),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(name, "must be positive and finite"));
            }
        }
        if self.max_iters == 0 {
            return Err(Error::param("max_iters", "must be at least 1"));
        }
        if self.multistarts == 0 {
            return Err(Error::param("multistarts", "must be at least 1"));
        }
        let etas = &self.continuation_etas;
        if etas.last() != Some(&0.0) {
            return Err(Error::param("continuation_etas", "must end at 0"));
        }
        if etas.windows(2).any(|w| w[0] <= w[1]) || etas.iter().any(|e| !e.is_finite()) {
            return Err(Error::param(
                "continuation_etas",
                "must be strictly decreasing",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Converged,
    Stalled,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub start: usize,
    /// Strictify parameter of the stage; `0` is the original kernel.
    pub eta: f64,
    pub iteration: usize,
    pub residual: f64,
    pub value: ExtReal,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub x: NodeSystem,
    pub value: ExtReal,
    /// `max_j |Φ_j|` for equioscillation; the certified gap
    /// `m̄(minimax x) - m̲(maximin x)` for the optimizers.
    pub residual: f64,
    pub status: SolveStatus,
    pub iterations: usize,
    pub maxima: MaximaVector,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceRecord>,
    /// Every converged equioscillation point, one per successful start.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<EquiPoint>,
    /// `points` merged within `sqrt(tol_residual)`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub distinct_points: Vec<NodeSystem>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquiPoint {
    pub x: NodeSystem,
    pub value: ExtReal,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveAll {
    pub equioscillation: SolveReport,
    pub minimax: SolveReport,
    pub maximin: SolveReport,
}

pub(crate) fn maxima(p: &Problem, x: &[f64]) -> MaximaVector {
    let x = NodeSystem::new(x.to_vec()).expect("solver iterates stay in the simplex");
    p.interval_maxima(&x).expect("node count matches")
}

/// Runs the equioscillation solver, then pattern searches for `m̄` and `m̲`
/// warm-started from every multistart result. The optimizer residuals are
/// the gap between the two, which bounds the distance of either value to
/// the common optimum.
pub fn solve_all(p: &Problem, o: &SolveOptions) -> Result<SolveAll> {
    o.validate()?;
    let (eq, finals) = equioscillation::run(p, o)?;
    let mut seeds: Vec<Vec<f64>> = vec![eq.x.nodes().to_vec()];
    seeds.extend(finals);
    seeds.dedup();

    let down: Vec<(Vec<f64>, ExtReal, usize)> = seeds
        .par_iter()
        .map(|x0| pattern::search(p, x0, o, pattern::Goal::Minimax))
        .collect();
    let up: Vec<(Vec<f64>, ExtReal, usize)> = seeds
        .par_iter()
        .map(|x0| pattern::search(p, x0, o, pattern::Goal::Maximin))
        .collect();
    let mm = pattern::pick(down, pattern::Goal::Minimax);
    let mx = pattern::pick(up, pattern::Goal::Maximin);
    if mx.1.is_neg_inf() {
        return Err(Error::Infeasible {
            attempts: seeds.len(),
        });
    }

    let gap = mm.1.distance(mx.1);
    let status = if gap <= o.tol_residual {
        SolveStatus::Converged
    } else {
        SolveStatus::Stalled
    };
    let report = |(x, value, iterations): (Vec<f64>, ExtReal, usize)| SolveReport {
        maxima: maxima(p, &x),
        x: NodeSystem::new(x).expect("ordered"),
        value,
        residual: gap,
        status,
        iterations,
        trace: Vec::new(),
        points: Vec::new(),
        distinct_points: Vec::new(),
        warnings: eq.warnings.clone(),
    };
    Ok(SolveAll {
        minimax: report(mm),
        maximin: report(mx),
        equioscillation: eq,
    })
}

/// Estimate of `M(S̄) = min_x m̄(x)`.
pub fn solve_minimax(p: &Problem, o: &SolveOptions) -> Result<SolveReport> {
    Ok(solve_all(p, o)?.minimax)
}

/// Estimate of `m(S̄) = sup_x m̲(x)`.
pub fn solve_maximin(p: &Problem, o: &SolveOptions) -> Result<SolveReport> {
    Ok(solve_all(p, o)?.maximin)
}
