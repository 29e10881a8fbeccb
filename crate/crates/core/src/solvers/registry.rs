use std::collections::BTreeMap;
use std::sync::Arc;

use super::{
    brute_force, solve_all, solve_equioscillation, SolveOptions, SolveReport, SolveStatus,
};
use crate::error::{Error, Result};
use crate::sumtrans::Problem;

pub trait Solver: Send + Sync {
    fn name(&self) -> &'static str;
    fn solve(&self, p: &Problem, o: &SolveOptions) -> Result<SolveReport>;
}

struct Equioscillation;
struct Minimax;
struct Maximin;
struct BruteMinimax;
struct BruteMaximin;

impl Solver for Equioscillation {
    fn name(&self) -> &'static str {
        "equioscillation"
    }
    fn solve(&self, p: &Problem, o: &SolveOptions) -> Result<SolveReport> {
        solve_equioscillation(p, o)
    }
}

impl Solver for Minimax {
    fn name(&self) -> &'static str {
        "minimax"
    }
    fn solve(&self, p: &Problem, o: &SolveOptions) -> Result<SolveReport> {
        Ok(solve_all(p, o)?.minimax)
    }
}

impl Solver for Maximin {
    fn name(&self) -> &'static str {
        "maximin"
    }
    fn solve(&self, p: &Problem, o: &SolveOptions) -> Result<SolveReport> {
        Ok(solve_all(p, o)?.maximin)
    }
}

fn brute_report(p: &Problem, o: &SolveOptions, minimax: bool) -> Result<SolveReport> {
    let r = brute_force(p, o.oracle_h)?;
    let (x, value) = if minimax {
        (r.minimax_x, r.minimax)
    } else {
        (r.maximin_x, r.maximin)
    };
    let maxima = p.interval_maxima(&x)?;
    Ok(SolveReport {
        residual: r.minimax.distance(r.maximin),
        status: SolveStatus::Converged,
        iterations: r.tuples,
        x,
        value,
        maxima,
        trace: Vec::new(),
        points: Vec::new(),
        distinct_points: Vec::new(),
        warnings: Vec::new(),
    })
}

impl Solver for BruteMinimax {
    fn name(&self) -> &'static str {
        "brute-minimax"
    }
    fn solve(&self, p: &Problem, o: &SolveOptions) -> Result<SolveReport> {
        brute_report(p, o, true)
    }
}

impl Solver for BruteMaximin {
    fn name(&self) -> &'static str {
        "brute-maximin"
    }
    fn solve(&self, p: &Problem, o: &SolveOptions) -> Result<SolveReport> {
        brute_report(p, o, false)
    }
}

/// Solvers addressable by name.
#[derive(Clone)]
pub struct SolverRegistry {
    solvers: BTreeMap<&'static str, Arc<dyn Solver>>,
}

impl Default for SolverRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl SolverRegistry {
    pub fn builtin() -> Self {
        let mut r = SolverRegistry {
            solvers: BTreeMap::new(),
        };
        r.register(Arc::new(Equioscillation));
        r.register(Arc::new(Minimax));
        r.register(Arc::new(Maximin));
        r.register(Arc::new(BruteMinimax));
        r.register(Arc::new(BruteMaximin));
        r
    }

    pub fn register(&mut self, s: Arc<dyn Solver>) {
        self.solvers.insert(s.name(), s);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Solver> {
        self.solvers
            .get(name)
            .map(|s| s.as_ref())
            .ok_or_else(|| Error::UnknownFamily(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.solvers.keys().copied()
    }
}
