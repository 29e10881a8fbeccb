use serde_json::json;

use super::{Check, CheckContext, Trial};
use crate::error::Result;
use crate::rng::Rng;
use crate::solvers::{brute_force, solve_all};

/// Multiplier `c` of the oracle bracket `c h`.
pub const ORACLE_BRACKET: f64 = 1.0;
const ORDER_TOL: f64 = 1e-12;

pub struct MinimaxEqualsMaximin;

impl Check for MinimaxEqualsMaximin {
    fn id(&self) -> &'static str {
        "thm1.3/minimax-equals-maximin"
    }

    fn default_trials(&self) -> usize {
        1
    }

    fn trials_per_config(&self, _: &CheckContext) -> usize {
        1
    }

    fn trial(&self, ctx: &CheckContext, config: usize, _: usize, _: &mut Rng) -> Result<Trial> {
        let p = ctx.problem(config);
        let r = solve_all(p, &ctx.options)?;
        let (up, low) = (r.minimax.value.to_f64(), r.maximin.value.to_f64());
        let mut margin = ctx.value_tol - (up - low).abs();
        margin = margin.min(up - low + ORDER_TOL);
        let mut details = json!({
            "problem": ctx.problems[config].name,
            "minimax": up,
            "maximin": low,
            "gap": r.minimax.residual,
        });
        if p.n() <= ctx.oracle_max_n {
            let h = ctx.options.oracle_h;
            let o = brute_force(p, h)?;
            let slack = ORACLE_BRACKET * h;
            let (bu, bl) = (o.minimax.to_f64(), o.maximin.to_f64());
            margin = margin.min(low - (bl - slack)).min(bu + slack - up);
            details["oracle"] = json!({
                "h": h,
                "c": ORACLE_BRACKET,
                "brute_minimax": bu,
                "brute_maximin": bl,
            });
        }
        let mut t = Trial::new(
            margin,
            !(margin >= 0.0),
            json!({ "problem": ctx.problems[config].name }),
        );
        t.details = details;
        Ok(t)
    }
}

pub struct EquioscillationValue;

impl Check for EquioscillationValue {
    fn id(&self) -> &'static str {
        "thm1.3/equioscillation-value"
    }

    fn default_trials(&self) -> usize {
        1
    }

    fn trials_per_config(&self, _: &CheckContext) -> usize {
        1
    }

    fn trial(&self, ctx: &CheckContext, config: usize, _: usize, _: &mut Rng) -> Result<Trial> {
        let p = ctx.problem(config);
        let name = &ctx.problems[config].name;
        if !p.field().is_exact() || !p.field().is_usc()? {
            return Ok(Trial::vacuous(
                json!({ "problem": name, "skipped": "field not usc" }),
            ));
        }
        let r = solve_all(p, &ctx.options)?;
        let eq = &r.equioscillation;
        let values: Vec<f64> = eq.points.iter().map(|q| q.value.to_f64()).collect();
        let minimax = r.minimax.value.to_f64();
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let spread = hi - lo;
        let off = values
            .iter()
            .map(|v| (v - minimax).abs())
            .fold(0.0, f64::max);
        let node_spread = eq
            .points
            .iter()
            .flat_map(|a| eq.points.iter().map(move |b| a.x.distance(&b.x)))
            .fold(0.0, f64::max);
        let margin = if values.is_empty() {
            f64::NEG_INFINITY
        } else {
            (ctx.equi_tol - spread).min(ctx.equi_tol - off)
        };
        let details = json!({
            "problem": name,
            "converged_starts": values.len(),
            "value_spread": spread,
            "distance_to_minimax": off,
            "node_spread": node_spread,
            "distinct_points": eq.distinct_points,
            "minimax": minimax,
        });
        let mut t = Trial::new(
            margin,
            !(margin >= 0.0),
            json!({ "problem": ctx.problems[config].name }),
        );
        t.details = details;
        Ok(t)
    }
}
