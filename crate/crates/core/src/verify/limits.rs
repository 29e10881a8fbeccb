use rand::Rng as _;
use serde_json::json;

use super::{scaled_tol, Check, CheckContext, Trial};
use crate::error::Result;
use crate::ext::ExtReal;
use crate::rng::Rng;
use crate::solvers::sample_y;

const TOL: f64 = 1e-12;

pub struct KernelLimits;

/// Slack of `a <= b`, with `-inf` handled exactly.
fn slack(a: ExtReal, b: ExtReal) -> f64 {
    match (a, b) {
        (ExtReal::NegInf, _) => f64::INFINITY,
        (_, ExtReal::NegInf) => f64::NEG_INFINITY,
        (ExtReal::Finite(a), ExtReal::Finite(b)) => b - a + scaled_tol(TOL, a, b),
    }
}

impl Check for KernelLimits {
    fn id(&self) -> &'static str {
        "lem4.1/kernel-limits"
    }

    fn default_trials(&self) -> usize {
        100
    }

    fn trial(&self, ctx: &CheckContext, config: usize, _: usize, rng: &mut Rng) -> Result<Trial> {
        let p = ctx.problem(config);
        let x = sample_y(p, rng)?;
        let j = rng.gen_range(0..=p.n());
        let base = p.interval_maxima(&x)?.values[j];
        let mut margin = f64::INFINITY;

        // strictified: m_j^(eta) >= m_j and nonincreasing as eta decreases
        let mut strict = Vec::new();
        if p.all_monotone() {
            for &eta in &ctx.etas {
                let q = p.map_kernels(|k| k.strictify(eta))?;
                strict.push(q.interval_maxima(&x)?.values[j]);
            }
            for w in strict.windows(2) {
                margin = margin.min(slack(w[1], w[0]));
            }
            for &v in &strict {
                margin = margin.min(slack(base, v));
            }
        }
        // singularized: m_j^(eta) <= m_j and nondecreasing as eta decreases
        let mut sing = Vec::new();
        for &eta in &ctx.etas {
            let q = p.map_kernels(|k| k.singularize(eta))?;
            sing.push(q.interval_maxima(&x)?.values[j]);
        }
        for w in sing.windows(2) {
            margin = margin.min(slack(w[0], w[1]));
        }
        for &v in &sing {
            margin = margin.min(slack(v, base));
        }
        let input = json!({
            "problem": ctx.problems[config].name,
            "x": x,
            "j": j,
            "m_j": base,
            "strictified": strict,
            "singularized": sing,
        });
        Ok(Trial::new(margin, !(margin >= 0.0), input))
    }
}
