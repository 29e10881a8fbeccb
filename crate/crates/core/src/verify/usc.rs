use rand::Rng as _;
use serde_json::json;

use super::{Check, CheckContext, Trial};
use crate::error::Result;
use crate::ext::ExtReal;
use crate::interval::Interval;
use crate::nodes::NodeSystem;
use crate::rng::Rng;
use crate::solvers::solve_all;
use crate::sumtrans::sup_on_interval;

const TOL: f64 = 1e-12;

pub struct UscInvariances;

/// `|a - b|`, zero when both are `-inf`, infinite when exactly one is.
fn gap(a: ExtReal, b: ExtReal) -> f64 {
    let d = a.distance(b);
    match (a, b) {
        (ExtReal::Finite(x), ExtReal::Finite(y)) => d / (1.0 + x.abs().max(y.abs())),
        _ => d,
    }
}

fn random_nodes(n: usize, rng: &mut Rng) -> NodeSystem {
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    v.sort_by(f64::total_cmp);
    NodeSystem::new(v).expect("sorted samples in [0, 1]")
}

impl Check for UscInvariances {
    fn id(&self) -> &'static str {
        "lem6.1/usc-invariances"
    }

    fn default_trials(&self) -> usize {
        1000
    }

    fn trial(
        &self,
        ctx: &CheckContext,
        config: usize,
        index: usize,
        rng: &mut Rng,
    ) -> Result<Trial> {
        let p = ctx.problem(config);
        let name = &ctx.problems[config].name;
        if !p.field().is_exact() {
            return Ok(Trial::vacuous(
                json!({ "problem": name, "skipped": "black-box field" }),
            ));
        }
        let ps = p.usc_regularized()?;
        let x = random_nodes(p.n(), rng);
        let (c, d) = {
            let u: f64 = rng.gen();
            let v: f64 = rng.gen();
            (u.min(v), u.max(v))
        };
        let m = p.interval_maxima(&x)?;
        let ms = ps.interval_maxima(&x)?;

        // (i) m̄ and (iv) the sup over an open set are unchanged by J -> J*
        let mut worst = gap(m.upper(), ms.upper());
        if c < d {
            let q = Interval::open(c, d)?;
            let a = sup_on_interval(p, &x, &q)?.value;
            let b = sup_on_interval(&ps, &x, &q)?.value;
            worst = worst.max(gap(a, b));
        }
        // (ii) with singular kernels every m_j is unchanged
        if p.all_singular() {
            for (a, b) in m.values.iter().zip(&ms.values) {
                worst = worst.max(gap(*a, *b));
            }
        }
        let mut margin = TOL - worst;
        let mut details = serde_json::Value::Null;
        // (iii) maximin is unchanged for monotone kernels, within the
        // certified solver gaps
        if index == 0 && p.all_monotone() {
            let r = solve_all(p, &ctx.options)?;
            let rs = solve_all(&ps, &ctx.options)?;
            let tol = ctx.value_tol.min(1e-6) + r.maximin.residual + rs.maximin.residual;
            let diff = r.maximin.value.distance(rs.maximin.value);
            margin = margin.min(tol - diff);
            details = json!({
                "problem": name,
                "maximin": r.maximin.value,
                "maximin_usc": rs.maximin.value,
                "tolerance": tol,
            });
        }
        let input = json!({ "problem": name, "x": x, "open_interval": [c, d] });
        let mut t = Trial::new(margin, !(margin >= 0.0), input);
        t.details = details;
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::{Finite, NegInf};
    use crate::fields::Field;
    use crate::kernels::Kernel;
    use crate::sumtrans::Problem;
    use crate::verify::named;

    fn half_log() -> Field {
        Field::log_indicator(&[Interval::new(0.0, 0.5, true, false).unwrap()]).unwrap()
    }

    #[test]
    fn zero_kernel_breaks_m1_only() {
        let p = Problem::uniform(Kernel::zero(), 1, half_log()).unwrap();
        let x = NodeSystem::new(vec![0.5]).unwrap();
        assert_eq!(p.interval_maxima(&x).unwrap().values[1], NegInf);
        let ps = p.usc_regularized().unwrap();
        assert_eq!(ps.interval_maxima(&x).unwrap().values[1], Finite(0.0));
        let mut ctx = CheckContext::new(2)
            .with_trials(200)
            .with_problems(vec![named("zero", p)]);
        ctx.options.multistarts = 2;
        assert!(UscInvariances.run(&ctx).unwrap().passed);
    }

    #[test]
    fn singular_kernel_keeps_every_maximum() {
        let p = Problem::uniform(Kernel::log(), 2, half_log()).unwrap();
        let mut ctx = CheckContext::new(2)
            .with_trials(200)
            .with_problems(vec![named("log", p)]);
        ctx.options.multistarts = 2;
        let r = UscInvariances.run(&ctx).unwrap();
        assert!(r.passed, "{r:?}");
    }
}
