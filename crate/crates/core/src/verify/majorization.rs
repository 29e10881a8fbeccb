use serde_json::json;

use super::{Check, CheckContext, Trial};
use crate::error::Result;
use crate::ext::ExtReal;
use crate::rng::Rng;
use crate::solvers::sample_y;
use crate::sumtrans::MaximaVector;

pub struct NoStrictMajorization;

/// `min_j (m_j(x) - m_j(y))`, the amount by which `x` majorizes `y`.
fn lead(mx: &MaximaVector, my: &MaximaVector) -> f64 {
    mx.values
        .iter()
        .zip(&my.values)
        .map(|(a, b)| match (a, b) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a - b,
            _ => f64::NAN,
        })
        .fold(f64::INFINITY, f64::min)
}

impl Check for NoStrictMajorization {
    fn id(&self) -> &'static str {
        "thm1.3/no-strict-majorization"
    }

    fn default_trials(&self) -> usize {
        10_000
    }

    fn trial(&self, ctx: &CheckContext, config: usize, _: usize, rng: &mut Rng) -> Result<Trial> {
        let p = ctx.problem(config);
        let x = sample_y(p, rng)?;
        let y = sample_y(p, rng)?;
        let mx = p.interval_maxima(&x)?;
        let my = p.interval_maxima(&y)?;
        // both orders of the pair are tested
        let worst = lead(&mx, &my).max(lead(&my, &mx));
        let margin = ctx.margin - worst;
        let input = json!({ "problem": ctx.problems[config].name, "x": x, "y": y });
        Ok(Trial::new(margin, margin < 0.0, input))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Field;
    use crate::kernels::Kernel;
    use crate::sumtrans::Problem;
    use crate::verify::named;

    #[test]
    fn log_pairs() {
        let ctx = CheckContext::new(4)
            .with_trials(500)
            .with_problems(vec![named(
                "log2",
                Problem::uniform(Kernel::log(), 2, Field::constant(0.0)).unwrap(),
            )]);
        let r = NoStrictMajorization.run(&ctx).unwrap();
        assert!(r.passed);
        assert_eq!(r.trials, 500);
    }

    #[test]
    fn reflexive_pairs_never_violate() {
        let p = Problem::uniform(Kernel::log(), 2, Field::constant(0.0)).unwrap();
        let x = crate::nodes::NodeSystem::new(vec![0.2, 0.5]).unwrap();
        let m = p.interval_maxima(&x).unwrap();
        assert_eq!(lead(&m, &m), 0.0);
        let z = Problem::uniform(Kernel::zero(), 2, Field::constant(0.0)).unwrap();
        let a = z.interval_maxima(&x).unwrap();
        let b = z
            .interval_maxima(&crate::nodes::NodeSystem::new(vec![0.7, 0.9]).unwrap())
            .unwrap();
        assert_eq!(lead(&a, &b), 0.0);
    }
}
