use rand::seq::index;
use rand::Rng as _;

use super::maxima;
use crate::error::{Error, Result};
use crate::fields::Field;
use crate::nodes::NodeSystem;
use crate::rng::Rng;
use crate::sumtrans::Problem;

const UNIFORM_TRIES: usize = 10;
const CALLABLE_POOL: usize = 1024;

pub(crate) fn in_y(p: &Problem, x: &[f64]) -> bool {
    maxima(p, x).is_regular()
}

fn uniform_simplex(n: usize, rng: &mut Rng) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Points of the finiteness domain to anchor node placement on.
fn pool(p: &Problem, rng: &mut Rng) -> Vec<f64> {
    let n = p.n();
    let mut pts = match p.field() {
        Field::Callable(_) => (0..=CALLABLE_POOL)
            .map(|i| i as f64 / CALLABLE_POOL as f64)
            .filter(|&t| p.field().at(t).is_finite())
            .collect(),
        field => {
            let dom = field.finiteness_domain().expect("exact field");
            let mut pts = dom.points.clone();
            let total: f64 = dom.intervals.iter().map(|iv| iv.len()).sum();
            for iv in &dom.intervals {
                let k = ((n + 1) as f64 * iv.len() / total).ceil() as usize;
                for _ in 0..k.max(1) {
                    let u: f64 = rng.gen_range(0.05..0.95);
                    pts.push(iv.a + u * (iv.b - iv.a));
                }
            }
            pts
        }
    };
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Nodes placed strictly between `n + 1` sorted points of `X^c`, so that
/// every `I_j` holds one of them in its interior, away from all nodes.
fn anchored(p: &Problem, rng: &mut Rng) -> Option<Vec<f64>> {
    let n = p.n();
    let pts = pool(p, rng);
    if pts.len() < n + 1 {
        return None;
    }
    let mut pick = index::sample(rng, pts.len(), n + 1).into_vec();
    pick.sort_unstable();
    let a: Vec<f64> = pick.into_iter().map(|i| pts[i]).collect();
    Some(
        a.windows(2)
            .map(|w| w[0] + rng.gen_range(0.1..0.9) * (w[1] - w[0]))
            .collect(),
    )
}

/// A random node system in `Y`: uniform draws first, then anchored
/// placement when the finiteness domain is too thin for rejection.
pub fn sample_y(p: &Problem, rng: &mut Rng) -> Result<NodeSystem> {
    for _ in 0..UNIFORM_TRIES {
        let x = uniform_simplex(p.n(), rng);
        if in_y(p, &x) {
            return NodeSystem::new(x);
        }
    }
    for _ in 0..UNIFORM_TRIES {
        if let Some(x) = anchored(p, rng) {
            if in_y(p, &x) {
                return NodeSystem::new(x);
            }
        }
    }
    Err(Error::Infeasible {
        attempts: 2 * UNIFORM_TRIES,
    })
}

/// Start `0` is the equispaced system when it lies in `Y`; the others are
/// drawn from per-start streams.
pub fn starts(p: &Problem, count: usize, seed: u64) -> Result<Vec<NodeSystem>> {
    (0..count)
        .map(|s| {
            if s == 0 {
                let u = NodeSystem::uniform(p.n());
                if in_y(p, u.nodes()) {
                    return Ok(u);
                }
            }
            sample_y(p, &mut crate::rng::stream(seed, s as u64))
        })
        .collect()
}
