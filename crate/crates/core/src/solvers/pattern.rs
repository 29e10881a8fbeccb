use std::cmp::Ordering;

use super::{maxima, SolveOptions};
use crate::ext::{ExtReal, NegInf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Goal {
    /// minimize `m̄`
    Minimax,
    /// maximize `m̲`; points outside `Y` are rejected
    Maximin,
}

impl Goal {
    fn objective(self, p: &crate::sumtrans::Problem, x: &[f64]) -> ExtReal {
        let m = maxima(p, x);
        match self {
            Goal::Minimax => m.upper(),
            Goal::Maximin => m.lower(),
        }
    }

    /// `Less` when `a` is strictly better than `b`.
    fn compare(self, a: ExtReal, b: ExtReal) -> Ordering {
        match self {
            Goal::Minimax => a.cmp(&b),
            Goal::Maximin => b.cmp(&a),
        }
    }

    fn worst(self) -> ExtReal {
        match self {
            Goal::Minimax => ExtReal::Finite(f64::INFINITY),
            Goal::Maximin => NegInf,
        }
    }
}

fn lex(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

fn ordered(y: Vec<f64>) -> Option<Vec<f64>> {
    let ok = y.windows(2).all(|w| w[0] <= w[1]) && y.iter().all(|v| (0.0..=1.0).contains(v));
    ok.then_some(y)
}

/// Poll set: each node alone, clamped between its neighbours; pairs of
/// nodes moved together or apart; and the whole system shifted, clamped
/// to `[0, 1]`.
fn poll(x: &[f64], step: f64) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut out = Vec::with_capacity(2 * n + 2);
    for j in 0..n {
        let left = if j == 0 { 0.0 } else { x[j - 1] };
        let right = if j + 1 == n { 1.0 } else { x[j + 1] };
        for s in [step, -step] {
            let v = (x[j] + s).clamp(left, right);
            if v != x[j] {
                let mut y = x.to_vec();
                y[j] = v;
                out.push(y);
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for (si, sj) in [(step, step), (-step, -step), (step, -step), (-step, step)] {
                let mut y = x.to_vec();
                y[i] += si;
                y[j] += sj;
                if let Some(y) = ordered(y) {
                    if y != x {
                        out.push(y);
                    }
                }
            }
        }
    }
    for s in [step, -step] {
        let y: Vec<f64> = x.iter().map(|v| (v + s).clamp(0.0, 1.0)).collect();
        if y != x {
            out.push(y);
        }
    }
    out
}

/// Compass search with halving steps. Only strict improvements are
/// taken; among equally good poll points the lexicographically smaller
/// one wins.
pub(crate) fn search(
    p: &crate::sumtrans::Problem,
    x0: &[f64],
    o: &SolveOptions,
    goal: Goal,
) -> (Vec<f64>, ExtReal, usize) {
    let mut x = x0.to_vec();
    let mut fx = goal.objective(p, &x);
    let mut step = 0.25 / (x.len() + 1) as f64;
    let mut iters = 0;
    let budget = 20 * o.max_iters;
    while step >= o.tol_step && iters < budget {
        iters += 1;
        let mut best: Option<(Vec<f64>, ExtReal)> = None;
        for y in poll(&x, step) {
            let fy = goal.objective(p, &y);
            if goal == Goal::Maximin && fy.is_neg_inf() {
                continue;
            }
            let better = match &best {
                None => true,
                Some((bx, bf)) => match goal.compare(fy, *bf) {
                    Ordering::Less => true,
                    Ordering::Equal => lex(&y, bx).is_lt(),
                    Ordering::Greater => false,
                },
            };
            if better {
                best = Some((y, fy));
            }
        }
        match best {
            Some((y, fy)) if goal.compare(fy, fx).is_lt() => {
                x = y;
                fx = fy;
            }
            _ => step *= 0.5,
        }
    }
    (x, fx, iters)
}

/// Best of several search results; ties go to the earlier one.
pub(crate) fn pick(
    results: Vec<(Vec<f64>, ExtReal, usize)>,
    goal: Goal,
) -> (Vec<f64>, ExtReal, usize) {
    let total: usize = results.iter().map(|r| r.2).sum();
    let mut best: Option<(Vec<f64>, ExtReal)> = None;
    for (x, f, _) in results {
        let take = match &best {
            None => true,
            Some((_, bf)) => goal.compare(f, *bf).is_lt(),
        };
        if take {
            best = Some((x, f));
        }
    }
    let (x, f) = best.unwrap_or((Vec::new(), goal.worst()));
    (x, f, total)
}
