use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::sampling::{in_y, starts};
use super::{maxima, EquiPoint, SolveOptions, SolveReport, SolveStatus, TraceRecord};
use crate::error::Result;
use crate::ext::{ExtReal, Finite, NegInf};
use crate::fields::limsup_conditions;
use crate::nodes::NodeSystem;
use crate::sumtrans::{MaximaVector, Problem};

const MAX_BISECTIONS: usize = 200;
const MAX_DAMPING_TRIES: usize = 16;

/// `Φ(x)` when `x ∈ Y`.
fn phi(p: &Problem, x: &[f64]) -> Option<(Vec<f64>, MaximaVector)> {
    let m = maxima(p, x);
    let d = m.differences().ok()?;
    Some((d, m))
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, b| a.max(b.abs()))
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// Sign of `m_1 - m_0` in the extended sense.
fn phi1(p: &Problem, x: f64) -> (f64, MaximaVector) {
    let m = maxima(p, &[x]);
    let v = match (m.values[0], m.values[1]) {
        (Finite(a), Finite(b)) => b - a,
        (NegInf, Finite(_)) => f64::INFINITY,
        (Finite(_), NegInf) => f64::NEG_INFINITY,
        (NegInf, NegInf) => f64::NAN,
    };
    (v, m)
}

/// `Φ_1(0) >= 0 >= Φ_1(1)`, so bisection always closes on a sign change.
/// A root is reported only if `Φ_1` is small on both sides of the final
/// bracket; a jump across it means no equioscillation point was found.
fn bisect(p: &Problem) -> (Vec<f64>, usize, Vec<TraceRecord>) {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut trace = Vec::new();
    let mut iters = 0;
    let mut at_lo = phi1(p, lo).0;
    let mut at_hi = phi1(p, hi).0;
    while iters < MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iters += 1;
        let (v, m) = phi1(p, mid);
        trace.push(TraceRecord {
            start: 0,
            eta: 0.0,
            iteration: iters,
            residual: v.abs(),
            value: m.upper(),
            x: vec![mid],
        });
        if v == 0.0 {
            return (vec![mid], iters, trace);
        }
        // an undefined sign (both maxima -inf) is resolved toward the
        // side that still has finite mass
        if v > 0.0 || (v.is_nan() && at_hi < 0.0) {
            lo = mid;
            at_lo = v;
        } else {
            hi = mid;
            at_hi = v;
        }
    }
    let x = if at_lo.abs() <= at_hi.abs() { lo } else { hi };
    (vec![x], iters, trace)
}

fn phi_is_continuous_at(p: &Problem, x: f64, tol: f64) -> bool {
    let up = if x < 1.0 {
        f64::from_bits(x.to_bits() + 1)
    } else {
        1.0
    };
    let down = if x > 0.0 {
        f64::from_bits(x.to_bits() - 1)
    } else {
        0.0
    };
    [down, x, up].iter().all(|&t| phi1(p, t).0.abs() <= tol)
}

/// Finite-difference Jacobian of `Φ`, stepping each node toward whichever
/// neighbour leaves room.
fn jacobian(p: &Problem, x: &[f64], f: &[f64], o: &SolveOptions) -> DMatrix<f64> {
    let n = x.len();
    let mut jac = DMatrix::zeros(n, n);
    for j in 0..n {
        let left = if j == 0 { 0.0 } else { x[j - 1] };
        let right = if j + 1 == n { 1.0 } else { x[j + 1] };
        let h = o.fd_step * (right - left).max(1e-6);
        let mut cols = Vec::with_capacity(2);
        if x[j] + h <= right {
            cols.push(h);
        }
        if x[j] - h >= left {
            cols.push(-h);
        }
        for step in cols {
            let mut y = x.to_vec();
            y[j] += step;
            if let Some((fy, _)) = phi(p, &y) {
                for i in 0..n {
                    jac[(i, j)] = (fy[i] - f[i]) / step;
                }
                break;
            }
        }
    }
    jac
}

/// Largest `α <= 1` keeping `x + α δ` ordered within `[0, 1]`, backed off
/// from the boundary.
fn step_to_boundary(x: &[f64], d: &[f64]) -> f64 {
    let n = x.len();
    let mut alpha: f64 = 1.0;
    for j in 0..=n {
        let (xl, dl) = if j == 0 {
            (0.0, 0.0)
        } else {
            (x[j - 1], d[j - 1])
        };
        let (xr, dr) = if j == n { (1.0, 0.0) } else { (x[j], d[j]) };
        let rate = dr - dl;
        if rate < 0.0 {
            alpha = alpha.min(0.9 * (xr - xl) / -rate);
        }
    }
    alpha.max(0.0)
}

struct Stage {
    x: Vec<f64>,
    residual: f64,
    iterations: usize,
}

/// Levenberg-Marquardt on `Φ = 0` from a point of `Y`; proposals leaving
/// `Y` count as failed steps and raise the damping.
fn newton(
    p: &Problem,
    x0: Vec<f64>,
    o: &SolveOptions,
    target: f64,
    mut record: impl FnMut(usize, f64, ExtReal, &[f64]),
) -> Stage {
    let mut x = x0;
    let Some((mut f, mut m)) = phi(p, &x) else {
        return Stage {
            x,
            residual: f64::INFINITY,
            iterations: 0,
        };
    };
    let mut lambda = 1e-3;
    let mut it = 0;
    record(0, inf_norm(&f), m.upper(), &x);
    while it < o.max_iters && inf_norm(&f) > target {
        it += 1;
        let jac = jacobian(p, &x, &f, o);
        let fv = DVector::from_column_slice(&f);
        let a = jac.transpose() * &jac;
        let g = jac.transpose() * fv;
        let mut accepted = false;
        let mut tiny = false;
        for _ in 0..MAX_DAMPING_TRIES {
            let mut damped = a.clone();
            for i in 0..x.len() {
                damped[(i, i)] += lambda * (a[(i, i)] + 1e-9);
            }
            let Some(d) = damped.lu().solve(&(-&g)) else {
                lambda *= 4.0;
                continue;
            };
            let alpha = step_to_boundary(&x, d.as_slice());
            let y: Vec<f64> = x
                .iter()
                .zip(d.iter())
                .map(|(xi, di)| (xi + alpha * di).clamp(0.0, 1.0))
                .collect();
            if y.windows(2).any(|w| w[0] > w[1]) {
                lambda *= 4.0;
                continue;
            }
            let moved = x
                .iter()
                .zip(&y)
                .fold(0.0f64, |s, (a, b)| s.max((a - b).abs()));
            if moved < o.tol_step {
                tiny = true;
                break;
            }
            if let Some((fy, my)) = phi(p, &y) {
                if l2(&fy) < l2(&f) {
                    x = y;
                    f = fy;
                    m = my;
                    lambda = (lambda / 3.0).max(1e-12);
                    accepted = true;
                    break;
                }
            }
            lambda *= 4.0;
        }
        record(it, inf_norm(&f), m.upper(), &x);
        if !accepted || tiny {
            break;
        }
    }
    Stage {
        residual: inf_norm(&f),
        x,
        iterations: it,
    }
}

/// Strictified copies of the problem along the schedule, or just the
/// problem itself when some kernel is not monotone.
fn schedule(p: &Problem, etas: &[f64]) -> Vec<(f64, Problem)> {
    let stages: Option<Vec<(f64, Problem)>> = etas
        .iter()
        .map(|&eta| {
            if eta == 0.0 {
                Some((0.0, p.clone()))
            } else {
                p.map_kernels(|k| k.strictify(eta)).ok().map(|q| (eta, q))
            }
        })
        .collect();
    stages.unwrap_or_else(|| vec![(0.0, p.clone())])
}

struct StartResult {
    x: Vec<f64>,
    residual: f64,
    iterations: usize,
    trace: Vec<TraceRecord>,
}

fn run_start(
    start: usize,
    x0: Vec<f64>,
    stages: &[(f64, Problem)],
    o: &SolveOptions,
) -> StartResult {
    let target = o.tol_residual / 10.0;
    let mut x = x0;
    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    for (eta, q) in stages {
        let stage = newton(q, x.clone(), o, target, |iteration, residual, value, x| {
            trace.push(TraceRecord {
                start,
                eta: *eta,
                iteration,
                residual,
                value,
                x: x.to_vec(),
            })
        });
        iterations += stage.iterations;
        // a stage that ends outside Y keeps the previous warm start
        if stage.residual.is_finite() {
            x = stage.x;
            residual = stage.residual;
        }
    }
    StartResult {
        x,
        residual,
        iterations,
        trace,
    }
}

fn usc_warning(p: &Problem) -> Vec<String> {
    match limsup_conditions(p.field()) {
        Ok(c) if !c.full => {
            vec!["field is not upper semicontinuous; equioscillation points may not exist".into()]
        }
        _ => Vec::new(),
    }
}

/// Returns the report and the final point of every start.
pub(crate) fn run(p: &Problem, o: &SolveOptions) -> Result<(SolveReport, Vec<Vec<f64>>)> {
    let warnings = usc_warning(p);
    if p.n() == 1 {
        let (x, iterations, trace) = bisect(p);
        let m = maxima(p, &x);
        let residual = m.residual();
        // with usc J every m_j is attained; an unattained near-root must
        // survive a continuity test to rule out the limit of a jump
        let converged = residual <= o.tol_residual
            && (m.attained.iter().all(|&a| a) || phi_is_continuous_at(p, x[0], o.tol_residual));
        let x = NodeSystem::new(x)?;
        let points = if converged {
            vec![EquiPoint {
                x: x.clone(),
                value: m.upper(),
                residual,
            }]
        } else {
            Vec::new()
        };
        let report = SolveReport {
            value: m.upper(),
            residual,
            status: if converged {
                SolveStatus::Converged
            } else {
                SolveStatus::Stalled
            },
            iterations,
            distinct_points: points.iter().map(|p| p.x.clone()).collect(),
            points,
            x,
            maxima: m,
            trace,
            warnings,
        };
        let finals = vec![report.x.nodes().to_vec()];
        return Ok((report, finals));
    }

    let stages = schedule(p, &o.continuation_etas);
    let x0s = starts(p, o.multistarts, o.seed)?;
    let results: Vec<StartResult> = x0s
        .into_par_iter()
        .enumerate()
        .map(|(s, x0)| run_start(s, x0.into_vec(), &stages, o))
        .collect();

    let best = results
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.residual.total_cmp(&b.residual).then(i.cmp(j)))
        .map(|(i, _)| i)
        .expect("at least one start");
    let mut points = Vec::new();
    let mut distinct: Vec<NodeSystem> = Vec::new();
    for r in results.iter().filter(|r| r.residual <= o.tol_residual) {
        let x = NodeSystem::new(r.x.clone())?;
        if distinct
            .iter()
            .all(|d| d.distance(&x) > o.tol_residual.sqrt())
        {
            distinct.push(x.clone());
        }
        points.push(EquiPoint {
            value: maxima(p, x.nodes()).upper(),
            x,
            residual: r.residual,
        });
    }
    let r = &results[best];
    let m = maxima(p, &r.x);
    debug_assert!(in_y(p, &r.x));
    let report = SolveReport {
        x: NodeSystem::new(r.x.clone())?,
        value: m.upper(),
        residual: r.residual,
        status: if r.residual <= o.tol_residual {
            SolveStatus::Converged
        } else {
            SolveStatus::Stalled
        },
        iterations: results.iter().map(|r| r.iterations).sum(),
        maxima: m,
        trace: r.trace.clone(),
        points,
        distinct_points: distinct,
        warnings,
    };
    let finals = results.into_iter().map(|r| r.x).collect();
    Ok((report, finals))
}

/// Seeks `x` with `m_0(x) = m_1(x) = ... = m_n(x)`.
pub fn solve_equioscillation(p: &Problem, o: &SolveOptions) -> Result<SolveReport> {
    o.validate()?;
    Ok(run(p, o)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Field;
    use crate::kernels::Kernel;
    use approx::assert_abs_diff_eq;

    #[test]
    fn log_one_node() {
        let p = Problem::uniform(Kernel::log(), 1, Field::constant(0.0)).unwrap();
        let r = solve_equioscillation(&p, &SolveOptions::default()).unwrap();
        assert_eq!(r.x.nodes(), &[0.5]);
        assert_eq!(r.status, SolveStatus::Converged);
        assert_abs_diff_eq!(r.value.to_f64(), -(2f64.ln()), epsilon = 1e-15);
    }

    #[test]
    fn remark_with_and_without_regularization() {
        let p = Problem::uniform(Kernel::zero(), 1, Field::ramp_below(0.5).unwrap()).unwrap();
        let r = solve_equioscillation(&p, &SolveOptions::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Stalled);
        assert!(!r.warnings.is_empty());
        let r =
            solve_equioscillation(&p.usc_regularized().unwrap(), &SolveOptions::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Converged);
        assert_eq!(r.x.nodes(), &[0.5]);
        assert_eq!(r.value, Finite(0.5));
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn weighted_three_nodes() {
        let p =
            Problem::weighted(Kernel::log(), vec![1.0, 2.0, 0.5], Field::constant(0.0)).unwrap();
        let r = solve_equioscillation(&p, &SolveOptions::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Converged);
        let m = p.interval_maxima(&r.x).unwrap();
        assert!(m.residual() <= 1e-8);
        assert_eq!(r.distinct_points.len(), 1);
    }

    #[test]
    fn continuation_values_decrease_with_eta() {
        let p = Problem::uniform(Kernel::log(), 2, Field::constant(0.0)).unwrap();
        let o = SolveOptions {
            multistarts: 1,
            ..SolveOptions::default()
        };
        let r = solve_equioscillation(&p, &o).unwrap();
        let mut last_per_stage: Vec<(f64, ExtReal)> = Vec::new();
        for t in &r.trace {
            match last_per_stage.last_mut() {
                Some(l) if l.0 == t.eta => l.1 = t.value,
                _ => last_per_stage.push((t.eta, t.value)),
            }
        }
        assert_eq!(last_per_stage.len(), 6);
        for w in last_per_stage.windows(2) {
            assert!(w[1].1 <= w[0].1, "{last_per_stage:?}");
        }
    }

    #[test]
    fn boundary_step() {
        assert_eq!(step_to_boundary(&[0.3, 0.6], &[0.1, -0.1]), 1.0);
        let a = step_to_boundary(&[0.3, 0.6], &[0.0, -1.0]);
        assert_abs_diff_eq!(a, 0.9 * 0.3, epsilon = 1e-15);
    }
}
